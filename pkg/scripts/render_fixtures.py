"""Regenerate fixtures/*.gt and write DOT renderings for inspection."""

from __future__ import annotations

import argparse
from pathlib import Path

from chorcheck.fixtures import all_fixtures
from chorcheck.formats import render_dot, render_gt
from chorcheck.gtype import project


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures")
    parser.add_argument("--dot", action="store_true", help="also write .dot files")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, g in all_fixtures().items():
        (out / f"{name}.gt").write_text(render_gt(g))
        if args.dot:
            (out / f"{name}.dot").write_text(render_dot(g))
            (out / f"{name}_system.dot").write_text(render_dot(project(g)))
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
