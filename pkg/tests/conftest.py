import json
from pathlib import Path

import pytest

from chorcheck import fixtures as fx

REPO = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO / "fixtures"
SCHEMA_DIR = REPO / "schemas"


@pytest.fixture
def g_sd():
    return fx.g_sd()


@pytest.fixture
def g0():
    return fx.g0()


@pytest.fixture
def branch():
    return fx.branch_language()


@pytest.fixture
def real():
    return fx.real_gt()


@pytest.fixture
def nonreal():
    return fx.nonreal_gt()


@pytest.fixture
def deadlock():
    return fx.deadlock_gt()


@pytest.fixture
def cross():
    return fx.cross_gt()


@pytest.fixture
def single():
    return fx.single_arrow_gt()


@pytest.fixture
def fixture_suite():
    return fx.all_fixtures()


@pytest.fixture
def gsd_arrows():
    return fx.gsd_arrows()


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.json").read_text())
