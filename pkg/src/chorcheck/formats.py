"""Textual formats: the `.gt` global-type files, CFSM files, and DOT export.

Grammar (UTF-8, `#` line comments, identifiers [A-Za-z][A-Za-z0-9_']*):

    gtype name {
      processes: p, q;
      messages: m;
      arrows: p->q:m;            # optional; defaults to the arrows used
      states: s0*, s1+;          # * initial, + accepting
      s0 -- p->q:m --> s1;
    }

CFSM files are analogous, with actions `p!q:m` / `p?q:m`:

    cfsm name of p { ... }
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .automata import Nfa, determinise
from .gtype import GlobalType
from .semantics import Cfsm, LocalAction, System
from .trace import Arrow, Declaration, DeclarationError

IDENT = r"[A-Za-z][A-Za-z0-9_']*"


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


_TOKEN_RE = re.compile("|".join((
    r"(?P<comment>#[^\n]*)",
    r"(?P<ws>\s+)",
    r"(?P<edge_to>-->)",
    r"(?P<arrow>->)",
    r"(?P<edge_from>--)",
    rf"(?P<ident>{IDENT})",
    r"(?P<punct>[{}:;,*+!?])",
)))


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        value = m.group()
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            raise ParseError(f"expected {value or kind}, found {tok.value!r}",
                             tok.line, tok.column)
        return tok

    def expect_keyword(self, word: str):
        tok = self.expect("ident")
        if tok.value != word:
            raise ParseError(f"expected {word!r}, found {tok.value!r}",
                             tok.line, tok.column)

    def ident_list(self) -> list[str]:
        names = [self.expect("ident").value]
        while self.peek().value == ",":
            self.next()
            names.append(self.expect("ident").value)
        return names

    def parse_arrow_token(self) -> tuple[str, str, str, Token]:
        start = self.expect("ident")
        self.expect("arrow")
        receiver = self.expect("ident").value
        self.expect("punct", ":")
        message = self.expect("ident").value
        return start.value, receiver, message, start

    def parse_action_token(self) -> tuple[str, str, str, bool, Token]:
        start = self.expect("ident")
        mark = self.next()
        if mark.value not in ("!", "?"):
            raise ParseError("expected ! or ? in action", mark.line, mark.column)
        peer = self.expect("ident").value
        self.expect("punct", ":")
        message = self.expect("ident").value
        return start.value, peer, message, mark.value == "!", start


def _parse_states(p: _Parser):
    """states: s0*, s1+, s2*+; -> ordered (name, initial, accepting)."""
    entries = []
    while True:
        name = p.expect("ident")
        initial = accepting = False
        while p.peek().value in ("*", "+"):
            flag = p.next().value
            if flag == "*":
                initial = True
            else:
                accepting = True
        entries.append((name, initial, accepting))
        if p.peek().value != ",":
            break
        p.next()
    p.expect("punct", ";")
    return entries


def _parse_declaration_sections(p: _Parser):
    processes = messages = None
    explicit_arrows = None
    while p.peek().kind == "ident" and p.peek().value in ("processes", "messages", "arrows"):
        section = p.next().value
        p.expect("punct", ":")
        if section == "processes":
            processes = p.ident_list()
        elif section == "messages":
            messages = p.ident_list()
        else:
            explicit_arrows = []
            while True:
                s, r, m, tok = p.parse_arrow_token()
                explicit_arrows.append((s, r, m, tok))
                if p.peek().value != ",":
                    break
                p.next()
        p.expect("punct", ";")
    if processes is None:
        p.fail("missing 'processes:' section")
    if messages is None:
        p.fail("missing 'messages:' section")
    return processes, messages, explicit_arrows


def _build_arrow(sender, receiver, message, tok, processes, messages) -> Arrow:
    if sender not in processes:
        raise ParseError(f"undeclared process {sender!r}", tok.line, tok.column)
    if receiver not in processes:
        raise ParseError(f"undeclared process {receiver!r}", tok.line, tok.column)
    if message not in messages:
        raise ParseError(f"undeclared message {message!r}", tok.line, tok.column)
    try:
        return Arrow(sender, receiver, message)
    except DeclarationError as exc:
        raise ParseError(str(exc), tok.line, tok.column) from None


def parse_gt(text: str) -> GlobalType:
    p = _Parser(text)
    p.expect_keyword("gtype")
    name = p.expect("ident").value
    p.expect("punct", "{")
    processes, messages, explicit_arrows = _parse_declaration_sections(p)

    state_entries = []
    if p.peek().kind == "ident" and p.peek().value == "states":
        p.next()
        p.expect("punct", ":")
        state_entries = _parse_states(p)

    transitions_raw = []
    while p.peek().value != "}":
        src = p.expect("ident")
        p.expect("edge_from")
        s, r, m, tok = p.parse_arrow_token()
        p.expect("edge_to")
        dst = p.expect("ident")
        p.expect("punct", ";")
        transitions_raw.append((src, (s, r, m, tok), dst))
    p.expect("punct", "}")
    p.expect("eof")

    if not state_entries and not transitions_raw:
        state_entries = [(Token("ident", "s0", 0, 0), True, False)]
    names = [tok.value for tok, _, _ in state_entries]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        tok = next(t for t, _, _ in state_entries if t.value == dup)
        raise ParseError(f"duplicate state name {dup!r}", tok.line, tok.column)
    index = {n: i for i, n in enumerate(names)}

    used_arrows = []
    transitions = set()
    for src, (s, r, m, tok), dst in transitions_raw:
        for endpoint in (src, dst):
            if endpoint.value not in index:
                raise ParseError(f"unknown state {endpoint.value!r}",
                                 endpoint.line, endpoint.column)
        arrow = _build_arrow(s, r, m, tok, processes, messages)
        used_arrows.append(arrow)
        transitions.add((index[src.value], arrow, index[dst.value]))

    if explicit_arrows is not None:
        alphabet = [_build_arrow(s, r, m, tok, processes, messages)
                    for s, r, m, tok in explicit_arrows]
        missing = set(used_arrows) - set(alphabet)
        if missing:
            raise ParseError(f"transition arrow {next(iter(missing))} missing "
                             "from the declared arrow alphabet", 0, 0)
    else:
        alphabet = sorted(set(used_arrows), key=lambda a: (a.sender, a.receiver, a.message))

    decl = Declaration(tuple(processes), tuple(messages), tuple(alphabet))
    initial = frozenset(i for i, (_, ini, _) in enumerate(state_entries) if ini)
    if not initial:
        initial = frozenset({0})
    accepting = frozenset(i for i, (_, _, acc) in enumerate(state_entries) if acc)
    nfa = Nfa(decl.arrows, len(names), initial, frozenset(transitions),
              accepting, tuple(names))
    return GlobalType(decl, nfa, name)


def render_gt(g: GlobalType) -> str:
    nfa = g.automaton
    name = re.sub(r"[^A-Za-z0-9_']+", "_", g.name or "unnamed").strip("_")
    if not re.fullmatch(IDENT, name):
        name = "unnamed"
    lines = [f"gtype {name} {{"]
    lines.append("  processes: " + ", ".join(g.declaration.processes) + ";")
    lines.append("  messages: " + ", ".join(g.declaration.messages) + ";")
    lines.append("  arrows: " + ", ".join(str(a) for a in g.declaration.arrows) + ";")
    states = []
    for s in range(nfa.n_states):
        mark = ("*" if s in nfa.initial else "") + ("+" if s in nfa.accepting else "")
        states.append(_safe_name(nfa.state_name(s), s) + mark)
    lines.append("  states: " + ", ".join(states) + ";")
    for s, a, t in sorted(nfa.transitions,
                          key=lambda tr: (tr[0], str(tr[1]), tr[2])):
        lines.append(f"  {_safe_name(nfa.state_name(s), s)} -- {a} --> "
                     f"{_safe_name(nfa.state_name(t), t)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _safe_name(name: str, index: int) -> str:
    return name if re.fullmatch(IDENT, name) else f"n{index}"


def parse_cfsm(text: str) -> Cfsm:
    p = _Parser(text)
    p.expect_keyword("cfsm")
    p.expect("ident")  # machine name, informational
    p.expect_keyword("of")
    process = p.expect("ident").value
    p.expect("punct", "{")
    processes, messages, _ = _parse_declaration_sections(p)
    state_entries = []
    if p.peek().kind == "ident" and p.peek().value == "states":
        p.next()
        p.expect("punct", ":")
        state_entries = _parse_states(p)
    names = [tok.value for tok, _, _ in state_entries]
    index = {n: i for i, n in enumerate(names)}
    transitions = set()
    alphabet = set()
    while p.peek().value != "}":
        src = p.expect("ident")
        p.expect("edge_from")
        owner, peer, message, is_send, tok = p.parse_action_token()
        p.expect("edge_to")
        dst = p.expect("ident")
        p.expect("punct", ";")
        if owner != process:
            raise ParseError(f"action owner {owner!r} is not {process!r}",
                             tok.line, tok.column)
        if peer not in processes or message not in messages:
            raise ParseError("undeclared process or message in action",
                             tok.line, tok.column)
        act = LocalAction(owner, peer, message, is_send)
        alphabet.add(act)
        for endpoint in (src, dst):
            if endpoint.value not in index:
                raise ParseError(f"unknown state {endpoint.value!r}",
                                 endpoint.line, endpoint.column)
        transitions.add((index[src.value], act, index[dst.value]))
    p.expect("punct", "}")
    initial = frozenset(i for i, (_, ini, _) in enumerate(state_entries) if ini)
    accepting = frozenset(i for i, (_, _, acc) in enumerate(state_entries) if acc)
    nfa = Nfa(tuple(sorted(alphabet)), max(len(names), 1), initial or frozenset({0}),
              frozenset(transitions), accepting, tuple(names) or None)
    return Cfsm(process, determinise(nfa))


def render_cfsm(cfsm: Cfsm, system: System | None = None) -> str:
    d = cfsm.automaton
    decl_lines = []
    if system is not None:
        decl_lines.append("  processes: " + ", ".join(system.declaration.processes) + ";")
        decl_lines.append("  messages: " + ", ".join(system.declaration.messages) + ";")
    else:
        procs = {cfsm.process} | {a.peer for a in d.alphabet}
        msgs = {a.message for a in d.alphabet}
        decl_lines.append("  processes: " + ", ".join(sorted(procs)) + ";")
        decl_lines.append("  messages: " + ", ".join(sorted(msgs)) + ";")
    lines = [f"cfsm {cfsm.process}_machine of {cfsm.process} {{"] + decl_lines
    states = []
    for s in range(d.n_states):
        mark = ("*" if s == d.initial else "") + ("+" if s in d.accepting else "")
        states.append(f"t{s}" + mark)
    lines.append("  states: " + ", ".join(states) + ";")
    for s, act, t in sorted(d.transitions, key=lambda tr: (tr[0], str(tr[1]), tr[2])):
        lines.append(f"  t{s} -- {act} --> t{t};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_msc(text: str, declaration: Declaration):
    """Parse a semicolon-separated arrow word into a canonical trace."""
    from .trace import msc_of, parse_arrow

    try:
        word = tuple(parse_arrow(part.strip())
                     for part in text.strip().split(";") if part.strip())
        return msc_of(word, declaration)
    except DeclarationError as exc:
        raise ParseError(str(exc), 1, 1) from None


# ---------------------------------------------------------------------------
# DOT export


def _dot_escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _dot_automaton(out: list, prefix: str, n_states: int, initial, accepting,
                   transitions, name_of):
    out.append(f'  {prefix}init [shape=point];')
    for s in range(n_states):
        shape = "doublecircle" if s in accepting else "circle"
        out.append(f'  {prefix}{s} [label="{_dot_escape(name_of(s))}", shape={shape}];')
    for s in initial:
        out.append(f"  {prefix}init -> {prefix}{s};")
    for s, x, t in sorted(transitions, key=lambda tr: (tr[0], str(tr[1]), tr[2])):
        label = "ε" if x is None else str(x)
        out.append(f'  {prefix}{s} -> {prefix}{t} [label="{_dot_escape(label)}"];')


def render_dot(obj) -> str:
    """DOT rendering for a GlobalType, a Cfsm, or a System."""
    out = ["digraph g {", "  rankdir=LR;"]
    if isinstance(obj, GlobalType):
        a = obj.automaton
        _dot_automaton(out, "s", a.n_states, a.initial, a.accepting,
                       a.transitions, a.state_name)
    elif isinstance(obj, Cfsm):
        d = obj.automaton
        _dot_automaton(out, "s", d.n_states, {d.initial}, d.accepting,
                       d.transitions, d.state_name)
    elif isinstance(obj, System):
        for k, cfsm in enumerate(obj.cfsms):
            d = cfsm.automaton
            out.append(f"  subgraph cluster_{k} {{")
            out.append(f'    label="{_dot_escape(cfsm.process)}";')
            inner: list[str] = []
            _dot_automaton(inner, f"c{k}_", d.n_states, {d.initial}, d.accepting,
                           d.transitions, d.state_name)
            out.extend("  " + line for line in inner)
            out.append("  }")
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as DOT")
    out.append("}")
    return "\n".join(out) + "\n"
