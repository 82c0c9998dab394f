"""Line-oriented machine description format.

A description is a sequence of directives, one per line::

    blank b
    initial q0
    final qf            # repeatable
    rule q0 1 q1 x R    # state, read, next state, write, L|R|N

``#`` starts a comment. States and symbols are declared by use and
interned in order of first appearance; rules are numbered from 0 in
source order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable

from tapemachine.core import Machine, Move, Rule, SymbolId, TapeMachineError

FIBONACCI_ASSET = "fibonacci.tm"


class DiagnosticKind(enum.Enum):
    DUPLICATE_RULE = "DuplicateRule"
    UNKNOWN_MOVE = "UnknownMove"
    BAD_ARITY = "BadArity"
    MISSING_DIRECTIVE = "MissingDirective"
    DUPLICATE_DIRECTIVE = "DuplicateDirective"
    UNKNOWN_TOKEN = "UnknownToken"
    RULE_FROM_FINAL = "RuleFromFinal"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    kind: DiagnosticKind
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.kind.value}: {self.message}"


class MachineParseError(TapeMachineError, ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


class TapeInputError(TapeMachineError, ValueError):
    """A tape token that names no symbol of the machine. ``position`` is 1-based."""

    kind = DiagnosticKind.UNKNOWN_TOKEN

    def __init__(self, token: str, position: int):
        super().__init__(f"UnknownToken: {token!r} at position {position} is not a symbol of the machine")
        self.token = token
        self.position = position


_ARITY = {"blank": 1, "initial": 1, "final": 1, "rule": 5}


def check_machine(text: str) -> tuple[Machine | None, list[ParseDiagnostic]]:
    """Parse ``text``, collecting every diagnostic instead of stopping at the first."""
    states: dict[str, int] = {}
    symbols: dict[str, int] = {}
    diags: list[ParseDiagnostic] = []
    blank = initial = None
    blank_line = initial_line = 0
    finals: dict[int, int] = {}
    rules: list[Rule] = []
    rule_lines: list[int] = []
    seen: dict[tuple[int, int], int] = {}

    def state(name: str) -> int:
        return states.setdefault(name, len(states))

    def symbol(name: str) -> int:
        return symbols.setdefault(name, len(symbols))

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        if head not in _ARITY:
            diags.append(ParseDiagnostic(lineno, DiagnosticKind.UNKNOWN_TOKEN, f"unknown directive {head!r}"))
            continue
        if len(args) != _ARITY[head]:
            diags.append(ParseDiagnostic(
                lineno, DiagnosticKind.BAD_ARITY,
                f"{head!r} takes {_ARITY[head]} argument(s), got {len(args)}"))
            continue
        if head == "blank":
            if blank is not None:
                diags.append(ParseDiagnostic(
                    lineno, DiagnosticKind.DUPLICATE_DIRECTIVE, f"blank already given on line {blank_line}"))
                continue
            blank, blank_line = symbol(args[0]), lineno
        elif head == "initial":
            if initial is not None:
                diags.append(ParseDiagnostic(
                    lineno, DiagnosticKind.DUPLICATE_DIRECTIVE, f"initial already given on line {initial_line}"))
                continue
            initial, initial_line = state(args[0]), lineno
        elif head == "final":
            finals.setdefault(state(args[0]), lineno)
        else:
            cur, read, nxt, write, move_tok = args
            try:
                move = Move.from_token(move_tok)
            except KeyError:
                diags.append(ParseDiagnostic(
                    lineno, DiagnosticKind.UNKNOWN_MOVE, f"move must be L, R or N, got {move_tok!r}"))
                continue
            key = (state(cur), symbol(read))
            if key in seen:
                diags.append(ParseDiagnostic(
                    lineno, DiagnosticKind.DUPLICATE_RULE,
                    f"second rule for ({cur}, {read}); first on line {seen[key]}"))
                continue
            seen[key] = lineno
            rules.append(Rule(key[0], key[1], state(nxt), symbol(write), move, len(rules)))
            rule_lines.append(lineno)

    last = max(len(lines), 1)
    for name, value in (("blank", blank), ("initial", initial)):
        if value is None:
            diags.append(ParseDiagnostic(last, DiagnosticKind.MISSING_DIRECTIVE, f"no {name!r} directive"))
    if not finals:
        diags.append(ParseDiagnostic(last, DiagnosticKind.MISSING_DIRECTIVE, "no 'final' directive"))
    for rule, lineno in zip(rules, rule_lines):
        if rule.cur_state in finals:
            diags.append(ParseDiagnostic(
                lineno, DiagnosticKind.RULE_FROM_FINAL,
                f"rule leaves final state {_name(states, rule.cur_state)!r}"))

    if diags:
        diags.sort(key=lambda d: d.line)
        return None, diags
    machine = Machine(
        state_names=tuple(states),
        symbol_names=tuple(symbols),
        blank=blank,
        initial=initial,
        finals=frozenset(finals),
        rules=tuple(rules),
    )
    return machine, []


def _name(table: dict[str, int], ident: int) -> str:
    return next(k for k, v in table.items() if v == ident)


def parse_machine(text: str) -> Machine:
    """Parse a machine description, raising :class:`MachineParseError` with all diagnostics."""
    machine, diags = check_machine(text)
    if diags:
        raise MachineParseError(diags)
    return machine


def serialize_machine(machine: Machine) -> str:
    st, sy = machine.state_names, machine.symbol_names
    lines = [
        f"# {len(st)} states, {len(sy)} symbols, {len(machine.rules)} rules",
        f"blank {sy[machine.blank]}",
        f"initial {st[machine.initial]}",
    ]
    lines += [f"final {name}" for name in sorted(st[s] for s in machine.finals)]
    for r in sorted(machine.rules, key=lambda r: r.rule_id):
        lines.append(
            f"rule {st[r.cur_state]} {sy[r.cur_symbol]} {st[r.next_state]} {sy[r.next_symbol]} {r.move.token}")
    return "\n".join(lines) + "\n"


def fibonacci_source() -> str:
    return resources.files("tapemachine").joinpath("machines", FIBONACCI_ASSET).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def fibonacci_machine() -> Machine:
    """The bundled 100-rule unary Fibonacci machine."""
    return parse_machine(fibonacci_source())


def parse_tape_input(text: str | Iterable[str], machine: Machine) -> list[SymbolId]:
    """Map whitespace-separated symbol names (or an iterable of names) to symbol ids."""
    tokens = text.split() if isinstance(text, str) else list(text)
    out = []
    for pos, tok in enumerate(tokens, 1):
        if not machine.has_symbol(tok):
            raise TapeInputError(tok, pos)
        out.append(machine.symbol_id(tok))
    return out
