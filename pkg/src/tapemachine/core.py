"""Machine model, single-step semantics and the reference engine.

States and symbols are interned: a :class:`Machine` stores ordered name
tables and every other structure refers to states and symbols by their
integer index into those tables.
"""

from __future__ import annotations

import enum
from array import array
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

StateId = int
SymbolId = int

DEFAULT_MAX_STEPS = 100_000_000
UNARY_SYMBOL = "1"


class TapeMachineError(Exception):
    """Base class for errors raised by this package."""


class MachineError(TapeMachineError, ValueError):
    """A machine is structurally unusable (bad ids or a nondeterministic table)."""


class InputSymbolOutOfAlphabet(TapeMachineError, ValueError):
    def __init__(self, symbol: object, position: int):
        super().__init__(f"input symbol {symbol!r} at position {position} is not in the machine's alphabet")
        self.symbol = symbol
        self.position = position


class MissingUnarySymbol(TapeMachineError, ValueError):
    def __init__(self):
        super().__init__(f"machine declares no {UNARY_SYMBOL!r} symbol")


class Move(enum.IntEnum):
    LEFT = -1
    NONE = 0
    RIGHT = 1

    @property
    def token(self) -> str:
        return _MOVE_TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> "Move":
        return _TOKEN_MOVES[token]


_MOVE_TOKENS = {Move.LEFT: "L", Move.NONE: "N", Move.RIGHT: "R"}
_TOKEN_MOVES = {v: k for k, v in _MOVE_TOKENS.items()}


@dataclass(frozen=True)
class Rule:
    cur_state: StateId
    cur_symbol: SymbolId
    next_state: StateId
    next_symbol: SymbolId
    move: Move
    rule_id: int

    @property
    def is_scan(self) -> bool:
        """True for a directional self-loop, the kind of rule a macro-step may batch."""
        return self.cur_state == self.next_state and self.move != Move.NONE


@dataclass(frozen=True)
class CompiledTable:
    """Dense ``state * num_symbols + symbol`` dispatch arrays for the kernels.

    ``dispatch`` holds a rule index or -1; the per-rule arrays are indexed
    by position in ``Machine.rules``.
    """

    num_states: int
    num_symbols: int
    dispatch: array
    next_state: array
    write: array
    move: array
    is_final: array


@dataclass(frozen=True)
class Machine:
    """Immutable deterministic single-tape machine.

    Construction does not enforce every invariant, so that deliberately
    broken machines can be handed to :func:`tapemachine.analysis.validate`.
    The engines refuse machines with out-of-range ids or duplicate keys.
    """

    state_names: tuple[str, ...]
    symbol_names: tuple[str, ...]
    blank: SymbolId
    initial: StateId
    finals: frozenset[StateId]
    rules: tuple[Rule, ...]

    @cached_property
    def table(self) -> Mapping[tuple[StateId, SymbolId], Rule]:
        table: dict[tuple[StateId, SymbolId], Rule] = {}
        for rule in self.rules:
            table.setdefault((rule.cur_state, rule.cur_symbol), rule)
        return table

    def rule_for(self, state: StateId, symbol: SymbolId) -> Rule | None:
        return self.table.get((state, symbol))

    def state_id(self, name: str) -> StateId:
        return self._state_index[name]

    def symbol_id(self, name: str) -> SymbolId:
        return self._symbol_index[name]

    def has_symbol(self, name: str) -> bool:
        return name in self._symbol_index

    @cached_property
    def _state_index(self) -> dict[str, StateId]:
        return {name: i for i, name in enumerate(self.state_names)}

    @cached_property
    def _symbol_index(self) -> dict[str, SymbolId]:
        return {name: i for i, name in enumerate(self.symbol_names)}

    @cached_property
    def compiled(self) -> CompiledTable:
        num_states = len(self.state_names)
        num_symbols = len(self.symbol_names)
        if not 0 <= self.blank < num_symbols:
            raise MachineError(f"blank symbol id {self.blank} out of range")
        if not 0 <= self.initial < num_states:
            raise MachineError(f"initial state id {self.initial} out of range")
        is_final = array("b", bytes(num_states))
        for s in self.finals:
            if not 0 <= s < num_states:
                raise MachineError(f"final state id {s} out of range")
            is_final[s] = 1
        dispatch = array("i", [-1]) * (num_states * num_symbols)
        for i, r in enumerate(self.rules):
            for sid in (r.cur_state, r.next_state):
                if not 0 <= sid < num_states:
                    raise MachineError(f"rule {r.rule_id}: state id {sid} out of range")
            for yid in (r.cur_symbol, r.next_symbol):
                if not 0 <= yid < num_symbols:
                    raise MachineError(f"rule {r.rule_id}: symbol id {yid} out of range")
            slot = r.cur_state * num_symbols + r.cur_symbol
            if dispatch[slot] != -1:
                raise MachineError(f"rule {r.rule_id} duplicates the key of rule {self.rules[dispatch[slot]].rule_id}")
            dispatch[slot] = i
        return CompiledTable(
            num_states=num_states,
            num_symbols=num_symbols,
            dispatch=dispatch,
            next_state=array("i", [r.next_state for r in self.rules]),
            write=array("i", [r.next_symbol for r in self.rules]),
            move=array("i", [int(r.move) for r in self.rules]),
            is_final=is_final,
        )

    def signature(self) -> tuple:
        """Id-free description; equal signatures mean structurally equal machines."""
        st, sy = self.state_names, self.symbol_names
        return (
            sy[self.blank],
            st[self.initial],
            tuple(sorted(st[s] for s in self.finals)),
            tuple(
                (st[r.cur_state], sy[r.cur_symbol], st[r.next_state], sy[r.next_symbol], r.move, r.rule_id)
                for r in self.rules
            ),
        )

    def describe_rule(self, rule: Rule) -> str:
        st, sy = self.state_names, self.symbol_names
        return (
            f"{st[rule.cur_state]} {sy[rule.cur_symbol]} -> "
            f"{st[rule.next_state]} {sy[rule.next_symbol]} {rule.move.token}"
        )


class Tape:
    """Unbounded tape stored as a sparse offset -> symbol map.

    Cells holding the blank symbol are never stored.
    """

    __slots__ = ("cells", "head", "blank")

    def __init__(self, blank: SymbolId, cells: Mapping[int, SymbolId] | None = None, head: int = 0):
        self.blank = blank
        self.head = head
        self.cells: dict[int, SymbolId] = {}
        if cells:
            self.cells.update((k, v) for k, v in cells.items() if v != blank)

    @classmethod
    def from_symbols(cls, symbols: Iterable[SymbolId], blank: SymbolId) -> "Tape":
        return cls(blank, dict(enumerate(symbols)))

    def read(self) -> SymbolId:
        return self.cells.get(self.head, self.blank)

    def write(self, symbol: SymbolId) -> None:
        if symbol == self.blank:
            self.cells.pop(self.head, None)
        else:
            self.cells[self.head] = symbol

    def copy(self) -> "Tape":
        tape = Tape(self.blank, head=self.head)
        tape.cells = dict(self.cells)
        return tape

    def extent(self) -> tuple[int, int] | None:
        """(min, max) offsets of stored cells, or None for an all-blank tape."""
        if not self.cells:
            return None
        return min(self.cells), max(self.cells)

    def symbols(self) -> list[SymbolId]:
        """Cells from the leftmost to the rightmost non-blank, interior blanks included."""
        span = self.extent()
        if span is None:
            return []
        get = self.cells.get
        return [get(i, self.blank) for i in range(span[0], span[1] + 1)]

    def count(self, symbol: SymbolId) -> int:
        return sum(1 for v in self.cells.values() if v == symbol)

    def check_canonical(self) -> None:
        for offset, symbol in self.cells.items():
            if symbol == self.blank:
                raise AssertionError(f"blank stored at offset {offset}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tape):
            return NotImplemented
        return self.blank == other.blank and self.head == other.head and self.cells == other.cells

    def __repr__(self) -> str:
        return f"Tape(head={self.head}, cells={dict(sorted(self.cells.items()))})"


@dataclass
class Configuration:
    state: StateId
    tape: Tape
    steps: int = 0

    def copy(self) -> "Configuration":
        return Configuration(self.state, self.tape.copy(), self.steps)


class StepKind(enum.Enum):
    APPLIED = "applied"
    ALREADY_HALTED = "already_halted"
    STUCK = "stuck"


@dataclass(frozen=True)
class StepResult:
    kind: StepKind
    config: Configuration
    rule_id: int | None = None


class Outcome(enum.Enum):
    HALTED = "halted"
    STUCK = "stuck"
    STEP_LIMIT = "step_limit_exceeded"


@dataclass
class RunStats:
    steps: int = 0
    min_offset: int = 0
    max_offset: int = 0
    rule_firings: dict[int, int] = field(default_factory=dict)
    state_visits: dict[StateId, int] = field(default_factory=dict)

    @property
    def span(self) -> int:
        """Number of distinct head positions visited."""
        return self.max_offset - self.min_offset + 1


@dataclass
class RunOutcome:
    kind: Outcome
    final_config: Configuration
    stats: RunStats
    # Main-loop iterations; equals stats.steps for the naive engine. Not part
    # of the observable result, so it is left out of equality.
    dispatches: int = field(default=0, compare=False)

    @property
    def steps(self) -> int:
        return self.final_config.steps

    @property
    def tape(self) -> Tape:
        return self.final_config.tape


def initial_configuration(machine: Machine, symbols: Sequence[SymbolId]) -> Configuration:
    check_input(machine, symbols)
    return Configuration(machine.initial, Tape.from_symbols(symbols, machine.blank))


def check_input(machine: Machine, symbols: Sequence[SymbolId]) -> None:
    n = len(machine.symbol_names)
    for pos, s in enumerate(symbols):
        if not isinstance(s, int) or not 0 <= s < n:
            raise InputSymbolOutOfAlphabet(s, pos)


def apply_in_place(machine: Machine, config: Configuration) -> StepResult:
    """Like :func:`step` but mutates ``config``; the result shares it."""
    if config.state in machine.finals:
        return StepResult(StepKind.ALREADY_HALTED, config)
    tape = config.tape
    rule = machine.table.get((config.state, tape.read()))
    if rule is None:
        return StepResult(StepKind.STUCK, config)
    tape.write(rule.next_symbol)
    tape.head += rule.move
    config.state = rule.next_state
    config.steps += 1
    return StepResult(StepKind.APPLIED, config, rule.rule_id)


def step(machine: Machine, config: Configuration) -> StepResult:
    """Apply at most one rule. ``config`` is left untouched."""
    if config.state in machine.finals:
        return StepResult(StepKind.ALREADY_HALTED, config)
    if (config.state, config.tape.read()) not in machine.table:
        return StepResult(StepKind.STUCK, config)
    return apply_in_place(machine, config.copy())


def iter_steps(machine: Machine, config: Configuration, max_steps: int) -> Iterator[tuple[Rule, int, SymbolId]]:
    """Advance ``config`` in place, yielding ``(rule, head_before, read)`` per step.

    Stops when the machine halts, gets stuck, or ``config.steps`` reaches
    ``max_steps``.
    """
    table = machine.table
    finals = machine.finals
    tape = config.tape
    while config.state not in finals and config.steps < max_steps:
        head = tape.head
        read = tape.read()
        rule = table.get((config.state, read))
        if rule is None:
            return
        tape.write(rule.next_symbol)
        tape.head += rule.move
        config.state = rule.next_state
        config.steps += 1
        yield rule, head, read


def classify(machine: Machine, config: Configuration) -> Outcome:
    """Terminal classification of a configuration the engine stopped on."""
    if config.state in machine.finals:
        return Outcome.HALTED
    if (config.state, config.tape.read()) not in machine.table:
        return Outcome.STUCK
    return Outcome.STEP_LIMIT


_KIND_CODES = (Outcome.HALTED, Outcome.STUCK, Outcome.STEP_LIMIT)


def _stats_from_counts(machine: Machine, steps: int, lo: int, hi: int, firings, visits) -> RunStats:
    return RunStats(
        steps=steps,
        min_offset=lo,
        max_offset=hi,
        rule_firings={machine.rules[i].rule_id: c for i, c in enumerate(firings) if c},
        state_visits={s: c for s, c in enumerate(visits) if c},
    )


def run(
    machine: Machine,
    symbols: Sequence[SymbolId],
    max_steps: int = DEFAULT_MAX_STEPS,
    *,
    backend=None,
) -> RunOutcome:
    """Run ``machine`` from its initial state on ``symbols`` laid out from offset 0.

    ``backend`` selects a kernel module (see :mod:`tapemachine.kernels`);
    by default the compiled kernel is used when it is importable.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    check_input(machine, symbols)
    if backend is None:
        from tapemachine.kernels import active as backend
    t = machine.compiled
    kind, state, head, cells, steps, lo, hi, firings, visits = backend.naive_run(
        t.dispatch, t.next_state, t.write, t.move, t.is_final,
        t.num_states, t.num_symbols, machine.blank, machine.initial,
        list(symbols), max_steps,
    )
    tape = Tape(machine.blank, cells, head)
    return RunOutcome(
        kind=_KIND_CODES[kind],
        final_config=Configuration(state, tape, steps),
        stats=_stats_from_counts(machine, steps, lo, hi, firings, visits),
        dispatches=steps,
    )


def encode_unary(n: int, machine: Machine) -> list[SymbolId]:
    if n < 0:
        raise ValueError("unary encoding needs a non-negative integer")
    if not machine.has_symbol(UNARY_SYMBOL):
        raise MissingUnarySymbol()
    return [machine.symbol_id(UNARY_SYMBOL)] * n


def decode_unary(tape: Tape, machine: Machine) -> int:
    """Number of cells holding ``1``, wherever they are on the tape."""
    if not machine.has_symbol(UNARY_SYMBOL):
        raise MissingUnarySymbol()
    return tape.count(machine.symbol_id(UNARY_SYMBOL))
