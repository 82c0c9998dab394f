"""Accelerated engine: run-length-encoded tape plus macro-steps.

A directional self-loop rule ``(s, a) -> (s, w, L|R)`` facing a run of k
cells holding ``a`` is applied to the whole run in one dispatch: the run
becomes k cells of ``w``, the head moves k cells and k steps are counted.
Everything observable (outcome kind, final configuration, step count,
statistics) matches :func:`tapemachine.core.run` exactly; only the
number of dispatches differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from tapemachine.core import (
    DEFAULT_MAX_STEPS,
    Configuration,
    Machine,
    RunOutcome,
    SymbolId,
    Tape,
    _KIND_CODES,
    _stats_from_counts,
    check_input,
)

Run = tuple[SymbolId, int]


@dataclass(frozen=True)
class RleTape:
    """Tape as runs on either side of the head, each side ordered nearest-first.

    ``head`` is the absolute offset of ``current``; exhausted sides are
    blank to infinity.
    """

    current: SymbolId
    left: tuple[Run, ...]
    right: tuple[Run, ...]
    blank: SymbolId
    head: int = 0

    def expand(self) -> Tape:
        cells = {self.head: self.current}
        pos = self.head - 1
        for sym, count in self.left:
            for _ in range(count):
                cells[pos] = sym
                pos -= 1
        pos = self.head + 1
        for sym, count in self.right:
            for _ in range(count):
                cells[pos] = sym
                pos += 1
        return Tape(self.blank, cells, self.head)

    def check_canonical(self) -> None:
        for side in (self.left, self.right):
            for i, (sym, count) in enumerate(side):
                if count <= 0:
                    raise AssertionError(f"run {i} has count {count}")
                if i and side[i - 1][0] == sym:
                    raise AssertionError(f"runs {i - 1} and {i} share symbol {sym}")
            if side and side[-1][0] == self.blank:
                raise AssertionError("outermost run is blank")


def _compress(symbols: Sequence[SymbolId]) -> list[Run]:
    runs: list[list[int]] = []
    for s in symbols:
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    return [(s, c) for s, c in runs]


def rle_from_list(symbols: Sequence[SymbolId], blank: SymbolId) -> RleTape:
    """Head over ``symbols[0]``; trailing blanks are dropped into the fringe."""
    if not symbols:
        return RleTape(blank, (), (), blank)
    rest = list(symbols[1:])
    while rest and rest[-1] == blank:
        rest.pop()
    return RleTape(symbols[0], (), tuple(_compress(rest)), blank)


def run_accelerated(
    machine: Machine,
    symbols: Sequence[SymbolId],
    max_steps: int = DEFAULT_MAX_STEPS,
    *,
    backend=None,
    rle_out: list | None = None,
) -> RunOutcome:
    """Drop-in replacement for :func:`tapemachine.core.run`.

    ``dispatches`` on the result counts loop iterations, one per single
    step or macro-step. If ``rle_out`` is a list, the final :class:`RleTape`
    is appended to it.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    check_input(machine, symbols)
    if backend is None:
        from tapemachine.kernels import active as backend
    t = machine.compiled
    (kind, state, head, current, left, right, steps, lo, hi,
     firings, visits, dispatches) = backend.rle_run(
        t.dispatch, t.next_state, t.write, t.move, t.is_final,
        t.num_states, t.num_symbols, machine.blank, machine.initial,
        list(symbols), max_steps,
    )
    rle = RleTape(current, tuple(left), tuple(right), machine.blank, head)
    if rle_out is not None:
        rle_out.append(rle)
    return RunOutcome(
        kind=_KIND_CODES[kind],
        final_config=Configuration(state, rle.expand(), steps),
        stats=_stats_from_counts(machine, steps, lo, hi, firings, visits),
        dispatches=dispatches,
    )
