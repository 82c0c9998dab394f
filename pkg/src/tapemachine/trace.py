"""Per-step trace records: one ``key=value`` line per rule application."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

from tapemachine.core import Configuration, Machine, SymbolId, initial_configuration, iter_steps

FIELDS = ("step", "state", "head", "read", "rule", "write", "move", "next")


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    step: int
    state: str
    head: int
    read: str
    rule: int
    write: str
    move: str
    next_state: str

    def format(self) -> str:
        return (
            f"step={self.step} state={self.state} head={self.head} read={self.read} "
            f"rule={self.rule} write={self.write} move={self.move} next={self.next_state}"
        )

    @classmethod
    def parse(cls, line: str) -> "TraceRecord":
        parts = line.split()
        if len(parts) != len(FIELDS):
            raise TraceError(f"expected {len(FIELDS)} fields, got {len(parts)}: {line!r}")
        values = []
        for part, key in zip(parts, FIELDS):
            k, sep, v = part.partition("=")
            if not sep or k != key:
                raise TraceError(f"expected field {key!r}, got {part!r}")
            values.append(v)
        step, state, head, read, rule, write, move, nxt = values
        return cls(int(step), state, int(head), read, int(rule), write, move, nxt)


def traced_run(machine: Machine, symbols: Sequence[SymbolId], max_steps: int, out: TextIO) -> Configuration:
    """Step the machine naively, writing one record per step to ``out``."""
    config = initial_configuration(machine, symbols)
    st, sy = machine.state_names, machine.symbol_names
    step = 0
    for rule, head, read in iter_steps(machine, config, max_steps):
        out.write(
            f"step={step} state={st[rule.cur_state]} head={head} read={sy[read]} rule={rule.rule_id} "
            f"write={sy[rule.next_symbol]} move={rule.move.token} next={st[rule.next_state]}\n"
        )
        step += 1
    return config


def iter_records(lines: Iterable[str]) -> Iterator[TraceRecord]:
    for line in lines:
        if line.strip():
            yield TraceRecord.parse(line)


def replay(machine: Machine, symbols: Sequence[SymbolId], lines: Iterable[str]) -> Configuration:
    """Rebuild the final configuration by applying each recorded rule to a fresh start.

    Every record is checked against the machine's table and the replayed
    configuration; any disagreement raises :class:`TraceError`.
    """
    config = initial_configuration(machine, symbols)
    tape = config.tape
    by_id = {r.rule_id: r for r in machine.rules}
    st, sy = machine.state_names, machine.symbol_names
    for rec in iter_records(lines):
        rule = by_id.get(rec.rule)
        if rule is None:
            raise TraceError(f"step {rec.step}: unknown rule {rec.rule}")
        if rec.step != config.steps:
            raise TraceError(f"step {rec.step}: expected step {config.steps}")
        if rec.head != tape.head:
            raise TraceError(f"step {rec.step}: head {rec.head}, replay is at {tape.head}")
        if (rec.state, rec.read) != (st[config.state], sy[tape.read()]):
            raise TraceError(f"step {rec.step}: record reads ({rec.state}, {rec.read}), replay is at "
                             f"({st[config.state]}, {sy[tape.read()]})")
        if (rec.state, rec.read, rec.next_state, rec.write, rec.move) != (
                st[rule.cur_state], sy[rule.cur_symbol], st[rule.next_state], sy[rule.next_symbol],
                rule.move.token):
            raise TraceError(f"step {rec.step}: record disagrees with rule {rule.rule_id}")
        tape.write(rule.next_symbol)
        tape.head += rule.move
        config.state = rule.next_state
        config.steps += 1
    return config
