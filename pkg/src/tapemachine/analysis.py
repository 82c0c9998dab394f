"""Static checks and run profiling for machines."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from tapemachine.core import UNARY_SYMBOL, Machine, RunOutcome, RunStats, StateId, SymbolId


@dataclass(frozen=True)
class StaticReport:
    reachable_states: frozenset[StateId]
    unreachable_states: frozenset[StateId]
    statically_dead_rules: frozenset[int]
    missing_transitions: frozenset[tuple[StateId, SymbolId]]

    def to_dict(self, machine: Machine) -> dict:
        st, sy = machine.state_names, machine.symbol_names
        return {
            "report": "static",
            "states": len(st),
            "symbols": len(sy),
            "rules": len(machine.rules),
            "reachable_states": sorted(st[s] for s in self.reachable_states),
            "unreachable_states": sorted(st[s] for s in self.unreachable_states),
            "statically_dead_rules": sorted(self.statically_dead_rules),
            "missing_transitions": sorted([st[s], sy[a]] for s, a in self.missing_transitions),
        }


@dataclass(frozen=True)
class CoverageReport:
    fired_rules: frozenset[int]
    never_fired: frozenset[int]
    residue: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "report": "coverage",
            "fired_rules": sorted(self.fired_rules),
            "never_fired": sorted(self.never_fired),
            "residue": dict(self.residue),
        }


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def reachability(machine: Machine) -> StaticReport:
    """Breadth-first closure of the state graph (one edge per rule) from the initial state.

    Symbols are ignored, so this over-approximates what a run can reach.
    """
    succ: dict[StateId, set[StateId]] = {}
    for r in machine.rules:
        succ.setdefault(r.cur_state, set()).add(r.next_state)
    seen = {machine.initial}
    queue = deque([machine.initial])
    while queue:
        s = queue.popleft()
        for t in succ.get(s, ()):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    all_states = set(range(len(machine.state_names)))
    table = machine.table
    missing = {
        (s, a)
        for s in seen - set(machine.finals)
        for a in range(len(machine.symbol_names))
        if (s, a) not in table
    }
    return StaticReport(
        reachable_states=frozenset(seen),
        unreachable_states=frozenset(all_states - seen),
        statically_dead_rules=frozenset(r.rule_id for r in machine.rules if r.cur_state not in seen),
        missing_transitions=frozenset(missing),
    )


def coverage(machine: Machine, outcome: RunOutcome) -> CoverageReport:
    """Rules fired by a run, and the bookkeeping symbols it left behind."""
    all_ids = {r.rule_id for r in machine.rules}
    fired = {rid for rid, n in outcome.stats.rule_firings.items() if n > 0}
    tape = outcome.final_config.tape
    residue = {
        name: tape.count(i)
        for i, name in enumerate(machine.symbol_names)
        if i != machine.blank and name != UNARY_SYMBOL
    }
    return CoverageReport(frozenset(fired), frozenset(all_ids - fired), residue)


def validate(machine: Machine) -> list[Diagnostic]:
    """Re-check machine invariants; an empty list means the machine is clean."""
    out: list[Diagnostic] = []
    nst, nsy = len(machine.state_names), len(machine.symbol_names)
    for label, names in (("state", machine.state_names), ("symbol", machine.symbol_names)):
        if len(set(names)) != len(names):
            out.append(Diagnostic("DuplicateName", f"{label} name table has repeated entries"))
    if not 0 <= machine.blank < nsy:
        out.append(Diagnostic("InvalidId", f"blank symbol id {machine.blank} out of range"))
    if not 0 <= machine.initial < nst:
        out.append(Diagnostic("InvalidId", f"initial state id {machine.initial} out of range"))
    if not machine.finals:
        out.append(Diagnostic("NoFinalStates", "machine declares no final state"))
    for s in sorted(machine.finals):
        if not 0 <= s < nst:
            out.append(Diagnostic("InvalidId", f"final state id {s} out of range"))
    seen: dict[tuple[int, int], int] = {}
    for r in machine.rules:
        ok = all(0 <= s < nst for s in (r.cur_state, r.next_state)) and all(
            0 <= a < nsy for a in (r.cur_symbol, r.next_symbol))
        if not ok:
            out.append(Diagnostic("InvalidId", f"rule {r.rule_id} refers to an undeclared state or symbol"))
            continue
        key = (r.cur_state, r.cur_symbol)
        if key in seen:
            out.append(Diagnostic(
                "DuplicateRule", f"rules {seen[key]} and {r.rule_id} share ({machine.state_names[key[0]]}, "
                f"{machine.symbol_names[key[1]]})"))
        else:
            seen[key] = r.rule_id
        if r.cur_state in machine.finals:
            out.append(Diagnostic(
                "RuleFromFinal", f"rule {r.rule_id} leaves final state {machine.state_names[r.cur_state]}"))
    return out


def stats_to_dict(machine: Machine, stats: RunStats) -> dict:
    return {
        "report": "run_stats",
        "steps": stats.steps,
        "min_offset": stats.min_offset,
        "max_offset": stats.max_offset,
        "rule_firings": {str(k): v for k, v in sorted(stats.rule_firings.items())},
        "state_visits": {machine.state_names[k]: v for k, v in sorted(stats.state_visits.items())},
    }


def to_text(doc: dict) -> str:
    """Render a report document as ``key: value`` lines."""
    lines = []
    for key, value in doc.items():
        if isinstance(value, (list, tuple)):
            value = " ".join("/".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v) for v in value)
        elif isinstance(value, dict):
            value = " ".join(f"{k}={v}" for k, v in value.items())
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=False)
