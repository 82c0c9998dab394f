"""Deterministic single-tape Turing machine simulation.

Bundles a 100-rule machine computing Fibonacci numbers in unary and runs
it under a naive engine or an accelerated run-length-encoded one.
"""

from tapemachine.accel import RleTape, rle_from_list, run_accelerated
from tapemachine.analysis import coverage, reachability, validate
from tapemachine.core import (
    DEFAULT_MAX_STEPS,
    Configuration,
    InputSymbolOutOfAlphabet,
    Machine,
    MachineError,
    MissingUnarySymbol,
    Move,
    Outcome,
    Rule,
    RunOutcome,
    RunStats,
    StepKind,
    StepResult,
    Tape,
    decode_unary,
    encode_unary,
    run,
    step,
)
from tapemachine.format import (
    MachineParseError,
    ParseDiagnostic,
    TapeInputError,
    fibonacci_machine,
    parse_machine,
    parse_tape_input,
    serialize_machine,
)
from tapemachine.oracle import fibonacci

__version__ = "0.1.0"
