"""Command-line front end.

Exit codes: 0 halted/ok, 1 usage or parse error, 2 stuck, 3 step limit,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from importlib import resources
from pathlib import Path

from tapemachine import analysis, kernels
from tapemachine.accel import run_accelerated
from tapemachine.core import (
    DEFAULT_MAX_STEPS,
    UNARY_SYMBOL,
    Machine,
    Outcome,
    RunOutcome,
    Tape,
    decode_unary,
    encode_unary,
    run,
)
from tapemachine.format import TapeInputError, check_machine
from tapemachine.oracle import fibonacci
from tapemachine.trace import traced_run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STUCK = 2
EXIT_STEP_LIMIT = 3
EXIT_MISMATCH = 4

OUTCOME_EXIT = {Outcome.HALTED: EXIT_OK, Outcome.STUCK: EXIT_STUCK, Outcome.STEP_LIMIT: EXIT_STEP_LIMIT}
ENGINES = {"naive": run, "accel": run_accelerated}
FIBONACCI_ALIAS = "@fibonacci"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "stuck".
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_machine_text(spec: str) -> tuple[str, str]:
    machines = resources.files("tapemachine").joinpath("machines")
    if spec.startswith("@"):
        asset = machines.joinpath(spec[1:] + ".tm")
        if not asset.is_file():
            raise UsageError(f"no bundled machine named {spec!r}")
        return asset.read_text(encoding="utf-8"), spec
    path = Path(spec)
    if path.is_file():
        return path.read_text(encoding="utf-8"), spec
    # machines/<name>.tm resolves against the installed package as well
    if len(path.parts) == 2 and path.parts[0] == "machines" and machines.joinpath(path.name).is_file():
        return machines.joinpath(path.name).read_text(encoding="utf-8"), spec
    raise UsageError(f"cannot read machine file {spec!r}")


def load_machine(spec: str, err) -> Machine | None:
    text, label = _read_machine_text(spec)
    machine, diags = check_machine(text)
    for d in diags:
        print(f"{label}:{d.line}: {d.kind.value}: {d.message}", file=err)
    return machine


def format_tape(machine: Machine, tape: Tape) -> str:
    return " ".join(machine.symbol_names[s] for s in tape.symbols())


def _engine(name: str, kernel: str):
    fn = ENGINES[name]
    backend = kernels.get(kernel)
    return lambda m, syms, max_steps: fn(m, syms, max_steps, backend=backend)


def _emit_metrics(dest: str, machine: Machine, outcome: RunOutcome, out) -> None:
    docs = [analysis.stats_to_dict(machine, outcome.stats), analysis.coverage(machine, outcome).to_dict()]
    text = "".join(analysis.to_json(d) + "\n" for d in docs)
    if dest == "-":
        out.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def cmd_run(args, out, err) -> int:
    if args.unary is not None and args.tape:
        raise UsageError("give either --unary N or tape tokens, not both")
    machine = load_machine(args.machine, err)
    if machine is None:
        return EXIT_USAGE
    if args.unary is not None:
        symbols = encode_unary(args.unary, machine)
    else:
        try:
            symbols = [machine.symbol_id(t) for t in _tokens(args.tape, machine)]
        except TapeInputError as exc:
            print(f"error: {exc}", file=err)
            return EXIT_USAGE

    outcome = _engine(args.engine, args.kernel)(machine, symbols, args.max_steps)
    if args.trace is not None:
        if args.trace == "-":
            final = traced_run(machine, symbols, args.max_steps, err)
        else:
            with open(args.trace, "w", encoding="utf-8") as fh:
                final = traced_run(machine, symbols, args.max_steps, fh)
        if final != outcome.final_config:
            print("error: traced run disagrees with the engine", file=err)
            return EXIT_MISMATCH

    st = machine.state_names
    print(f"outcome: {outcome.kind.value}", file=out)
    print(f"state: {st[outcome.final_config.state]}", file=out)
    print(f"steps: {outcome.steps}", file=out)
    print(f"tape: {format_tape(machine, outcome.tape)}", file=out)
    if machine.has_symbol(UNARY_SYMBOL):
        print(f"value: {decode_unary(outcome.tape, machine)}", file=out)
    if args.metrics is not None:
        _emit_metrics(args.metrics, machine, outcome, out)
    return OUTCOME_EXIT[outcome.kind]


def _tokens(tokens: list[str], machine: Machine) -> list[str]:
    for pos, tok in enumerate(tokens, 1):
        if not machine.has_symbol(tok):
            raise TapeInputError(tok, pos)
    return tokens


def cmd_fib(args, out, err) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    machine = load_machine(args.machine, err)
    if machine is None:
        return EXIT_USAGE
    outcome = _engine(args.engine, args.kernel)(machine, encode_unary(args.n, machine), args.max_steps)
    result = decode_unary(outcome.tape, machine)
    print(f"n: {args.n}", file=out)
    print(f"result: {result}", file=out)
    print(f"steps: {outcome.steps}", file=out)
    print(f"span: {outcome.stats.span}", file=out)
    if outcome.kind is not Outcome.HALTED:
        print(f"error: machine did not halt ({outcome.kind.value})", file=err)
        return OUTCOME_EXIT[outcome.kind]
    if args.expect is not None:
        expected = fibonacci(args.n) if args.expect == "oracle" else int(args.expect)
        if result != expected:
            print(f"mismatch: machine gave {result}, expected {expected}", file=err)
            return EXIT_MISMATCH
        print(f"expected: {expected} ok", file=out)
    return EXIT_OK


def cmd_validate(args, out, err) -> int:
    machine = load_machine(args.machine, err)
    if machine is None:
        return EXIT_USAGE
    problems = analysis.validate(machine)
    for p in problems:
        print(f"{args.machine}: error: {p}", file=err)
    report = analysis.reachability(machine)
    doc = report.to_dict(machine)
    st = machine.state_names
    for s in sorted(report.unreachable_states):
        print(f"{args.machine}: warning: state {st[s]} is unreachable", file=err)
    if args.json:
        print(analysis.to_json(doc), file=out)
    else:
        print(f"{len(machine.rules)} rules, {len(st)} states, {len(machine.symbol_names)} symbols", file=out)
        print(analysis.to_text(doc), file=out)
    return EXIT_USAGE if problems else EXIT_OK


_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")


def cmd_bench(args, out, err) -> int:
    m = _RANGE.match(args.unary_range)
    if not m:
        raise UsageError(f"--unary-range must look like A..B, got {args.unary_range!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError(f"empty range {args.unary_range}")
    machine = load_machine(args.machine, err)
    if machine is None:
        return EXIT_USAGE
    engines = ["naive", "accel"] if args.engine == "both" else [args.engine]
    rows = []
    for n in range(lo, hi + 1):
        symbols = encode_unary(n, machine)
        results = {}
        for name in engines:
            t0 = time.perf_counter()
            outcome = _engine(name, args.kernel)(machine, symbols, args.max_steps)
            elapsed = time.perf_counter() - t0
            results[name] = outcome
            rows.append({
                "n": n,
                "engine": name,
                "kind": outcome.kind.value,
                "steps": outcome.steps,
                "dispatches": outcome.dispatches,
                "value": decode_unary(outcome.tape, machine),
                "span": outcome.stats.span,
                "seconds": elapsed,
            })
        first = results[engines[0]]
        for name in engines[1:]:
            if results[name] != first:
                print(f"error: engines disagree at n={n}", file=err)
                return EXIT_MISMATCH
        if args.check_fib and decode_unary(first.tape, machine) != fibonacci(n):
            print(f"error: n={n} gave {decode_unary(first.tape, machine)}, oracle says {fibonacci(n)}", file=err)
            return EXIT_MISMATCH

    headers = ["n", "engine", "kind", "steps", "dispatches", "value", "span", "ms"]
    table = [[str(r["n"]), r["engine"], r["kind"], str(r["steps"]), str(r["dispatches"]),
              str(r["value"]), str(r["span"]), f"{r['seconds'] * 1e3:.3f}"] for r in rows]
    widths = [max(len(h), *(len(row[i]) for row in table)) for i, h in enumerate(headers)]
    print("  ".join(h.rjust(w) for h, w in zip(headers, widths)), file=out)
    for row in table:
        print("  ".join(c.rjust(w) for c, w in zip(row, widths)), file=out)
    if args.json:
        doc = {"report": "bench", "machine": args.machine, "kernel": kernels.get(args.kernel).__name__,
               "rows": rows}
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tapemachine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, machine_positional=True, engines=("naive", "accel"), engine="naive"):
        if machine_positional:
            p.add_argument("machine", help=f"machine file, or {FIBONACCI_ALIAS}")
        p.add_argument("--engine", choices=engines, default=engine)
        p.add_argument("--kernel", choices=["auto", "compiled", "python"], default="auto",
                       help="execution kernel (default: compiled when built)")
        p.add_argument("--max-steps", type=_positive, default=DEFAULT_MAX_STEPS)

    p = sub.add_parser("run", help="run a machine on a tape")
    common(p)
    p.add_argument("tape", nargs="*", help="input symbols, e.g. 1 1 1")
    p.add_argument("--unary", type=int, metavar="N", help="input N in unary")
    p.add_argument("--trace", nargs="?", const="-", metavar="PATH",
                   help="write one record per step (default: stderr)")
    p.add_argument("--metrics", nargs="?", const="-", metavar="PATH",
                   help="write run stats and coverage as JSON lines (default: stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fib", help="compute F(n) with the bundled machine")
    p.add_argument("n", type=int)
    common(p, machine_positional=False)
    p.add_argument("--machine", default=FIBONACCI_ALIAS)
    p.add_argument("--expect", nargs="?", const="oracle", metavar="VALUE",
                   help="check the result (default: against the iterative oracle)")
    p.set_defaults(func=cmd_fib)

    p = sub.add_parser("validate", help="check a machine description")
    p.add_argument("machine")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time engines over a range of unary inputs")
    common(p, engines=("naive", "accel", "both"), engine="both")
    p.add_argument("--unary-range", required=True, metavar="A..B")
    p.add_argument("--check-fib", action="store_true", help="also compare values with the Fibonacci oracle")
    p.add_argument("--json", metavar="PATH", help="also write the rows as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
