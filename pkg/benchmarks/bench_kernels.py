"""Compare the compiled and pure-Python kernels on the bundled Fibonacci machine.

    python benchmarks/bench_kernels.py --max-n 15 --repeat 3
"""

import argparse
import time

from tapemachine import kernels
from tapemachine.accel import run_accelerated
from tapemachine.core import encode_unary, run
from tapemachine.format import fibonacci_machine


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=15)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    machine = fibonacci_machine()
    engines = {"naive": run, "accel": run_accelerated}
    names = sorted(kernels.available)
    if "compiled" not in names:
        print("compiled kernels not built; timing the pure-Python kernels only")

    header = f"{'n':>3} {'steps':>10} " + " ".join(f"{e + '/' + k:>16}" for e in engines for k in names)
    print(header + "   (ms, best of %d)" % args.repeat)
    totals = {(e, k): 0.0 for e in engines for k in names}
    for n in range(1, args.max_n + 1):
        symbols = encode_unary(n, machine)
        cells = []
        reference = None
        for e, fn in engines.items():
            for k in names:
                backend = kernels.available[k]
                elapsed, outcome = best_of(lambda: fn(machine, symbols, backend=backend), args.repeat)
                if reference is None:
                    reference = outcome
                elif outcome != reference:
                    raise SystemExit(f"kernels disagree at n={n} ({e}/{k})")
                totals[e, k] += elapsed
                cells.append(f"{elapsed * 1e3:16.3f}")
        print(f"{n:>3} {reference.steps:>10} " + " ".join(cells))
    print(f"{'sum':>14} " + " ".join(f"{totals[e, k] * 1e3:16.3f}" for e in engines for k in names))
    base = totals["naive", "python"]
    for (e, k), t in totals.items():
        print(f"speedup over naive/python: {e}/{k} x{base / t:.1f}")


if __name__ == "__main__":
    main()
