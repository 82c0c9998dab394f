import random

import pytest

from tapemachine import kernels
from tapemachine.accel import run_accelerated
from tapemachine.core import encode_unary, run

from conftest import random_input, random_machine

compiled_only = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


def test_get_rejects_unknown_kernel():
    with pytest.raises(ValueError):
        kernels.get("fortran")
    assert kernels.get("python") is kernels.python
    assert kernels.get("auto") is kernels.active


@compiled_only
@pytest.mark.parametrize("engine", [run, run_accelerated])
def test_compiled_matches_python_on_fibonacci(fib, engine):
    for n in range(0, 11):
        syms = encode_unary(n, fib)
        a = engine(fib, syms, backend=kernels.compiled)
        b = engine(fib, syms, backend=kernels.python)
        assert a == b
        assert a.dispatches == b.dispatches


@compiled_only
@pytest.mark.parametrize("engine", [run, run_accelerated])
def test_compiled_matches_python_on_random(engine):
    rng = random.Random(11)
    for _ in range(300):
        m = random_machine(rng)
        syms = random_input(rng, m)
        limit = rng.choice([1, 7, 300, 20_000])
        a = engine(m, syms, limit, backend=kernels.compiled)
        b = engine(m, syms, limit, backend=kernels.python)
        assert a == b
        assert a.dispatches == b.dispatches


@compiled_only
def test_compiled_tape_grows_both_ways():
    from tapemachine.format import parse_machine

    # sweeps far past the initial buffer in both directions
    m = parse_machine("blank b\ninitial r\nfinal h\nrule r b l 1 L\nrule l b r 1 R\n"
                      "rule r 1 r 1 R\nrule l 1 l 1 L\n")
    a = run(m, [], 200_000, backend=kernels.compiled)
    b = run(m, [], 200_000, backend=kernels.python)
    assert a == b
    assert a.stats.min_offset < -300 and a.stats.max_offset > 300


def test_env_var_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, TAPEMACHINE_PURE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", "from tapemachine import kernels; print(kernels.active.__name__)"],
        capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "tapemachine._pykernels"
