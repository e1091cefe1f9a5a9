import os
import random
import subprocess
import sys

import pytest

from polyrigid import _kernels
from polyrigid._kernels import COMPILED_AVAILABLE, BPlan, _pykernels
from polyrigid.cocycle import input_data, level_plan, row_plan

from conftest import BATTERY, make_system

needs_compiled = pytest.mark.skipif(not COMPILED_AVAILABLE, reason="compiled kernels not built")


def random_plan(rng):
    N = rng.randint(1, 3)
    n = rng.randint(2, 6)
    k = rng.randint(1, 7)
    return BPlan(n, rng.randint(1, 3), N, rng.randint(1, N), k,
                 tuple(rng.randrange(k) for _ in range(rng.randint(1, 4))))


def test_prefix_sums_match_literal_rows():
    for _, moduli, gens in BATTERY:
        s = make_system(moduli, gens, 2, "t")
        for l in range(1, s.N + 1):
            bp = row_plan(s, 2, l)
            k = moduli[l - 1]
            acc, expect = 0, []
            for j in range(bp.rho):
                expect.append(acc % k)
                if j < bp.rho - 1:
                    acc += input_data(s, 2, j, l)
            assert _pykernels.prefix_b_many(list(range(bp.rho)), bp) == expect


def test_window_sums_flag_overflow():
    bp = BPlan(2, 1, 2, 1, 2, (0, 1))
    assert _pykernels.window_sums([bp.rho - 2, bp.rho - 1], 2, bp) == [-1, -1]


@needs_compiled
def test_backends_agree_on_random_plans():
    rng = random.Random(0)
    for _ in range(300):
        bp = random_plan(rng)
        qs = [rng.randint(0, bp.rho) for _ in range(50)] + [0, bp.rho]
        assert _kernels.prefix_b_many(qs, bp, "python") == _kernels.prefix_b_many(qs, bp, "cython")
        w = rng.randint(1, bp.rho)
        starts = [rng.randrange(bp.rho) for _ in range(50)]
        for fn in (_kernels.window_sums, _kernels.boundary_counts):
            assert fn(starts, w, bp, "python") == fn(starts, w, bp, "cython")


@needs_compiled
@pytest.mark.parametrize("T", [3, 4])
def test_backends_agree_on_levels(T):
    rng = random.Random(T)
    for _, moduli, gens in BATTERY:
        if T == 4 and moduli != (2, 2):
            continue
        s = make_system(moduli, gens, T)
        nT = s.spec.n(T)
        for l in range(1, s.N + 1):
            lp = level_plan(s, l, T)
            levels = [rng.randrange(nT // 2) for _ in range(200)]
            for m in (0, 1, 17, s.spec.n(T - 1), rng.randrange(nT // 2)):
                a = _kernels.birkhoff_many(levels, m, lp, "python")
                b = _kernels.birkhoff_many(levels, m, lp, "cython")
                assert a == b


def test_unknown_backend():
    bp = BPlan(2, 1, 1, 1, 2, (1,))
    with pytest.raises(ValueError):
        _kernels.prefix_b_many([0], bp, "fortran")


def test_environment_forces_python_backend():
    code = "import polyrigid; print(polyrigid.KERNEL_BACKEND)"
    env = dict(os.environ, POLYRIGID_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
