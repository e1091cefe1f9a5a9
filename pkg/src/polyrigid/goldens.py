"""The printed construction tables for ``N = 3``, ``n_t = 3``, ``rho' = 1``.

Tables are kept symbolically: a token ``"<a>c<s>"`` stands for ``a * c_{l,s}``.
Input data come from :func:`polyrigid.cocycle.input_term`.  Column values
are recomputed with the prefix-sum kernels on a tagged sequence
``c_s = B^s`` modulo ``B^n``, from which each coefficient can be read back.
"""
from __future__ import annotations

import json
from importlib import resources

from . import _kernels
from ._kernels import BPlan
from .cocycle import CocycleSystem, input_term
from .cyclic import CyclicProduct, subgroup_closure
from .errors import InputError
from .odometer import build_spec

FIXTURE = "construction_tables.json"
STAR = "*"
_TAG = 1000


def load_fixture(path=None) -> dict:
    if path is None:
        text = resources.files("polyrigid.data").joinpath(FIXTURE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def token(coef: int, s: int) -> str:
    if coef == 0:
        return ""
    return f"c{s}" if coef == 1 else f"{coef}c{s}"


def _decode(v: int, n: int) -> str:
    """Read ``sum a_s c_s`` back from ``sum a_s B^s mod B^n`` (balanced digits)."""
    parts = []
    for s in range(n):
        d = v % _TAG
        if d >= _TAG // 2:
            d -= _TAG
        v = (v - d) // _TAG
        if d:
            parts.append(token(d, s))
    return "+".join(parts)


def diagonal_system(N: int = 3, n: int = 3, rho_prime: int = 1) -> CocycleSystem:
    """Cocycle over the odometer with ``n_1 = n`` and ``K`` the diagonal of ``Z_n^N``."""
    V = CyclicProduct((n,) * N)
    K = subgroup_closure(V, [(1,) * N])
    return CocycleSystem(build_spec(N, (n,) * N, 2, rho_prime), K)


def regenerate(N: int = 3, n: int = 3, rho_prime: int = 1, columns: int | None = None) -> dict:
    if n < 2 or n >= _TAG // 2:
        raise InputError(f"n_t = {n} outside the tagged range")
    sys = diagonal_system(N, n, rho_prime)
    rho = sys.spec.rho_at(2)
    columns = rho - 1 if columns is None else columns
    if not 1 <= columns <= rho - 1:
        raise InputError(f"columns must lie in 1..{rho - 1}")
    data, phi = {}, {}
    for l in range(1, N + 1):
        data[str(l)] = [token(*input_term(sys, 2, j, l)) for j in range(columns)]
        bp = BPlan(n, rho_prime, N, l, _TAG**n, tuple(_TAG**s for s in range(n)))
        w = n ** (l - 1)
        starts = list(range(columns))
        sums = _kernels.window_sums(starts, w, bp)
        marks = _kernels.boundary_counts(starts, w, bp)
        phi[str(l)] = [STAR if v < 0 or c else _decode(v, n) for v, c in zip(sums, marks)]
    return {"N": N, "n_t": n, "rho_prime": rho_prime, "columns": columns,
            "input_data": data, "phi_columns": phi}


def diff(expected: dict, got: dict) -> list[tuple[str, str, int, str, str]]:
    """Mismatches as ``(table, coordinate, column, expected, got)``."""
    out = []
    for table in ("input_data", "phi_columns"):
        for l, row in expected[table].items():
            other = got[table].get(l, [])
            for j, tok in enumerate(row):
                g = other[j] if j < len(other) else None
                if g != tok:
                    out.append((table, l, j, tok, g))
    return out
