"""Subgroups of Z^N in row Hermite normal form.

A polynomial ``a_1 x + ... + a_N x^N`` is identified with its coefficient
vector ``(a_1, ..., a_N)``, so subgroups of polynomials of degree at most
``N`` (vanishing at 0) are subgroups of Z^N.  All arithmetic is exact
(Python integers; fractions only when inverting a triangular basis).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclic import CyclicProduct, ProductSubgroup, subgroup_closure
from .errors import (ConsistencyError, HypothesisError, InfeasibleError,
                     InputError, PreconditionError)

Vector = tuple[int, ...]

#: Largest dimension accepted by the constructors.
MAX_DIMENSION = 8
INFINITE = math.inf


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form with zero rows dropped.

    Pivots are positive and every entry above a pivot lies in ``[0, pivot)``.
    Two generating sets of the same subgroup give identical output.
    """
    A = [[int(x) for x in r] for r in rows if any(r)]
    r = 0
    for col in range(ncols):
        if r >= len(A):
            break
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[p] = A[p], A[r]
            pivot_row = A[r]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // pivot_row[col]
                    A[i] = [a - q * b for a, b in zip(A[i], pivot_row)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if r >= len(A) or A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return A[:r]


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    A = [[int(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest nonzero entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i0, j0 = min(cands)
                A[t], A[i0] = A[i0], A[t]
                for row in A:
                    row[t], row[j0] = row[j0], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class LatticeSubgroup:
    dimension: int
    basis: tuple[Vector, ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], dimension: int | None = None) -> LatticeSubgroup:
        gens = [tuple(int(x) for x in g) for g in gens]
        if dimension is None:
            if not gens:
                raise InputError("dimension is required for an empty generating set")
            dimension = len(gens[0])
        if not 1 <= dimension <= MAX_DIMENSION:
            raise InputError(f"dimension {dimension} outside 1..{MAX_DIMENSION}")
        for g in gens:
            if len(g) != dimension:
                raise InputError(f"generator {g} does not have {dimension} coordinates")
        basis = hermite_rows(gens, dimension)
        return cls(dimension, tuple(tuple(r) for r in basis))

    @classmethod
    def full(cls, dimension: int) -> LatticeSubgroup:
        return cls.from_generators([unit(dimension, i) for i in range(dimension)], dimension)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def __contains__(self, v) -> bool:
        return member(self, v)

    def __str__(self):
        rows = "; ".join(",".join(str(x) for x in r) for r in self.basis)
        return f"<{rows}>" if rows else "<0>"


def unit(dimension: int, i: int, scale: int = 1) -> Vector:
    return tuple(scale if j == i else 0 for j in range(dimension))


def _check_vector(G: LatticeSubgroup, v: Sequence[int]) -> list[int]:
    if len(v) != G.dimension:
        raise InputError(f"vector {tuple(v)} does not have {G.dimension} coordinates")
    return [int(x) for x in v]


def member(G: LatticeSubgroup, v: Sequence[int]) -> bool:
    w = _check_vector(G, v)
    for row, p in zip(G.basis, G.pivots):
        if w[p] % row[p]:
            return False
        q = w[p] // row[p]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


def quotient_invariants(G: LatticeSubgroup) -> list[int]:
    """Invariant factors of the finite part of Z^N / G (ones dropped)."""
    return [d for d in smith_diagonal(G.basis) if d != 1]


def index(G: LatticeSubgroup) -> int | float:
    """Index of ``G`` in Z^N, or ``INFINITE`` when the rank is deficient."""
    if G.rank < G.dimension:
        return INFINITE
    return math.prod(smith_diagonal(G.basis))


def minimal_period(G: LatticeSubgroup) -> tuple[int, ...]:
    """``k_i = min{k >= 1 : k e_i in G}`` for each coordinate."""
    if G.rank < G.dimension:
        raise PreconditionError("minimal period exists only for finite-index subgroups")
    # full rank HNF is upper triangular: k_i is the lcm of the denominators
    # of row i of the inverse basis
    N = G.dimension
    H = G.basis
    period = []
    for i in range(N):
        x = [Fraction(0)] * N
        # solve x H = e_i by forward substitution over columns
        for col in range(N):
            s = Fraction(int(col == i)) - sum((x[r] * H[r][col] for r in range(col)), Fraction(0))
            x[col] = s / H[col][col]
        period.append(math.lcm(*(f.denominator for f in x)))
    return tuple(period)


def project_mod(G: LatticeSubgroup, period: Sequence[int]) -> ProductSubgroup:
    """Image of ``G`` under coordinatewise reduction mod ``period``."""
    V = CyclicProduct(tuple(period))
    if V.dimension != G.dimension:
        raise InputError(f"period {tuple(period)} does not match dimension {G.dimension}")
    return subgroup_closure(V, [V.reduce(r) for r in G.basis])


def kernel_lattice(period: Sequence[int]) -> LatticeSubgroup:
    """``k_1 Z + ... + k_N Z``, the kernel of reduction mod ``period``."""
    N = len(period)
    return LatticeSubgroup.from_generators([unit(N, i, k) for i, k in enumerate(period)], N)


def star_property_at(G: LatticeSubgroup, period: Sequence[int]) -> bool:
    """Whether ``g in G`` with ``k_j | g_j`` for all ``j != i`` forces ``k_i | g_i``."""
    N = G.dimension
    for i in range(N):
        probe = [unit(N, j, period[j]) if j != i else unit(N, i) for j in range(N)]
        sub = intersect(G, LatticeSubgroup.from_generators(probe, N))
        if any(row[i] % period[i] for row in sub.basis):
            return False
    return True


def saturated_at(G: LatticeSubgroup, period: Sequence[int]) -> bool:
    """Whether ``G`` is the full preimage of its reduction mod ``period``."""
    return join(G, kernel_lattice(period)) == G


def is_rigidity(G: LatticeSubgroup) -> bool:
    """Finite-index test, cross-checked against the periodic description.

    Raises :class:`HypothesisError` unless some element of ``G`` has a
    nonzero top coordinate.
    """
    if not any(row[-1] for row in G.basis):
        raise HypothesisError(f"{G} has no element with nonzero coordinate {G.dimension}")
    if index(G) == INFINITE:
        return False
    k = minimal_period(G)
    if not (star_property_at(G, k) and saturated_at(G, k)):
        raise ConsistencyError(f"finite-index {G} fails the periodic description at {k}")
    return True


def join(G1: LatticeSubgroup, G2: LatticeSubgroup) -> LatticeSubgroup:
    if G1.dimension != G2.dimension:
        raise InputError("dimension mismatch")
    return LatticeSubgroup.from_generators(G1.basis + G2.basis, G1.dimension)


def intersect(G1: LatticeSubgroup, G2: LatticeSubgroup) -> LatticeSubgroup:
    """Lattice intersection via the integer kernel of the stacked bases."""
    if G1.dimension != G2.dimension:
        raise InputError("dimension mismatch")
    N = G1.dimension
    zero = (0,) * N
    # rows (a | a) and (b | 0): echelon rows with zero left half span G1 n G2
    stacked = [r + r for r in G1.basis] + [r + zero for r in G2.basis]
    H = hermite_rows(stacked, 2 * N)
    return LatticeSubgroup.from_generators([r[N:] for r in H if not any(r[:N])], N)


def image(G: LatticeSubgroup, sigma: Sequence[Sequence[int]]) -> LatticeSubgroup:
    """Subgroup generated by ``g * sigma`` for basis rows ``g`` (row vectors)."""
    N = G.dimension
    rows = [tuple(sum(g[r] * sigma[r][c] for r in range(N)) for c in range(N)) for g in G.basis]
    return LatticeSubgroup.from_generators(rows, N)


def complete_basis(G: LatticeSubgroup) -> list[Vector]:
    """Standard vectors extending the basis of ``G`` to a rational basis."""
    N = G.dimension
    rows = list(G.basis)
    extra = []
    for i in range(N):
        e = unit(N, i)
        if len(hermite_rows(rows + [e], N)) > len(rows):
            rows.append(e)
            extra.append(e)
    return extra


def separate(H: LatticeSubgroup, excluded: Iterable[Sequence[int]],
             max_doublings: int = 256) -> LatticeSubgroup:
    """A finite-index ``G`` containing ``H`` and none of ``excluded``.

    ``G = <P_1..P_s, M P_{s+1}..M P_N>`` with the complement scaled by
    ``M = 2, 4, 8, ...``.  The candidates are nested, so the first ``M``
    excluding every target equals the intersection of the per-target
    results.
    """
    targets = [tuple(_check_vector(H, q)) for q in excluded]
    for q in targets:
        if member(H, q):
            raise InfeasibleError(f"excluded vector {q} lies in {H}")
    extra = complete_basis(H)
    if not extra:
        return H
    M = 2
    for _ in range(max_doublings):
        G = LatticeSubgroup.from_generators(
            list(H.basis) + [tuple(M * x for x in e) for e in extra], H.dimension)
        if not any(member(G, q) for q in targets):
            return G
        M *= 2
    raise ConsistencyError(f"no separating subgroup found up to M = {M}")
