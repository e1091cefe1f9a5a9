"""Morse cocycles over the odometer built from a coupling ``K``.

The input data ``b^{(t+1)}_{j,l}`` follow the closed forms of the
construction: for ``l > 1`` a value ``c_{l,s}`` at ``j = s n^N rho' + r n^{l-1}``,
``-n c`` just before each multiple of ``n^l``, and ``-n c_{l,n-1}`` at
``rho - 2``; for ``l = 1`` the three-case rule with ``-(n-1) c`` at every
``j = -1 mod n``.  Here ``n = n_t`` and ``c_{l,s}`` is coordinate ``l`` of
``coupling_sequence(s)``.  Stage 1 carries no data: ``b^{(1)} = 0``.

Birkhoff sums are never accumulated along orbits.  Writing
``S_t(L) = phi(0) + ... + phi(L-1)`` over the levels of stage ``t``,

    S_{t+1}(q n_t + r) = q Sigma_t + (b_0 + ... + b_{q-1}) + S_t(r),

and the prefix sums of each row have closed forms, so
``phi^{(m)}(x) = S_T(i + m) - S_T(i)`` costs O(T) per evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import _kernels
from ._kernels import BPlan, LevelPlan
from .cyclic import Element, ProductSubgroup, is_coupling
from .errors import (CapacityError, InputError, TruncationError,
                     UndefinedColumnError)
from .odometer import OdometerPoint, OdometerSpec, check_point, level

#: Largest number of columns scanned one by one.
COLUMN_BOUND = 1 << 22


@dataclass(frozen=True)
class CocycleSystem:
    spec: OdometerSpec
    K: ProductSubgroup

    def __post_init__(self):
        V = self.K.parent
        if V.dimension != self.spec.N:
            raise InputError(f"coupling lives in {V}, odometer has N = {self.spec.N}")
        if not is_coupling(self.K):
            raise InputError(f"{self.K} does not project onto every factor")
        if self.spec.n(1) % V.exponent:
            raise InputError(f"lcm{V.moduli} does not divide n_1 = {self.spec.n(1)}")

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.K.parent.moduli

    @property
    def enumeration(self) -> tuple[Element, ...]:
        return self.K.elements

    @cached_property
    def sigmas(self) -> tuple[tuple[int, ...], ...]:
        """``Sigma_t`` for t = 1..T, componentwise mod k_l."""
        out = []
        for l in range(1, self.N + 1):
            k = self.moduli[l - 1]
            s = [0]
            for t1 in range(2, self.spec.T + 1):
                bp = row_plan(self, t1, l)
                row = _kernels.prefix_b_many([bp.rho - 1], bp)[0]
                s.append((bp.rho * s[-1] + row) % k)
            out.append(s)
        return tuple(tuple(col[t] for col in out) for t in range(self.spec.T))


@lru_cache(maxsize=None)
def row_plan(sys: CocycleSystem, t_plus_1: int, l: int) -> BPlan:
    """Kernel parameters of the row ``b^{(t+1)}_{., l}``."""
    if not 2 <= t_plus_1 <= sys.spec.T:
        raise InputError(f"stage {t_plus_1} outside 2..{sys.spec.T}")
    _check_coordinate(sys, l)
    seq = tuple(e[l - 1] for e in sys.enumeration)
    return BPlan(sys.spec.n(t_plus_1 - 1), sys.spec.rho_prime_at(t_plus_1), sys.N, l,
                 sys.moduli[l - 1], seq)


@lru_cache(maxsize=None)
def level_plan(sys: CocycleSystem, l: int, T: int) -> LevelPlan:
    _check_coordinate(sys, l)
    return LevelPlan(sys.moduli[l - 1], sys.spec.heights[:T],
                     tuple(row_plan(sys, t, l) for t in range(2, T + 1)),
                     tuple(s[l - 1] for s in sys.sigmas[:T]))


def _check_coordinate(sys: CocycleSystem, l: int) -> None:
    if not 1 <= l <= sys.N:
        raise InputError(f"coordinate {l} outside 1..{sys.N}")


def coupling_sequence(sys: CocycleSystem, t: int, i: int) -> Element:
    """``c_{., i, t}``: the coupling elements cycled in canonical order."""
    if not 0 <= i < sys.spec.n(t):
        raise InputError(f"index {i} outside [0, n_{t})")
    return sys.enumeration[i % len(sys.enumeration)]


def input_term(sys: CocycleSystem, t_plus_1: int, j: int, l: int) -> tuple[int, int]:
    """``b^{(t+1)}_{j,l}`` as ``(coefficient, s)`` meaning ``coefficient * c_{l,s}``."""
    _check_coordinate(sys, l)
    rho = sys.spec.rho_at(t_plus_1)
    if j == rho - 1:
        raise UndefinedColumnError(f"b^({t_plus_1}) is undefined on the top column {j}")
    if not 0 <= j <= rho - 2:
        raise InputError(f"column {j} outside [0, {rho - 2}]")
    if t_plus_1 == 1:
        return 0, 0
    bp = row_plan(sys, t_plus_1, l)
    n, P = bp.n, bp.P
    if l == 1:
        if j == rho - 2:
            return -(n - 2), n - 1
        if (j + 1) % n == 0:
            return -(n - 1), j // P
        return 1, j // P
    s, v = divmod(j, P)
    if v % bp.w == 0:
        return 1, s
    if (j + 1) % bp.nl == 0 and 1 <= (j + 1) // bp.nl <= bp.R - 1:
        return -n, ((j + 1) // bp.nl - 1) // bp.Q
    if j == rho - 2:
        return -n, n - 1
    return 0, 0


def input_data(sys: CocycleSystem, t_plus_1: int, j: int, l: int) -> int:
    coef, s = input_term(sys, t_plus_1, j, l)
    if coef == 0:
        return 0
    c = coupling_sequence(sys, t_plus_1 - 1, s)
    return coef * c[l - 1] % sys.moduli[l - 1]


def row_sum(sys: CocycleSystem, t_plus_1: int, l: int) -> int:
    """``b_0 + ... + b_{rho-2}`` in ``Z_{k_l}``."""
    if t_plus_1 == 1:
        return 0
    bp = row_plan(sys, t_plus_1, l)
    return _kernels.prefix_b_many([bp.rho - 1], bp)[0]


def sigma(sys: CocycleSystem, t: int) -> Element:
    """``Sigma_t = a_0 + ... + a_{n_t - 2}``."""
    if not 1 <= t <= sys.spec.T:
        raise InputError(f"stage {t} outside 1..{sys.spec.T}")
    return sys.sigmas[t - 1]


def cocycle_value(sys: CocycleSystem, x: OdometerPoint, l: int) -> int:
    """``phi_l(x) = b^{(t)}_{x_t}`` for the first ``t`` with ``x_t < rho_t - 1``."""
    check_point(x, sys.spec)
    _check_coordinate(sys, l)
    for t, d in enumerate(x.digits, start=1):
        if d < sys.spec.rho_at(t) - 1:
            return input_data(sys, t, d, l)
    raise TruncationError("phi is not determined on the top level of the truncation stage")


def birkhoff_sum(sys: CocycleSystem, x: OdometerPoint, m: int, l: int) -> int:
    """``phi_l(x) + phi_l(Tx) + ... + phi_l(T^{m-1} x)`` in ``Z_{k_l}``."""
    check_point(x, sys.spec)
    return birkhoff_levels(sys, x.stage, [level(x, sys.spec)], m, l)[0]


def birkhoff_vector(sys: CocycleSystem, x: OdometerPoint, m: int) -> Element:
    return tuple(birkhoff_sum(sys, x, m, l) for l in range(1, sys.N + 1))


def birkhoff_levels(sys: CocycleSystem, T: int, levels, m: int, l: int) -> list[int]:
    """Birkhoff sums from many stage-``T`` levels at once."""
    if m < 0:
        raise InputError(f"m must be non-negative, got {m}")
    levels = [int(i) for i in levels]
    top = sys.spec.n(T) - 1
    for i in levels:
        if not 0 <= i < sys.spec.n(T):
            raise InputError(f"level {i} outside [0, n_{T})")
        if i + m > top:
            raise TruncationError(f"level {i} + {m} passes the top of stage {T}")
    _check_coordinate(sys, l)
    return _kernels.birkhoff_many(levels, m, level_plan(sys, l, T))


# -- column statistics --------------------------------------------------------


@dataclass(frozen=True)
class FrequencyTable:
    """Distribution of ``(phi_1^{(n_t)}, ..., phi_N^{(n_t^N)})`` over stage-(t+1) columns.

    ``counts`` holds the non-star columns by value.  ``ba2[(l, i)]`` is the
    fraction of columns where ``phi_l^{(i n_t^l)} != i phi_l^{(n_t^l)}``,
    ``ba[(r, s)]`` the fraction where ``phi_r^{(n_t^s)} != 0`` and ``co2[r]``
    the fraction where ``phi_r^{(k_r n_t^r)} != 0`` (columns whose window
    leaves the row count as failures).  They are only available when the
    columns were enumerated.
    """

    stage: int
    counts: dict[Element, int]
    star_count: int
    total: int
    method: str
    discrepancy: Fraction
    coupling_order: int
    pattern_bound: Fraction
    ba2: dict[tuple[int, int], Fraction] | None = None
    ba: dict[tuple[int, int], Fraction] | None = None
    co2: dict[int, Fraction] | None = None

    def frequency(self, e: Element) -> Fraction:
        return Fraction(self.counts.get(tuple(e), 0), self.total)

    @property
    def star_fraction(self) -> Fraction:
        return Fraction(self.star_count, self.total)

    @property
    def error_bound(self) -> Fraction:
        """Rigorous bound on ``|frequency(e) - 1/|K||`` for every ``e`` in ``K``."""
        return self.star_fraction + self.discrepancy

    def tv_distance(self) -> Fraction:
        """Total variation between the non-star distribution and uniform on ``K``."""
        good = self.total - self.star_count
        u = Fraction(1, self.coupling_order)
        return sum((abs(Fraction(c, good) - u) for c in self.counts.values()), Fraction(0)) / 2


def _column_entries(sys: CocycleSystem, t: int, starts: list[int], widths,
                    boundaries: bool = True) -> list[tuple[int | None, ...]]:
    """Window sums per column and coordinate, ``None`` where the entry is a star.

    A window reaching the top column ``rho - 1`` is always a star; with
    ``boundaries`` a window containing a boundary index is one too.
    """
    cols = []
    for l in range(1, sys.N + 1):
        bp = row_plan(sys, t + 1, l)
        w = widths[l - 1]
        ws = _kernels.window_sums(starts, w, bp)
        bc = _kernels.boundary_counts(starts, w, bp) if boundaries else [0] * len(starts)
        cols.append([None if v < 0 or c else v for v, c in zip(ws, bc)])
    return list(zip(*cols))


def _tally(entries, counts: dict) -> int:
    star = 0
    for v in entries:
        if None in v:
            star += 1
        else:
            counts[v] = counts.get(v, 0) + 1
    return star


def column_values(sys: CocycleSystem, t: int, start: int = 0, stop: int | None = None,
                  bound: int = COLUMN_BOUND) -> list[tuple[int | None, ...]]:
    """``(phi_1^{(n_t)}, ..., phi_N^{(n_t^N)})`` on columns ``start..stop-1`` of stage ``t + 1``.

    Coordinates in a boundary case are ``None``.
    """
    _require_stage(sys, t)
    rho = sys.spec.rho_at(t + 1)
    stop = rho if stop is None else stop
    if not 0 <= start <= stop <= rho:
        raise InputError(f"column range [{start}, {stop}) outside [0, {rho}]")
    if stop - start > bound:
        raise CapacityError(f"{stop - start} columns exceed the bound {bound}")
    n = sys.spec.n(t)
    return _column_entries(sys, t, list(range(start, stop)), [n ** (l - 1) for l in range(1, sys.N + 1)])


def _require_stage(sys: CocycleSystem, t: int) -> None:
    if not 1 <= t < sys.spec.T:
        raise InputError(f"column statistics at stage {t} need stages up to {t + 1}, "
                         f"spec has {sys.spec.T}")


def _sequence_discrepancy(sys: CocycleSystem, n: int) -> Fraction:
    L = len(sys.enumeration)
    q, r = divmod(n, L)
    worst = Fraction(q + (1 if r else 0), n) - Fraction(1, L)
    best = Fraction(1, L) - Fraction(q, n)
    return max(worst, best, Fraction(0))


def _window_fraction(sys, t, starts, width, l, bad) -> Fraction:
    bp = row_plan(sys, t + 1, l)
    ws = _kernels.window_sums(starts, width, bp)
    return Fraction(sum(1 for i, v in enumerate(ws) if bad(i, v)), len(starts))


def frequency_table(sys: CocycleSystem, t: int, method: str = "auto",
                    bound: int = COLUMN_BOUND) -> FrequencyTable:
    """Column statistics at stage ``t`` (uses the row ``b^{(t+1)}``).

    ``method="enumerate"`` scans all ``rho_{t+1}`` columns.  ``"structured"``
    counts the body in closed form: away from the last ``n_t^{N-1} + 1``
    columns, column ``u`` is a star column exactly when one of the lowest
    ``N`` base-``n_t`` digits of ``u`` equals ``n_t - 1``, and otherwise
    carries ``coupling_sequence(u // (n_t^N rho'))``.  The remaining tail is
    scanned.  ``"auto"`` enumerates when ``rho_{t+1} <= bound``.
    """
    _require_stage(sys, t)
    n = sys.spec.n(t)
    rho = sys.spec.rho_at(t + 1)
    N = sys.N
    widths = [n ** (l - 1) for l in range(1, N + 1)]
    if method == "auto":
        method = "enumerate" if rho <= bound else "structured"
    common = dict(stage=t, total=rho, discrepancy=_sequence_discrepancy(sys, n),
                  coupling_order=len(sys.enumeration),
                  pattern_bound=Fraction(N, n) + Fraction(N, rho))
    counts = {e: 0 for e in sys.enumeration}
    if method == "enumerate":
        if rho > bound:
            raise CapacityError(f"rho_{t + 1} = {rho} columns exceed the bound {bound}")
        starts = list(range(rho))
        star = _tally(_column_entries(sys, t, starts, widths), counts)
        stats = _enumerated_statistics(sys, t, starts, widths)
        return FrequencyTable(counts=counts, star_count=star, method="enumerated",
                              **common, **stats)
    if method != "structured":
        raise InputError(f"unknown method {method!r}")
    rp = sys.spec.rho_prime_at(t + 1)
    P = n**N * rp
    tail_start = rho - 1 - n ** (N - 1)
    if rho - tail_start > bound:
        raise CapacityError(f"tail of {rho - tail_start} columns exceeds the bound {bound}")
    L = len(sys.enumeration)
    full = tail_start // P
    per_block = rp * (n - 1) ** N
    for idx, e in enumerate(sys.enumeration):
        counts[e] += per_block * (full // L + (1 if idx < full % L else 0))
    counts[sys.enumeration[full % L]] += _good_below(tail_start, n, N) - _good_below(full * P, n, N)
    starts = list(range(tail_start, rho))
    _tally(_column_entries(sys, t, starts, widths), counts)
    good = sum(counts.values())
    return FrequencyTable(counts=counts, star_count=rho - good, method="structured", **common)


def _good_below(x: int, n: int, N: int) -> int:
    """``#{u < x : none of the lowest N base-n digits of u is n - 1}``."""
    block = n**N
    q, y = divmod(x, block)
    res = q * (n - 1) ** N
    for i in reversed(range(N)):
        d = (y // n**i) % n
        res += d * (n - 1) ** i
        if d == n - 1:
            break
    return res


def _enumerated_statistics(sys: CocycleSystem, t: int, starts: list[int], widths) -> dict:
    ba2, ba, co2 = {}, {}, {}
    for l in range(1, sys.N + 1):
        k = sys.moduli[l - 1]
        w = widths[l - 1]
        base = _kernels.window_sums(starts, w, row_plan(sys, t + 1, l))
        for i in range(2, k + 1):
            ba2[(l, i)] = _window_fraction(
                sys, t, starts, i * w, l,
                lambda c, v, i=i, k=k: v < 0 or base[c] < 0 or v != i * base[c] % k)
        co2[l] = _window_fraction(sys, t, starts, k * w, l, lambda c, v: v != 0)
        for s in range(1, sys.N + 1):
            if s != l:
                ba[(l, s)] = _window_fraction(sys, t, starts, widths[s - 1], l,
                                              lambda c, v: v != 0)
    return dict(ba2=ba2, ba=ba, co2=co2)


def column_distribution(sys: CocycleSystem, t: int, multiple: int,
                        bound: int = COLUMN_BOUND) -> tuple[dict[Element, int], int, int]:
    """Distribution of ``Phi^{(multiple * n_t)}`` over stage-(t+1) columns.

    The sum is constant on every column whose window stays below the top
    column, so only those overflowing windows are unresolved.  Returns
    ``(counts of resolved columns by value, unresolved count, total)``.
    """
    _require_stage(sys, t)
    if multiple < 1:
        raise InputError(f"multiple must be positive, got {multiple}")
    rho = sys.spec.rho_at(t + 1)
    if rho > bound:
        raise CapacityError(f"rho_{t + 1} = {rho} columns exceed the bound {bound}")
    starts = list(range(rho))
    counts: dict[Element, int] = {}
    star = _tally(_column_entries(sys, t, starts, [multiple] * sys.N, boundaries=False), counts)
    return dict(sorted(counts.items())), star, rho

