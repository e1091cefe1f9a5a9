"""Character sums of the cocycle, limit verdicts and finite-sum traces.

For the weighted operator ``U f = Theta(Phi) (f o T)`` one has
``<U^m 1, 1> = integral of Theta(Phi^{(m)}) dmu``, so everything reduces to
averaging characters of Birkhoff sums over odometer levels.  Phases are
exact integers mod ``lcm(k)``; floating point enters only when a phase
histogram is turned into a complex number.
"""
from __future__ import annotations

import cmath
import functools
import hashlib
import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .cocycle import (CocycleSystem, _require_stage, birkhoff_levels, column_distribution,
                      frequency_table)
from .cyclic import CyclicProduct, Element, ProductSubgroup, annihilator
from .errors import CapacityError, InputError
from .odometer import LEVEL_BOUND
from .poly import IntPolynomial, evaluate, to_vector

#: Default slack when comparing an estimate with a limit target.
DEFAULT_SLACK = 0.05
#: Absolute tolerance for floating-point comparisons with exact targets.
FLOAT_TOL = 1e-9
#: Largest index range accepted by :func:`fs_set`.
FS_BOUND = 20
#: Samples drawn from one hash stream.
SAMPLE_BLOCK = 1024


class Method(str, Enum):
    EXACT = "Exact"
    MONTE_CARLO = "MonteCarlo"


class LimitVerdict(str, Enum):
    IDENTITY = "Identity"
    ZERO = "Zero"

    @property
    def target(self) -> float:
        return 1.0 if self is LimitVerdict.IDENTITY else 0.0


@dataclass(frozen=True)
class CharacterSumResult:
    value: complex
    error_bound: float
    method: Method
    stage: int
    m: int | None = None
    samples: int | None = None
    seed: int | None = None
    sd: float | None = None  # sample standard deviation of one term

    @property
    def sigma(self) -> float:
        """Standard error of a Monte Carlo mean (0 for exact results)."""
        if not self.samples or self.sd is None:
            return 0.0
        return self.sd / math.sqrt(self.samples)

    def deviation(self, target: complex) -> float:
        return abs(self.value - target)

    def consistent_with(self, target: complex, slack: float = DEFAULT_SLACK) -> bool:
        return self.deviation(target) <= self.error_bound + slack + FLOAT_TOL

    def nearest_verdict(self) -> LimitVerdict:
        return LimitVerdict.IDENTITY if abs(self.value - 1) < abs(self.value) else LimitVerdict.ZERO


def _phase_value(p: int, L: int) -> complex:
    p %= L
    if (4 * p) % L == 0:
        return (1, 1j, -1, -1j)[4 * p // L]
    return cmath.exp(2j * math.pi * p / L)


def character_phase(V: CyclicProduct, c: Sequence[int], j: Sequence[int]) -> int:
    """``p`` with ``Theta(j . c) = exp(2 pi i p / lcm(k))``."""
    if len(c) != V.dimension or len(j) != V.dimension:
        raise InputError(f"expected {V.dimension} coordinates")
    return V.pairing_phase(V.reduce(c), V.reduce(j))


def character(V: CyclicProduct, c: Sequence[int], j: Sequence[int]) -> complex:
    """``exp(2 pi i sum_r j_r c_r / k_r)``."""
    return _phase_value(character_phase(V, c, j), V.exponent)


def _histogram_mean(hist: Counter, L: int, total: int) -> complex:
    items = sorted(hist.items())
    vals = [(cnt, _phase_value(p, L)) for p, cnt in items]
    re = math.fsum(cnt * z.real for cnt, z in vals)
    im = math.fsum(cnt * z.imag for cnt, z in vals)
    return complex(re / total, im / total)


def _check_j(sys: CocycleSystem, j: Sequence[int]) -> Element:
    return sys.K.parent.check(tuple(j))


@functools.lru_cache(maxsize=64)
def _column_counts(sys: CocycleSystem, t: int, method: str):
    # the counts alone; structured counting is exact and skips the window statistics
    ft = frequency_table(sys, t, "structured" if method == "auto" else method)
    return ft.counts, ft.star_count, ft.total


def character_sum_exact(sys: CocycleSystem, t: int, j: Sequence[int],
                        multiple: int | None = None, method: str = "auto") -> CharacterSumResult:
    """Exact column sum of ``Theta(j . v)`` over the non-star columns of stage ``t + 1``.

    With ``multiple=None`` the column vector is
    ``v = (phi_1^{(n_t)}, ..., phi_N^{(n_t^N)})`` and star columns are those
    hitting a boundary case; otherwise it is ``Phi^{(multiple * n_t)}`` and
    only columns whose window overflows the row are excluded.
    ``error_bound`` is the excluded mass.
    """
    V = sys.K.parent
    j = _check_j(sys, j)
    m = None if multiple is None else multiple * sys.spec.n(t)
    if not any(j):
        # Theta(0) = 1 on every column, star or not
        _require_stage(sys, t)
        return CharacterSumResult(1 + 0j, 0.0, Method.EXACT, t, m)
    if multiple is None:
        counts, star, total = _column_counts(sys, t, method)
    else:
        counts, star, total = column_distribution(sys, t, multiple)
    hist: Counter = Counter()
    for v, c in counts.items():
        if c:
            hist[V.pairing_phase(v, j)] += c
    value = _histogram_mean(hist, V.exponent, total)
    return CharacterSumResult(value, star / total, Method.EXACT, t, m)


def _sample_levels(seed: int, start: int, stop: int, span: int) -> list[int]:
    """Levels of samples ``start..stop-1``, each uniform on ``[0, span)`` up to ``2^-64`` bias.

    Sample ``s`` reads its bytes from the SHAKE-256 stream of ``"seed:b"``
    with ``b = s // SAMPLE_BLOCK``, so it depends on ``(seed, s)`` alone.
    """
    nbytes = (span.bit_length() + 64 + 7) // 8
    out = []
    s = start
    while s < stop:
        b, off = divmod(s, SAMPLE_BLOCK)
        count = min(SAMPLE_BLOCK - off, stop - s)
        raw = hashlib.shake_256(f"{seed}:{b}".encode()).digest((off + count) * nbytes)
        out.extend(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "big") % span
                   for i in range(off, off + count))
        s += count
    return out


def _phase_histogram(sys: CocycleSystem, levels: list[int], m: int, j: Element, T: int) -> Counter:
    V = sys.K.parent
    L = V.exponent
    phases = [0] * len(levels)
    for l, (jl, k) in enumerate(zip(j, V.moduli), start=1):
        if jl == 0:
            continue
        scale = L // k
        sums = birkhoff_levels(sys, T, levels, m, l)
        phases = [(p + (jl * v % k) * scale) % L for p, v in zip(phases, sums)]
    return Counter(phases)


def _mc_chunk(sys: CocycleSystem, m: int, j: Element, seed: int, T: int,
              start: int, stop: int) -> Counter:
    span = sys.spec.n(T) - m
    levels = _sample_levels(seed, start, stop, span)
    return _phase_histogram(sys, levels, m, j, T)


def _partition(samples: int, workers: int) -> list[tuple[int, int]]:
    step = -(-samples // workers)
    step = -(-step // SAMPLE_BLOCK) * SAMPLE_BLOCK
    return [(a, min(a + step, samples)) for a in range(0, samples, step)]


def character_sum_mc(sys: CocycleSystem, m: int, j: Sequence[int], samples: int, seed: int,
                     T: int | None = None, workers: int = 1) -> CharacterSumResult:
    """Monte Carlo estimate of ``integral of Theta(j . Phi^{(m)}) dmu``.

    Sample ``s`` is a level drawn from ``[0, n_T - m)`` by hashing
    ``(seed, s)``, so the phase histogram, and hence the result, does not
    depend on ``workers``.  ``error_bound = 3 sd / sqrt(samples) + m / n_T``.
    """
    j = _check_j(sys, j)
    T = sys.spec.T if T is None else T
    if not 1 <= T <= sys.spec.T:
        raise InputError(f"stage {T} outside 1..{sys.spec.T}")
    if m < 0:
        raise InputError(f"m must be non-negative, got {m}")
    if samples < 1:
        raise InputError("at least one sample is required")
    if seed < 0:
        raise InputError("seed must be non-negative")
    nT = sys.spec.n(T)
    if m >= nT:
        raise CapacityError(f"m = {m} is not below n_{T} = {nT}")
    if workers < 1:
        raise InputError("workers must be positive")
    chunks = _partition(samples, workers)
    hist: Counter = Counter()
    if workers == 1 or len(chunks) == 1:
        for a, b in chunks:
            hist.update(_mc_chunk(sys, m, j, seed, T, a, b))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_mc_chunk, sys, m, j, seed, T, a, b) for a, b in chunks]
            for f in futures:
                hist.update(f.result())
    mean = _histogram_mean(hist, sys.K.parent.exponent, samples)
    if samples > 1:
        var = samples / (samples - 1) * max(0.0, 1.0 - abs(mean) ** 2)
    else:
        var = 0.0
    sd = math.sqrt(var)
    eb = 3 * sd / math.sqrt(samples) + m / nT
    return CharacterSumResult(mean, eb, Method.MONTE_CARLO, T, m, samples, seed, sd)


def character_sum_levels(sys: CocycleSystem, m: int, j: Sequence[int],
                         T: int | None = None, bound: int = LEVEL_BOUND) -> CharacterSumResult:
    """Exact mean of ``Theta(j . Phi^{(m)})`` over every level in ``[0, n_T - m)``.

    This is the quantity :func:`character_sum_mc` estimates; ``error_bound``
    is the same boundary term ``m / n_T``.
    """
    j = _check_j(sys, j)
    T = sys.spec.T if T is None else T
    nT = sys.spec.n(T)
    if nT > bound:
        raise CapacityError(f"n_{T} = {nT} levels exceed the bound {bound}")
    if not 0 <= m < nT:
        raise CapacityError(f"m = {m} is not below n_{T} = {nT}")
    hist = _phase_histogram(sys, list(range(nT - m)), m, j, T)
    value = _histogram_mean(hist, sys.K.parent.exponent, nT - m)
    return CharacterSumResult(value, m / nT, Method.EXACT, T, m)


def fourier_coefficient(sys: CocycleSystem, m: int, samples: int, seed: int,
                        T: int | None = None, workers: int = 1) -> CharacterSumResult:
    """``<U^m 1, 1>`` for ``U`` weighted by ``Theta = chi_1 x ... x chi_N``."""
    return character_sum_mc(sys, m, (1,) * sys.N, samples, seed, T, workers)


def classify_limit(G_tilde: ProductSubgroup, period: Sequence[int] | None,
                   P: IntPolynomial) -> LimitVerdict:
    """Identity iff the coefficients of ``P`` reduce into ``G_tilde``."""
    V = G_tilde.parent
    if period is not None and tuple(period) != V.moduli:
        raise InputError(f"period {tuple(period)} does not match {V}")
    v = V.reduce(to_vector(P, V.dimension))
    return LimitVerdict.IDENTITY if v in G_tilde else LimitVerdict.ZERO


@dataclass(frozen=True)
class FSTerm:
    alpha: tuple[int, ...]  # 1-based indices, increasing
    value: int


def fs_set(heights: Sequence[int], index_range: Iterable[int] | None = None,
           bound: int = FS_BOUND) -> list[FSTerm]:
    """All sums ``n_alpha`` over nonempty ``alpha`` in the (1-based) index range."""
    idx = list(range(1, len(heights) + 1)) if index_range is None else list(index_range)
    if not idx:
        raise InputError("index range is empty")
    if any(not 1 <= i <= len(heights) for i in idx) or len(set(idx)) != len(idx):
        raise InputError(f"index range {idx} is not within 1..{len(heights)}")
    if len(idx) > bound:
        raise CapacityError(f"index range of size {len(idx)} exceeds {bound}")
    idx.sort()
    terms = []
    for r in range(1, len(idx) + 1):
        for alpha in itertools.combinations(idx, r):
            terms.append(FSTerm(alpha, sum(heights[i - 1] for i in alpha)))
    terms.sort(key=lambda e: (e.value, e.alpha))
    return terms


def polynomial_of(j: Sequence[int]) -> IntPolynomial:
    """``P_j(x) = j_1 x + ... + j_N x^N``."""
    return IntPolynomial(tuple(j))


@dataclass(frozen=True)
class TraceEntry:
    alpha: tuple[int, ...]
    n_alpha: int
    m: int
    result: CharacterSumResult
    consistent: bool


@dataclass(frozen=True)
class IPTrace:
    j: Element
    verdict: LimitVerdict
    entries: tuple[TraceEntry, ...]
    deviation_by_min_alpha: dict[int, float]

    def as_map(self) -> dict[tuple[int, ...], CharacterSumResult]:
        return {e.alpha: e.result for e in self.entries}


def ip_character_trace(sys: CocycleSystem, j: Sequence[int], index_range: Iterable[int] | None,
                       samples: int, seed: int, workers: int = 1,
                       G_tilde: ProductSubgroup | None = None,
                       slack: float = DEFAULT_SLACK) -> IPTrace:
    """``<U^{P_j(n_alpha)} 1, 1>`` along the finite sums of the tower heights.

    ``P_j(x) = j_1 x + ... + j_N x^N``; along an idempotent ultrafilter the
    limit is ``Id`` when ``j`` lies in ``G_tilde = K^perp`` and ``0``
    otherwise.  Deviations from that target are reported by ``min alpha``.
    """
    j = _check_j(sys, j)
    G = annihilator(sys.K) if G_tilde is None else G_tilde
    P = polynomial_of(j)
    verdict = classify_limit(G, None, P)
    entries = []
    dev: dict[int, float] = {}
    ones = (1,) * sys.N
    for term in fs_set(sys.spec.heights, index_range):
        m = evaluate(P, term.value)
        res = character_sum_mc(sys, m, ones, samples, seed, workers=workers)
        entries.append(TraceEntry(term.alpha, term.value, m, res,
                                  res.consistent_with(verdict.target, slack)))
        key = term.alpha[0]
        dev[key] = max(dev.get(key, 0.0), res.deviation(verdict.target))
    return IPTrace(j, verdict, tuple(entries), dict(sorted(dev.items())))
