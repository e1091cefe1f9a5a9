"""Reference kernels on Python integers.  No size limits."""
from __future__ import annotations

from .plan import BPlan, LevelPlan


def _csum(s: int, bp: BPlan) -> int:
    """``c_0 + ... + c_{s-1}``."""
    L = len(bp.seq)
    return (s // L) * bp.tot + bp.part[s % L]


def prefix_b(q: int, bp: BPlan) -> int:
    """``b_0 + ... + b_{q-1}`` mod k for ``0 <= q <= rho - 1``."""
    n, P, seq, L = bp.n, bp.P, bp.seq, len(bp.seq)
    if bp.l == 1:
        if q <= bp.rho - 2:
            s0 = q // P
            return ((q - s0 * P) % n) * seq[s0 % L] % bp.k
        return (((P - 2) % n) - (n - 2)) * seq[(n - 1) % L] % bp.k
    s0 = q // P
    rem = q - s0 * P
    total = bp.R * _csum(s0, bp) + min(-(-rem // bp.w), bp.R) * seq[s0 % L]
    smax = min(q // bp.nl, bp.R - 1)
    g, r = divmod(smax, bp.Q)
    total -= n * (bp.Q * _csum(g, bp) + r * seq[g % L])
    if q == bp.rho - 1 and not bp.overlap:
        total -= n * seq[(n - 1) % L]
    return total % bp.k


def boundaries_below(x: int, bp: BPlan) -> int:
    """Number of boundary indices ``j < x``."""
    extra = 1 if bp.rho - 2 < x else 0
    if bp.l == 1:
        return min(x, bp.rho - 1) // bp.n + extra
    if bp.overlap:
        extra = 0
    return min(bp.R - 1, x // bp.nl) + extra


def level_prefix(L: int, lp: LevelPlan) -> int:
    """``S_T(L) = phi(0) + ... + phi(L - 1)`` mod k over the levels of stage T."""
    total = 0
    for idx in range(len(lp.stages) - 1, -1, -1):
        q, L = divmod(L, lp.heights[idx])
        total += q * lp.sigmas[idx] + prefix_b(q, lp.stages[idx])
    return total % lp.k


def prefix_b_many(qs, bp: BPlan) -> list[int]:
    return [prefix_b(int(q), bp) for q in qs]


def window_sums(starts, width: int, bp: BPlan) -> list[int]:
    """``b_u + ... + b_{u+width-1}``, or -1 when the window reaches ``rho - 1``."""
    out = []
    top = bp.rho - 1
    for u in starts:
        u = int(u)
        if u + width > top:
            out.append(-1)
        else:
            out.append((prefix_b(u + width, bp) - prefix_b(u, bp)) % bp.k)
    return out


def boundary_counts(starts, width: int, bp: BPlan) -> list[int]:
    return [boundaries_below(int(u) + width, bp) - boundaries_below(int(u), bp) for u in starts]


def level_prefix_many(levels, lp: LevelPlan) -> list[int]:
    return [level_prefix(int(L), lp) for L in levels]


def birkhoff_many(levels, m: int, lp: LevelPlan) -> list[int]:
    k = lp.k
    return [(level_prefix(int(L) + m, lp) - level_prefix(int(L), lp)) % k for L in levels]
