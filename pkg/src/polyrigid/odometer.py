"""The (n_t)-odometer on prod_t Z_{rho_t} and its tower addressing.

Heights satisfy ``n_{t+1} = rho_{t+1} n_t`` with ``rho_{t+1} = n_t^{N+1} rho'_{t+1}``.
Points are truncated to a finite stage ``T``; the level of a point at stage
``t`` is ``x_1 + x_2 n_1 + ... + x_t n_{t-1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CapacityError, InputError, TruncationError

#: Largest tower height whose levels may be enumerated one by one.
LEVEL_BOUND = 1 << 24
#: Refuse to build towers whose top height needs more bits than this.
HEIGHT_BITS_BOUND = 1 << 16


@dataclass(frozen=True)
class OdometerSpec:
    N: int
    period: tuple[int, ...]
    rho: tuple[int, ...]  # rho[t-1] is rho_t
    rho_prime: tuple[int, ...]  # rho_prime[t-1] is rho'_t; rho'_1 is unused and stored as 1
    heights: tuple[int, ...]  # heights[t-1] is n_t

    @property
    def T(self) -> int:
        return len(self.rho)

    def n(self, t: int) -> int:
        """``n_t`` with ``n_0 = 1``."""
        if t == 0:
            return 1
        if not 1 <= t <= self.T:
            raise InputError(f"stage {t} outside 0..{self.T}")
        return self.heights[t - 1]

    def rho_at(self, t: int) -> int:
        if not 1 <= t <= self.T:
            raise InputError(f"stage {t} outside 1..{self.T}")
        return self.rho[t - 1]

    def rho_prime_at(self, t: int) -> int:
        if not 2 <= t <= self.T:
            raise InputError(f"rho' is defined for stages 2..{self.T}, got {t}")
        return self.rho_prime[t - 1]

    @property
    def modulus(self) -> int:
        return math.lcm(*self.period)


def _rho_prime_value(rule, t_plus_1: int) -> int:
    if isinstance(rule, str):
        if rule == "t":
            return t_plus_1 - 1
        raise InputError(f"unknown rho' rule {rule!r}")
    if isinstance(rule, int):
        return rule
    seq = list(rule)
    if len(seq) < t_plus_1 - 1:
        raise InputError(f"rho' list has no entry for stage {t_plus_1}")
    return int(seq[t_plus_1 - 2])


def build_spec(N: int, period: Sequence[int], T: int, rho_prime=1) -> OdometerSpec:
    """Tower data for ``T`` stages.

    ``n_1 = lcm(period)`` (or 2 when that lcm is 1), so ``lcm(period)``
    divides every ``n_t``.  ``rho_prime`` is an int (constant), the string
    ``"t"`` (``rho'_{t+1} = t``) or an explicit list ``[rho'_2, rho'_3, ...]``.
    """
    period = tuple(int(k) for k in period)
    if N < 1 or len(period) != N:
        raise InputError(f"period {period} does not have N = {N} entries")
    if any(k < 1 for k in period):
        raise InputError(f"period entries must be positive: {period}")
    if T < 1:
        raise InputError("at least one stage is required")
    n1 = math.lcm(*period)
    if n1 == 1:
        n1 = 2
    rho = [n1]
    rho_p = [1]
    heights = [n1]
    for t in range(1, T):
        rp = _rho_prime_value(rho_prime, t + 1)
        if rp < 1:
            raise InputError(f"rho'_{t + 1} must be >= 1, got {rp}")
        n_t = heights[-1]
        if (N + 2) * n_t.bit_length() + rp.bit_length() > HEIGHT_BITS_BOUND:
            raise CapacityError(f"n_{t + 1} would exceed {HEIGHT_BITS_BOUND} bits")
        r = n_t ** (N + 1) * rp
        rho.append(r)
        rho_p.append(rp)
        heights.append(n_t * r)
    return OdometerSpec(N, period, tuple(rho), tuple(rho_p), tuple(heights))


def build_shared_spec(N: int, periods: Sequence[Sequence[int]], T: int, rho_prime=1) -> OdometerSpec:
    """One odometer serving several periods: ``n_1`` is the lcm over all of them."""
    if not periods:
        raise InputError("at least one period is required")
    joint = tuple(math.lcm(*(int(p[i]) for p in periods)) for i in range(N))
    return build_spec(N, joint, T, rho_prime)


@dataclass(frozen=True)
class OdometerPoint:
    """Cylinder of all points with the given first ``T`` coordinates."""

    digits: tuple[int, ...]

    @property
    def stage(self) -> int:
        return len(self.digits)


def check_point(x: OdometerPoint, spec: OdometerSpec) -> None:
    if not 1 <= x.stage <= spec.T:
        raise InputError(f"point truncated at stage {x.stage}, spec has {spec.T} stages")
    for t, d in enumerate(x.digits, start=1):
        if not 0 <= d < spec.rho_at(t):
            raise InputError(f"digit x_{t} = {d} outside Z_{spec.rho_at(t)}")


def point_at_level(spec: OdometerSpec, level: int, stage: int | None = None) -> OdometerPoint:
    stage = spec.T if stage is None else stage
    if not 0 <= level < spec.n(stage):
        raise InputError(f"level {level} outside [0, n_{stage})")
    digits = []
    for t in range(1, stage + 1):
        level, d = divmod(level, spec.rho_at(t))
        digits.append(d)
    return OdometerPoint(tuple(digits))


def successor(x: OdometerPoint, spec: OdometerSpec) -> OdometerPoint:
    """``x + (1, 0, 0, ...)`` with the carry moving right."""
    check_point(x, spec)
    digits = list(x.digits)
    for t in range(len(digits)):
        digits[t] += 1
        if digits[t] < spec.rho_at(t + 1):
            return OdometerPoint(tuple(digits))
        digits[t] = 0
    raise TruncationError(f"carry leaves the stage-{x.stage} cylinder")


def level(x: OdometerPoint, spec: OdometerSpec, t: int | None = None) -> int:
    t = x.stage if t is None else t
    if not 0 <= t <= x.stage:
        raise InputError(f"stage {t} exceeds truncation stage {x.stage}")
    out = 0
    for i in range(t, 0, -1):
        out = out * spec.rho_at(i) + x.digits[i - 1]
    return out


def locate(x: OdometerPoint, spec: OdometerSpec, t: int) -> tuple[int, int | None]:
    """``(level at stage t, column index at stage t+1)``.

    The column is ``None`` when the point is truncated before stage ``t+1``.
    """
    check_point(x, spec)
    lv = level(x, spec, t)
    column = x.digits[t] if t + 1 <= x.stage else None
    return lv, column


def enumerable(spec: OdometerSpec, t: int, bound: int = LEVEL_BOUND) -> bool:
    return spec.n(t) <= bound


def require_enumerable(spec: OdometerSpec, t: int, bound: int = LEVEL_BOUND) -> None:
    if spec.n(t) > bound:
        raise CapacityError(f"n_{t} = {spec.n(t)} exceeds the level enumeration bound {bound}")
