"""Precomputed parameters handed to the kernels.

A :class:`BPlan` describes one row ``b^{(t+1)}_{., l}`` of input data over a
tower of height ``n = n_t``; a :class:`LevelPlan` chains the rows of one
coordinate for stages ``2..T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class BPlan:
    n: int  # n_t, the height below the row
    rho_prime: int
    N: int
    l: int  # coordinate, 1-based
    k: int  # modulus k_l
    seq: tuple[int, ...]  # c_{l, s} = seq[s % len(seq)]
    P: int = field(init=False)
    rho: int = field(init=False)
    w: int = field(init=False)
    R: int = field(init=False)
    Q: int = field(init=False)
    nl: int = field(init=False)
    overlap: bool = field(init=False)
    part: tuple[int, ...] = field(init=False)
    tot: int = field(init=False)

    def __post_init__(self):
        n, N, l = self.n, self.N, self.l
        P = n**N * self.rho_prime
        set_ = object.__setattr__
        set_(self, "P", P)
        set_(self, "rho", n * P)
        set_(self, "w", n ** (l - 1))
        set_(self, "R", n ** (N + 1 - l) * self.rho_prime)
        set_(self, "Q", n ** (N - l) * self.rho_prime)
        set_(self, "nl", n**l)
        # for n = 2, l = 2 the last index rho - 2 is also a regular position
        set_(self, "overlap", l > 1 and (P - 2) % self.w == 0)
        acc, part = 0, []
        for c in self.seq:
            part.append(acc)
            acc = (acc + c) % self.k
        set_(self, "part", tuple(part))
        set_(self, "tot", acc)

    def fits_int64(self) -> bool:
        return self.rho < INT64_SAFE


@dataclass(frozen=True)
class LevelPlan:
    k: int
    heights: tuple[int, ...]  # n_1, ..., n_T
    stages: tuple[BPlan, ...]  # rows for stages 2..T
    sigmas: tuple[int, ...]  # Sigma_1, ..., Sigma_T mod k

    @property
    def T(self) -> int:
        return len(self.heights)

    def truncated(self, T: int) -> LevelPlan:
        return LevelPlan(self.k, self.heights[:T], self.stages[:T - 1], self.sigmas[:T])

    def fits_int64(self) -> bool:
        return self.heights[-1] < INT64_SAFE and all(b.fits_int64() for b in self.stages)
