"""Integer polynomials vanishing at zero, and their two-variable differences."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError


@dataclass(frozen=True)
class IntPolynomial:
    """``a_1 x + a_2 x^2 + ... + a_d x^d``; ``coeffs[0]`` is ``a_1``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n: int) -> int:
        return evaluate(self, n)

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        d = max(self.degree, other.degree)
        a = self.coeffs + (0,) * (d - self.degree)
        b = other.coeffs + (0,) * (d - other.degree)
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for r, a in enumerate(self.coeffs, start=1):
            if a:
                mono = "x" if r == 1 else f"x^{r}"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"a1,a2,...,aN"`` (lowest degree first)."""
    text = text.strip()
    if not text:
        return IntPolynomial()
    try:
        return IntPolynomial(tuple(int(a) for a in text.split(",")))
    except ValueError:
        raise InputError(f"malformed coefficient list {text!r}") from None


def to_vector(P: IntPolynomial, N: int) -> tuple[int, ...]:
    if P.degree > N:
        raise InputError(f"degree {P.degree} exceeds {N}")
    return P.coeffs + (0,) * (N - P.degree)


def from_vector(v: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(tuple(v))


def evaluate(P: IntPolynomial, n: int) -> int:
    acc = 0
    for a in reversed(P.coeffs):
        acc = (acc + a) * n
    return acc


@dataclass(frozen=True)
class BivariatePolynomial:
    """Sparse ``sum c_uv x^u y^v``; zero coefficients are never stored."""

    terms: Mapping[tuple[int, int], int]

    def __post_init__(self):
        clean = {k: int(c) for k, c in sorted(self.terms.items()) if c}
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def x_degree(self) -> int:
        return max((u for u, _ in self.terms), default=0)

    @property
    def y_degree(self) -> int:
        return max((v for _, v in self.terms), default=0)

    def divisible_by_xy(self) -> bool:
        return all(u >= 1 and v >= 1 for u, v in self.terms)

    def __call__(self, x: int, y: int) -> int:
        return sum(c * x**u * y**v for (u, v), c in self.terms.items())


def difference_decomposition(P: IntPolynomial) -> BivariatePolynomial:
    """``Q(x, y) = P(x + y) - P(x) - P(y)``, expanded binomially."""
    terms: dict[tuple[int, int], int] = {}
    for r, a in enumerate(P.coeffs, start=1):
        for i in range(1, r):
            key = (i, r - i)
            terms[key] = terms.get(key, 0) + a * math.comb(r, i)
    return BivariatePolynomial(terms)
