"""Finite products of cyclic groups Z_k1 + ... + Z_kN.

Subgroups are kept as explicit, lexicographically sorted element tuples.
All target groups are small, and the duality tests need to iterate over
every element anyway.  The dual group is identified positionally with the
same product, and the pairing between them is evaluated with integer
arithmetic over ``lcm(k_1, ..., k_N)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapacityError, InputError

Element = tuple[int, ...]

#: Default bound on ``order(V)`` for :func:`enumerate_subgroups`.
ENUMERATION_BOUND = 4096
#: Default bound on the number of subgroups :func:`enumerate_subgroups` may produce.
SUBGROUP_COUNT_BOUND = 1 << 16
#: Default bound on the size of any explicitly materialized subgroup.
CLOSURE_BOUND = 1 << 20


@dataclass(frozen=True)
class CyclicProduct:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(k) for k in self.moduli)
        if not moduli:
            raise InputError("a cyclic product needs at least one factor")
        if any(k < 1 for k in moduli):
            raise InputError(f"moduli must be positive, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def dimension(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def exponent(self) -> int:
        """``lcm`` of the moduli; every pairing phase lives in ``Z_exponent``."""
        return math.lcm(*self.moduli)

    @property
    def zero(self) -> Element:
        return (0,) * self.dimension

    def reduce(self, v: Sequence[int]) -> Element:
        if len(v) != self.dimension:
            raise InputError(f"expected {self.dimension} coordinates, got {len(v)}")
        return tuple(int(x) % k for x, k in zip(v, self.moduli))

    def check(self, v: Sequence[int]) -> Element:
        """Return ``v`` as an element, rejecting unreduced residues."""
        if len(v) != self.dimension:
            raise InputError(f"expected {self.dimension} coordinates, got {len(v)}")
        for x, k in zip(v, self.moduli):
            if not 0 <= x < k:
                raise InputError(f"residue {x} out of range for Z_{k} in {tuple(v)}")
        return tuple(int(x) for x in v)

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % k for x, y, k in zip(a, b, self.moduli))

    def scale(self, c: int, a: Element) -> Element:
        return tuple((c * x) % k for x, k in zip(a, self.moduli))

    def elements(self) -> Iterable[Element]:
        return itertools.product(*(range(k) for k in self.moduli))

    def pairing_phase(self, c: Element, d: Element) -> int:
        """Phase ``p`` with ``xi(c, d) = exp(2 pi i p / exponent)``.

        ``xi(c, d) = prod_r chi_r(c_r d_r)`` with ``chi_r(x) = exp(2 pi i x / k_r)``.
        """
        L = self.exponent
        return sum(((x * y) % k) * (L // k) for x, y, k in zip(c, d, self.moduli)) % L

    def __str__(self):
        return " + ".join(f"Z_{k}" for k in self.moduli)


@dataclass(frozen=True, eq=False)
class ProductSubgroup:
    parent: CyclicProduct
    elements: tuple[Element, ...]
    generators: tuple[Element, ...] = field(default=())

    @cached_property
    def _members(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._members

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, ProductSubgroup):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((self.parent, self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def issubset(self, other: ProductSubgroup) -> bool:
        return self.parent == other.parent and self._members <= other._members

    def __repr__(self):
        body = ", ".join(format_element(e) for e in self.elements[:16])
        more = ", ..." if len(self.elements) > 16 else ""
        return f"ProductSubgroup({self.parent}: {{{body}{more}}})"


def format_element(e: Element) -> str:
    return "(" + ",".join(str(x) for x in e) + ")"


def _join_cyclic(V: CyclicProduct, members: set[Element], g: Element, bound: int) -> set[Element]:
    """Return ``S + <g>`` for a subgroup ``S`` given by its member set."""
    if g in members:
        return members
    cosets = [members]
    step = g
    while step not in members:
        cosets.append({V.add(s, step) for s in members})
        if len(cosets) * len(members) > bound:
            raise CapacityError(f"subgroup closure exceeds {bound} elements")
        step = V.add(step, g)
    out = set()
    for c in cosets:
        out |= c
    return out


def subgroup_closure(V: CyclicProduct, gens: Iterable[Sequence[int]],
                     bound: int = CLOSURE_BOUND) -> ProductSubgroup:
    """Smallest subgroup of ``V`` containing ``gens``."""
    checked = tuple(V.check(g) for g in gens)
    members = {V.zero}
    for g in checked:
        members = _join_cyclic(V, members, g, bound)
    return ProductSubgroup(V, tuple(sorted(members)), checked)


def _from_members(V: CyclicProduct, members: Iterable[Element]) -> ProductSubgroup:
    """Wrap a member set known to be a subgroup, choosing greedy generators."""
    elements = tuple(sorted(members))
    gens = []
    span = {V.zero}
    for e in elements:
        if e not in span:
            gens.append(e)
            span = _join_cyclic(V, span, e, CLOSURE_BOUND)
            if len(span) == len(elements):
                break
    return ProductSubgroup(V, elements, tuple(gens))


def trivial_subgroup(V: CyclicProduct) -> ProductSubgroup:
    return ProductSubgroup(V, (V.zero,), ())


def full_group(V: CyclicProduct, bound: int = CLOSURE_BOUND) -> ProductSubgroup:
    if V.order > bound:
        raise CapacityError(f"order {V.order} exceeds {bound}")
    gens = tuple(tuple(int(i == r) % V.moduli[r] for r in range(V.dimension))
                 for i in range(V.dimension))
    return ProductSubgroup(V, tuple(V.elements()), gens)


def is_coupling(K: ProductSubgroup) -> bool:
    """True iff ``K`` projects onto every factor ``Z_{k_j}``."""
    V = K.parent
    for j, k in enumerate(V.moduli):
        # the projection of <gens> onto Z_k is generated by gcd(k, g_j ...)
        if math.gcd(k, *(g[j] for g in K.generators)) != 1:
            return False
    return True


def projection(K: ProductSubgroup, j: int) -> frozenset[int]:
    return frozenset(e[j] for e in K.elements)


def annihilator(S: ProductSubgroup, bound: int = CLOSURE_BOUND) -> ProductSubgroup:
    """All ``c`` in the dual with ``xi(c, s) = 1`` for every ``s`` in ``S``.

    Bilinearity lets us test against the generators of ``S`` only.
    """
    V = S.parent
    if V.order > bound:
        raise CapacityError(f"order {V.order} exceeds {bound}")
    gens = [g for g in S.generators if any(g)]
    members = [c for c in V.elements() if all(V.pairing_phase(c, g) == 0 for g in gens)]
    return _from_members(V, members)


def has_star_property(G: ProductSubgroup) -> bool:
    """True iff no element of ``G`` is supported on exactly one coordinate."""
    return not any(sum(1 for x in e if x) == 1 for e in G.elements)


def enumerate_subgroups(V: CyclicProduct, bound: int = ENUMERATION_BOUND,
                        count_bound: int = SUBGROUP_COUNT_BOUND) -> list[ProductSubgroup]:
    """Every subgroup of ``V``, sorted by (order, elements)."""
    if V.order > bound:
        raise CapacityError(f"order {V.order} exceeds enumeration bound {bound}")
    # every subgroup is a join of cyclic subgroups
    cyclic: dict[frozenset, Element] = {}
    for g in V.elements():
        members = frozenset(_join_cyclic(V, {V.zero}, g, bound))
        cyclic.setdefault(members, g)
    seen = {frozenset({V.zero})}
    frontier = [frozenset({V.zero})]
    while frontier:
        nxt = []
        for S in frontier:
            for C, g in cyclic.items():
                if C <= S:
                    continue
                T = frozenset(_join_cyclic(V, set(S), g, bound))
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
                    if len(seen) > count_bound:
                        raise CapacityError(f"{V} has more than {count_bound} subgroups")
        frontier = nxt
    groups = [_from_members(V, S) for S in seen]
    groups.sort(key=lambda G: (G.order, G.elements))
    return groups
