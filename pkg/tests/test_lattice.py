import itertools
import math
import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from polyrigid import (HypothesisError, InfeasibleError, InputError, LatticeSubgroup,
                       PreconditionError, has_star_property, index, intersect, is_rigidity,
                       member, minimal_period, project_mod, separate)
from polyrigid.lattice import INFINITE, image, smith_diagonal

from instances import random_full_rank, random_generators
from oracles import member_fn, scan_period, sympy_index, sympy_member


def L(*rows, dim=None):
    return LatticeSubgroup.from_generators(rows, dim)


def test_index_examples():
    assert index(L((2, 0), (0, 3))) == 6
    assert index(LatticeSubgroup.full(4)) == 1
    assert index(L((1, 1))) == INFINITE


def test_member_examples():
    G = L((2, 0), (0, 3))
    assert member(G, (4, 3))
    assert not member(G, (1, 0))
    assert member(L((1, 1)), (0, 0))
    with pytest.raises(InputError):
        member(G, (1, 2, 3))


def test_period_examples():
    assert minimal_period(L((2, 0), (0, 3))) == (2, 3)
    assert minimal_period(LatticeSubgroup.full(2)) == (1, 1)
    assert minimal_period(L((2, 1), (0, 2))) == (4, 2)
    with pytest.raises(PreconditionError):
        minimal_period(L((1, 1)))


def test_project_examples():
    assert set(project_mod(L((2, 1), (0, 2)), (4, 2)).elements) == {(0, 0), (2, 1)}
    assert project_mod(L((2, 0), (0, 3)), (2, 3)).elements == ((0, 0),)
    assert project_mod(L((3, 5), (7, 1)), (1, 1)).elements == ((0, 0),)


def test_rigidity_examples():
    assert is_rigidity(L((2, 0), (0, 3)))
    assert not is_rigidity(L((1, 1)))
    with pytest.raises(HypothesisError):
        is_rigidity(L((2, 0)))


def test_separate_examples():
    G = separate(L((1, 1)), [(1, 0)])
    assert index(G) == 2 and member(G, (1, 1)) and not member(G, (1, 0))
    H = L((2, 0), (0, 3))
    assert separate(H, [(1, 1)]) == H
    with pytest.raises(InfeasibleError):
        separate(LatticeSubgroup.full(2), [(1, 0)])


def test_intersect_examples():
    assert intersect(L((2, 0), (0, 1)), L((1, 0), (0, 3))) == L((2, 0), (0, 3))
    G = L((4, 2), (0, 6))
    assert intersect(G, LatticeSubgroup.full(2)) == G
    assert intersect(L((1, 1)), L((1, -1))).basis == ()
    with pytest.raises(InputError):
        intersect(L((1, 0)), L((1, 0, 0)))


def test_canonical_basis():
    rng = random.Random(1)
    for _ in range(100):
        N = rng.randint(1, 4)
        gens = random_generators(rng, N)
        # any unimodular recombination plus redundant sums give the same subgroup
        extra = [tuple(a + b for a, b in zip(gens[0], g)) for g in gens]
        shuffled = gens[::-1] + extra
        assert L(*gens) == L(*shuffled)


def test_hnf_and_snf_against_sympy():
    rng = random.Random(2)
    for _ in range(60):
        N = rng.randint(2, 4)
        gens = random_full_rank(rng, N)
        G = L(*gens)
        assert index(G) == sympy_index(list(G.basis), N)
        snf = smith_normal_form(sympy.Matrix(gens), domain=sympy.ZZ)
        diag = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
        assert sorted(smith_diagonal(gens)) == sorted(diag)
        # the HNF rows span the same lattice as the generators
        for g in gens:
            assert sympy_member(list(G.basis), g)
        for r in G.basis:
            assert sympy_member(list(L(*gens[::-1]).basis), r)


def test_membership_against_rational_solve():
    rng = random.Random(3)
    for _ in range(40):
        N = rng.randint(1, 3)
        G = L(*random_generators(rng, N))
        for _ in range(20):
            v = tuple(rng.randint(-8, 8) for _ in range(N))
            assert member(G, v) == sympy_member(list(G.basis), v)


def test_period_against_membership_scan():
    rng = random.Random(4)
    for _ in range(30):
        N = rng.randint(1, 3)
        G = L(*random_full_rank(rng, N, -3, 3))
        assert minimal_period(G) == scan_period(list(G.basis), N, index(G))


def test_intersect_against_residue_box():
    rng = random.Random(5)
    checked = 0
    while checked < 40:
        N = rng.randint(1, 3)
        G1 = L(*random_full_rank(rng, N, -3, 3))
        G2 = L(*random_full_rank(rng, N, -3, 3))
        M = math.lcm(index(G1), index(G2))
        if index(G1) > 64 or index(G2) > 64 or M**N > 5000:
            continue
        H = intersect(G1, G2)
        in1, in2 = member_fn(list(G1.basis)), member_fn(list(G2.basis))
        # both contain M Z^N, so membership is M-periodic
        for v in itertools.product(range(M), repeat=N):
            assert member(H, v) == (in1(v) and in2(v))
        assert index(H) < INFINITE
        checked += 1


def test_periodic_description():
    rng = random.Random(6)
    for _ in range(60):
        N = rng.randint(2, 4)
        G = L(*random_full_rank(rng, N, -3, 3))
        k = minimal_period(G)
        if math.prod(k) > 1 << 16:
            continue
        pi = project_mod(G, k)
        assert has_star_property(pi)
        assert index(G) * pi.order == math.prod(k)
        for _ in range(1000 if _ < 3 else 50):
            v = tuple(rng.randint(-30, 30) for _ in range(N))
            assert member(G, v) == (pi.parent.reduce(v) in pi)


def test_image_under_injective_matrix_has_finite_index():
    rng = random.Random(7)
    for _ in range(50):
        N = rng.randint(2, 3)
        G = L(*random_full_rank(rng, N))
        while True:
            sigma = [[rng.randint(-3, 3) for _ in range(N)] for _ in range(N)]
            if sympy.Matrix(sigma).det() != 0:
                break
        assert index(image(G, sigma)) < INFINITE


def test_separate_contract():
    rng = random.Random(8)
    done = 0
    while done < 100:
        N = rng.randint(1, 3)
        H = L(*random_generators(rng, N, -3, 3), dim=N)
        targets = [tuple(rng.randint(-5, 5) for _ in range(N)) for _ in range(rng.randint(1, 4))]
        if any(member(H, q) for q in targets):
            with pytest.raises(InfeasibleError):
                separate(H, targets)
            continue
        G = separate(H, targets)
        assert index(G) < INFINITE
        assert all(member(G, h) for h in H.basis)
        assert not any(member(G, q) for q in targets)
        done += 1
