from __future__ import annotations

import pytest

from finring.core import AdditiveShape, make_ring, ring_from_products
from finring.errors import NotCubeZero, NotNilpotent
from finring.examples_data import EXAMPLE_RECORDS
from finring.nilpotent import (
    FiltrationProfile,
    filtration_basis,
    filtration_profile,
    fp_subspaces,
    free_cube_zero,
    lower_bound_family,
    mod_p_algebra,
    reconstruct_commutative,
    reconstruct_noncommutative,
    sims_dimension,
    standard_basis,
)
from finring.standard import cyclic_ring, null_ring
from finring.core import parse_ring


def chain_algebra(p: int, length: int):
    """Radical part of F_p[x]/(x^(length+1)): basis x, x^2, ..., x^length."""
    shape = AdditiveShape(p, (1,) * length)
    products = {}
    for i in range(length):
        for j in range(length):
            vec = [0] * length
            if i + j + 1 < length:
                vec[i + j + 1] = 1
            products[(i, j)] = tuple(vec)
    return ring_from_products(shape, products)


def test_mod_p_z8(z8):
    A = mod_p_algebra(z8)
    assert A.shape.exponents == (1,)
    assert A.c == ((((1,),),))


def test_mod_p_mixed9(mixed9):
    A = mod_p_algebra(mixed9)
    assert A.shape.exponents == (1, 1)
    assert A.c[0][0] == (0, 2)
    assert A.c[1][1] == (2, 0)
    assert A.c[0][1] == (1, 1)


def test_mod_p_null():
    A = mod_p_algebra(null_ring(3, (1, 1)))
    assert all(v == 0 for row in A.c for vec in row for v in vec)
    assert A.m == 2


def test_profile_null():
    A = null_ring(2, (1, 1, 1))
    prof = filtration_profile(A)
    assert (prof.w, prof.r, prof.s, prof.t, prof.u, prof.m) == (3, 3, 0, 0, 0, 2)


def test_profile_free_commutative_rank2():
    F = free_cube_zero(2, 2, commutative=True)
    prof = filtration_profile(F)
    assert (prof.w, prof.r, prof.s, prof.t, prof.u, prof.m) == (5, 2, 2, 3, 0, 3)


def test_profile_chain():
    A = chain_algebra(2, 3)
    prof = filtration_profile(A)
    assert (prof.w, prof.r, prof.s, prof.t, prof.u, prof.m) == (3, 1, 1, 1, 1, 4)
    assert prof.u_h == (1, 1)
    assert prof.d == (3, 2, 1, 0)


def test_profile_rejects_non_nilpotent(z8):
    with pytest.raises(NotNilpotent):
        filtration_profile(mod_p_algebra(z8))


def test_sims_dimension_cases():
    assert sims_dimension(null_ring(2, (1, 1))) == 0
    # x^2 = y, everything else zero
    shape = AdditiveShape(2, (1, 1))
    A = ring_from_products(shape, {(0, 0): (0, 1)})
    assert sims_dimension(A) == 1
    assert sims_dimension(free_cube_zero(2, 2, commutative=True)) == 2
    assert sims_dimension(free_cube_zero(3, 2, commutative=False)) == 2


def test_standard_basis_free_commutative():
    F = free_cube_zero(2, 2, commutative=True)
    data = standard_basis(F, commutative=True)
    assert data.s == 2
    assert data.q == (1, 3)
    t = len(data.ys)
    assert t == 3
    for i, qi in enumerate(data.q, start=1):
        assert qi <= t - data.s + i
    # monomial representations multiply out (asserted internally too)
    for y, (k, l) in zip(data.ys, data.reps):
        assert F.mul(data.xs[k], data.xs[l]) == y


def test_standard_basis_null():
    A = null_ring(3, (1, 1))
    data = standard_basis(A, commutative=True)
    assert data.s == 0
    assert data.ys == ()
    assert len(data.xs) == 2


def test_standard_basis_rejects(mixed9):
    with pytest.raises(NotNilpotent):
        standard_basis(mod_p_algebra(mixed9))
    with pytest.raises(NotCubeZero):
        standard_basis(chain_algebra(2, 3))


def test_free_cube_zero_dimensions():
    assert free_cube_zero(2, 1, commutative=True).m == 2
    assert free_cube_zero(2, 2, commutative=False).m == 6
    assert free_cube_zero(2, 2, commutative=True).m == 5
    F = free_cube_zero(3, 2, commutative=True)
    from finring.core import power_ideal

    assert power_ideal(F, 3).order == 1
    assert power_ideal(F, 2).order == 3**3


def test_fp_subspaces_counts():
    assert sum(1 for _ in fp_subspaces(3, 1, 2)) == 7
    assert sum(1 for _ in fp_subspaces(4, 2, 2)) == 35
    assert sum(1 for _ in fp_subspaces(3, 1, 3)) == 13


def test_lower_bound_family_counts():
    fam = lower_bound_family(2, 2, 4, commutative=True)
    assert sum(size for _, size in fam) == 7  # [3 choose 1]_2 subspaces
    for A, _ in fam:
        assert A.order == 16
        prof = filtration_profile(A)
        assert prof.r == 2
    # n = dim F: the free algebra itself
    fam_full = lower_bound_family(2, 2, 5, commutative=True)
    assert len(fam_full) == 1 and fam_full[0][1] == 1
    # infeasible dimension: f(n, r) = 0
    assert lower_bound_family(2, 2, 6, commutative=True) == []
    assert lower_bound_family(2, 1, 5, commutative=True) == []


def test_lower_bound_family_classes_match_census():
    """Family representatives are pairwise non-isomorphic quotients."""
    from finring.census import is_isomorphic

    fam = lower_bound_family(2, 2, 4, commutative=True)
    reps = [A for A, _ in fam]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            flag, _ = is_isomorphic(reps[i], reps[j])
            assert not flag


def test_filtration_basis_chain():
    A = chain_algebra(2, 3)
    data = filtration_basis(A)
    prof = data.profile
    assert prof.m == 4 and prof.u == 1
    assert len(data.es) == 2
    # deepest element first: es[0] spans rbar^3
    assert len(data.words[0]) == 3
    assert len(data.words[1]) == 2


def test_reconstruct_noncommutative_examples(z8):
    cases = [
        null_ring(2, (2, 1)),
        chain_algebra(2, 3),
        chain_algebra(3, 3),
        free_cube_zero(2, 2, commutative=False),
        _z4_x2_2x(),
    ]
    for R in cases:
        data = filtration_basis(R)
        rebuilt = reconstruct_noncommutative(R, data)
        assert rebuilt.c == R.c


def test_reconstruct_commutative_examples():
    cases = [
        null_ring(2, (2, 1)),
        chain_algebra(2, 3),
        chain_algebra(5, 2),
        free_cube_zero(2, 2, commutative=True),
        free_cube_zero(3, 2, commutative=True),
        _z4_x2_2x(),
        _mixed_char_nilpotent(),
    ]
    for R in cases:
        assert R.is_commutative()
        data = filtration_basis(R, commutative=True)
        rebuilt = reconstruct_commutative(R, data)
        assert rebuilt.c == R.c


def _z4_x2_2x():
    shape = AdditiveShape(2, (2,))
    return make_ring(shape, [[[2]]])


def _mixed_char_nilpotent():
    # C(4) + C(2) with x1^2 = 2x1, x1x2 = x2x1 = 2x1, x2^2 = 2x1
    shape = AdditiveShape(2, (2, 1))
    prods = {
        (0, 0): (2, 0),
        (0, 1): (2, 0),
        (1, 0): (2, 0),
        (1, 1): (2, 0),
    }
    return ring_from_products(shape, prods)


def test_reconstruction_on_census_nilpotents():
    from finring.census import enumerate_rings

    recs = enumerate_rings(2, 3, filters={"nilpotent": True})
    assert len(recs) == 22
    for rec in recs:
        R = rec.ring
        data = filtration_basis(R)
        assert reconstruct_noncommutative(R, data).c == R.c
        if R.is_commutative():
            data_c = filtration_basis(R, commutative=True)
            assert reconstruct_commutative(R, data_c).c == R.c
