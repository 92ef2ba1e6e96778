from __future__ import annotations

import pytest

from finring.census import is_isomorphic
from finring.core import (
    SubgroupBasis,
    direct_sum,
    find_identity,
    ideal_generated,
    is_nilpotent,
    parse_ring,
    span,
    subgroup_as_ring,
    unit_group,
)
from finring.errors import (
    GenerationFailed,
    NilpotentInput,
    NoIdentity,
    NotIdempotentModJ,
    ParameterOutOfRange,
)
from finring.examples_data import EXAMPLE_RECORDS
from finring.standard import cyclic_ring, fp_field, null_ring, truncated_polynomial_ring
from finring.structure import (
    CoefficientRingDescriptor,
    Sextuple,
    build_coefficient_ring,
    build_from_sextuple,
    coefficient_subring,
    descriptors_with_exponent,
    extract_sextuple,
    galois_ring,
    jacobson_radical,
    lift_idempotent,
    matrix_ring,
    validate_sextuple,
    verify_two_generated,
)


def test_radical_z8(z8):
    J = jacobson_radical(z8)
    assert J.order == 4
    assert sorted(J.elements()) == [(0,), (2,), (4,), (6,)]


def test_radical_null_ring():
    R = null_ring(2, (2, 1))
    assert jacobson_radical(R).order == R.order


def test_radical_galois_ring():
    R = galois_ring(3, 2, 2)
    J = jacobson_radical(R)
    assert J.order == 9
    # J = 3R
    assert J == SubgroupBasis.from_elements(
        R.shape, [R.smul(3, R.basis(i)) for i in range(R.m)]
    )


def test_galois_ring_small_cases(z8):
    assert galois_ring(2, 1, 1).c == fp_field(2).c
    assert galois_ring(2, 3, 1).c == z8.c
    f4 = galois_ring(2, 1, 2)
    # f = X^2 + X + 1, so x*x = x + 1
    assert f4.c[1][1] == (1, 1)
    with pytest.raises(ParameterOutOfRange):
        galois_ring(2, 0, 1)


def test_galois_ring_unit_group_order():
    for (p, k, r) in [(2, 1, 1), (2, 2, 1), (2, 1, 2), (2, 2, 2), (3, 1, 2), (3, 2, 1)]:
        R = galois_ring(p, k, r)
        rep = unit_group(R)
        assert rep.order == p ** ((k - 1) * r) * (p**r - 1)


def test_matrix_ring_m2f2():
    S = matrix_ring(fp_field(2), 2)
    assert S.order == 16
    assert jacobson_radical(S).order == 1
    assert find_identity(S) is not None


def test_matrix_ring_requires_identity():
    with pytest.raises(NoIdentity):
        matrix_ring(null_ring(2, (1,)), 2)


def test_descriptor_builds():
    d = CoefficientRingDescriptor(((1, 1, 1),))
    assert build_coefficient_ring(5, d).c == fp_field(5).c
    d2 = CoefficientRingDescriptor.parse("2,2,1")
    S = build_coefficient_ring(2, d2)  # M_2(GR(4,1)) = M_2(Z/4)
    assert S.order == 256
    J = jacobson_radical(S, verify=False)
    pS = SubgroupBasis.from_elements(S.shape, [S.smul(2, S.basis(i)) for i in range(S.m)])
    assert J == pS
    assert str(d2) == "2,2,1"


def test_descriptor_enumeration():
    # order exponent 1: only F_p
    assert [d.summands for d in descriptors_with_exponent(1)] == [((1, 1, 1),)]
    twos = sorted(str(d) for d in descriptors_with_exponent(2))
    # F_p + F_p, GR(p^2,1), GR(p,2)
    assert twos == ["1,1,1+1,1,1", "1,1,2", "1,2,1"]
    fours = list(descriptors_with_exponent(4))
    assert any(d.summands == ((2, 1, 1),) for d in fours)  # M_2(F_p)
    assert all(d.order_exponent == 4 for d in fours)


def test_two_generated_m2f2():
    S, g1, g2, ok = verify_two_generated(2, 1, 1, 2)
    assert ok
    # g1 = E11, g2 = E12 + E21
    e = find_identity(galois_ring(2, 1, 1))
    assert g1 == (1, 0, 0, 0)
    assert g2 == (0, 1, 1, 0)


def test_two_generated_trivial_and_f4():
    S, g1, g2, ok = verify_two_generated(2, 1, 1, 1)
    assert ok and g1 == (1,)
    S, g1, g2, ok = verify_two_generated(2, 1, 2, 2)  # M_2(F_4), order 256
    assert ok


def test_lift_idempotent_fixed_point(mixed9_unital):
    e = (1, 0)
    assert lift_idempotent(mixed9_unital, e) == e


def test_lift_idempotent_z4():
    z4 = cyclic_ring(2, 2)
    assert lift_idempotent(z4, (3,)) == (1,)


def test_lift_idempotent_rejects():
    f4 = galois_ring(2, 1, 2)  # J = 0, and x^2 = x + 1 != x
    with pytest.raises(NotIdempotentModJ):
        lift_idempotent(f4, (0, 1))


def test_coefficient_subring_z8(z8):
    S, report = jacobson_radical(z8), None
    S, report = coefficient_subring(z8)
    assert S.order == 8  # subring containing 1 is everything
    assert report.all_hold


def test_coefficient_subring_f2_plus_null():
    R = direct_sum(fp_field(2), null_ring(2, (1,)))
    S, report = coefficient_subring(R)
    assert S.order == 2
    assert report.all_hold
    # S is spanned by the lifted idempotent e
    gens = S.generators
    assert len(gens) == 1 and R.mul(gens[0], gens[0]) == gens[0]


def test_coefficient_subring_mixed9(mixed9_unital):
    S, report = coefficient_subring(mixed9_unital)
    assert S.order == 9
    assert report.all_hold
    J = jacobson_radical(mixed9_unital)
    assert J.order == 27
    assert J == ideal_generated(mixed9_unital, [(0, 1)])
    # S meet J = 3S
    assert S.intersect(J) == S.scaled(3)


def test_coefficient_subring_rejects_nilpotent():
    with pytest.raises(NilpotentInput):
        coefficient_subring(null_ring(2, (1, 1)))


def test_sextuple_roundtrip_f2():
    R = fp_field(2)
    t = extract_sextuple(R)
    assert t.J is None
    T = build_from_sextuple(t)
    assert T.c == R.c


def test_sextuple_roundtrip_mixed9(mixed9_unital):
    t = extract_sextuple(mixed9_unital)
    validate_sextuple(t)
    T = build_from_sextuple(t)
    flag, _ = is_isomorphic(T, mixed9_unital)
    assert flag


def test_sextuple_roundtrip_order4_family():
    names = [
        "order4_two_sided",
        "order4_annihilating",
        "order4_left_only",
        "order4_right_only",
    ]
    rebuilt = []
    for name in names:
        R = parse_ring(EXAMPLE_RECORDS[name])
        T = build_from_sextuple(extract_sextuple(R))
        flag, _ = is_isomorphic(T, R)
        assert flag
        rebuilt.append(T)
    # the four rebuilds stay pairwise non-isomorphic (6 checks)
    for i in range(4):
        for j in range(i + 1, 4):
            flag, _ = is_isomorphic(rebuilt[i], rebuilt[j])
            assert not flag


def test_sextuple_rejects_nilpotent():
    with pytest.raises(NilpotentInput):
        extract_sextuple(null_ring(3, (1,)))


def test_sextuple_roundtrip_zoo(small_zoo):
    for R in small_zoo:
        if R.order > 32:
            continue
        if is_nilpotent(R)[0]:
            continue
        T = build_from_sextuple(extract_sextuple(R))
        flag, _ = is_isomorphic(T, R)
        assert flag
