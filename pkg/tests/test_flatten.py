from __future__ import annotations

import pytest

from finring.core import parse_ring
from finring.errors import InvalidBasisChange
from finring.examples_data import EXAMPLE_RECORDS
from finring.flatten import (
    check_associativity,
    flatten,
    flatten_basis_dependence,
    rebase_ring,
    ring_as_table,
    table_as_ring,
    table_to_text,
)
from finring.standard import cyclic_ring, null_ring, truncated_polynomial_ring


def test_flatten_z8_matches_truncated_poly(z8):
    table, bmap = flatten(z8)
    assert bmap.ordering == ((0, 0), (0, 1), (0, 2))
    expected = ring_as_table(truncated_polynomial_ring(2, 3))
    assert table.phi == expected.phi
    assert check_associativity(table) is None
    assert table.associative is True


def test_flatten_mixed9_quoted_entries(mixed9):
    table, bmap = flatten(mixed9)
    # z-list is (x1, x2, 3x1, 3x2)
    assert bmap.ordering == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert table.phi[0][0] == (0, 2, 0, 1)  # z1^2 = 2z2 + z4
    assert table.phi[0][1] == (1, 1, 0, 0)  # z1z2 = z1 + z2
    assert table.phi[1][0] == (1, 1, 0, 0)
    assert table.phi[1][1] == (2, 0, 0, 1)  # z2^2 = 2z1 + z4
    assert table.phi[1][3] == (0, 0, 2, 0)  # z2z4 = 2z3
    assert table.phi[3][1] == (0, 0, 2, 0)


def test_flatten_mixed9_not_associative(mixed9):
    table, _ = flatten(mixed9)
    witness = check_associativity(table)
    assert witness is not None
    (i, j, k), lhs, rhs = witness
    assert (i, j, k) == (1, 1, 2)
    assert lhs == (1, 0, 2, 2)  # e1^2.e2  = e1 + 2e3 + 2e4
    assert rhs == (1, 0, 0, 1)  # e1(e1e2) = e1 + e4
    assert table.associative is False


def test_zero_table_associative():
    table, _ = flatten(null_ring(2, (2, 1)))
    assert check_associativity(table) is None


def test_digit_bijection(small_zoo):
    for R in small_zoo:
        if R.order > 256:
            continue
        _, bmap = flatten(R)
        for x in R.elements():
            assert bmap.undigits(bmap.digits(x)) == x


def test_flatten_flat_shape_is_own_table():
    R = truncated_polynomial_ring(3, 3)
    table, _ = flatten(R)
    assert table.phi == R.c
    assert check_associativity(table) is None


def test_rebase_mixed9_to_unital_basis(mixed9, mixed9_unital):
    e = (7, 1)
    x = (2, 4)  # 4e + x1
    rebased = rebase_ring(mixed9, [e, x])
    assert rebased.c == mixed9_unital.c


def test_basis_dependence_example(mixed9):
    a, b = flatten_basis_dependence(mixed9, [(7, 1), (2, 4)])
    assert check_associativity(a) is not None
    assert check_associativity(b) is None


def test_basis_dependence_identity_substitution(mixed9):
    a, b = flatten_basis_dependence(mixed9, [(1, 0), (0, 1)])
    assert a.phi == b.phi


def test_basis_dependence_z4():
    z4 = cyclic_ring(2, 2)
    a, b = flatten_basis_dependence(z4, [(3,)])
    assert check_associativity(a) is None
    assert check_associativity(b) is None
    assert a.phi != b.phi  # different based tables for the same ring


def test_invalid_basis_change(mixed9):
    with pytest.raises(InvalidBasisChange):
        rebase_ring(mixed9, [(3, 0), (0, 1)])
    with pytest.raises(InvalidBasisChange):
        rebase_ring(mixed9, [(1, 0), (3, 0)])


def test_table_as_ring_roundtrip():
    R = truncated_polynomial_ring(2, 3)
    table = ring_as_table(R)
    back = table_as_ring(table)
    assert back == R


def test_table_text_trailer(mixed9, z8):
    bad, _ = flatten(mixed9)
    text = table_to_text(bad)
    assert text.strip().endswith("associative=no:1,1,2")
    good, _ = flatten(z8)
    assert table_to_text(good).strip().endswith("associative=yes")
    # the table body parses back as a (possibly non-associative) record shape
    header = text.splitlines()[0]
    assert header == "p=3;shape=1,1,1,1"


def test_flatten_unital_presentation_gives_f3x4(mixed9_unital):
    table, _ = flatten(mixed9_unital)
    assert check_associativity(table) is None
    expected = parse_ring(EXAMPLE_RECORDS["f3_x4"])
    # identity z1, generator z2 with z2^2 = z3, z2 z3 = z4: equals F_3[X]/(X^4)
    got = table_as_ring(table)
    assert got.c == expected.c
