from __future__ import annotations

import itertools
import random

from finring.linalg import (
    fp_in_span,
    fp_rref,
    hnf,
    hnf_with_transform,
    snf_with_transforms,
    solve_left,
    staircase_solve,
)


def mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def test_hnf_known_lattice():
    rows = [[2, 1], [0, 2], [4, 0], [0, 4]]
    h = hnf(rows, 2)
    assert h == [[2, 1], [0, 2]]


def test_hnf_idempotent_and_canonical():
    rng = random.Random(7)
    for _ in range(50):
        m = rng.randint(1, 4)
        rows = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(rng.randint(1, 5))]
        rows += [[8 if i == j else 0 for j in range(m)] for i in range(m)]
        h = hnf(rows, m)
        assert hnf(h, m) == h
        # every original row solvable against the basis
        for r in rows:
            assert staircase_solve(h, r) is not None


def test_hnf_transform_consistency():
    rows = [[3, 1, 0], [0, 2, 2], [6, 0, 0], [0, 6, 0], [0, 0, 6]]
    h, u = hnf_with_transform(rows, 3)
    prod = mat_mul(u, rows)
    for i, hr in enumerate(h):
        assert prod[i] == hr


def test_solve_left():
    rows = [[2, 0, 0], [1, 1, 0], [0, 0, 3]]
    x = solve_left(rows, [3, 1, 3])
    assert x is not None
    got = [sum(x[k] * rows[k][j] for k in range(3)) for j in range(3)]
    assert got == [3, 1, 3]
    assert solve_left(rows, [0, 0, 1]) is None


def test_snf_small_known():
    diag, _, _ = snf_with_transforms([[2, 4], [4, 8]])
    assert diag == [2, 0]
    diag2, _, _ = snf_with_transforms([[2, 0], [0, 3]])
    assert sorted(abs(d) for d in diag2) == [1, 6]


def test_snf_random_properties():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 4)
        mat = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        diag, q, qinv = snf_with_transforms(mat)
        # q * qinv == identity
        prod = mat_mul(q, qinv)
        assert prod == [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        # divisibility chain on nonzero part
        nz = [abs(d) for d in diag if d]
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0
        # P*mat*Q = D with P unimodular, so rowspace(mat*Q) == rowspace(D)
        mq = mat_mul(mat, q)
        t1 = hnf(mq, n)
        t2 = hnf([[diag[i] if j == i else 0 for j in range(n)] for i in range(n)], n)
        assert t1 == t2


def test_fp_rref_and_span():
    basis, pivots = fp_rref([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2)
    assert len(basis) == 2
    assert fp_in_span(basis, pivots, [1, 0, 1], 2)
    assert not fp_in_span(basis, pivots, [1, 0, 0], 2)
    # rank over F_3 differs
    basis3, _ = fp_rref([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 3)
    assert len(basis3) == 3


def test_fp_rref_canonical():
    for rows in itertools.product(itertools.product(range(2), repeat=3), repeat=2):
        b1, p1 = fp_rref([list(rows[0]), list(rows[1])], 2)
        b2, p2 = fp_rref([list(rows[1]), list(rows[0])], 2)
        assert b1 == b2 and p1 == p2
