"""Stock rings used throughout tests, the CLI and the census cross-checks."""

from __future__ import annotations

from .core import AdditiveShape, FiniteRing, make_ring, ring_from_products


def cyclic_ring(p: int, k: int) -> FiniteRing:
    """Z/p^k with basis x = 1, so x*x = x."""
    shape = AdditiveShape(p, (k,))
    return make_ring(shape, [[[1]]])


def null_ring(p: int, exponents: tuple[int, ...]) -> FiniteRing:
    """All products zero on the given additive group."""
    shape = AdditiveShape(p, tuple(exponents))
    m = shape.m
    zero = [[([0] * m) for _ in range(m)] for _ in range(m)]
    return make_ring(shape, zero)


def fp_field(p: int) -> FiniteRing:
    return cyclic_ring(p, 1)


def truncated_polynomial_ring(p: int, degree: int) -> FiniteRing:
    """F_p[X]/(X^degree) on the basis 1, X, ..., X^(degree-1)."""
    shape = AdditiveShape(p, (1,) * degree)
    products = {}
    for i in range(degree):
        for j in range(degree):
            vec = [0] * degree
            if i + j < degree:
                vec[i + j] = 1
            products[(i, j)] = tuple(vec)
    return ring_from_products(shape, products)
