from __future__ import annotations

import pytest

from finring.core import parse_ring
from finring.examples_data import EXAMPLE_RECORDS
from finring.standard import cyclic_ring, fp_field, null_ring, truncated_polynomial_ring


@pytest.fixture(scope="session")
def z8():
    return cyclic_ring(2, 3)


@pytest.fixture(scope="session")
def mixed9():
    return parse_ring(EXAMPLE_RECORDS["mixed9"])


@pytest.fixture(scope="session")
def mixed9_unital():
    return parse_ring(EXAMPLE_RECORDS["mixed9_unital_basis"])


@pytest.fixture(scope="session")
def small_zoo():
    """A deterministic sample of rings of order <= 64 for property sweeps."""
    from finring.structure import galois_ring, matrix_ring
    from finring.core import direct_sum

    zoo = [
        fp_field(2),
        fp_field(3),
        fp_field(5),
        cyclic_ring(2, 3),
        cyclic_ring(2, 6),
        cyclic_ring(3, 2),
        null_ring(2, (2, 1)),
        null_ring(3, (1, 1)),
        truncated_polynomial_ring(2, 3),
        truncated_polynomial_ring(3, 3),
        truncated_polynomial_ring(2, 5),
        parse_ring(EXAMPLE_RECORDS["mixed9"]),
        parse_ring(EXAMPLE_RECORDS["mixed9_unital_basis"]),
        parse_ring(EXAMPLE_RECORDS["mixed9_variant6"]),
        parse_ring(EXAMPLE_RECORDS["order4_left_only"]),
        galois_ring(2, 2, 1),
        galois_ring(2, 1, 2),
        galois_ring(2, 2, 2),
        galois_ring(3, 1, 2),
        matrix_ring(fp_field(2), 2),
        direct_sum(fp_field(2), null_ring(2, (1,))),
        direct_sum(cyclic_ring(2, 2), truncated_polynomial_ring(2, 2)),
    ]
    return zoo
