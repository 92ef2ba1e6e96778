"""The Kruse-Price flattening of a p^n ring to a based F_p product table.

The construction sends a ring on basis x_1..x_m (char x_i = p^k_i) to the
n-dimensional table on z-basis y_ij = p^j x_i; coordinates of an element are
the base-p digits of its x-coordinates.  The resulting bilinear table need
not be associative, and which table you get depends on the chosen basis;
both failure modes are exercised by the regression suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AdditiveShape, Element, FiniteRing, SubgroupBasis, make_ring
from .errors import InvalidBasisChange, ShapeMismatch
from .linalg import solve_left


@dataclass(frozen=True)
class FlattenBasisMap:
    """Fixed ordering of the y_ij = p^j x_i as z_1, ..., z_n.

    Ordering is j ascending then i ascending, a pure function of the shape;
    `ordering[t] = (i, j)` (0-based) gives the source of z_{t+1}.
    """

    shape: AdditiveShape
    ordering: tuple[tuple[int, int], ...]

    def position(self, i: int, j: int) -> int:
        return self.ordering.index((i, j))

    def digits(self, x: Element) -> tuple[int, ...]:
        p = self.shape.p
        return tuple((x[i] // p**j) % p for (i, j) in self.ordering)

    def undigits(self, z: tuple[int, ...]) -> Element:
        p = self.shape.p
        coords = [0] * self.shape.m
        for d, (i, j) in zip(z, self.ordering):
            coords[i] += d * p**j
        return self.shape.reduce(coords)


class FpTable:
    """Based bilinear product on F_p^dim; associativity is NOT assumed.

    `associative` is tri-state: None (unknown), True, or False with
    `witness = ((i, j, k), lhs, rhs)` (1-based indices, both expansions).
    """

    __slots__ = ("p", "dim", "phi", "associative", "witness")

    def __init__(self, p: int, dim: int, phi, associative=None, witness=None):
        self.p = p
        self.dim = dim
        self.phi = phi
        self.associative = associative
        self.witness = witness

    def basis(self, i: int) -> tuple[int, ...]:
        return tuple(1 if t == i else 0 for t in range(self.dim))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        p, n = self.p, self.dim
        out = [0] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                f = a[i] * b[j]
                if not f:
                    continue
                row = self.phi[i][j]
                for l in range(n):
                    out[l] += f * row[l]
        return tuple(x % p for x in out)

    def __eq__(self, other):
        return (
            isinstance(other, FpTable)
            and self.p == other.p
            and self.phi == other.phi
        )

    def __hash__(self):
        return hash((self.p, self.phi))

    def __repr__(self):
        return f"FpTable(p={self.p}, dim={self.dim}, associative={self.associative})"


def flatten(R: FiniteRing) -> tuple[FpTable, FlattenBasisMap]:
    """Flatten a validated ring; the result's associativity is left unknown."""
    shape = R.shape
    p = shape.p
    ordering = []
    for j in range(max(shape.exponents)):
        for i in range(shape.m):
            if j < shape.exponents[i]:
                ordering.append((i, j))
    bmap = FlattenBasisMap(shape, tuple(ordering))
    n = shape.n
    phi = []
    for (i1, j1) in ordering:
        row = []
        for (i2, j2) in ordering:
            prod = shape.smul(p ** (j1 + j2), R.c[i1][i2])
            row.append(bmap.digits(prod))
        phi.append(tuple(row))
    return FpTable(p, n, tuple(phi), associative=None), bmap


def check_associativity(A: FpTable):
    """Exhaustive basis-triple check.

    Returns None when associative (and marks the table), else the witness
    ((i, j, k), lhs, rhs) with 1-based indices and both expansions.
    """
    n = A.dim
    for i in range(n):
        for j in range(n):
            vij = A.phi[i][j]
            for k in range(n):
                lhs = A.mul(vij, A.basis(k))
                rhs = A.mul(A.basis(i), A.phi[j][k])
                if lhs != rhs:
                    witness = ((i + 1, j + 1, k + 1), lhs, rhs)
                    A.associative = False
                    A.witness = witness
                    return witness
    A.associative = True
    A.witness = None
    return None


def table_as_ring(A: FpTable) -> FiniteRing:
    """View an associative table as a FiniteRing of shape (1,...,1)."""
    if check_associativity(A) is not None:
        raise ShapeMismatch("table is not associative")
    shape = AdditiveShape(A.p, (1,) * A.dim)
    return make_ring(shape, [[list(v) for v in row] for row in A.phi])


def ring_as_table(R: FiniteRing) -> FpTable:
    """A shape-(1,...,1) ring seen as its own (associative) table."""
    if any(k != 1 for k in R.shape.exponents):
        raise ShapeMismatch("only F_p-shape rings convert directly to tables")
    return FpTable(R.p, R.m, R.c, associative=True)


def rebase_ring(R: FiniteRing, new_basis) -> FiniteRing:
    """The same ring presented on another valid basis of its additive group."""
    shape = R.shape
    m = shape.m
    if len(new_basis) != m:
        raise InvalidBasisChange(f"expected {m} basis elements")
    basis = [shape.reduce(b) for b in new_basis]
    for kexp, b in zip(shape.exponents, basis):
        if shape.element_order(b) > shape.p**kexp:
            raise InvalidBasisChange(
                "substitution image has too large an additive order"
            )
    if SubgroupBasis.from_elements(shape, basis).order != shape.order:
        raise InvalidBasisChange("substitution images fail to generate")
    coords = _coords_in_basis(shape, basis)
    c = [[coords(R.mul(basis[i], basis[j])) for j in range(m)] for i in range(m)]
    return make_ring(shape, c)


def _coords_in_basis(shape: AdditiveShape, basis):
    """Coordinate map onto a new valid basis of the additive group."""
    m = shape.m
    rows = [list(b) for b in basis]
    for idx in range(m):
        rows.append([shape.moduli[idx] if j == idx else 0 for j in range(m)])

    def coords(x: Element) -> Element:
        sol = solve_left(rows, list(x))
        if sol is None:
            raise InvalidBasisChange("element not in the span of the basis")
        return shape.reduce(sol[:m])

    return coords


def flatten_basis_dependence(R: FiniteRing, new_basis) -> tuple[FpTable, FpTable]:
    """Flattenings of the same ring under its own and a substituted basis."""
    other = rebase_ring(R, new_basis)
    table_a, _ = flatten(R)
    table_b, _ = flatten(other)
    return table_a, table_b


def table_to_text(A: FpTable) -> str:
    """Table record: the ring format with shape=1,...,1 plus a trailer line."""
    lines = [f"p={A.p};shape=" + ",".join("1" for _ in range(A.dim))]
    for i in range(A.dim):
        for j in range(A.dim):
            lines.append(
                f"c[{i+1}][{j+1}]=" + ",".join(str(v) for v in A.phi[i][j])
            )
    if A.associative is None:
        check_associativity(A)
    if A.associative:
        lines.append("associative=yes")
    else:
        (i, j, k), _, _ = A.witness
        lines.append(f"associative=no:{i},{j},{k}")
    return "\n".join(lines) + "\n"
