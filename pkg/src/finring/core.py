"""Finite rings of order p^n as structure-constant tables.

A ring lives on the additive group C(p^k1) + ... + C(p^km) with k1 >= ... >= km;
elements are coordinate tuples, multiplication is given by a 3-index table
c[i][j][l] meaning x_i * x_j = sum_l c[i][j][l] x_l.  Everything is immutable
after validation and safe to share between tasks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    CharIncompatible,
    FinringError,
    NoIdentity,
    NotAnIdeal,
    NotAssociative,
    ParseError,
    ShapeMismatch,
)
from .linalg import hnf, snf_with_transforms, solve_left, staircase_solve

Element = tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class AdditiveShape:
    """Shape of the additive group: prime p and weakly decreasing exponents."""

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ShapeMismatch(f"p={self.p} is not prime")
        if not self.exponents:
            raise ShapeMismatch("exponents must be nonempty")
        if any(k < 1 for k in self.exponents):
            raise ShapeMismatch("exponents must all be >= 1")
        if any(a < b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ShapeMismatch("exponents must be weakly decreasing")
        object.__setattr__(self, "moduli", tuple(self.p**k for k in self.exponents))

    moduli: tuple[int, ...] = field(init=False, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.exponents)

    @property
    def n(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p**self.n

    def reduce(self, coords) -> Element:
        if len(coords) != self.m:
            raise ShapeMismatch(f"expected {self.m} coordinates, got {len(coords)}")
        return tuple(int(a) % q for a, q in zip(coords, self.moduli))

    def zero(self) -> Element:
        return (0,) * self.m

    def basis(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.m))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % q for x, y, q in zip(a, b, self.moduli))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % q for x, y, q in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % q for x, q in zip(a, self.moduli))

    def smul(self, c: int, a: Element) -> Element:
        return tuple((c * x) % q for x, q in zip(a, self.moduli))

    def element_order(self, a: Element) -> int:
        ord_ = 1
        for x, q in zip(a, self.moduli):
            x %= q
            o = q // math.gcd(x, q)
            ord_ = max(ord_, o)
        return ord_

    def elements(self):
        return (tuple(t) for t in itertools.product(*(range(q) for q in self.moduli)))


class SubgroupBasis:
    """Additive subgroup in canonical staircase form.

    Internally the subgroup is the lattice spanned by `hnf_rows` (which always
    contains the relation lattice diag(p^k)), so equality of subgroups is
    equality of the canonical matrices.  `generators` are the nonzero reduced
    rows; the pivot entry of row i has order p^k_i / hnf_rows[i][i] in its
    cyclic component, and the subgroup order is the product of those.
    """

    __slots__ = ("shape", "hnf_rows", "generators", "order")

    def __init__(self, shape: AdditiveShape, hnf_rows: tuple[tuple[int, ...], ...]):
        self.shape = shape
        self.hnf_rows = hnf_rows
        gens = []
        for row in hnf_rows:
            g = shape.reduce(row)
            if any(g):
                gens.append(g)
        self.generators = tuple(gens)
        det = 1
        for i in range(shape.m):
            det *= hnf_rows[i][i]
        self.order = shape.order // det

    @classmethod
    def from_elements(cls, shape: AdditiveShape, elems) -> "SubgroupBasis":
        rows = [list(e) for e in elems]
        rows += [
            [shape.moduli[i] if j == i else 0 for j in range(shape.m)]
            for i in range(shape.m)
        ]
        h = hnf(rows, shape.m)
        return cls(shape, tuple(tuple(r) for r in h))

    @classmethod
    def trivial(cls, shape: AdditiveShape) -> "SubgroupBasis":
        return cls.from_elements(shape, [])

    @classmethod
    def full(cls, shape: AdditiveShape) -> "SubgroupBasis":
        return cls.from_elements(shape, [shape.basis(i) for i in range(shape.m)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupBasis)
            and self.shape == other.shape
            and self.hnf_rows == other.hnf_rows
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.hnf_rows))

    def __contains__(self, x: Element) -> bool:
        return staircase_solve([list(r) for r in self.hnf_rows], list(x)) is not None

    def __le__(self, other: "SubgroupBasis") -> bool:
        return all(g in other for g in self.generators)

    def elements(self):
        """Iterate all subgroup elements (a bijective coefficient sweep)."""
        shape = self.shape
        ranges = [
            range(shape.moduli[i] // self.hnf_rows[i][i]) for i in range(shape.m)
        ]
        for ts in itertools.product(*ranges):
            acc = [0] * shape.m
            for t, row in zip(ts, self.hnf_rows):
                if t:
                    for j in range(shape.m):
                        acc[j] += t * row[j]
            yield shape.reduce(acc)

    def plus(self, other: "SubgroupBasis") -> "SubgroupBasis":
        return SubgroupBasis.from_elements(
            self.shape, self.generators + other.generators
        )

    def intersect(self, other: "SubgroupBasis") -> "SubgroupBasis":
        small, big = (self, other) if self.order <= other.order else (other, self)
        return SubgroupBasis.from_elements(
            self.shape, [e for e in small.elements() if e in big]
        )

    def scaled(self, c: int) -> "SubgroupBasis":
        return SubgroupBasis.from_elements(
            self.shape, [self.shape.smul(c, g) for g in self.generators]
        )

    def group_decomposition(self):
        """True direct-sum basis of the subgroup.

        Returns (basis_elements, orders) with orders weakly decreasing prime
        powers whose product is the subgroup order.
        """
        shape = self.shape
        m = shape.m
        h = [list(r) for r in self.hnf_rows]
        # kernel lattice of v -> v*H mod relations
        v = []
        for i in range(m):
            target = [shape.moduli[i] if j == i else 0 for j in range(m)]
            sol = staircase_solve(h, target)
            assert sol is not None
            v.append(sol)
        diag, _, qinv = snf_with_transforms(v)
        items = []
        for j in range(m):
            s = abs(diag[j])
            if s > 1:
                elem_row = [
                    sum(qinv[j][k] * h[k][t] for k in range(m)) for t in range(m)
                ]
                items.append((s, shape.reduce(elem_row)))
        items.sort(key=lambda it: (-it[0],))
        return [e for _, e in items], [s for s, _ in items]


class FiniteRing:
    """Validated structure-constant ring.  Construct via make_ring()."""

    __slots__ = ("shape", "c", "validated", "_elements")

    def __init__(self, shape: AdditiveShape, c, validated: bool):
        self.shape = shape
        self.c = c
        self.validated = validated
        self._elements = None

    # -- element arithmetic ------------------------------------------------

    @property
    def p(self) -> int:
        return self.shape.p

    @property
    def m(self) -> int:
        return self.shape.m

    @property
    def order(self) -> int:
        return self.shape.order

    def zero(self) -> Element:
        return self.shape.zero()

    def basis(self, i: int) -> Element:
        return self.shape.basis(i)

    def add(self, a: Element, b: Element) -> Element:
        self._check(a), self._check(b)
        return self.shape.add(a, b)

    def sub(self, a: Element, b: Element) -> Element:
        self._check(a), self._check(b)
        return self.shape.sub(a, b)

    def neg(self, a: Element) -> Element:
        self._check(a)
        return self.shape.neg(a)

    def smul(self, c: int, a: Element) -> Element:
        self._check(a)
        return self.shape.smul(c, a)

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a), self._check(b)
        m, moduli, c = self.m, self.shape.moduli, self.c
        out = [0] * m
        for i in range(m):
            ai = a[i]
            if not ai:
                continue
            for j in range(m):
                f = ai * b[j]
                if not f:
                    continue
                row = c[i][j]
                for l in range(m):
                    out[l] += f * row[l]
        return tuple(x % q for x, q in zip(out, moduli))

    def power(self, a: Element, k: int) -> Element:
        assert k >= 1
        acc = a
        for _ in range(k - 1):
            acc = self.mul(acc, a)
        return acc

    def elements(self) -> list[Element]:
        if self._elements is None:
            self._elements = list(self.shape.elements())
        return self._elements

    def is_commutative(self) -> bool:
        m = self.m
        return all(
            self.c[i][j] == self.c[j][i] for i in range(m) for j in range(i + 1, m)
        )

    def _check(self, a) -> None:
        if len(a) != self.m:
            raise ShapeMismatch(f"element has {len(a)} coordinates, ring has {self.m}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteRing)
            and self.shape == other.shape
            and self.c == other.c
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.c))

    def __repr__(self) -> str:
        ks = ",".join(str(k) for k in self.shape.exponents)
        return f"FiniteRing(p={self.p}, shape=({ks}))"


def make_ring(shape: AdditiveShape, c) -> FiniteRing:
    """Validate a raw structure-constant table and wrap it as a ring.

    Checks table dimensions, the characteristic-compatibility congruence
    c[i][j][l] = 0 mod p^max(0, k_l - min(k_i,k_j)), and associativity on all
    basis triples.  Witnesses in errors are 1-based.
    """
    m = shape.m
    if len(c) != m or any(len(ci) != m for ci in c) or any(
        len(cij) != m for ci in c for cij in ci
    ):
        raise ShapeMismatch(f"table must be {m}x{m}x{m}")
    moduli = shape.moduli
    ks = shape.exponents
    p = shape.p
    reduced = []
    for i in range(m):
        rowi = []
        for j in range(m):
            vec = []
            for l in range(m):
                a = int(c[i][j][l])
                if a < 0:
                    raise ShapeMismatch(f"negative entry c[{i+1}][{j+1}][{l+1}]")
                vec.append(a % moduli[l])
            rowi.append(tuple(vec))
        reduced.append(tuple(rowi))
    table = tuple(reduced)
    for i in range(m):
        for j in range(m):
            kij = min(ks[i], ks[j])
            for l in range(m):
                need = max(0, ks[l] - kij)
                if need and table[i][j][l] % (p**need) != 0:
                    raise CharIncompatible(i + 1, j + 1, l + 1)
    ring = FiniteRing(shape, table, validated=False)
    witness = associativity_violation(ring)
    if witness is not None:
        raise NotAssociative(*[w + 1 for w in witness])
    ring.validated = True
    return ring


def associativity_violation(ring: FiniteRing):
    """First basis triple (0-based) where (x_i x_j) x_k != x_i (x_j x_k)."""
    m = ring.m
    c = ring.c
    shape = ring.shape
    basis = [shape.basis(i) for i in range(m)]
    for i in range(m):
        for j in range(m):
            vij = c[i][j]
            for k in range(m):
                lhs = ring.mul(vij, basis[k])
                rhs = ring.mul(basis[i], c[j][k])
                if lhs != rhs:
                    return (i, j, k)
    return None


def ring_from_products(shape: AdditiveShape, products) -> FiniteRing:
    """Build a ring from a dict {(i, j): element} of basis products (0-based)."""
    m = shape.m
    c = [[list(shape.zero()) for _ in range(m)] for _ in range(m)]
    for (i, j), val in products.items():
        c[i][j] = list(shape.reduce(val))
    return make_ring(shape, c)


# -- subobjects ------------------------------------------------------------


def span(R: FiniteRing, elems) -> SubgroupBasis:
    return SubgroupBasis.from_elements(R.shape, elems)


def subring_generated(R: FiniteRing, gens) -> SubgroupBasis:
    """Smallest multiplicatively closed additive subgroup containing gens."""
    current = SubgroupBasis.from_elements(R.shape, gens)
    while True:
        gs = current.generators
        prods = [R.mul(a, b) for a in gs for b in gs]
        nxt = SubgroupBasis.from_elements(R.shape, list(gs) + prods)
        if nxt == current:
            return current
        current = nxt


def ideal_generated(R: FiniteRing, gens) -> SubgroupBasis:
    """Smallest two-sided ideal containing gens."""
    basis = [R.basis(i) for i in range(R.m)]
    current = SubgroupBasis.from_elements(R.shape, gens)
    while True:
        gs = current.generators
        prods = []
        for g in gs:
            for b in basis:
                prods.append(R.mul(g, b))
                prods.append(R.mul(b, g))
        nxt = SubgroupBasis.from_elements(R.shape, list(gs) + prods)
        if nxt == current:
            return current
        current = nxt


def is_ideal(R: FiniteRing, I: SubgroupBasis) -> bool:
    basis = [R.basis(i) for i in range(R.m)]
    for g in I.generators:
        for b in basis:
            if R.mul(g, b) not in I or R.mul(b, g) not in I:
                return False
    return True


def subgroup_product(R: FiniteRing, A: SubgroupBasis, B: SubgroupBasis) -> SubgroupBasis:
    """Additive span of {a*b : a in A, b in B}."""
    prods = [R.mul(a, b) for a in A.generators for b in B.generators]
    return SubgroupBasis.from_elements(R.shape, prods)


def power_ideal(R: FiniteRing, k: int) -> SubgroupBasis:
    """R^k: the additive subgroup generated by all k-fold products."""
    if k < 1:
        raise ShapeMismatch("power k must be >= 1")
    current = SubgroupBasis.full(R.shape)
    full = current
    for _ in range(k - 1):
        nxt = subgroup_product(R, current, full)
        if nxt == current:
            return current
        current = nxt
    return current


def power_chain(R: FiniteRing) -> list[SubgroupBasis]:
    """[R^1, R^2, ...] until the chain stabilizes (last entry repeated once)."""
    chain = [SubgroupBasis.full(R.shape)]
    full = chain[0]
    while True:
        nxt = subgroup_product(R, chain[-1], full)
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)
        if nxt.order == 1:
            return chain


def is_nilpotent(R: FiniteRing) -> tuple[bool, int | None]:
    """(True, least m with R^m = 0) for nilpotent rings, else (False, None)."""
    chain = power_chain(R)
    if chain[-1].order == 1:
        return True, len(chain)
    return False, None


def quotient_ring(R: FiniteRing, I: SubgroupBasis) -> FiniteRing:
    ring, _ = quotient_with_map(R, I)
    return ring


def quotient_with_map(R: FiniteRing, I: SubgroupBasis):
    """Quotient by a two-sided ideal, plus the projection R -> R/I on elements.

    The transversal basis comes from the Smith decomposition of the ideal
    lattice, so the construction is deterministic.
    """
    if not is_ideal(R, I):
        raise NotAnIdeal("subgroup is not closed under multiplication by the ring")
    shape = R.shape
    m = shape.m
    h = [list(r) for r in I.hnf_rows]
    diag, q, qinv = snf_with_transforms(h)
    p = shape.p
    survivors = []
    for j in range(m):
        s = abs(diag[j])
        if s > 1:
            kappa = 0
            ss = s
            while ss % p == 0:
                ss //= p
                kappa += 1
            if ss != 1:
                raise FinringError("ideal lattice with non p-power invariant")
            survivors.append((kappa, j))
    if not survivors:
        raise FinringError("trivial quotient is not representable as a FiniteRing")
    survivors.sort(key=lambda t: (-t[0], t[1]))
    qshape = AdditiveShape(p, tuple(kappa for kappa, _ in survivors))

    def project(x: Element) -> Element:
        y = [sum(x[i] * q[i][j] for i in range(m)) for j in range(m)]
        return tuple(y[j] % (p**kappa) for kappa, j in survivors)

    reps = []
    for kappa, j in survivors:
        reps.append(shape.reduce(qinv[j]))
    products = {}
    for a in range(len(reps)):
        for b in range(len(reps)):
            products[(a, b)] = project(R.mul(reps[a], reps[b]))
    ring = ring_from_products(qshape, products)
    return ring, project


def direct_sum(A: FiniteRing, B: FiniteRing) -> FiniteRing:
    if A.p != B.p:
        raise ShapeMismatch("direct_sum requires equal primes")
    p = A.p
    ks = list(A.shape.exponents) + list(B.shape.exponents)
    order = sorted(range(len(ks)), key=lambda i: (-ks[i], i))
    shape = AdditiveShape(p, tuple(ks[i] for i in order))
    ma = A.m

    def old_coords(i):
        return ("A", i) if i < ma else ("B", i - ma)

    pos = {order[i]: i for i in range(len(ks))}  # old block index -> new index
    products = {}
    for i_new in range(len(ks)):
        oi = order[i_new]
        for j_new in range(len(ks)):
            oj = order[j_new]
            side_i, ii = old_coords(oi)
            side_j, jj = old_coords(oj)
            vec = [0] * len(ks)
            if side_i == side_j:
                ring = A if side_i == "A" else B
                prod = ring.c[ii][jj]
                for l_old, val in enumerate(prod):
                    full_old = l_old if side_i == "A" else l_old + ma
                    vec[pos[full_old]] = val
            products[(i_new, j_new)] = tuple(vec)
    return ring_from_products(shape, products)


def embed_direct_sum(A: FiniteRing, B: FiniteRing):
    """direct_sum plus the two coordinate embeddings (as element maps)."""
    S = direct_sum(A, B)
    ks = list(A.shape.exponents) + list(B.shape.exponents)
    order = sorted(range(len(ks)), key=lambda i: (-ks[i], i))
    pos = {order[i]: i for i in range(len(ks))}
    ma = A.m

    def embed_a(x: Element) -> Element:
        vec = [0] * len(ks)
        for i, v in enumerate(x):
            vec[pos[i]] = v
        return tuple(vec)

    def embed_b(x: Element) -> Element:
        vec = [0] * len(ks)
        for i, v in enumerate(x):
            vec[pos[i + ma]] = v
        return tuple(vec)

    return S, embed_a, embed_b


# -- identity and units ----------------------------------------------------


def _solve_mod_columns(rows, target, col_moduli):
    """Integer solution x of x*rows = target modulo col_moduli per column."""
    ncols = len(target)
    aug = [list(r) for r in rows]
    for idx, q in enumerate(col_moduli):
        aug.append([q if j == idx else 0 for j in range(ncols)])
    sol = solve_left(aug, list(target))
    if sol is None:
        return None
    return sol[: len(rows)]


def find_identity(R: FiniteRing) -> Element | None:
    """The unique two-sided identity, if one exists.

    Solves the linear conditions e*x_i = x_i*e = x_i over the additive group.
    """
    m = R.m
    moduli = R.shape.moduli
    rows = []
    for j in range(m):
        row = []
        for i in range(m):
            row.extend(R.c[j][i])  # coefficient of a_j in (e * x_i)
        for i in range(m):
            row.extend(R.c[i][j])  # coefficient of a_j in (x_i * e)
        rows.append(row)
    target = []
    for i in range(m):
        target.extend(R.basis(i))
    target = target * 2
    col_moduli = []
    for _ in range(2 * m):
        col_moduli.extend(moduli)
    sol = _solve_mod_columns(rows, target, col_moduli)
    if sol is None:
        return None
    e = R.shape.reduce(sol)
    for i in range(m):
        b = R.basis(i)
        if R.mul(e, b) != b or R.mul(b, e) != b:
            return None
    return e


def is_unit(R: FiniteRing, x: Element, e: Element) -> tuple[bool, Element | None]:
    """Whether x is invertible; returns (flag, inverse)."""
    m = R.m
    rows = [list(R.mul(x, R.basis(j))) for j in range(m)]
    moduli = list(R.shape.moduli)
    sol = _solve_mod_columns(rows, list(e), moduli)
    if sol is None:
        return False, None
    y = R.shape.reduce(sol)
    if R.mul(x, y) == e and R.mul(y, x) == e:
        return True, y
    return False, None


@dataclass(frozen=True)
class UnitGroupReport:
    order: int
    is_abelian: bool
    abelian_invariants: tuple[int, ...]
    exponent: int


def unit_group(R: FiniteRing) -> UnitGroupReport:
    e = find_identity(R)
    if e is None:
        raise NoIdentity("ring has no multiplicative identity")
    units = []
    for x in R.elements():
        flag, _ = is_unit(R, x, e)
        if flag:
            units.append(x)
    order = len(units)
    unit_set = set(units)
    abelian = True
    for a in units:
        for b in units:
            if R.mul(a, b) != R.mul(b, a):
                abelian = False
                break
        if not abelian:
            break
    # multiplicative orders
    orders = {}
    for x in units:
        o = 1
        acc = x
        while acc != e:
            acc = R.mul(acc, x)
            o += 1
        orders[x] = o
    exponent = 1
    for o in orders.values():
        exponent = exponent * o // math.gcd(exponent, o)
    invariants: tuple[int, ...] = ()
    if abelian:
        invariants = _abelian_invariants(orders, order)
    return UnitGroupReport(order, abelian, invariants, exponent)


def _abelian_invariants(orders: dict, group_order: int) -> tuple[int, ...]:
    """Primary decomposition of a finite abelian group from element orders."""
    invs = []
    n = group_order
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    for q in primes:
        # c_i = #elements whose q-part of order divides q^i
        maxv = 0
        vals = []
        for o in orders.values():
            v = 0
            while o % q == 0:
                o //= q
                v += 1
            vals.append(v)
            maxv = max(maxv, v)
        counts = [sum(1 for v in vals if v <= i) for i in range(maxv + 1)]
        # number of cyclic q-factors with exponent >= i is log_q(c_i / c_{i-1})
        mults = []
        for i in range(1, maxv + 1):
            ratio = counts[i] // counts[i - 1]
            e = 0
            while ratio > 1:
                ratio //= q
                e += 1
            mults.append(e)
        for i in range(1, maxv + 1):
            exactly = mults[i - 1] - (mults[i] if i < maxv else 0)
            invs.extend([q**i] * exactly)
    return tuple(sorted(invs))


# -- subring as a standalone ring -------------------------------------------


def subgroup_as_ring(R: FiniteRing, S: SubgroupBasis):
    """View a multiplicatively closed subgroup as its own FiniteRing.

    Returns (ring, to_sub, from_sub) where to_sub/from_sub translate between
    R-coordinates and coordinates of the new ring.
    """
    basis_elems, orders = S.group_decomposition()
    if not basis_elems:
        raise FinringError("trivial subgroup is not representable as a FiniteRing")
    p = R.p
    exps = []
    for s in orders:
        kappa = 0
        while s % p == 0:
            s //= p
            kappa += 1
        exps.append(kappa)
    sub_shape = AdditiveShape(p, tuple(exps))
    shape = R.shape
    m = shape.m
    h = [list(r) for r in S.hnf_rows]
    vrows = []
    for i in range(m):
        target = [shape.moduli[i] if j == i else 0 for j in range(m)]
        vrows.append(staircase_solve(h, target))
    diag, q, qinv = snf_with_transforms(vrows)
    # map subgroup element -> coefficient vector over the decomposition
    survivors = []
    for j in range(m):
        if abs(diag[j]) > 1:
            survivors.append((abs(diag[j]), j))
    survivors.sort(key=lambda t: (-t[0], t[1]))

    def to_sub(x: Element) -> Element:
        sol = staircase_solve(h, list(x))
        if sol is None:
            raise ShapeMismatch("element not in subgroup")
        y = [sum(sol[i] * q[i][j] for i in range(m)) for j in range(m)]
        return tuple(y[j] % s for s, j in survivors)

    def from_sub(a: Element) -> Element:
        acc = shape.zero()
        for coeff, b in zip(a, basis_elems):
            acc = shape.add(acc, shape.smul(coeff, b))
        return acc

    products = {}
    r = len(basis_elems)
    for i in range(r):
        for j in range(r):
            prod = R.mul(basis_elems[i], basis_elems[j])
            products[(i, j)] = to_sub(prod)
    ring = ring_from_products(sub_shape, products)
    return ring, to_sub, from_sub


# -- text format -------------------------------------------------------------


def ring_to_text(R: FiniteRing) -> str:
    lines = [f"p={R.p};shape=" + ",".join(str(k) for k in R.shape.exponents)]
    for i in range(R.m):
        for j in range(R.m):
            lines.append(
                f"c[{i+1}][{j+1}]=" + ",".join(str(v) for v in R.c[i][j])
            )
    return "\n".join(lines) + "\n"


def _parse_header(line: str, lineno: int) -> AdditiveShape:
    try:
        ppart, spart = line.split(";")
        if not ppart.startswith("p=") or not spart.startswith("shape="):
            raise ValueError
        p = int(ppart[2:])
        ks = tuple(int(t) for t in spart[6:].split(","))
        return AdditiveShape(p, ks)
    except (ValueError, ShapeMismatch) as exc:
        raise ParseError(f"bad header {line!r} ({exc})", lineno) from None


def _parse_record_lines(lines, start):
    """Parse one record from numbered (lineno, text) pairs."""
    lineno, header = lines[start]
    shape = _parse_header(header, lineno)
    m = shape.m
    c = [[None] * m for _ in range(m)]
    idx = start + 1
    for i in range(m):
        for j in range(m):
            if idx >= len(lines):
                raise ParseError("record truncated", lineno)
            lno, line = lines[idx]
            idx += 1
            prefix = f"c[{i+1}][{j+1}]="
            if not line.startswith(prefix):
                raise ParseError(f"expected {prefix!r}", lno)
            try:
                vec = [int(t) for t in line[len(prefix):].split(",")]
            except ValueError:
                raise ParseError("non-integer entry", lno) from None
            if len(vec) != m:
                raise ParseError(f"expected {m} entries", lno)
            for l, v in enumerate(vec):
                if not 0 <= v < shape.moduli[l]:
                    raise ParseError(
                        f"entry {v} out of range [0,{shape.moduli[l]})", lno
                    )
            c[i][j] = vec
    return shape, c, idx


def parse_ring(text: str) -> FiniteRing:
    rings = parse_rings(text)
    if len(rings) != 1:
        raise ParseError(f"expected exactly one record, found {len(rings)}")
    return rings[0]


def parse_rings(text: str) -> list[FiniteRing]:
    lines = [
        (i + 1, ln.strip())
        for i, ln in enumerate(text.splitlines())
        if ln.strip() and not ln.strip().startswith("#")
    ]
    out = []
    idx = 0
    while idx < len(lines):
        shape, c, idx = _parse_record_lines(lines, idx)
        out.append(make_ring(shape, c))
    return out
