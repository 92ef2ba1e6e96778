"""Structure theory for finite p-rings.

Jacobson radicals, Galois rings GR(p^k, r) and matrix rings over them,
coefficient subrings (minimal unital complements of the radical) and the
sextuple record that rebuilds a non-nilpotent ring from its radical and
coefficient ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    AdditiveShape,
    Element,
    FiniteRing,
    SubgroupBasis,
    find_identity,
    ideal_generated,
    quotient_with_map,
    ring_from_products,
    subgroup_as_ring,
    subgroup_product,
    subring_generated,
)
from .errors import (
    FinringError,
    GenerationFailed,
    InvalidSextuple,
    NilpotentInput,
    NoIdentity,
    NotIdempotentModJ,
    ParameterOutOfRange,
)

# -- Jacobson radical --------------------------------------------------------


def _subgroup_nilpotent(R: FiniteRing, I: SubgroupBasis) -> bool:
    """Whether the multiplicative chain I, I^2, ... reaches the zero subgroup."""
    current = I
    while current.order > 1:
        nxt = subgroup_product(R, current, I)
        if nxt == current:
            return False
        current = nxt
    return True


def principal_ideal_nilpotent(R: FiniteRing, x: Element) -> bool:
    return _subgroup_nilpotent(R, ideal_generated(R, [x]))


def jacobson_radical(R: FiniteRing, verify: bool = True) -> SubgroupBasis:
    """Largest nilpotent two-sided ideal.

    Computed as the span of {x : the two-sided ideal generated by x is
    nilpotent}; the span adds nothing because a sum of nilpotent ideals is
    nilpotent.  When `verify` is set, re-checks that the result is a
    nilpotent ideal and that J(R/J) = 0.
    """
    members = [x for x in R.elements() if principal_ideal_nilpotent(R, x)]
    J = SubgroupBasis.from_elements(R.shape, members)
    if verify:
        if J.order != len(members):
            raise FinringError("radical span escaped the member set")
        if not _subgroup_nilpotent(R, J):
            raise FinringError("radical candidate is not nilpotent")
        if J.order < R.order:
            Q, _ = quotient_with_map(R, J)
            for y in Q.elements():
                if any(y) and principal_ideal_nilpotent(Q, y):
                    raise FinringError("J(R/J) is nonzero")
    return J


# -- Galois rings and matrix rings -------------------------------------------


def _poly_mod(poly: list[int], f: list[int], modulus: int, p_deg: int) -> list[int]:
    """Reduce poly modulo the monic f (degree p_deg), coefficients mod modulus."""
    work = [c % modulus for c in poly]
    while len(work) > p_deg:
        lead = work[-1]
        if lead:
            shift = len(work) - 1 - p_deg
            for i in range(p_deg):
                work[shift + i] = (work[shift + i] - lead * f[i]) % modulus
        work.pop()
    work += [0] * (p_deg - len(work))
    return work


def _fp_poly_irreducible(coeffs: list[int], p: int) -> bool:
    """Irreducibility of the monic polynomial X^r + sum coeffs[i] X^i over F_p."""
    r = len(coeffs)
    f = coeffs + [1]

    def divides(g: list[int]) -> bool:
        # polynomial remainder of f by monic g over F_p
        rem = [c % p for c in f]
        dg = len(g) - 1
        while len(rem) - 1 >= dg:
            lead = rem[-1]
            if lead:
                shift = len(rem) - 1 - dg
                for i in range(dg + 1):
                    rem[shift + i] = (rem[shift + i] - lead * g[i]) % p
            rem.pop()
        return not any(rem)

    for d in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if divides(g):
                return False
    return r >= 1


def _least_irreducible(p: int, r: int) -> list[int]:
    """Lexicographically least monic degree-r polynomial irreducible mod p.

    Order is over the coefficient tuple (a_{r-1}, ..., a_0) of
    X^r + a_{r-1}X^{r-1} + ... + a_0.
    """
    for top in itertools.product(range(p), repeat=r):
        coeffs = list(reversed(top))
        if _fp_poly_irreducible(coeffs, p):
            return coeffs
    raise ParameterOutOfRange(f"no irreducible polynomial of degree {r} mod {p}")


def galois_ring(p: int, k: int, r: int) -> FiniteRing:
    """GR(p^k, r) = Z_{p^k}[X]/(f) on the basis 1, X, ..., X^{r-1}."""
    if k < 1 or r < 1:
        raise ParameterOutOfRange("galois_ring requires k >= 1 and r >= 1")
    shape = AdditiveShape(p, (k,) * r)
    modulus = p**k
    f = _least_irreducible(p, r)
    products = {}
    for i in range(r):
        for j in range(r):
            poly = [0] * (i + j) + [1]
            products[(i, j)] = tuple(_poly_mod(poly, f, modulus, r))
    return ring_from_products(shape, products)


def matrix_ring(S: FiniteRing, mm: int) -> FiniteRing:
    """Full matrix ring M_mm(S) on the basis E_ab (x) s_i."""
    if mm < 1:
        raise ParameterOutOfRange("matrix size must be >= 1")
    if find_identity(S) is None:
        raise NoIdentity("matrix_ring requires a unital scalar ring")
    r = S.m
    triples = [(a, b, i) for a in range(mm) for b in range(mm) for i in range(r)]
    ks = [S.shape.exponents[i] for (_, _, i) in triples]
    order = sorted(range(len(triples)), key=lambda t: (-ks[t], t))
    pos = {order[t]: t for t in range(len(triples))}
    shape = AdditiveShape(S.p, tuple(ks[t] for t in order))
    products = {}
    for t1 in range(len(triples)):
        a, b, i = triples[order[t1]]
        for t2 in range(len(triples)):
            c_, d, j = triples[order[t2]]
            vec = [0] * len(triples)
            if b == c_:
                sij = S.c[i][j]
                for l, val in enumerate(sij):
                    idx = (a * mm + d) * r + l
                    vec[pos[idx]] = val
            products[(t1, t2)] = tuple(vec)
    return ring_from_products(shape, products)


def matrix_unit(S: FiniteRing, mm: int, a: int, b: int, s_coords: Element) -> Element:
    """Coordinates in matrix_ring(S, mm) of the matrix with s at entry (a, b)."""
    r = S.m
    triples = [(x, y, i) for x in range(mm) for y in range(mm) for i in range(r)]
    ks = [S.shape.exponents[i] for (_, _, i) in triples]
    order = sorted(range(len(triples)), key=lambda t: (-ks[t], t))
    pos = {order[t]: t for t in range(len(triples))}
    vec = [0] * len(triples)
    for i, v in enumerate(s_coords):
        vec[pos[(a * mm + b) * r + i]] = v
    return tuple(vec)


@dataclass(frozen=True)
class CoefficientRingDescriptor:
    """Multiset of (matrix size, characteristic exponent, residue degree)."""

    summands: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if not self.summands or any(
            m < 1 or k < 1 or r < 1 for (m, k, r) in self.summands
        ):
            raise ParameterOutOfRange("descriptor entries must be positive")
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    @property
    def order_exponent(self) -> int:
        return sum(m * m * k * r for (m, k, r) in self.summands)

    @classmethod
    def parse(cls, text: str) -> "CoefficientRingDescriptor":
        summands = []
        for part in text.split("+"):
            bits = part.split(",")
            if len(bits) != 3:
                raise ParameterOutOfRange(f"bad descriptor summand {part!r}")
            summands.append(tuple(int(b) for b in bits))
        return cls(tuple(summands))

    def __str__(self) -> str:
        return "+".join(f"{m},{k},{r}" for (m, k, r) in self.summands)


def build_coefficient_ring(p: int, d: CoefficientRingDescriptor) -> FiniteRing:
    from .core import direct_sum

    parts = [matrix_ring(galois_ring(p, k, r), m) for (m, k, r) in d.summands]
    ring = parts[0]
    for part in parts[1:]:
        ring = direct_sum(ring, part)
    return ring


def descriptors_with_exponent(s: int):
    """All coefficient-ring descriptors with order exponent exactly s."""

    def summand_choices(budget):
        for m in range(1, budget + 1):
            if m * m > budget:
                break
            for k in range(1, budget // (m * m) + 1):
                for r in range(1, budget // (m * m * k) + 1):
                    yield (m, k, r), m * m * k * r

    def rec(budget, floor):
        if budget == 0:
            yield ()
            return
        for summand, cost in summand_choices(budget):
            if summand < floor or cost > budget:
                continue
            for rest in rec(budget - cost, summand):
                yield (summand,) + rest

    for combo in rec(s, (1, 1, 1)):
        if combo:
            yield CoefficientRingDescriptor(combo)


def verify_two_generated(p: int, k: int, r: int, mm: int):
    """Two ring generators for M_mm(GR(p^k, r)), verified by closure.

    g1 = zeta*E_{1,1} with zeta avoiding proper subfields mod p, g2 the cyclic
    permutation matrix.  Returns (S, g1, g2, True); exhausting all candidate
    zeta values raises GenerationFailed.
    """
    G = galois_ring(p, k, r)
    S = matrix_ring(G, mm)

    def residue_generates(z: Element) -> bool:
        # z mod p must lie in no proper subfield of F_{p^r}
        zbar = tuple(v % p for v in z)
        if not any(zbar):
            return False
        Gp = galois_ring(p, 1, r)
        for d in range(1, r):
            if r % d:
                continue
            acc = zbar
            for _ in range(d):
                acc = tuple(pow_element(Gp, acc, p))
            if acc == zbar:
                return False
        return True

    def pow_element(ring: FiniteRing, x: Element, e: int) -> Element:
        acc = x
        for _ in range(e - 1):
            acc = ring.mul(acc, x)
        return acc

    one = find_identity(G)
    g2 = S.zero()
    for a in range(mm):
        g2 = S.add(g2, matrix_unit(G, mm, a, (a + 1) % mm, one))
    candidates = []
    xclass = tuple(1 if i == 1 else 0 for i in range(G.m)) if r >= 2 else None
    if xclass is not None:
        candidates.append(xclass)
    candidates.append(find_identity(G))
    candidates.extend(G.elements())
    seen = set()
    for z in candidates:
        if z in seen:
            continue
        seen.add(z)
        if r >= 2 and not residue_generates(z):
            continue
        if r == 1 and not any(v % p for v in z):
            continue
        g1 = matrix_unit(G, mm, 0, 0, z)
        gen = subring_generated(S, [g1, g2])
        if gen.order == S.order:
            return S, g1, g2, True
    raise GenerationFailed(f"no generator pair found for M_{mm}(GR({p}^{k},{r}))")


# -- idempotent lifting and coefficient subrings ------------------------------


def lift_idempotent(R: FiniteRing, s: Element, J: SubgroupBasis | None = None) -> Element:
    """Idempotent e == s mod J(R), via the iteration t <- 3t^2 - 2t^3.

    The iterate stays in the subring generated by s, and converges because
    t^2 - t lies in successively higher powers of the nilpotent radical.
    """
    if J is None:
        J = jacobson_radical(R, verify=False)
    t = R.shape.reduce(s)
    if R.sub(R.mul(t, t), t) not in J:
        raise NotIdempotentModJ("s + J is not idempotent in R/J")
    for _ in range(2 * R.shape.n + 4):
        sq = R.mul(t, t)
        if sq == t:
            return t
        cube = R.mul(sq, t)
        t = R.sub(R.smul(3, sq), R.smul(2, cube))
    raise FinringError("idempotent iteration failed to converge")


@dataclass(frozen=True)
class CoefficientReport:
    identity: Element
    sum_with_radical_is_ring: bool
    unital: bool
    radical_is_p_s: bool
    meet_radical_is_p_s: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.sum_with_radical_is_ring
            and self.unital
            and self.radical_is_p_s
            and self.meet_radical_is_p_s
        )


def subgroups_of(R: FiniteRing, S: SubgroupBasis):
    """All subgroups of the additive subgroup S, smallest first."""
    trivial = SubgroupBasis.from_elements(R.shape, [])
    seen = {trivial.hnf_rows: trivial}
    frontier = [trivial]
    elems = list(S.elements())
    while frontier:
        nxt = []
        for sub in frontier:
            for e in elems:
                if e in sub:
                    continue
                bigger = SubgroupBasis.from_elements(
                    R.shape, list(sub.generators) + [e]
                )
                if bigger.hnf_rows not in seen:
                    seen[bigger.hnf_rows] = bigger
                    nxt.append(bigger)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.order, s.hnf_rows))


def _is_closed(R: FiniteRing, S: SubgroupBasis) -> bool:
    return all(R.mul(a, b) in S for a in S.generators for b in S.generators)


def coefficient_subring(R: FiniteRing):
    """Minimal subring S with S + J(R) = R, plus the re-verified report.

    Seeded by lifting the identity of R/J(R) to an idempotent e and taking
    eRe, then descending through subrings of the seed while the sum property
    survives.  Deterministic: candidates are scanned in canonical order.
    """
    J = jacobson_radical(R)
    if J.order == R.order:
        raise NilpotentInput("coefficient subrings require a non-nilpotent ring")
    Q, proj = quotient_with_map(R, J)
    eq = find_identity(Q)
    if eq is None:
        raise FinringError("semisimple quotient lost its identity")
    s = next(x for x in R.elements() if proj(x) == eq)
    e = lift_idempotent(R, s, J)
    seed_elems = [R.mul(R.mul(e, x), e) for x in R.elements()]
    S = SubgroupBasis.from_elements(R.shape, seed_elems)
    full = SubgroupBasis.full(R.shape)
    while True:
        smaller = None
        for cand in subgroups_of(R, S):
            if cand.order >= S.order:
                break
            if not _is_closed(R, cand):
                continue
            if cand.plus(J) == full:
                smaller = cand
                break
        if smaller is None:
            break
        S = smaller
    report = _verify_coefficient_properties(R, S, J)
    return S, report


def _verify_coefficient_properties(
    R: FiniteRing, S: SubgroupBasis, J: SubgroupBasis
) -> CoefficientReport:
    full = SubgroupBasis.full(R.shape)
    sum_ok = S.plus(J) == full
    S_ring, to_sub, from_sub = subgroup_as_ring(R, S)
    ident = find_identity(S_ring)
    unital = ident is not None
    pS = S.scaled(R.p)
    JS = jacobson_radical(S_ring, verify=False)
    JS_in_R = SubgroupBasis.from_elements(
        R.shape, [from_sub(g) for g in JS.generators]
    )
    radical_ok = JS_in_R == pS
    meet_ok = S.intersect(J) == pS
    identity_in_R = from_sub(ident) if unital else R.zero()
    return CoefficientReport(identity_in_R, sum_ok, unital, radical_ok, meet_ok)


# -- sextuple extraction and rebuild ------------------------------------------


@dataclass(frozen=True)
class Sextuple:
    """Data rebuilding a non-nilpotent ring from radical and coefficient ring.

    `S` is the coefficient ring on its own basis, `coset_reps` a transversal
    of pS in S, `psi` the additive injection pS -> J, `left`/`right` the
    action tables of the S-basis on the J-basis, and `J` the radical as a
    standalone nilpotent ring (None when the radical is trivial).
    """

    S: FiniteRing
    coset_reps: tuple[Element, ...]
    psi: tuple[tuple[Element, Element], ...]
    left: tuple[tuple[Element, ...], ...]
    right: tuple[tuple[Element, ...], ...]
    J: FiniteRing | None

    def psi_map(self) -> dict[Element, Element]:
        return dict(self.psi)


def extract_sextuple(R: FiniteRing) -> Sextuple:
    J_sub = jacobson_radical(R)
    if J_sub.order == R.order:
        raise NilpotentInput("sextuple extraction requires a non-nilpotent ring")
    S_sub, report = coefficient_subring(R)
    if not report.all_hold:
        raise FinringError("coefficient subring failed its defining properties")
    S_ring, S_to, S_from = subgroup_as_ring(R, S_sub)
    if J_sub.order == 1:
        j_ring = None

        def J_to(x):
            return ()

        def J_from(x):
            return R.zero()
    else:
        j_ring, J_to, J_from = subgroup_as_ring(R, J_sub)

    p = R.p
    pS = SubgroupBasis.from_elements(
        S_ring.shape, [S_ring.smul(p, S_ring.basis(i)) for i in range(S_ring.m)]
    )
    # lex-least representative per coset of pS in S
    reps = []
    assigned = set()
    for x in sorted(S_ring.elements()):
        if x in assigned:
            continue
        reps.append(x)
        for y in pS.elements():
            assigned.add(S_ring.add(x, y))
    psi_pairs = tuple(
        (y, J_to(S_from(y))) for y in sorted(pS.elements())
    )
    left = tuple(
        tuple(
            J_to(R.mul(S_from(S_ring.basis(i)), J_from_basis))
            for J_from_basis in _j_basis_elements(j_ring, J_from)
        )
        for i in range(S_ring.m)
    )
    right = tuple(
        tuple(
            J_to(R.mul(J_from_basis, S_from(S_ring.basis(i))))
            for J_from_basis in _j_basis_elements(j_ring, J_from)
        )
        for i in range(S_ring.m)
    )
    return Sextuple(S_ring, tuple(reps), psi_pairs, left, right, j_ring)


def _j_basis_elements(j_ring: FiniteRing | None, J_from):
    if j_ring is None:
        return []
    return [J_from(j_ring.basis(i)) for i in range(j_ring.m)]


def validate_sextuple(t: Sextuple) -> None:
    S, J = t.S, t.J
    psi = t.psi_map()
    # psi: additive and injective on pS
    images = [img for _, img in t.psi]
    if len(set(images)) != len(images):
        raise InvalidSextuple("psi is not injective")
    for (y1, i1) in t.psi:
        for (y2, i2) in t.psi:
            ysum = S.add(y1, y2)
            if ysum not in psi:
                raise InvalidSextuple("psi domain is not a subgroup")
            expected = i1 if J is None else J.add(i1, i2)
            if J is None:
                continue
            if psi[ysum] != expected:
                raise InvalidSextuple("psi is not additive")
    if J is None:
        return
    # actions respect S-multiplication and characteristics on generators
    for i in range(S.m):
        ki = S.shape.moduli[i]
        for b in range(J.m):
            if any(v % q for v, q in zip(J.smul(ki, t.left[i][b]), J.shape.moduli)):
                raise InvalidSextuple("left action violates characteristic")
    for i in range(S.m):
        for j in range(S.m):
            prod = S.mul(S.basis(i), S.basis(j))
            for b in range(J.m):
                via_prod = _act(t, "left", prod, J.basis(b))
                stepwise = _act(t, "left", S.basis(i), _act(t, "left", S.basis(j), J.basis(b)))
                if via_prod != stepwise:
                    raise InvalidSextuple("left action is not multiplicative")
                via_prod_r = _act(t, "right", prod, J.basis(b))
                stepwise_r = _act(
                    t, "right", S.basis(j), _act(t, "right", S.basis(i), J.basis(b))
                )
                if via_prod_r != stepwise_r:
                    raise InvalidSextuple("right action is not multiplicative")


def _act(t: Sextuple, side: str, s: Element, x: Element) -> Element:
    J = t.J
    table = t.left if side == "left" else t.right
    acc = J.zero()
    for i, si in enumerate(s):
        if not si:
            continue
        for b, xb in enumerate(x):
            f = si * xb
            if f:
                acc = J.add(acc, J.smul(f, table[i][b]))
    return acc


def build_from_sextuple(t: Sextuple) -> FiniteRing:
    """Ring on formal sums s + x (s in the transversal, x in J)."""
    validate_sextuple(t)
    S, J = t.S, t.J
    psi = t.psi_map()
    reps = list(t.coset_reps)
    rep_index = {}
    pS_elems = list(psi.keys())
    for idx, r in enumerate(reps):
        for y in pS_elems:
            rep_index[S.add(r, y)] = idx

    def decompose(s: Element) -> tuple[int, Element]:
        idx = rep_index[s]
        return idx, S.sub(s, reps[idx])

    def j_zero():
        return () if J is None else J.zero()

    def j_add(a, b):
        return () if J is None else J.add(a, b)

    def j_mul(a, b):
        return () if J is None else J.mul(a, b)

    elements = [
        (i, x) for i in range(len(reps)) for x in ([()] if J is None else J.elements())
    ]

    def add(u, v):
        (i, x), (j, y) = u, v
        idx, carry = decompose(S.add(reps[i], reps[j]))
        extra = psi[carry] if J is not None else ()
        return (idx, j_add(j_add(extra, x), y))

    def mul(u, v):
        (i, x), (j, y) = u, v
        idx, carry = decompose(S.mul(reps[i], reps[j]))
        if J is None:
            return (idx, ())
        term = psi[carry]
        term = J.add(term, _act(t, "left", reps[i], y))
        term = J.add(term, _act(t, "right", reps[j], x))
        term = J.add(term, j_mul(x, y))
        return (idx, term)

    zero = (rep_index[S.zero()], j_zero())
    try:
        return cayley_to_ring(elements, add, mul, zero, S.p)
    except FinringError as exc:
        raise InvalidSextuple(f"built table is not a valid ring: {exc}") from exc


def cayley_to_ring(elements, add, mul, zero, p: int) -> FiniteRing:
    """Structure-constant ring from an abstract finite Cayley presentation."""
    index = {e: i for i, e in enumerate(elements)}

    def elem_order(x):
        o = 1
        acc = x
        while acc != zero:
            acc = add(acc, x)
            o += 1
        return o

    orders = {x: elem_order(x) for x in elements}
    candidates = sorted(elements, key=lambda x: (-orders[x], index[x]))
    target = len(elements)

    def search(basis, span_map):
        size = len(span_map)
        if size == target:
            return basis
        for cand in candidates:
            if cand in span_map:
                continue
            o = orders[cand]
            if basis and o > orders[basis[-1]]:
                continue  # keep orders weakly decreasing
            if size * o > target:
                continue
            new_span = dict(span_map)
            ok = True
            acc = cand
            step_elems = list(span_map.items())
            for mult in range(1, o):
                for base_el, coords in step_elems:
                    combined = add(base_el, acc)
                    if combined in new_span:
                        ok = False
                        break
                    new_span[combined] = coords + (mult,)
                if not ok:
                    break
                acc = add(acc, cand)
            if not ok:
                continue
            # pad existing coords with 0 for the new generator
            padded = {
                el: (c + (0,) if len(c) == len(basis) else c)
                for el, c in new_span.items()
            }
            result = search(basis + [cand], padded)
            if result is not None:
                return result
        return None

    basis = search([], {zero: ()})
    if basis is None:
        raise FinringError("no direct-sum basis found for the additive group")
    # rebuild the span with final coordinates
    span_map = {zero: (0,) * len(basis)}
    for i, b in enumerate(basis):
        current = dict(span_map)
        acc = b
        for mult in range(1, orders[b]):
            for el, coords in current.items():
                combined = add(el, acc)
                newc = list(coords)
                newc[i] = mult
                span_map[combined] = tuple(newc)
            acc = add(acc, b)
    exps = []
    for b in basis:
        o = orders[b]
        kappa = 0
        while o % p == 0:
            o //= p
            kappa += 1
        exps.append(kappa)
    shape = AdditiveShape(p, tuple(exps))
    products = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            products[(i, j)] = span_map[mul(bi, bj)]
    return ring_from_products(shape, products)
