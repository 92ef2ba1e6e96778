"""Nilpotent-ring machinery: mod-p reduction, filtration profiles, Sims
dimension, standard bases, free cube-zero algebras and their quotient family,
and the determination-property reconstruction engines.

Conventions: F_p-algebras are FiniteRing values whose shape is all-ones; the
x-basis of a standard basis is indexed 0-based with the first s elements
generating the square.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    AdditiveShape,
    Element,
    FiniteRing,
    SubgroupBasis,
    make_ring,
    power_chain,
    quotient_with_map,
    ring_from_products,
)
from .errors import FinringError, NotCubeZero, NotNilpotent, ShapeMismatch
from .linalg import fp_in_span, fp_rref, solve_left


def is_fp_algebra(R: FiniteRing) -> bool:
    return all(k == 1 for k in R.shape.exponents)


def mod_p_algebra(R: FiniteRing) -> FiniteRing:
    """R/pR as an F_p-algebra on the images of the basis (coords mod p)."""
    p = R.p
    m = R.m
    shape = AdditiveShape(p, (1,) * m)
    c = [[[v % p for v in R.c[i][j]] for j in range(m)] for i in range(m)]
    return make_ring(shape, c)


# -- F_p subspace helpers -----------------------------------------------------


def fp_subspaces(dim: int, d: int, p: int):
    """All d-dimensional subspaces of F_p^dim as RREF row tuples."""
    if d == 0:
        yield ()
        return
    for pivots in itertools.combinations(range(dim), d):
        free_pos = []
        for row_idx, pc in enumerate(pivots):
            for col in range(pc + 1, dim):
                if col not in pivots:
                    free_pos.append((row_idx, col))
        for fill in itertools.product(range(p), repeat=len(free_pos)):
            rows = [[0] * dim for _ in range(d)]
            for row_idx, pc in enumerate(pivots):
                rows[row_idx][pc] = 1
            for (row_idx, col), v in zip(free_pos, fill):
                rows[row_idx][col] = v
            yield tuple(tuple(r) for r in rows)


def _span_dim(vectors, p: int) -> int:
    basis, _ = fp_rref([list(v) for v in vectors], p) if vectors else ([], [])
    return len(basis)


def _span_key(vectors, p: int):
    basis, _ = fp_rref([list(v) for v in vectors], p) if vectors else ([], [])
    return tuple(tuple(r) for r in basis)


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class FiltrationProfile:
    w: int
    r: int
    s: int
    t: int
    u: int
    m: int
    u_h: tuple[int, ...]  # u_h[h-2] = dim A^h / A^(h+1) for h >= 2
    d: tuple[int, ...]  # d[i-1] = dim A^i for i >= 1

    def __post_init__(self):
        assert self.w == self.r + self.t + self.u
        assert all(x > 0 for x in self.u_h)
        assert sum(self.u_h) == self.t + self.u
        if self.u_h:
            assert self.u_h[0] == self.t
        assert self.s <= self.t + 1


def _power_dims(A: FiniteRing) -> list[int]:
    """[dim A^1, dim A^2, ...] down to 0; raises unless A is nilpotent."""
    chain = power_chain(A)
    if chain[-1].order > 1:
        raise NotNilpotent("algebra is not nilpotent")
    p = A.p
    dims = []
    for sub in chain:
        d = 0
        order = sub.order
        while order > 1:
            order //= p
            d += 1
        dims.append(d)
    return dims


def filtration_profile(A: FiniteRing) -> FiltrationProfile:
    if not is_fp_algebra(A):
        raise ShapeMismatch("filtration profiles are defined for F_p-algebras")
    dims = _power_dims(A)
    m_index = len(dims)
    w = dims[0]
    d2 = dims[1] if len(dims) > 1 else 0
    d3 = dims[2] if len(dims) > 2 else 0
    r = w - d2
    t = d2 - d3
    u = d3
    u_h = tuple(
        dims[h - 1] - (dims[h] if h < len(dims) else 0)
        for h in range(2, m_index)
    )
    s = sims_dimension(A)
    return FiltrationProfile(w, r, s, t, u, m_index, u_h, tuple(dims))


# -- Sims dimension -----------------------------------------------------------


def _square_span(A: FiniteRing, spanning) -> list:
    prods = [A.mul(a, b) for a in spanning for b in spanning]
    return prods


def _complement_coords(sq_basis, sq_pivots, dim):
    return [c for c in range(dim) if c not in sq_pivots]


def sims_dimension(A: FiniteRing) -> int:
    s, _ = sims_witness(A)
    return s


def sims_witness(A: FiniteRing):
    """(s, lifted basis of a subspace U of A/A^2 with (U + A^2)^2 = A^2).

    Brute force over subspaces of A/A^2 in ascending dimension; exact.
    """
    if not is_fp_algebra(A):
        raise ShapeMismatch("Sims dimension is defined for F_p-algebras")
    dims = _power_dims(A)  # raises NotNilpotent when appropriate
    p = A.p
    w = dims[0]
    sq = [v for v in _power_subspace(A, 2)]
    sq_basis, sq_pivots = fp_rref([list(v) for v in sq], p) if sq else ([], [])
    t_full = len(sq_basis)
    comp = _complement_coords(sq_basis, sq_pivots, w)
    r = len(comp)
    target = _span_key(sq, p)
    for d in range(0, r + 1):
        for subspace in fp_subspaces(r, d, p):
            lifted = [_lift_from_complement(vec, comp, w) for vec in subspace]
            spanning = lifted + [tuple(v) for v in sq_basis]
            if _span_key(_square_span(A, spanning), p) == target:
                return d, lifted
    raise FinringError("Sims search exhausted all subspaces")


def _power_subspace(A: FiniteRing, k: int):
    from .core import power_ideal

    return [g for g in power_ideal(A, k).generators]


def _lift_from_complement(vec, comp, w):
    out = [0] * w
    for v, pos in zip(vec, comp):
        out[pos] = v
    return tuple(out)


# -- standard bases -----------------------------------------------------------


@dataclass(frozen=True)
class StandardBasisData:
    """Cube-zero standard basis: xs spanning A/A^2 (first s generate A^2 by
    products), ys a monomial basis of A^2, reps[j] = (k, l) meaning
    ys[j] = xs[k] * xs[l] with k, l < s.  Commutative bases also carry
    q[i] = dim <x_0..x_i>^2 and use l = stage index in each rep."""

    xs: tuple[Element, ...]
    ys: tuple[Element, ...]
    reps: tuple[tuple[int, int], ...]
    s: int
    commutative: bool
    q: tuple[int, ...] | None
    mu: tuple[tuple[tuple[int, ...], ...], ...]  # x_i x_j over the ys


def standard_basis(A: FiniteRing, commutative: bool = False) -> StandardBasisData:
    if not is_fp_algebra(A):
        raise ShapeMismatch("standard bases are defined for F_p-algebras")
    dims = _power_dims(A)
    if len(dims) > 3 or (len(dims) > 2 and dims[2] > 0):
        raise NotCubeZero("standard_basis requires A^3 = 0")
    if commutative and not A.is_commutative():
        raise ShapeMismatch("commutative standard basis of a noncommutative algebra")
    p = A.p
    w = dims[0]
    sq = _power_subspace(A, 2)
    sq_basis, sq_pivots = fp_rref([list(v) for v in sq], p) if sq else ([], [])
    t = len(sq_basis)
    comp = _complement_coords(sq_basis, sq_pivots, w)
    r = len(comp)
    s, witness = sims_witness(A)

    if commutative:
        xs_head = _commutative_chain_order(A, witness, sq_basis, sq_pivots, p)
    else:
        xs_head = list(witness)
    xs = list(xs_head)
    # extend to a full transversal basis of A/A^2
    reduced = [list(v) for v in sq_basis]
    red_pivots = list(sq_pivots)
    for x in xs:
        reduced, red_pivots = fp_rref(reduced + [list(x)], p)
    for pos in comp:
        cand = tuple(1 if i == pos else 0 for i in range(w))
        if not fp_in_span(reduced, red_pivots, list(cand), p):
            xs.append(cand)
            reduced, red_pivots = fp_rref(reduced + [list(cand)], p)
    assert len(xs) == r

    ys: list[Element] = []
    reps: list[tuple[int, int]] = []
    q: list[int] = []
    ybasis: list[list[int]] = []
    ypivots: list[int] = []
    if commutative:
        for stage in range(s):
            for k in range(stage + 1):
                prod = A.mul(xs[k], xs[stage])
                if not fp_in_span(ybasis, ypivots, list(prod), p):
                    ys.append(prod)
                    reps.append((k, stage))
                    ybasis, ypivots = fp_rref(ybasis + [list(prod)], p)
            q.append(len(ys))
    else:
        for k in range(s):
            for l in range(s):
                prod = A.mul(xs[k], xs[l])
                if not fp_in_span(ybasis, ypivots, list(prod), p):
                    ys.append(prod)
                    reps.append((k, l))
                    ybasis, ypivots = fp_rref(ybasis + [list(prod)], p)
    assert len(ys) == t, "monomials fail to span the square"
    mu = tuple(
        tuple(tuple(_fp_coords_in(ys, A.mul(xs[i], xs[j]), p)) for j in range(r))
        for i in range(r)
    )
    data = StandardBasisData(
        tuple(xs),
        tuple(ys),
        tuple(reps),
        s,
        commutative,
        tuple(q) if commutative else None,
        mu,
    )
    _assert_standard_invariants(A, data, t)
    return data


def _commutative_chain_order(A, witness, sq_basis, sq_pivots, p):
    """Order a generating set so <x_0..x_i>^2 is strictly increasing.

    Searches orderings of elements of the witness span, first found under a
    fixed ordering; existence is guaranteed for a minimal witness.
    """
    s = len(witness)
    if s <= 1:
        return list(witness)
    w = A.m
    span_elems = []
    for coeffs in itertools.product(range(p), repeat=s):
        vec = [0] * w
        for cf, b in zip(coeffs, witness):
            for i in range(w):
                vec[i] = (vec[i] + cf * b[i]) % p
        if any(vec):
            span_elems.append(tuple(vec))
    span_elems.sort()

    def square_span_key(elems):
        return _span_key(
            [A.mul(a, b) for a in elems for b in elems]
            + [A.mul(a, a) for a in elems],
            p,
        )

    full_key = square_span_key(list(witness))

    def independent(chosen, cand):
        basis, pivots = fp_rref([list(c) for c in chosen], p) if chosen else ([], [])
        return not fp_in_span(basis, pivots, list(cand), p)

    def rec(chosen):
        if len(chosen) == s:
            if square_span_key(chosen) == full_key:
                return chosen
            return None
        for cand in span_elems:
            if not independent(chosen, cand):
                continue
            if chosen:
                sq_prev = square_span_key(chosen)
                prod = A.mul(chosen[-1], cand)
                basis = [list(v) for v in _unkey(sq_prev)]
                bb, pv = fp_rref(basis, p) if basis else ([], [])
                if fp_in_span(bb, pv, list(prod), p):
                    continue  # x_i x_{i+1} must escape <x_0..x_i>^2
            result = rec(chosen + [cand])
            if result is not None:
                return result
        return None

    ordered = rec([])
    if ordered is None:
        raise FinringError("no chain ordering found for the Sims witness")
    return ordered


def _unkey(key):
    return [list(r) for r in key]


def _fp_coords_in(basis_elems, vec, p):
    if not basis_elems:
        if any(vec):
            raise FinringError("vector outside the empty span")
        return []
    sol = _fp_solve([list(b) for b in basis_elems], list(vec), p)
    if sol is None:
        raise FinringError("vector outside the span")
    return sol


def _fp_solve(rows, target, p):
    """Coefficients expressing target in the given F_p row vectors, or None."""
    n = len(rows)
    width = len(target)
    aug = [[rows[i][c] % p for c in range(width)] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    red = []
    pivots = []
    for row in aug:
        for brow, bcol in zip(red, pivots):
            f = row[bcol]
            if f:
                row = [(a - f * b) % p for a, b in zip(row, brow)]
        pc = next((c for c in range(width) if row[c]), None)
        if pc is None:
            continue
        inv = pow(row[pc], -1, p)
        row = [(a * inv) % p for a in row]
        red.append(row)
        pivots.append(pc)
    t = list(target) + [0] * n
    coeffs = [0] * n
    for brow, bcol in zip(red, pivots):
        f = t[bcol] % p
        if f:
            t = [(a - f * b) % p for a, b in zip(t, brow)]
            for i in range(n):
                coeffs[i] = (coeffs[i] + f * brow[width + i]) % p
    if any(v % p for v in t[:width]):
        return None
    return coeffs


def _assert_standard_invariants(A, data: StandardBasisData, t: int):
    p = A.p
    # reps multiply out correctly
    for y, (k, l) in zip(data.ys, data.reps):
        assert A.mul(data.xs[k], data.xs[l]) == y
        assert k < data.s and l < data.s
    # x_0..x_{s-1} generate the square
    head = list(data.xs[: data.s])
    assert _span_key(_square_span(A, head), p) == _span_key(
        _square_span(A, list(data.xs)), p
    )
    if data.commutative and data.q is not None:
        qs = data.q
        assert all(a < b for a, b in zip(qs, qs[1:]))
        if qs:
            assert qs[-1] == t
        for i, qi in enumerate(qs, start=1):
            assert qi <= t - data.s + i
        for j, (k, l) in enumerate(data.reps):
            stage = next(i for i, qi in enumerate(qs) if j < qi)
            assert l == stage and k <= l


# -- free cube-zero algebras and the quotient family ---------------------------


def free_cube_zero(p: int, r: int, commutative: bool = False) -> FiniteRing:
    """Free (commutative) F_p-algebra of cube zero and rank r.

    Basis: x_0..x_{r-1} followed by the degree-2 monomials in lex order
    (all ordered pairs, or pairs k <= l in the commutative case)."""
    if r < 1:
        raise ShapeMismatch("rank must be >= 1")
    if commutative:
        monos = [(k, l) for k in range(r) for l in range(k, r)]
    else:
        monos = [(k, l) for k in range(r) for l in range(r)]
    dim = r + len(monos)
    pos = {kl: r + i for i, kl in enumerate(monos)}
    shape = AdditiveShape(p, (1,) * dim)
    products = {}
    for i in range(r):
        for j in range(r):
            vec = [0] * dim
            key = (min(i, j), max(i, j)) if commutative else (i, j)
            vec[pos[key]] = 1
            products[(i, j)] = tuple(vec)
    return ring_from_products(shape, products)


def _gl_generators(r: int, p: int):
    gens = []
    for i in range(r):
        for j in range(r):
            if i != j:
                g = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
                g[i][j] = 1
                gens.append(g)
    if p > 2:
        prim = _primitive_root(p)
        g = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
        g[0][0] = prim
        gens.append(g)
    if r == 1 and p == 2:
        gens.append([[1]])
    return gens


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        acc = 1
        for _ in range(p - 1):
            acc = acc * g % p
            seen.add(acc)
        if len(seen) == p - 1:
            return g
    raise FinringError(f"no primitive root mod {p}")


def _degree2_action(g, r: int, p: int, commutative: bool):
    """Matrix of the induced action on degree-2 monomials, rows = images."""
    if commutative:
        monos = [(k, l) for k in range(r) for l in range(k, r)]
    else:
        monos = [(k, l) for k in range(r) for l in range(r)]
    pos = {kl: i for i, kl in enumerate(monos)}
    mat = [[0] * len(monos) for _ in range(len(monos))]
    for (a, b), row_idx in pos.items():
        for c in range(r):
            fc = g[a][c]
            if not fc:
                continue
            for dcol in range(r):
                f = fc * g[b][dcol]
                if not f:
                    continue
                key = (min(c, dcol), max(c, dcol)) if commutative else (c, dcol)
                mat[row_idx][pos[key]] = (mat[row_idx][pos[key]] + f) % p
    return mat


def lower_bound_family(p: int, r: int, n: int, commutative: bool = False):
    """Quotients of the free cube-zero algebra of rank r with dimension n,
    one representative per isomorphism class, with class sizes.

    Returns a list of (algebra, orbit_size); empty when no quotient of
    dimension n exists (in particular when n - r exceeds dim F^2)."""
    F = free_cube_zero(p, r, commutative)
    dim_f = F.m
    dim_sq = dim_f - r
    di = dim_f - n
    if di < 0 or di > dim_sq:
        return []
    gens = _gl_generators(r, p)
    actions = [_degree2_action(g, r, p, commutative) for g in gens]
    all_subspaces = list(fp_subspaces(dim_sq, di, p))
    seen: set = set()
    classes = []
    for sub in all_subspaces:
        if sub in seen:
            continue
        # BFS orbit of this subspace under the induced GL action
        orbit = {sub}
        frontier = [sub]
        while frontier:
            nxt = []
            for cur in frontier:
                for mat in actions:
                    rows = []
                    for vec in cur:
                        img = [0] * dim_sq
                        for c, vc in enumerate(vec):
                            if vc:
                                for l in range(dim_sq):
                                    img[l] = (img[l] + vc * mat[c][l]) % p
                        rows.append(img)
                    key = _span_key(rows, p)
                    if key not in orbit:
                        orbit.add(key)
                        nxt.append(key)
            frontier = nxt
        seen.update(orbit)
        rep = min(orbit)
        classes.append((rep, len(orbit)))
    out = []
    for rep, size in sorted(classes):
        if di == 0:
            out.append((F, size))
            continue
        rows = [(0,) * r + tuple(vec) for vec in rep]
        ideal = SubgroupBasis.from_elements(F.shape, rows)
        quotient, _ = quotient_with_map(F, ideal)
        out.append((quotient, size))
    return out


# -- filtration monomial basis for general nilpotent rings ---------------------


@dataclass(frozen=True)
class FiltrationBasisData:
    """Monomial filtration basis of R/pR lifted to R.

    `es` are ordered so that the first d(i) of them span (R/pR)^i for every
    i >= 2; each comes with a word over the first s x-indices.  lam/mu/nu are
    the coefficient tables of x_i x_j (lam on the deep part, mu on the
    level-2 part) and x_i e_j in the e-basis of R/pR.
    """

    profile: FiltrationProfile
    q: tuple[int, ...] | None
    xs_bar: tuple[Element, ...]
    es_bar: tuple[Element, ...]
    words: tuple[tuple[int, ...], ...]
    xs: tuple[Element, ...]
    es: tuple[Element, ...]
    lam: tuple
    mu: tuple
    nu: tuple


def filtration_basis(R: FiniteRing, commutative: bool = False) -> FiltrationBasisData:
    nil_chain = power_chain(R)
    if nil_chain[-1].order > 1:
        raise NotNilpotent("filtration basis requires a nilpotent ring")
    rbar = mod_p_algebra(R)
    p = R.p
    profile = filtration_profile(rbar)
    w, r, s, t, u, m_index = (
        profile.w,
        profile.r,
        profile.s,
        profile.t,
        profile.u,
        profile.m,
    )
    powers = [None, None] + [
        _span_key(_power_subspace(rbar, i), p) for i in range(2, m_index + 1)
    ]
    # cube-zero quotient rbar/rbar^3 and its standard basis
    if u:
        cube_sub = SubgroupBasis.from_elements(
            rbar.shape, _power_subspace(rbar, 3)
        )
        abar, project = quotient_with_map(rbar, cube_sub)
        # linear section of the projection, from the quotient transversal
        section = _quotient_section(rbar, cube_sub, abar, project)
    else:
        abar = rbar
        project = lambda x: x
        section = lambda y: y
    std = standard_basis(abar, commutative)
    assert std.s == s
    xs_bar = [section(x) for x in std.xs]
    level2 = []
    words2 = []
    for (k, l) in std.reps:
        level2.append(rbar.mul(xs_bar[k], xs_bar[l]))
        words2.append((k, l))
    # deeper levels: e's are x_a * e_b with e_b one level up
    levels = [list(zip(level2, words2))]
    for h in range(3, m_index):
        prev = levels[-1]
        target_dim = profile.u_h[h - 2]
        picked = []
        basis_rows = [list(v) for v in _unkey(powers[h + 1] if h + 1 <= m_index else ())]
        bb, pv = fp_rref(basis_rows, p) if basis_rows else ([], [])
        for a in range(s):
            if len(picked) == target_dim:
                break
            qa = std.q[a] if (commutative and std.q is not None) else None
            for idx, (eb, word) in enumerate(prev):
                if h == 3 and commutative and qa is not None and idx >= qa:
                    continue  # level-3 words restricted to b <= u + q_a
                cand = rbar.mul(xs_bar[a], eb)
                if fp_in_span(bb, pv, list(cand), p):
                    continue
                picked.append((cand, (a,) + word))
                bb, pv = fp_rref(bb + [list(cand)], p)
                if len(picked) == target_dim:
                    break
        if len(picked) != target_dim:
            raise FinringError(f"level-{h} monomials fail to span")
        levels.append(picked)
    # assemble: deepest level first so es[0..d(i)-1] spans rbar^i
    es_bar: list[Element] = []
    words: list[tuple[int, ...]] = []
    for level in reversed(levels):
        for e, word in level:
            es_bar.append(e)
            words.append(word)
    # lifts: coordinates carry over (R/pR shares the basis index set)
    xs = [tuple(x) for x in xs_bar]
    es = []
    for word in words:
        acc = R.shape.reduce(xs[word[0]])
        for idx in word[1:]:
            acc = R.mul(acc, R.shape.reduce(xs[idx]))
        es.append(acc)
    lam, mu, nu = _coefficient_tables(rbar, profile, xs_bar, es_bar, p)
    return FiltrationBasisData(
        profile,
        std.q,
        tuple(map(tuple, xs_bar)),
        tuple(map(tuple, es_bar)),
        tuple(words),
        tuple(map(tuple, xs)),
        tuple(es),
        lam,
        mu,
        nu,
    )


def _quotient_section(rbar, cube_sub, abar, project):
    reps = []
    for j in range(abar.m):
        basis_vec = abar.basis(j)
        rep = next(x for x in rbar.elements() if project(x) == basis_vec)
        reps.append(rep)

    def section(y: Element) -> Element:
        acc = rbar.zero()
        for coeff, rep in zip(y, reps):
            acc = rbar.add(acc, rbar.smul(coeff, rep))
        return acc

    return section


def _coefficient_tables(rbar, profile, xs_bar, es_bar, p):
    r, s, t, u = profile.r, profile.s, profile.t, profile.u
    es_list = [list(e) for e in es_bar]
    lam = []
    mu = []
    for i in range(r):
        lam_row = []
        mu_row = []
        for j in range(r):
            coords = _fp_coords_in(es_bar, rbar.mul(xs_bar[i], xs_bar[j]), p)
            lam_row.append(tuple(coords[:u]))
            mu_row.append(tuple(coords[u:u + t]))
        lam.append(tuple(lam_row))
        mu.append(tuple(mu_row))
    nu = []
    for i in range(s):
        nu_row = []
        for j in range(u + t):
            coords = _fp_coords_in(es_bar, rbar.mul(xs_bar[i], es_bar[j]), p)
            nu_row.append(tuple(coords))
        nu.append(tuple(nu_row))
    return tuple(lam), tuple(mu), tuple(nu)


# -- determination engines ------------------------------------------------------


class _Reconstructor:
    """Multiplication rebuilt from designated generator products only.

    The engine sees the additive group, the generators xs/es with the word of
    each e, and the given product lists; everything else is derived through
    associativity and distributivity.
    """

    def __init__(self, shape: AdditiveShape, xs, es, words, s: int):
        self.shape = shape
        self.xs = [shape.reduce(x) for x in xs]
        self.es = [shape.reduce(e) for e in es]
        self.words = list(words)
        self.s = s
        self.gens = self.xs + self.es
        self._decomp_rows = [list(g) for g in self.gens] + [
            [shape.moduli[i] if j == i else 0 for j in range(shape.m)]
            for i in range(shape.m)
        ]
        self.x_products: dict = {}
        self.xe_products: dict = {}
        self._pair_cache: dict = {}

    def decompose(self, elem: Element):
        sol = solve_left(self._decomp_rows, list(elem))
        if sol is None:
            raise FinringError("element escapes the additive generators")
        return sol[: len(self.gens)]

    # generator-pair products ------------------------------------------------

    def gen_product(self, a: int, b: int) -> Element:
        key = (a, b)
        if key in self._pair_cache:
            return self._pair_cache[key]
        nx = len(self.xs)
        if a < nx and b < nx:
            val = self.x_products[(a, b)]
        elif a < nx:
            val = self._x_times_e(a, b - nx)
        elif b < nx:
            val = self._e_times_x(a - nx, b)
        else:
            val = self._e_times_e(a - nx, b - nx)
        self._pair_cache[key] = val
        return val

    def _x_times_e(self, i: int, j: int) -> Element:
        if (i, j) in self.xe_products:
            return self.xe_products[(i, j)]
        if i >= self.s:
            word = self.words[j]
            head = self.x_products[(i, word[0])]
            return self._elem_times_word(head, word[1:])
        raise FinringError(f"underived product x_{i} e_{j}")

    def _e_times_x(self, i: int, j: int) -> Element:
        return self._word_times_x(self.words[i], j)

    def _e_times_e(self, i: int, j: int) -> Element:
        word = self.words[i]
        return self._word_times_elem(word, self.es[j], as_e_index=j)

    # word helpers -----------------------------------------------------------

    def _word_times_x(self, word, j: int) -> Element:
        if len(word) == 1:
            return self.x_products[(word[0], j)]
        tail = self._word_times_x(word[1:], j)
        return self._left_mult(word[0], tail)

    def _word_times_elem(self, word, elem: Element, as_e_index=None) -> Element:
        # word * elem = x_{w0} * (rest * elem)
        if as_e_index is not None and len(word) == 1:
            return self._x_times_generator_e(word[0], as_e_index)
        if len(word) == 1:
            return self._left_mult(word[0], elem)
        inner = self._word_times_elem(word[1:], elem, as_e_index)
        return self._left_mult(word[0], inner)

    def _x_times_generator_e(self, i: int, j: int) -> Element:
        if i < self.s:
            return self.xe_products[(i, j)]
        word = self.words[j]
        head = self.x_products[(i, word[0])]
        return self._elem_times_word(head, word[1:])

    def _elem_times_word(self, elem: Element, word) -> Element:
        acc = elem
        for idx in word:
            acc = self._right_mult(acc, idx)
        return acc

    def _left_mult(self, i: int, elem: Element) -> Element:
        """x_i * elem for i < s, via additive decomposition."""
        coeffs = self.decompose(elem)
        acc = self.shape.zero()
        nx = len(self.xs)
        for g, cf in enumerate(coeffs):
            if cf == 0:
                continue
            if g < nx:
                prod = self.x_products[(i, g)]
            else:
                prod = self._x_times_generator_e(i, g - nx)
            acc = self.shape.add(acc, self.shape.smul(cf, prod))
        return acc

    def _right_mult(self, elem: Element, j: int) -> Element:
        """elem * x_j via additive decomposition."""
        coeffs = self.decompose(elem)
        acc = self.shape.zero()
        nx = len(self.xs)
        for g, cf in enumerate(coeffs):
            if cf == 0:
                continue
            if g < nx:
                prod = self.x_products[(g, j)]
            else:
                prod = self._word_times_x(self.words[g - nx], j)
            acc = self.shape.add(acc, self.shape.smul(cf, prod))
        return acc

    # public multiplication ----------------------------------------------------

    def multiply(self, aelem: Element, belem: Element) -> Element:
        ca = self.decompose(aelem)
        cb = self.decompose(belem)
        acc = self.shape.zero()
        for ga, fa in enumerate(ca):
            if fa == 0:
                continue
            for gb, fb in enumerate(cb):
                if fb == 0:
                    continue
                prod = self.gen_product(ga, gb)
                acc = self.shape.add(acc, self.shape.smul(fa * fb, prod))
        return acc


def reconstruct_noncommutative(R: FiniteRing, data: FiltrationBasisData):
    """Rebuild R's table from the products x_i x_j (all i, j < r) and
    x_i e_j (i < s, all j), per the general determination argument."""
    shape = R.shape
    rr = data.profile.r
    s = data.profile.s
    engine = _Reconstructor(shape, data.xs, data.es, data.words, s)
    for i in range(rr):
        for j in range(rr):
            engine.x_products[(i, j)] = R.mul(data.xs[i], data.xs[j])
    for i in range(s):
        for j in range(len(data.es)):
            engine.xe_products[(i, j)] = R.mul(data.xs[i], data.es[j])
    return _rebuild_table(R, engine)


def reconstruct_commutative(R: FiniteRing, data: FiltrationBasisData):
    """Rebuild a commutative R from the reduced product list: x_i x_j for
    i <= j, x_i e_j for level-2 j up to u + q_i, and x_i e_j for deep j.

    The remaining level-2 products are recovered by downward induction on the
    power of p, using the standard monomial representations."""
    shape = R.shape
    profile = data.profile
    rr, s, t, u = profile.r, profile.s, profile.t, profile.u
    q = list(data.q or [])
    kappa = shape.exponents[0]
    p = shape.p
    n_es = len(data.es)

    given_xx = {}
    for i in range(rr):
        for j in range(i, rr):
            given_xx[(i, j)] = R.mul(data.xs[i], data.xs[j])

    def xx(i, j):
        return given_xx[(min(i, j), max(i, j))]

    given_xe = {}
    for i in range(s):
        for j in range(u + (q[i] if i < len(q) else 0)):
            given_xe[(i, j)] = R.mul(data.xs[i], data.es[j])

    # decomposition rows for the subgroup <e_0..e_cut-1, p e_cut.., p x_*>
    def decompose_over(cut, elem):
        rows = [list(data.es[j]) for j in range(cut)]
        rows += [list(shape.smul(p, data.es[j])) for j in range(cut, n_es)]
        rows += [list(shape.smul(p, x)) for x in data.xs]
        rows += [
            [shape.moduli[i] if jj == i else 0 for jj in range(shape.m)]
            for i in range(shape.m)
        ]
        sol = solve_left(rows, list(elem))
        if sol is None:
            raise FinringError("standard-basis decomposition failed")
        return sol[:cut], sol[cut:n_es], sol[n_es:n_es + rr]

    # T[a][(i,j)] = p^a * (x_i e_j); built downward from a = kappa.  The
    # given-region entries are filled first: derivations only consult the
    # given region of the current level plus the previous level.
    prev: dict = {}
    for a in range(kappa, -1, -1):
        cur: dict = {}
        if a == kappa:
            for i in range(s):
                for j in range(n_es):
                    cur[(i, j)] = shape.zero()
            prev = cur
            continue
        for (i, j), val in given_xe.items():
            cur[(i, j)] = shape.smul(p**a, val)
        for i in range(s):
            for j in range(n_es):
                if (i, j) in cur:
                    continue
                # e_j = x_f x_g with g > i; p^a x_i e_j = p^a x_g (x_i x_f)
                word = data.words[j]
                assert len(word) == 2 and j >= u
                f, g = word
                assert g > i
                low, high, xpart = decompose_over(u + q[g], xx(i, f))
                acc = shape.zero()
                for jj, cf in enumerate(low):
                    if cf:
                        acc = shape.add(acc, shape.smul(cf, cur[(g, jj)]))
                for jj, cf in enumerate(high):
                    if cf:
                        acc = shape.add(acc, shape.smul(cf, prev[(g, u + q[g] + jj)]))
                for c, cf in enumerate(xpart):
                    if cf:
                        acc = shape.add(
                            acc, shape.smul(cf * p ** (a + 1), xx(g, c))
                        )
                cur[(i, j)] = acc
        prev = cur

    engine = _Reconstructor(shape, data.xs, data.es, data.words, s)
    for i in range(rr):
        for j in range(rr):
            engine.x_products[(i, j)] = xx(i, j)
    for i in range(s):
        for j in range(n_es):
            engine.xe_products[(i, j)] = prev[(i, j)]
    return _rebuild_table(R, engine)


def _rebuild_table(R: FiniteRing, engine: _Reconstructor):
    m = R.m
    rebuilt = [
        [list(engine.multiply(R.basis(i), R.basis(j))) for j in range(m)]
        for i in range(m)
    ]
    return make_ring(R.shape, rebuilt)
