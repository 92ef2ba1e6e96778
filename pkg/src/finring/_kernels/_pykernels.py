"""Pure-Python census kernels: the reference implementation.

The compiled extension (_ckernels) mirrors these functions; both operate on
flat integer data so the two backends are interchangeable:

  table:  list/tuple of m^3 ints indexed [(i*m + j)*m + l]
  aut:    pair (A, B) of flat m^2 int lists; row i of A holds the coordinates
          of the new basis element x'_i, B maps old coordinates to new ones
  mono:   triple (perm, units, uinvs) for the entrywise-acting monomial
          automorphisms x'_i = units[i] * x_{perm[i]}
"""

from __future__ import annotations

BACKEND = "python"


def assoc_violation_flat(table, m, moduli):
    """First (i, j, k) with (x_i x_j)x_k != x_i(x_j x_k), or None."""
    for i in range(m):
        for j in range(m):
            base_ij = (i * m + j) * m
            for k in range(m):
                ok = True
                for l in range(m):
                    lhs = 0
                    rhs = 0
                    for t in range(m):
                        ct = table[base_ij + t]
                        if ct:
                            lhs += ct * table[(t * m + k) * m + l]
                        dt = table[(j * m + k) * m + t]
                        if dt:
                            rhs += dt * table[(i * m + t) * m + l]
                    if (lhs - rhs) % moduli[l]:
                        ok = False
                        break
                if not ok:
                    return (i, j, k)
    return None


def canonical_key(table, m, moduli, packed_auts):
    """Lexicographically least transformed table in (l, i, j) traversal order.

    `packed_auts = (naut, flat)` where flat holds, per automorphism, the m^2
    entries of A (new basis rows) followed by the m^2 entries of B (old->new
    coordinate matrix).
    """
    naut, flat_auts = packed_auts
    best = None
    mm = m * m
    traversal = [(l, i, j) for l in range(m) for i in range(m) for j in range(m)]
    for ia in range(naut):
        base = ia * 2 * mm
        A = flat_auts[base:base + mm]
        B = flat_auts[base + mm:base + 2 * mm]
        # Z[i][j][t] = coordinates of x'_i x'_j in the old basis
        z = [0] * (mm * m)
        for i in range(m):
            arow = i * m
            for j in range(m):
                brow = j * m
                zbase = (i * m + j) * m
                for a in range(m):
                    fa = A[arow + a]
                    if not fa:
                        continue
                    for b in range(m):
                        f = fa * A[brow + b]
                        if not f:
                            continue
                        cbase = (a * m + b) * m
                        for t in range(m):
                            ct = table[cbase + t]
                            if ct:
                                z[zbase + t] += f * ct
        # new coordinates via B, compared entrywise in (l, i, j) order
        cand = []
        worse = False
        strictly_better = best is None
        for idx, (l, i, j) in enumerate(traversal):
            zbase = (i * m + j) * m
            v = 0
            for t in range(m):
                zt = z[zbase + t]
                if zt:
                    v += zt * B[t * m + l]
            v %= moduli[l]
            if not strictly_better:
                bv = best[idx]
                if v > bv:
                    worse = True
                    break
                if v < bv:
                    strictly_better = True
            cand.append(v)
        if not worse and strictly_better:
            best = tuple(cand)
    return best


def key_to_table(key, m):
    """Convert an (l, i, j)-ordered key back to a flat (i, j, l) table."""
    table = [0] * (m * m * m)
    idx = 0
    for l in range(m):
        for i in range(m):
            for j in range(m):
                table[(i * m + j) * m + l] = key[idx]
                idx += 1
    return table


def table_key(table, m):
    """(l, i, j)-ordered key of a flat table without any transformation."""
    return tuple(
        table[(i * m + j) * m + l]
        for l in range(m)
        for i in range(m)
        for j in range(m)
    )


def _mono_transformed_entry(table, m, moduli, perm, units, uinvs, i, j, l):
    v = units[i] * units[j] * uinvs[l] * table[(perm[i] * m + perm[j]) * m + perm[l]]
    return v % moduli[l]


def mono_minimal(table, m, moduli, mono_auts):
    """Whether the complete table is minimal in its monomial orbit (row-major)."""
    for perm, units, uinvs in mono_auts:
        verdict = 0
        for i in range(m):
            for j in range(m):
                for l in range(m):
                    tv = _mono_transformed_entry(
                        table, m, moduli, perm, units, uinvs, i, j, l
                    )
                    ov = table[(i * m + j) * m + l]
                    if tv != ov:
                        verdict = -1 if tv < ov else 1
                        break
                if verdict:
                    break
            if verdict:
                break
        if verdict == -1:
            return False
    return True


def enumerate_shape_tables(p, ks, moduli, domains, mono_auts, node_budget=0):
    """All valid tables for one additive shape, up to monomial minimality.

    DFS over products in row-major order with associativity propagation.
    `domains[pos]` lists the allowed value vectors for product position
    pos = i*m + j (the characteristic-compatibility subgroup, sorted).
    Returns flat tables; every isomorphism class of the shape is represented
    by at least one output (its monomial-minimal forms survive).
    """
    m = len(ks)
    mm = m * m
    values: list = [None] * mm
    domain_sets = [set(d) for d in domains]
    out = []
    nodes = 0

    def compute_side(vab, c_fixed, left_side):
        """Sum of vab[l] * table[l][c] (left) or table[a][l] (right) terms.

        Returns (known_vector or None, missing_positions, missing_coeffs)."""
        acc = [0] * m
        missing = []
        coeffs = []
        for l in range(m):
            f = vab[l]
            if not f:
                continue
            pos = l * m + c_fixed if left_side else c_fixed * m + l
            row = values[pos]
            if row is None:
                missing.append(pos)
                coeffs.append(f)
            else:
                for t in range(m):
                    acc[t] += f * row[t]
        return acc, missing, coeffs

    def propagate(trail):
        changed = True
        while changed:
            changed = False
            for a in range(m):
                for b in range(m):
                    vab = values[a * m + b]
                    if vab is None:
                        continue
                    for c in range(m):
                        vbc = values[b * m + c]
                        if vbc is None:
                            continue
                        lacc, lmiss, lcoef = compute_side(vab, c, True)
                        racc, rmiss, rcoef = compute_side(vbc, a, False)
                        nmiss = len(lmiss) + len(rmiss)
                        if nmiss == 0:
                            if any((x - y) % q for x, y, q in zip(lacc, racc, moduli)):
                                return False
                            continue
                        if nmiss != 1:
                            continue
                        if lmiss:
                            pos, w, sign = lmiss[0], lcoef[0], -1
                        else:
                            pos, w, sign = rmiss[0], rcoef[0], 1
                        if w % p == 0:
                            continue
                        val = []
                        solvable = True
                        for t in range(m):
                            q = moduli[t]
                            winv = pow(w % q, -1, q) if q > 1 else 0
                            diff = (lacc[t] - racc[t]) * sign
                            val.append((winv * diff) % q)
                        val = tuple(val)
                        if val not in domain_sets[pos]:
                            return False
                        values[pos] = val
                        trail.append(pos)
                        changed = True
        return True

    def mono_prune_partial():
        # positions must be compared in order; an undetermined entry ends the
        # comparison for this automorphism (decided = 2 means inconclusive)
        for perm, units, uinvs in mono_auts:
            decided = 0
            for i in range(m):
                for j in range(m):
                    ov = values[i * m + j]
                    sv = values[perm[i] * m + perm[j]]
                    if ov is None or sv is None:
                        decided = 2
                        break
                    f = units[i] * units[j]
                    tv = tuple(
                        (f * uinvs[l] * sv[perm[l]]) % moduli[l] for l in range(m)
                    )
                    if tv != ov:
                        decided = -1 if tv < ov else 1
                        break
                if decided:
                    break
            if decided == -1:
                return True
        return False

    def rec():
        nonlocal nodes
        nodes += 1
        if node_budget and nodes > node_budget:
            raise RuntimeError("enumeration node budget exceeded")
        pos = next((t for t in range(mm) if values[t] is None), None)
        if pos is None:
            flat = []
            for t in range(mm):
                flat.extend(values[t])
            if assoc_violation_flat(flat, m, moduli) is None and mono_minimal(
                flat, m, moduli, mono_auts
            ):
                out.append(tuple(flat))
            return
        for val in domains[pos]:
            values[pos] = val
            trail = []
            if propagate(trail) and not mono_prune_partial():
                rec()
            for t in trail:
                values[t] = None
            values[pos] = None

    rec()
    return out


def iso_matrix(table1, table2, m, moduli, ks, p, candidates):
    """Basis-image matrix of an additive iso carrying table1 to table2, or None.

    `candidates[i]` lists the allowed images (coordinate tuples in ring 2) of
    basis element i: the elements of additive order p^ks[i].  Works for
    arbitrary bilinear tables; no associativity is assumed.
    """
    images: list = [None] * m
    spans = [{(0,) * m}]

    def mul2(a, b):
        out = [0] * m
        for i in range(m):
            ai = a[i]
            if not ai:
                continue
            for j in range(m):
                f = ai * b[j]
                if not f:
                    continue
                base = (i * m + j) * m
                for l in range(m):
                    out[l] += f * table2[base + l]
        return tuple(x % q for x, q in zip(out, moduli))

    def image_of(vec):
        acc = [0] * m
        for l in range(m):
            f = vec[l]
            if not f:
                continue
            g = images[l]
            for t in range(m):
                acc[t] += f * g[t]
        return tuple(x % q for x, q in zip(acc, moduli))

    def products_ok(upto):
        # check every pair whose factors and product support are all assigned
        for a in range(upto + 1):
            for b in range(upto + 1):
                vec = table1[(a * m + b) * m:(a * m + b) * m + m]
                if any(vec[l] and images[l] is None for l in range(m)):
                    continue
                if mul2(images[a], images[b]) != image_of(vec):
                    return False
        return True

    def rec(i):
        if i == m:
            # full verification of every product
            for a in range(m):
                for b in range(m):
                    vec = table1[(a * m + b) * m:(a * m + b) * m + m]
                    if mul2(images[a], images[b]) != image_of(vec):
                        return False
            return True
        span = spans[-1]
        target = len(span) * (p ** ks[i])
        for cand in candidates[i]:
            if cand in span:
                continue
            new_span = set()
            order = p ** ks[i]
            for s in span:
                acc = s
                new_span.add(s)
                for _ in range(order - 1):
                    acc = tuple((x + y) % q for x, y, q in zip(acc, cand, moduli))
                    new_span.add(acc)
            if len(new_span) != target:
                continue
            images[i] = cand
            if products_ok(i):
                spans.append(new_span)
                if rec(i + 1):
                    return True
                spans.pop()
            images[i] = None
        return False

    if rec(0):
        flat = []
        for g in images:
            flat.extend(g)
        return flat
    return None
