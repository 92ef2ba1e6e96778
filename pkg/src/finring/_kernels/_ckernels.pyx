# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled census kernels; mirrors _pykernels exactly (see its docstring)."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

BACKEND = "c"

DEF MAXM = 8
DEF MAXMM = 64
DEF MAXT = 512          # m^3
DEF MAXORDER = 4096
DEF MAXAUTS = 1024      # monomial automorphisms


cdef long long _mod(long long a, long long q) nogil:
    cdef long long r = a % q
    if r < 0:
        r += q
    return r


cdef long long _pow_ll(long long b, long long e, long long q) nogil:
    cdef long long acc = 1 % q
    cdef long long base = _mod(b, q)
    while e > 0:
        if e & 1:
            acc = (acc * base) % q
        base = (base * base) % q
        e >>= 1
    return acc


cdef long long _inv_mod(long long w, long long q) nogil:
    # q = p^k; w a unit: inverse via Euler (phi = q - q/p needs p; use
    # extended Euclid instead, q < 2^12 so iterative xgcd is cheap)
    cdef long long a = _mod(w, q), b = q
    cdef long long x0 = 1, x1 = 0, qt, tmp
    while b:
        qt = a / b
        tmp = a - qt * b; a = b; b = tmp
        tmp = x0 - qt * x1; x0 = x1; x1 = tmp
    return _mod(x0, q)


# -- associativity -------------------------------------------------------------


cdef int _assoc_violation(long long* table, int m, long long* moduli,
                          int* out_ijk) nogil:
    cdef int i, j, k, l, t
    cdef long long lhs, rhs, ct, dt
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    lhs = 0
                    rhs = 0
                    for t in range(m):
                        ct = table[(i * m + j) * m + t]
                        if ct:
                            lhs += ct * table[(t * m + k) * m + l]
                        dt = table[(j * m + k) * m + t]
                        if dt:
                            rhs += dt * table[(i * m + t) * m + l]
                    if _mod(lhs - rhs, moduli[l]):
                        out_ijk[0] = i
                        out_ijk[1] = j
                        out_ijk[2] = k
                        return 1
    return 0


def assoc_violation_flat(table, int m, moduli):
    cdef long long ctable[MAXT]
    cdef long long cmod[MAXM]
    cdef int ijk[3]
    cdef int t
    for t in range(m * m * m):
        ctable[t] = table[t]
    for t in range(m):
        cmod[t] = moduli[t]
    if _assoc_violation(ctable, m, cmod, ijk):
        return (ijk[0], ijk[1], ijk[2])
    return None


# -- canonical key --------------------------------------------------------------


def canonical_key(table, int m, moduli, packed_auts):
    cdef int naut = packed_auts[0]
    cdef long long[::1] flat
    try:
        flat = packed_auts[1]
    except (TypeError, ValueError):
        import array as _array
        flat = _array.array("q", list(packed_auts[1]))
    cdef long long ctable[MAXT]
    cdef long long cmod[MAXM]
    cdef long long z[MAXT]
    cdef long long best[MAXT]
    cdef long long cand[MAXT]
    cdef int t, ia, i, j, l, a, b, idx
    cdef int mm = m * m
    cdef int total = mm * m
    cdef long long fa, f, ct, v, bv
    cdef bint have_best = False, worse, strictly_better
    cdef const long long* A
    cdef const long long* B
    for t in range(total):
        ctable[t] = table[t]
    for t in range(m):
        cmod[t] = moduli[t]
    for ia in range(naut):
        A = &flat[ia * 2 * mm]
        B = &flat[ia * 2 * mm + mm]
        for t in range(total):
            z[t] = 0
        for i in range(m):
            for j in range(m):
                for a in range(m):
                    fa = A[i * m + a]
                    if not fa:
                        continue
                    for b in range(m):
                        f = fa * A[j * m + b]
                        if not f:
                            continue
                        for t in range(m):
                            ct = ctable[(a * m + b) * m + t]
                            if ct:
                                z[(i * m + j) * m + t] += f * ct
        worse = False
        strictly_better = not have_best
        idx = 0
        for l in range(m):
            for i in range(m):
                for j in range(m):
                    v = 0
                    for t in range(m):
                        ct = z[(i * m + j) * m + t]
                        if ct:
                            v += ct * B[t * m + l]
                    v = _mod(v, cmod[l])
                    if not strictly_better:
                        bv = best[idx]
                        if v > bv:
                            worse = True
                            break
                        if v < bv:
                            strictly_better = True
                    cand[idx] = v
                    idx += 1
                if worse:
                    break
            if worse:
                break
        if (not worse) and strictly_better:
            for t in range(total):
                best[t] = cand[t]
            have_best = True
    if not have_best:
        return None
    return tuple(best[t] for t in range(total))


# -- monomial minimality ---------------------------------------------------------


cdef int _mono_cmp_full(long long* table, int m, long long* moduli,
                        int* perm, long long* units, long long* uinvs) nogil:
    """-1 if transformed < original, 1 if >, 0 if equal."""
    cdef int i, j, l
    cdef long long tv, ov
    for i in range(m):
        for j in range(m):
            for l in range(m):
                tv = _mod(units[i] * units[j] * uinvs[l]
                          * table[(perm[i] * m + perm[j]) * m + perm[l]],
                          moduli[l])
                ov = table[(i * m + j) * m + l]
                if tv != ov:
                    return -1 if tv < ov else 1
    return 0


def mono_minimal(table, int m, moduli, mono_auts):
    cdef long long ctable[MAXT]
    cdef long long cmod[MAXM]
    cdef int perm[MAXM]
    cdef long long units[MAXM]
    cdef long long uinvs[MAXM]
    cdef int t
    for t in range(m * m * m):
        ctable[t] = table[t]
    for t in range(m):
        cmod[t] = moduli[t]
    for pa, ua, va in mono_auts:
        for t in range(m):
            perm[t] = pa[t]
            units[t] = ua[t]
            uinvs[t] = va[t]
        if _mono_cmp_full(ctable, m, cmod, perm, units, uinvs) == -1:
            return False
    return True


# -- shape enumeration ------------------------------------------------------------


cdef struct EnumState:
    int m
    int mm
    long long p
    long long moduli[MAXM]
    long long step[MAXMM][MAXM]      # allowed-value step per position/coordinate
    long long values[MAXMM][MAXM]
    char assigned[MAXMM]
    int nmono
    int mperm[MAXAUTS][MAXM]
    long long munits[MAXAUTS][MAXM]
    long long muinvs[MAXAUTS][MAXM]
    long long node_budget
    long long nodes


cdef int _propagate(EnumState* st, int* trail, int* ntrail) nogil:
    cdef int m = st.m
    cdef int changed = 1
    cdef int a, b, c, l, t, pos
    cdef long long lacc[MAXM]
    cdef long long racc[MAXM]
    cdef long long val[MAXM]
    cdef int lmiss, rmiss, miss_pos
    cdef long long miss_coef, f, w, winv, diff, q
    cdef int sign, ok
    while changed:
        changed = 0
        for a in range(m):
            for b in range(m):
                if not st.assigned[a * m + b]:
                    continue
                for c in range(m):
                    if not st.assigned[b * m + c]:
                        continue
                    # lhs: sum over l of vab[l] * values[l*m+c]
                    lmiss = 0
                    rmiss = 0
                    miss_pos = -1
                    miss_coef = 0
                    sign = 0
                    for t in range(m):
                        lacc[t] = 0
                        racc[t] = 0
                    for l in range(m):
                        f = st.values[a * m + b][l]
                        if f:
                            pos = l * m + c
                            if st.assigned[pos]:
                                for t in range(m):
                                    lacc[t] += f * st.values[pos][t]
                            else:
                                lmiss += 1
                                miss_pos = pos
                                miss_coef = f
                                sign = -1
                        f = st.values[b * m + c][l]
                        if f:
                            pos = a * m + l
                            if st.assigned[pos]:
                                for t in range(m):
                                    racc[t] += f * st.values[pos][t]
                            else:
                                rmiss += 1
                                miss_pos = pos
                                miss_coef = f
                                sign = 1
                    if lmiss + rmiss == 0:
                        for t in range(m):
                            if _mod(lacc[t] - racc[t], st.moduli[t]):
                                return 0
                        continue
                    if lmiss + rmiss != 1:
                        continue
                    if miss_coef % st.p == 0:
                        continue
                    ok = 1
                    for t in range(m):
                        q = st.moduli[t]
                        winv = _inv_mod(miss_coef, q)
                        diff = (lacc[t] - racc[t]) * sign
                        val[t] = _mod(winv * diff, q)
                        if val[t] % st.step[miss_pos][t]:
                            ok = 0
                            break
                    if not ok:
                        return 0
                    for t in range(m):
                        st.values[miss_pos][t] = val[t]
                    st.assigned[miss_pos] = 1
                    trail[ntrail[0]] = miss_pos
                    ntrail[0] += 1
                    changed = 1
    return 1


cdef int _mono_prune_partial(EnumState* st) nogil:
    cdef int m = st.m
    cdef int ia, i, j, l, decided, src, dst
    cdef long long f, tv, ov
    for ia in range(st.nmono):
        decided = 0
        for i in range(m):
            for j in range(m):
                dst = i * m + j
                src = st.mperm[ia][i] * m + st.mperm[ia][j]
                if (not st.assigned[dst]) or (not st.assigned[src]):
                    decided = 2  # inconclusive: stop comparing this aut
                    break
                f = st.munits[ia][i] * st.munits[ia][j]
                for l in range(m):
                    tv = _mod(f * st.muinvs[ia][l]
                              * st.values[src][st.mperm[ia][l]], st.moduli[l])
                    ov = st.values[dst][l]
                    if tv != ov:
                        decided = -1 if tv < ov else 1
                        break
                if decided:
                    break
            if decided:
                break
        if decided == -1:
            return 1
    return 0


cdef void _emit(EnumState* st, list out):
    cdef int t, l
    flat = []
    for t in range(st.mm):
        for l in range(st.m):
            flat.append(st.values[t][l])
    out.append(tuple(flat))


cdef int _enum_rec(EnumState* st, list out) except -1:
    cdef int m = st.m
    cdef int pos = -1
    cdef int t, l, ok
    cdef long long ncands, ci, rest
    cdef int trail[MAXMM]
    cdef int ntrail
    cdef long long flat_table[MAXT]
    cdef int ijk[3]
    cdef int mono_ok

    st.nodes += 1
    if st.node_budget and st.nodes > st.node_budget:
        raise RuntimeError("enumeration node budget exceeded")
    for t in range(st.mm):
        if not st.assigned[t]:
            pos = t
            break
    if pos == -1:
        for t in range(st.mm):
            for l in range(m):
                flat_table[t * m + l] = st.values[t][l]
        if _assoc_violation(flat_table, m, st.moduli, ijk):
            return 0
        mono_ok = 1
        for t in range(st.nmono):
            if _mono_cmp_full(flat_table, m, st.moduli,
                              st.mperm[t], st.munits[t], st.muinvs[t]) == -1:
                mono_ok = 0
                break
        if mono_ok:
            _emit(st, out)
        return 0
    ncands = 1
    for l in range(m):
        ncands *= st.moduli[l] / st.step[pos][l]
    for ci in range(ncands):
        # decode candidate ci into a value vector, coordinate 0 most significant
        rest = ci
        for l in range(m - 1, -1, -1):
            st.values[pos][l] = (rest % (st.moduli[l] / st.step[pos][l])) \
                * st.step[pos][l]
            rest /= st.moduli[l] / st.step[pos][l]
        st.assigned[pos] = 1
        ntrail = 0
        ok = _propagate(st, trail, &ntrail)
        if ok and not _mono_prune_partial(st):
            _enum_rec(st, out)
        for t in range(ntrail):
            st.assigned[trail[t]] = 0
        st.assigned[pos] = 0
    return 0


def enumerate_shape_tables(p, ks, moduli, domains, mono_auts, node_budget=0):
    cdef EnumState st
    cdef int m = len(ks)
    cdef int i, j, l, t, kij
    if m > MAXM:
        raise ValueError("shape rank exceeds kernel capacity")
    if len(mono_auts) > MAXAUTS:
        raise ValueError("monomial automorphism count exceeds kernel capacity")
    memset(&st, 0, sizeof(st))
    st.m = m
    st.mm = m * m
    st.p = p
    st.node_budget = node_budget
    st.nodes = 0
    for l in range(m):
        st.moduli[l] = moduli[l]
    for i in range(m):
        for j in range(m):
            kij = min(ks[i], ks[j])
            for l in range(m):
                step = p ** max(0, ks[l] - kij)
                st.step[i * m + j][l] = step
    st.nmono = len(mono_auts)
    for t in range(st.nmono):
        pa, ua, va = mono_auts[t]
        for l in range(m):
            st.mperm[t][l] = pa[l]
            st.munits[t][l] = ua[l]
            st.muinvs[t][l] = va[l]
    out: list = []
    _enum_rec(&st, out)
    return out


# -- isomorphism search ------------------------------------------------------------


cdef struct IsoState:
    int m
    long long p
    long long moduli[MAXM]
    long long strides[MAXM]
    int ks[MAXM]
    long long t1[MAXT]
    long long t2[MAXT]
    long long images[MAXM][MAXM]
    char have_image[MAXM]
    char spans[MAXM + 1][MAXORDER]
    long long span_sizes[MAXM + 1]
    long long group_order


cdef long long _encode(IsoState* st, long long* vec) nogil:
    cdef long long idx = 0
    cdef int l
    for l in range(st.m):
        idx += vec[l] * st.strides[l]
    return idx


cdef void _mul2(IsoState* st, long long* a, long long* b, long long* out) nogil:
    cdef int i, j, l
    cdef long long f
    for l in range(st.m):
        out[l] = 0
    for i in range(st.m):
        if not a[i]:
            continue
        for j in range(st.m):
            f = a[i] * b[j]
            if not f:
                continue
            for l in range(st.m):
                out[l] += f * st.t2[(i * st.m + j) * st.m + l]
    for l in range(st.m):
        out[l] = _mod(out[l], st.moduli[l])


cdef int _image_of(IsoState* st, long long* vec, long long* out) nogil:
    cdef int l, t
    for t in range(st.m):
        out[t] = 0
    for l in range(st.m):
        if vec[l]:
            if not st.have_image[l]:
                return 0
            for t in range(st.m):
                out[t] += vec[l] * st.images[l][t]
    for t in range(st.m):
        out[t] = _mod(out[t], st.moduli[t])
    return 1


cdef int _products_ok(IsoState* st, int upto) nogil:
    cdef int a, b, l
    cdef long long vec[MAXM]
    cdef long long img[MAXM]
    cdef long long prod[MAXM]
    cdef int supported
    for a in range(upto + 1):
        for b in range(upto + 1):
            supported = 1
            for l in range(st.m):
                vec[l] = st.t1[(a * st.m + b) * st.m + l]
                if vec[l] and not st.have_image[l]:
                    supported = 0
                    break
            if not supported:
                continue
            if not _image_of(st, vec, img):
                continue
            _mul2(st, st.images[a], st.images[b], prod)
            for l in range(st.m):
                if prod[l] != img[l]:
                    return 0
    return 1


cdef int _iso_rec(IsoState* st, int i, list candidates) except -1:
    cdef int m = st.m
    cdef int a, b, l, t
    cdef long long order, target, size, newsize, idx
    cdef long long acc[MAXM]
    cdef long long cvec[MAXM]
    cdef long long vec[MAXM]
    cdef long long img[MAXM]
    cdef long long prod[MAXM]
    if i == m:
        for a in range(m):
            for b in range(m):
                for l in range(m):
                    vec[l] = st.t1[(a * m + b) * m + l]
                if not _image_of(st, vec, img):
                    return 0
                _mul2(st, st.images[a], st.images[b], prod)
                for l in range(m):
                    if prod[l] != img[l]:
                        return 0
        return 1
    order = 1
    for t in range(st.ks[i]):
        order *= st.p
    target = st.span_sizes[i] * order
    for cand in candidates[i]:
        for l in range(m):
            cvec[l] = cand[l]
        idx = _encode(st, cvec)
        if st.spans[i][idx]:
            continue
        # grow the span: new = {s + t*cand}
        for t in range(st.group_order):
            st.spans[i + 1][t] = st.spans[i][t]
        newsize = st.span_sizes[i]
        for l in range(m):
            acc[l] = cvec[l]
        for t in range(order - 1):
            for idx in range(st.group_order):
                if st.spans[i][idx]:
                    # decode idx (coordinate 0 most significant), add acc, set bit
                    size = idx
                    for l in range(m):
                        vec[l] = size / st.strides[l]
                        size -= vec[l] * st.strides[l]
                    for l in range(m):
                        vec[l] = (vec[l] + acc[l]) % st.moduli[l]
                    size = _encode(st, vec)
                    if not st.spans[i + 1][size]:
                        st.spans[i + 1][size] = 1
                        newsize += 1
            for l in range(m):
                acc[l] = (acc[l] + cvec[l]) % st.moduli[l]
        if newsize != target:
            continue
        for l in range(m):
            st.images[i][l] = cvec[l]
        st.have_image[i] = 1
        if _products_ok(st, i):
            st.span_sizes[i + 1] = newsize
            if _iso_rec(st, i + 1, candidates):
                return 1
        st.have_image[i] = 0
    return 0


def iso_matrix(table1, table2, int m, moduli, ks, p, candidates):
    cdef IsoState* st = <IsoState*> malloc(sizeof(IsoState))
    if st == NULL:
        raise MemoryError()
    cdef int l, t
    cdef long long stride = 1
    try:
        memset(st, 0, sizeof(IsoState))
        st.m = m
        st.p = p
        for l in range(m):
            st.moduli[l] = moduli[l]
            st.ks[l] = ks[l]
        for l in range(m - 1, -1, -1):
            st.strides[l] = stride
            stride *= st.moduli[l]
        st.group_order = stride
        if st.group_order > MAXORDER:
            raise ValueError("group order exceeds kernel capacity")
        for t in range(m * m * m):
            st.t1[t] = table1[t]
            st.t2[t] = table2[t]
        st.spans[0][0] = 1
        st.span_sizes[0] = 1
        if _iso_rec(st, 0, list(candidates)):
            flat = []
            for l in range(m):
                for t in range(m):
                    flat.append(st.images[l][t])
            return flat
        return None
    finally:
        free(st)


def key_to_table(key, int m):
    table = [0] * (m * m * m)
    idx = 0
    for l in range(m):
        for i in range(m):
            for j in range(m):
                table[(i * m + j) * m + l] = key[idx]
                idx += 1
    return table


def table_key(table, int m):
    return tuple(
        table[(i * m + j) * m + l]
        for l in range(m)
        for i in range(m)
        for j in range(m)
    )
