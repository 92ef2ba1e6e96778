"""Exact integer linear algebra: Hermite/Smith forms and congruence solving.

All matrices are lists of row lists over Z.  Sizes stay tiny (the additive
groups have at most ~8 generators), so the classic textbook algorithms are
used without any fraction-free tricks.
"""

from __future__ import annotations


def hnf(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns an echelon basis: pivots move strictly right, pivot entries are
    positive, and entries above each pivot are reduced into [0, pivot).
    Zero rows are dropped.
    """
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while col < ncols and work:
        pivots = [r for r in work if r[col] != 0]
        if not pivots:
            col += 1
            continue
        rest = [r for r in work if r[col] == 0]
        # gcd-combine all rows with a nonzero entry in this column
        piv = pivots[0]
        for r in pivots[1:]:
            piv, r = _gcd_rows(piv, r, col)
            if any(r):
                rest.append(r)
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
        col += 1
    # back-reduce entries above pivots, left pivot first so later columns stay reduced
    for bi in range(len(basis)):
        pcol = next(c for c in range(ncols) if basis[bi][c] != 0)
        pval = basis[bi][pcol]
        for bj in range(bi):
            q = basis[bj][pcol] // pval
            if q:
                basis[bj] = [a - q * b for a, b in zip(basis[bj], basis[bi])]
    return basis


def _gcd_rows(a: list[int], b: list[int], col: int) -> tuple[list[int], list[int]]:
    """Return (pivot_row, reduced_row) with reduced_row[col] == 0."""
    while b[col] != 0:
        q = a[col] // b[col]
        a = [x - q * y for x, y in zip(a, b)]
        a, b = b, a
    return a, b


def hnf_with_transform(
    rows: list[list[int]], ncols: int
) -> tuple[list[list[int]], list[list[int]]]:
    """HNF plus a transform U with U * rows == hnf (zero rows kept at the end)."""
    nr = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(nr)] for i in range(nr)]
    red = _hnf_inplace(aug, ncols)
    h = [r[:ncols] for r in red]
    u = [r[ncols:] for r in red]
    return h, u


def _hnf_inplace(aug: list[list[int]], ncols: int) -> list[list[int]]:
    """HNF on the first `ncols` columns, carrying the remaining columns along."""
    work = list(aug)
    out: list[list[int]] = []
    col = 0
    while col < ncols:
        pivots = [r for r in work if r[col] != 0]
        if not pivots:
            col += 1
            continue
        rest = [r for r in work if r[col] == 0]
        piv = pivots[0]
        for r in pivots[1:]:
            piv, r = _gcd_rows(piv, r, col)
            rest.append(r)
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        work = rest
        col += 1
    for bi in range(len(out)):
        pcol = next(c for c in range(ncols) if out[bi][c] != 0)
        pval = out[bi][pcol]
        for bj in range(bi):
            q = out[bj][pcol] // pval
            if q:
                out[bj] = [a - q * b for a, b in zip(out[bj], out[bi])]
    return out + work


def staircase_solve(h: list[list[int]], target: list[int]) -> list[int] | None:
    """Solve q * h == target over Z for an echelon basis `h` (from hnf)."""
    t = list(target)
    ncols = len(target)
    coeffs = []
    for row in h:
        pcol = next((c for c in range(ncols) if row[c] != 0), None)
        if pcol is None:
            coeffs.append(0)
            continue
        if t[pcol] % row[pcol] != 0:
            return None
        q = t[pcol] // row[pcol]
        coeffs.append(q)
        if q:
            t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    return coeffs


def solve_left(rows: list[list[int]], target: list[int]) -> list[int] | None:
    """Find integer x with x * rows == target, or None."""
    if not rows:
        return None if any(target) else []
    h, u = hnf_with_transform(rows, len(target))
    q = staircase_solve(h, target)
    if q is None:
        return None
    n = len(rows)
    x = [0] * n
    for qi, urow in zip(q, u):
        for k in range(n):
            x[k] += qi * urow[k]
    return x


def snf_with_transforms(
    mat: list[list[int]],
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form of a square integer matrix.

    Returns (diag, q, qinv) where P*mat*Q is diagonal with diag[i] | diag[i+1]
    for some unimodular P (not returned), Q is unimodular and qinv = Q^-1.
    Only the column transform is needed by callers.
    """
    n = len(mat)
    a = [list(r) for r in mat]
    q = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    qinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_addmul(dst: int, src: int, f: int) -> None:
        # column op A := A * E  (col dst += f * col src); Q := Q*E; Qinv := E^-1*Qinv
        for r in a:
            r[dst] += f * r[src]
        for r in q:
            r[dst] += f * r[src]
        qinv[src] = [x - f * y for x, y in zip(qinv[src], qinv[dst])]

    def col_swap(c1: int, c2: int) -> None:
        for r in a:
            r[c1], r[c2] = r[c2], r[c1]
        for r in q:
            r[c1], r[c2] = r[c2], r[c1]
        qinv[c1], qinv[c2] = qinv[c2], qinv[c1]

    def col_neg(c: int) -> None:
        for r in a:
            r[c] = -r[c]
        for r in q:
            r[c] = -r[c]
        qinv[c] = [-x for x in qinv[c]]

    def row_addmul(dst: int, src: int, f: int) -> None:
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]

    def row_swap(r1: int, r2: int) -> None:
        a[r1], a[r2] = a[r2], a[r1]

    for k in range(n):
        while True:
            # smallest nonzero entry in the trailing block becomes the pivot
            pr = pc = -1
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    v = abs(a[i][j])
                    if v and (best is None or v < best):
                        best, pr, pc = v, i, j
            if best is None:
                break
            if pr != k:
                row_swap(pr, k)
            if pc != k:
                col_swap(pc, k)
            if a[k][k] < 0:
                col_neg(k)
            piv = a[k][k]
            for i in range(k + 1, n):
                if a[i][k]:
                    row_addmul(i, k, -(a[i][k] // piv))
            for j in range(k + 1, n):
                if a[k][j]:
                    col_addmul(j, k, -(a[k][j] // piv))
            if any(a[i][k] for i in range(k + 1, n)) or any(
                a[k][j] for j in range(k + 1, n)
            ):
                continue  # remainders left; pivot will shrink next pass
            bad = next(
                (
                    i
                    for i in range(k + 1, n)
                    if any(a[i][j] % piv for j in range(k + 1, n))
                ),
                None,
            )
            if bad is None:
                break
            row_addmul(k, bad, 1)  # pull a non-divisible entry into the pivot row
    diag = [a[i][i] for i in range(n)]
    return diag, q, qinv


def fp_rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; returns (basis rows, pivot columns)."""
    work = [[x % p for x in r] for r in rows]
    ncols = len(work[0]) if work else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in work:
        for brow, bcol in zip(basis, pivots):
            f = row[bcol]
            if f:
                row = [(a - f * b) % p for a, b in zip(row, brow)]
        pcol = next((c for c in range(ncols) if row[c]), None)
        if pcol is None:
            continue
        inv = pow(row[pcol], -1, p)
        row = [(a * inv) % p for a in row]
        # insert keeping pivot columns sorted
        pos = next((i for i, c in enumerate(pivots) if c > pcol), len(pivots))
        basis.insert(pos, row)
        pivots.insert(pos, pcol)
        for i, (brow, bcol) in enumerate(zip(basis, pivots)):
            if bcol == pcol:
                continue
            f = brow[pcol]
            if f:
                basis[i] = [(a - f * b) % p for a, b in zip(brow, row)]
    return basis, pivots


def fp_in_span(basis: list[list[int]], pivots: list[int], vec: list[int], p: int) -> bool:
    """Membership of vec in the row space described by an fp_rref basis."""
    row = [x % p for x in vec]
    for brow, bcol in zip(basis, pivots):
        f = row[bcol]
        if f:
            row = [(a - f * b) % p for a, b in zip(row, brow)]
    return not any(row)
