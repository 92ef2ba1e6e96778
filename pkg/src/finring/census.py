"""Isomorphism testing, canonical forms, and the ring census.

Canonical form: the lexicographically least structure-constant table over all
valid bases of the additive group, read in (l, i, j) traversal order.  The
census enumerates one record per isomorphism class, with a naive generate-
and-partition strategy and a pruned depth-first strategy that must agree.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from dataclasses import dataclass
from functools import lru_cache

from . import _kernels
from .core import (
    AdditiveShape,
    Element,
    FiniteRing,
    find_identity,
    is_nilpotent,
    make_ring,
    power_chain,
)
from .errors import BudgetExceeded, ChecksumMismatch, FinringError, ParseError
from .flatten import FpTable

DEFAULT_BUDGET = 64
NAIVE_TABLE_LIMIT = 1 << 17


def order_budget() -> int:
    env = os.environ.get("FINRING_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# -- flat table helpers -------------------------------------------------------


def flat_table(R: FiniteRing) -> list[int]:
    m = R.m
    flat = []
    for i in range(m):
        for j in range(m):
            flat.extend(R.c[i][j])
    return flat


def ring_from_flat(shape: AdditiveShape, flat) -> FiniteRing:
    m = shape.m
    c = [
        [
            [flat[(i * m + j) * m + l] for l in range(m)]
            for j in range(m)
        ]
        for i in range(m)
    ]
    return make_ring(shape, c)


# -- automorphisms of the additive group -------------------------------------


def _matrix_adjugate_inverse(A: list[list[int]], modulus: int, p: int):
    """Inverse of A modulo `modulus` (valid when det(A) is a unit mod p)."""
    m = len(A)

    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        total = 0
        for j in range(len(mat)):
            if mat[0][j] == 0:
                continue
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            total += (-1) ** j * mat[0][j] * det(minor)
        return total

    d = det(A) % modulus
    if math.gcd(d, p) != 1:
        return None
    dinv = pow(d, -1, modulus)
    inv = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [
                [A[r][c] for c in range(m) if c != i]
                for r in range(m)
                if r != j
            ]
            cof = (-1) ** (i + j) * (det(minor) if minor else 1)
            inv[i][j] = (cof * dinv) % modulus
    return inv


@lru_cache(maxsize=None)
def automorphism_tables(p: int, exponents: tuple[int, ...]):
    """All valid bases of the additive group, as (A, B) flat matrix pairs.

    A row i holds the coordinates of the new basis element x'_i; B converts
    old coordinates to new ones.  Cached per shape; sizes stay desk-scale
    (|GL(4,2)| = 20160 is the largest the test suite touches).
    """
    shape = AdditiveShape(p, exponents)
    m = shape.m
    moduli = shape.moduli
    by_order: dict[int, list[Element]] = {}
    for x in shape.elements():
        by_order.setdefault(shape.element_order(x), []).append(x)
    results: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    images: list[Element] = []

    def spans_grow(cand: Element, span: frozenset, order: int) -> frozenset | None:
        new = set(span)
        acc = cand
        for _ in range(order - 1):
            new.update(tuple((s[t] + acc[t]) % moduli[t] for t in range(m)) for s in span)
            acc = shape.add(acc, cand)
        new_f = frozenset(new)
        if len(new_f) == len(span) * order:
            return new_f
        return None

    def rec(i: int, span: frozenset):
        if i == m:
            A = [list(g) for g in images]
            modulus = moduli[0]
            inv = _matrix_adjugate_inverse(A, modulus, p)
            if inv is None:
                return
            Aflat = tuple(v for row in A for v in row)
            Bflat = tuple(v for row in inv for v in row)
            results.append((Aflat, Bflat))
            return
        order = moduli[i]
        for cand in by_order[order]:
            grown = spans_grow(cand, span, order)
            if grown is None:
                continue
            images.append(cand)
            rec(i + 1, grown)
            images.pop()

    rec(0, frozenset({shape.zero()}))
    return tuple(results)


def monomial_automorphisms(p: int, exponents: tuple[int, ...]):
    """Shape-preserving permutations combined with unit scalings."""
    m = len(exponents)
    moduli = [p**k for k in exponents]
    unit_lists = [[u for u in range(1, q) if u % p != 0] for q in moduli]
    autos = []
    for perm in itertools.permutations(range(m)):
        if any(exponents[perm[i]] != exponents[i] for i in range(m)):
            continue
        for units in itertools.product(*unit_lists):
            uinvs = tuple(pow(u, -1, q) if q > 1 else 0 for u, q in zip(units, moduli))
            autos.append((tuple(perm), tuple(units), uinvs))
    return autos


# -- canonical form and isomorphism -------------------------------------------


@lru_cache(maxsize=None)
def _packed_automorphisms(p: int, exponents: tuple[int, ...]):
    from array import array

    auts = automorphism_tables(p, exponents)
    flat = array("q")
    for A, B in auts:
        flat.extend(A)
        flat.extend(B)
    return len(auts), flat


def canonical_key(R: FiniteRing) -> tuple[int, ...]:
    packed = _packed_automorphisms(R.p, R.shape.exponents)
    return _kernels.canonical_key(flat_table(R), R.m, list(R.shape.moduli), packed)


def canonical_form(R: FiniteRing) -> FiniteRing:
    key = canonical_key(R)
    return ring_from_flat(R.shape, _kernels.key_to_table(key, R.m))


def _iso_candidates(shape: AdditiveShape):
    by_order: dict[int, list[Element]] = {}
    for x in shape.elements():
        by_order.setdefault(shape.element_order(x), []).append(x)
    return [by_order.get(q, []) for q in shape.moduli]


def is_isomorphic(R1: FiniteRing, R2: FiniteRing):
    """(flag, witness): witness rows are the images of R1's basis in R2."""
    if R1.shape != R2.shape:
        return False, None
    if class_fingerprint(R1) != class_fingerprint(R2):
        return False, None
    shape = R1.shape
    flat1, flat2 = flat_table(R1), flat_table(R2)
    cand = _iso_candidates(shape)
    witness = _kernels.iso_matrix(
        flat1, flat2, shape.m, list(shape.moduli), list(shape.exponents), shape.p, cand
    )
    if witness is None:
        return False, None
    m = shape.m
    rows = tuple(tuple(witness[i * m:(i + 1) * m]) for i in range(m))
    # verify before returning
    for a in range(m):
        for b in range(m):
            img = shape.zero()
            for l in range(m):
                img = shape.add(img, shape.smul(R1.c[a][b][l], rows[l]))
            if R2.mul(rows[a], rows[b]) != img:
                raise FinringError("isomorphism witness failed verification")
    return True, rows


def fp_table_isomorphic(A: FpTable, B: FpTable):
    """Based-algebra isomorphism of (possibly non-associative) F_p tables."""
    if A.p != B.p or A.dim != B.dim:
        return False, None
    shape = AdditiveShape(A.p, (1,) * A.dim)
    flat1 = [v for row in A.phi for vec in row for v in vec]
    flat2 = [v for row in B.phi for vec in row for v in vec]
    cand = _iso_candidates(shape)
    witness = _kernels.iso_matrix(
        flat1, flat2, shape.m, list(shape.moduli), list(shape.exponents), shape.p, cand
    )
    if witness is None:
        return False, None
    m = shape.m
    rows = tuple(tuple(witness[i * m:(i + 1) * m]) for i in range(m))
    return True, rows


# -- fingerprints -------------------------------------------------------------


def class_fingerprint(R: FiniteRing):
    """Cheap isomorphism invariants used to pre-partition candidates."""
    shape = R.shape
    chain = tuple(s.order for s in power_chain(R))
    comm = R.is_commutative()
    ident = find_identity(R) is not None
    stats = sorted(
        (
            shape.element_order(x),
            shape.element_order(R.mul(x, x)),
            R.mul(x, x) == x,
            R.mul(x, x) == shape.zero(),
        )
        for x in R.elements()
    )
    left_ann = sum(
        1
        for x in R.elements()
        if all(R.mul(x, R.basis(i)) == shape.zero() for i in range(shape.m))
    )
    right_ann = sum(
        1
        for x in R.elements()
        if all(R.mul(R.basis(i), x) == shape.zero() for i in range(shape.m))
    )
    return (shape.exponents, chain, comm, ident, tuple(map(tuple, stats)), left_ann, right_ann)


# -- enumeration --------------------------------------------------------------


def partitions_desc(n: int):
    """Partitions of n as weakly decreasing tuples, largest part first."""

    def rec(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, maxpart), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    return sorted(rec(n, n), reverse=True)


def _value_domains(shape: AdditiveShape):
    """Per-product characteristic-compatibility subgroups, sorted."""
    m = shape.m
    ks = shape.exponents
    p = shape.p
    domains = []
    for i in range(m):
        for j in range(m):
            kij = min(ks[i], ks[j])
            axes = []
            for l in range(m):
                step = p ** max(0, ks[l] - kij)
                axes.append(range(0, shape.moduli[l], step))
            domains.append(tuple(itertools.product(*axes)))
    return domains


def enumerate_shape_naive(shape: AdditiveShape) -> list[FiniteRing]:
    """Every valid table of the shape (raw, with duplicates across classes)."""
    domains = _value_domains(shape)
    total = 1
    for d in domains:
        total *= len(d)
        if total > NAIVE_TABLE_LIMIT:
            raise BudgetExceeded(
                f"naive enumeration needs {total}+ tables for shape {shape.exponents}"
            )
    m = shape.m
    moduli = list(shape.moduli)
    out = []
    for combo in itertools.product(*domains):
        flat = []
        for vec in combo:
            flat.extend(vec)
        if _kernels.assoc_violation_flat(flat, m, moduli) is None:
            out.append(ring_from_flat(shape, flat))
    return out


def enumerate_shape_pruned(shape: AdditiveShape) -> list[FiniteRing]:
    """Valid tables up to monomial minimality, via propagating DFS."""
    domains = _value_domains(shape)
    mono = monomial_automorphisms(shape.p, shape.exponents)
    tables = _kernels.enumerate_shape_tables(
        shape.p, list(shape.exponents), list(shape.moduli), domains, mono
    )
    return [ring_from_flat(shape, list(t)) for t in tables]


def _dedup_classes(rings: list[FiniteRing]) -> list[FiniteRing]:
    """One representative per isomorphism class (fingerprint + iso search)."""
    buckets: dict = {}
    reps: list[FiniteRing] = []
    for R in rings:
        fp = class_fingerprint(R)
        bucket = buckets.setdefault(fp, [])
        found = False
        for rep in bucket:
            flag, _ = _iso_same_fingerprint(rep, R)
            if flag:
                found = True
                break
        if not found:
            bucket.append(R)
            reps.append(R)
    return reps


def _iso_same_fingerprint(R1: FiniteRing, R2: FiniteRing):
    shape = R1.shape
    cand = _iso_candidates(shape)
    witness = _kernels.iso_matrix(
        flat_table(R1),
        flat_table(R2),
        shape.m,
        list(shape.moduli),
        list(shape.exponents),
        shape.p,
        cand,
    )
    return (witness is not None), witness


@dataclass(frozen=True)
class CensusRecord:
    ring: FiniteRing
    nilpotent: bool
    commutative: bool
    has_identity: bool
    jexp: int
    provenance: str

    @property
    def rj_exp(self) -> int:
        n = self.ring.shape.n
        return n - self.jexp


def _record_for(R: FiniteRing, provenance: str) -> CensusRecord:
    from .structure import jacobson_radical

    canon = canonical_form(R)
    nil, _ = is_nilpotent(canon)
    comm = canon.is_commutative()
    ident = find_identity(canon) is not None
    J = jacobson_radical(canon, verify=False)
    jexp = 0
    order = J.order
    while order > 1:
        order //= canon.p
        jexp += 1
    return CensusRecord(canon, nil, comm, ident, jexp, provenance)


def enumerate_rings(
    p: int,
    n: int,
    strategy: str = "pruned",
    filters: dict | None = None,
    budget: int | None = None,
) -> list[CensusRecord]:
    """One census record per isomorphism class of rings of order p^n."""
    budget = budget if budget is not None else order_budget()
    if p**n > budget:
        raise BudgetExceeded(f"p^n = {p**n} exceeds budget {budget}")
    if strategy not in ("naive", "pruned", "both"):
        raise ParseError(f"unknown strategy {strategy!r}")
    records: list[CensusRecord] = []
    for exps in partitions_desc(n):
        shape = AdditiveShape(p, exps)
        reps = _shape_class_reps(shape, strategy)
        for rep in reps:
            records.append(_record_for(rep, strategy))
    records.sort(
        key=lambda r: (
            tuple(-k for k in r.ring.shape.exponents),
            _kernels.table_key(flat_table(r.ring), r.ring.m),
        )
    )
    if filters:
        records = [r for r in records if _matches(r, filters)]
    return records


def _shape_class_reps(shape: AdditiveShape, strategy: str) -> list[FiniteRing]:
    if strategy == "naive":
        return _dedup_classes(enumerate_shape_naive(shape))
    if strategy == "pruned":
        return _dedup_classes(enumerate_shape_pruned(shape))
    naive = _dedup_classes(enumerate_shape_naive(shape))
    pruned = _dedup_classes(enumerate_shape_pruned(shape))
    naive_keys = sorted(canonical_key(R) for R in naive)
    pruned_keys = sorted(canonical_key(R) for R in pruned)
    if naive_keys != pruned_keys:
        raise FinringError(
            f"strategies disagree on shape {shape.exponents}: "
            f"{len(naive_keys)} vs {len(pruned_keys)} classes"
        )
    return pruned


def _matches(record: CensusRecord, filters: dict) -> bool:
    for key, want in filters.items():
        if getattr(record, key) != want:
            return False
    return True


def census_statistics(records: list[CensusRecord]) -> dict:
    """Counts by structural flags, including f_s-style radical-index counts."""
    n = records[0].ring.shape.n if records else 0
    stats = {
        "classes": len(records),
        "nilpotent": sum(1 for r in records if r.nilpotent),
        "commutative": sum(1 for r in records if r.commutative),
        "unital": sum(1 for r in records if r.has_identity),
        "quotient_at_least": {
            s: sum(1 for r in records if r.rj_exp >= s) for s in range(n + 1)
        },
    }
    return stats


# -- persistence ---------------------------------------------------------------


def _record_line(r: CensusRecord) -> str:
    shape_txt = ",".join(str(k) for k in r.ring.shape.exponents)
    flat = flat_table(r.ring)
    c_txt = ",".join(str(v) for v in flat)
    flags = (
        f"nil:{int(r.nilpotent)},comm:{int(r.commutative)},"
        f"id:{int(r.has_identity)},jexp:{r.jexp}"
    )
    return f"shape={shape_txt}|c={c_txt}|flags={flags}"


def write_census(records: list[CensusRecord], path: str, p: int, n: int) -> None:
    lines = [f"finring-census v1; p={p}; n={n}; count={len(records)}"]
    lines.extend(_record_line(r) for r in records)
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)
        fh.write(f"sha: {digest}\n")


def read_census(path: str) -> tuple[list[CensusRecord], int, int]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("sha: "):
        raise ParseError("missing sha trailer", len(lines))
    body = "\n".join(lines[:-1]) + "\n"
    digest = lines[-1][len("sha: "):]
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise ChecksumMismatch("census body does not match its digest")
    header = lines[0]
    try:
        magic, ptxt, ntxt, counttxt = [t.strip() for t in header.split(";")]
        assert magic == "finring-census v1"
        p = int(ptxt.split("=")[1])
        n = int(ntxt.split("=")[1])
        count = int(counttxt.split("=")[1])
    except (ValueError, AssertionError, IndexError):
        raise ParseError(f"bad census header {header!r}", 1) from None
    records = []
    for lineno, line in enumerate(lines[1:-1], start=2):
        records.append(_parse_record_line(line, lineno, p))
    if len(records) != count:
        raise ParseError(f"expected {count} records, found {len(records)}")
    return records, p, n


def _parse_record_line(line: str, lineno: int, p: int) -> CensusRecord:
    try:
        shape_part, c_part, flags_part = line.split("|")
        exps = tuple(int(t) for t in shape_part.split("=")[1].split(","))
        flat = [int(t) for t in c_part.split("=")[1].split(",")]
        flag_bits = dict(
            item.split(":") for item in flags_part.split("=")[1].split(",")
        )
        shape = AdditiveShape(p, exps)
        ring = ring_from_flat(shape, flat)
        return CensusRecord(
            ring,
            bool(int(flag_bits["nil"])),
            bool(int(flag_bits["comm"])),
            bool(int(flag_bits["id"])),
            int(flag_bits["jexp"]),
            "file",
        )
    except (ValueError, KeyError, IndexError, FinringError) as exc:
        raise ParseError(f"bad census record ({exc})", lineno) from None
