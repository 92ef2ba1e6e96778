"""Exact proof quantities and certified maxima for the enumeration bounds.

Covers the subspace-counting inequalities, the exact per-branch exponent
bound on cube-zero algebra counts, the four normalized cubic objectives with
their maxima 18/125, 4/27, 9/125, 2/27, the explicit commutative f(n, r)
bounds, and the discrete exponent maximization those objectives approximate.
Only pre-asymptotic expressions are evaluated; O(.) terms never appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidDims, ParameterOutOfRange

# -- subspace counts ------------------------------------------------------------


def gaussian_binomial(t: int, d: int, p: int) -> int:
    """Number of d-dimensional subspaces of F_p^t.

    Also verifies the per-factor inequality
    (p^t - p^i) / (p^d - p^i) <= p^(t-d+1) used by the counting argument."""
    if not (0 <= d <= t):
        raise ParameterOutOfRange(f"need 0 <= d <= t, got d={d}, t={t}")
    num = 1
    den = 1
    for i in range(d):
        fn = p**t - p**i
        fd = p**d - p**i
        assert fn <= p ** (t - d + 1) * fd
        num *= fn
        den *= fd
    assert num % den == 0
    return num // den


# -- exact alpha(r, s, t) branch bound -------------------------------------------


@dataclass(frozen=True)
class AlphaBound:
    exponent: int
    branch: str  # "small-s" or "large-s"
    f: int | None = None
    g: int | None = None
    d: int | None = None


def alpha_upper(r: int, s: int, t: int, commutative: bool = False) -> AlphaBound:
    """Exact exponent bound on the number of cube-zero classes with profile
    (r, s, t): the product count r^2 t (or r(r+1)t/2) when s <= 2 sqrt r + 1,
    else C(g,2) d (t-d+1) + r^2 d (resp. r(r+1)d/2) with f = floor(sqrt r),
    g = ceil(r/f), d = 2f + t - s + 1."""
    if r < 0 or s < 0 or t < 0:
        raise InvalidDims("dimensions must be non-negative")
    if s > t + 1:
        raise InvalidDims(f"s={s} exceeds t+1={t + 1}")
    if s > r:
        raise InvalidDims(f"s={s} exceeds r={r}")
    products = r * (r + 1) // 2 if commutative else r * r
    # branch condition s <= 2 sqrt(r) + 1, tested exactly via (s-1)^2 <= 4r
    if s <= 1 or (s - 1) * (s - 1) <= 4 * r:
        return AlphaBound(products * t, "small-s")
    f = math.isqrt(r)
    g = -(-r // f)
    d = 2 * f + t - s + 1
    choose_g2 = g * (g - 1) // 2
    exponent = choose_g2 * d * (t - d + 1) + products * d
    return AlphaBound(exponent, "large-s", f, g, d)


# -- interval arithmetic and the certified maximizer ------------------------------

_EPS = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo - _EPS, self.hi + other.hi + _EPS)

    def __sub__(self, other):
        other = _as_interval(other)
        return Interval(self.lo - other.hi - _EPS, self.hi - other.lo + _EPS)

    def __mul__(self, other):
        other = _as_interval(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(cands) - _EPS, max(cands) + _EPS)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _as_interval(other) - self

    def sq(self):
        if self.lo >= 0:
            return Interval(self.lo * self.lo - _EPS, self.hi * self.hi + _EPS)
        if self.hi <= 0:
            return Interval(self.hi * self.hi - _EPS, self.lo * self.lo + _EPS)
        m = max(-self.lo, self.hi)
        return Interval(0.0, m * m + _EPS)

    def cube(self):
        return Interval(self.lo**3 - _EPS, self.hi**3 + _EPS)


def _as_interval(x):
    if isinstance(x, Interval):
        return x
    return Interval(x, x)


@dataclass(frozen=True)
class Objective:
    """One of the four normalized cubic objectives with its printed region."""

    variant: str
    nvars: int
    bounds: tuple[tuple[float, float], ...]

    def value(self, pt):
        return _objective_value(self.variant, pt)

    def interval(self, box):
        return _objective_value(self.variant, [Interval(lo, hi) for lo, hi in box])

    def feasible(self, pt) -> bool:
        return _objective_feasible(self.variant, pt)

    def possibly_feasible(self, box) -> bool:
        return _objective_possibly_feasible(self.variant, box)

    def project(self, pt):
        return _objective_project(self.variant, pt)


def objective_printed(variant, v):
    """The objective exactly as printed (point evaluation; reference form)."""
    if variant == "NC-low":
        x, y = v
        return x * x * (1 - x) + 0.5 * y * (2 - (x + 1) ** 2) - 0.5 * y**3
    if variant == "NC-high":
        x, y, z, w = v
        return (
            (y * w + x * x - x * y) * (1 - w)
            + x * x * (w - x - y)
            + 0.5 * x * y * z
            + 0.5 * y * ((w - x) ** 2 - y * y)
        )
    x, y, z = v
    u = 1 - x - z
    base = (
        0.5 * x * x * (z - y)
        + 0.5 * x * x * u
        + (y * z - 0.5 * y * y) * u
        + 0.5 * y * u * u
    )
    if variant == "C-high":
        base = base + 0.5 * x * y * z
    return base


def _objective_value(variant, v):
    """Algebraically equal to objective_printed, factored in y so that each
    variable appears few times (tight interval enclosures)."""
    if variant == "NC-low":
        x, y = v
        sq = x.sq() if isinstance(x, Interval) else x * x
        xp1 = (x + 1).sq() if isinstance(x, Interval) else (x + 1) ** 2
        ycube = y.cube() if isinstance(y, Interval) else y**3
        return sq * (1 - x) + y * (1 - 0.5 * xp1) - 0.5 * ycube
    if variant == "NC-high":
        x, y, z, w = v
        iv = isinstance(x, Interval)
        sq = x.sq() if iv else x * x
        vmx = w - x
        vmx2 = vmx.sq() if iv else vmx * vmx
        ycube = y.cube() if iv else y**3
        g = vmx * (1 - w) + 0.5 * x * z + 0.5 * vmx2 - sq
        return sq * (1 - x) + y * g - 0.5 * ycube
    x, y, z = v
    iv = isinstance(x, Interval)
    u = 1 - x - z
    sq = x.sq() if iv else x * x
    u2 = u.sq() if iv else u * u
    y2 = y.sq() if iv else y * y
    g = z * u + 0.5 * u2 - 0.5 * sq
    if variant == "C-high":
        g = g + 0.5 * x * z
    return 0.5 * sq * (1 - x) + y * g - 0.5 * y2 * u


def _objective_feasible(variant, pt) -> bool:
    tol = 1e-12
    if variant == "NC-low":
        x, y = pt
        return -tol <= y <= x + tol and x + y <= 1 + tol and -tol <= x <= 0.6 + tol
    if variant == "NC-high":
        x, y, z, w = pt
        return (
            0.6 - tol <= x <= 1 + tol
            and -tol <= y <= x + tol
            and x + y <= 1 + tol
            and -tol <= z <= 1 + tol
            and -tol <= w <= 1 + tol
        )
    x, y, z = pt
    lo_ok = -tol <= y <= min(x, z) + tol and x + z <= 1 + tol and y >= -tol
    if variant == "C-low":
        return lo_ok and -tol <= x <= 0.6 + tol and z >= -tol
    return lo_ok and 0.6 - tol <= x <= 1 + tol and z >= -tol


def _objective_possibly_feasible(variant, box) -> bool:
    if variant == "NC-low":
        (xl, xh), (yl, yh) = box
        return yl <= xh and xl + yl <= 1 and xl <= 0.6
    if variant == "NC-high":
        (xl, xh), (yl, yh), _, _ = box
        return xh >= 0.6 and yl <= xh and xl + yl <= 1
    (xl, xh), (yl, yh), (zl, zh) = box
    base = yl <= xh and yl <= zh and xl + zl <= 1
    if variant == "C-low":
        return base and xl <= 0.6
    return base and xh >= 0.6


def _objective_project(variant, pt):
    """Clamp a box center into the feasible region (regions are boxes cut by
    y <= x, y <= z, x+y <= 1, x+z <= 1; sequential clamping suffices)."""
    if variant == "NC-low":
        x, y = pt
        x = min(max(x, 0.0), 0.6)
        y = min(max(y, 0.0), x, 1 - x)
        return (x, y)
    if variant == "NC-high":
        x, y, z, w = pt
        x = min(max(x, 0.6), 1.0)
        y = min(max(y, 0.0), x, 1 - x)
        z = min(max(z, 0.0), 1.0)
        w = min(max(w, 0.0), 1.0)
        return (x, y, z, w)
    x, y, z = pt
    if variant == "C-low":
        x = min(max(x, 0.0), 0.6)
    else:
        x = min(max(x, 0.6), 1.0)
    z = min(max(z, 0.0), 1 - x)
    y = min(max(y, 0.0), x, z)
    return (x, y, z)


OBJECTIVES = {
    "NC-low": Objective("NC-low", 2, ((0.0, 0.6), (0.0, 0.6))),
    "NC-high": Objective(
        "NC-high", 4, ((0.6, 1.0), (0.0, 0.4), (0.0, 1.0), (0.0, 1.0))
    ),
    "C-low": Objective("C-low", 3, ((0.0, 0.6), (0.0, 0.6), (0.0, 1.0))),
    "C-high": Objective("C-high", 3, ((0.6, 1.0), (0.0, 0.4), (0.0, 1.0))),
}

TARGET_MAXIMA = {
    "NC-low": Fraction(18, 125),
    "NC-high": Fraction(4, 27),
    "C-low": Fraction(9, 125),
    "C-high": Fraction(2, 27),
}


@dataclass(frozen=True)
class ObjectiveResult:
    variant: str
    value: float
    argmax: tuple[float, ...]
    certified_upper: float


def delta_objective_max(variant: str, gap: float = 1e-8) -> ObjectiveResult:
    """Certified global maximum of a printed objective over its region.

    Branch-and-bound on boxes with interval upper bounds; feasible samples
    from projected box centers give the lower bound.  Terminates when the
    certified gap drops below `gap` (the upper bound stays within it)."""
    obj = OBJECTIVES[variant]
    box0 = tuple(obj.bounds)
    best_val = -1.0
    best_pt = None
    upper0 = obj.interval(box0).hi
    import heapq

    pq = [(-upper0, box0)]
    rounds = 0
    global_upper = upper0
    while pq and rounds < 400000:
        rounds += 1
        neg_up, box = heapq.heappop(pq)
        up = -neg_up
        if up <= best_val + gap:
            global_upper = max(best_val + gap, up)
            break
        center = tuple((lo + hi) / 2 for lo, hi in box)
        cand = obj.project(center)
        if obj.feasible(cand):
            val = obj.value(cand)
            if val > best_val:
                best_val = val
                best_pt = cand
        # split the axis whose halving lowers the bound the most
        best_axis, best_score = 0, None
        for axis in range(len(box)):
            lo, hi = box[axis]
            if hi - lo < 1e-12:
                continue
            mid = (lo + hi) / 2
            score = -1e18
            for part in ((lo, mid), (mid, hi)):
                sub = tuple(part if i == axis else b for i, b in enumerate(box))
                if obj.possibly_feasible(sub):
                    score = max(score, obj.interval(sub).hi)
            if best_score is None or score < best_score:
                best_score = score
                best_axis = axis
        lo, hi = box[best_axis]
        mid = (lo + hi) / 2
        for part in ((lo, mid), (mid, hi)):
            sub = tuple(part if i == best_axis else b for i, b in enumerate(box))
            if not obj.possibly_feasible(sub):
                continue
            sub_up = obj.interval(sub).hi
            if sub_up > best_val + gap * 0.5:
                heapq.heappush(pq, (-sub_up, sub))
        if pq:
            global_upper = max(best_val, -pq[0][0])
        else:
            global_upper = best_val
    best_pt = _local_polish(obj, best_pt, best_val)
    best_val = obj.value(best_pt)
    return ObjectiveResult(variant, best_val, best_pt, max(global_upper, best_val))


def _local_polish(obj, pt, val):
    """Coordinate-descent refinement down to 1e-8 steps."""
    step = 1e-3
    pt = list(pt)
    while step >= 1e-8:
        improved = False
        for axis in range(len(pt)):
            for delta in (step, -step):
                cand = list(pt)
                cand[axis] += delta
                cand = list(obj.project(tuple(cand)))
                if obj.feasible(tuple(cand)):
                    v = obj.value(tuple(cand))
                    if v > val:
                        val = v
                        pt = cand
                        improved = True
        if not improved:
            step /= 2
    return tuple(pt)


# -- explicit f(n, r) bounds -------------------------------------------------------


def commutative_f_bounds(n: int, r: int, p: int):
    """(zero flag, lower exponent, upper exponent) for log_p f(n, r).

    f(n, r) counts commutative cube-zero F_p-algebras of dimension n with
    dim(A/A^2) = r; it vanishes when r(r+1)/2 < n - r."""
    if not 0 <= r <= n:
        raise ParameterOutOfRange("need 0 <= r <= n")
    half = r * (r + 1) // 2
    if half < n - r:
        return True, None, None
    lower = Fraction(r * (r + 1), 2) * (n - r) - (n - r) ** 2 - r * r
    upper = Fraction(r * (r + 1), 2) * (n - r) - (n - r) ** 2 + (n - r)
    return False, lower, upper


# -- the discrete exponent maximization --------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Proof exponents for one profile: alpha (class count for the cube-zero
    quotient), beta (lambda/nu coefficient choices), gamma (lifted product
    choices), delta (their sum), and the alpha branch taken."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    branch: str


def proof_exponents(n: int, w: int, r: int, s: int, t: int) -> BoundReport:
    a = alpha_upper(r, s, t)
    beta = Fraction(r * r * (w - r - t)) + Fraction(s * ((w - r) ** 2 - (s - 1) ** 2), 2)
    gamma = Fraction((r * r + s * (w - r)) * (n - w))
    delta = a.exponent + beta + gamma
    return BoundReport(Fraction(a.exponent), beta, gamma, delta, a.branch)


def discrete_delta_max(n: int, commutative: bool = False):
    """Exact maximum of the printed discrete exponent expression.

    Returns (max exponent as a Fraction, profile dict).  The noncommutative
    expression is increasing in w, the commutative one in u, so those slots
    are pinned to their extremes and the scan runs over (r, s, t)."""
    if n < 1:
        raise ParameterOutOfRange("n must be >= 1")
    best = None
    best_profile = None
    if not commutative:
        w = n
        for r in range(1, n + 1):
            for t in range(0, n - r + 1):
                for s in range(0, min(r, t + 1) + 1):
                    a = alpha_upper(r, s, t)
                    # 2*delta kept integral: beta and the s/2 terms halve
                    twice = (
                        2 * a.exponent
                        + 2 * r * r * (w - r - t)
                        + s * ((w - r) ** 2 - (s - 1) ** 2)
                        + 2 * (r * r + s * (w - r)) * (n - w)
                    )
                    if best is None or twice > best:
                        best = twice
                        best_profile = {
                            "r": r,
                            "s": s,
                            "t": t,
                            "w": w,
                            "u": w - r - t,
                            "branch": a.branch,
                        }
        return Fraction(best, 2), best_profile
    for r in range(1, n + 1):
        for t in range(0, n - r + 1):
            u = n - r - t
            for s in range(0, min(r, t + 1) + 1):
                a = alpha_upper(r, s, t, commutative=True)
                twice = (
                    2 * a.exponent
                    + r * r * u
                    + (2 * s * t - s * s) * u
                    + s * u * u
                )
                if best is None or twice > best:
                    best = twice
                    best_profile = {
                        "r": r,
                        "s": s,
                        "t": t,
                        "u": u,
                        "branch": a.branch,
                    }
    return Fraction(best, 2), best_profile
