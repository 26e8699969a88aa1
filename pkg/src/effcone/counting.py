"""Counting unimodular-orbit forms of bounded height and fitting the growth.

`enumerate_unimodular` walks every determinant-1 integer matrix in a box:
for each coprime top row (a, b) the bottom rows form the integer family
(c, d) = (c0 + t*a, d0 + t*b) through one extended-gcd base solution,
clipped to the box.

Orbit counting enumerates growing shells of matrices and stops once a
configured number of consecutive shell growths contributes no new form
under the height bound.  Away from the root directions of the form the
image heights grow like the n-th power of the matrix norm, but rational
approximations to the roots produce a thin tail of qualifying matrices of
much larger norm, so the shell search walks short windows around the root
directions (see the root-window section) instead of whole boxes.  The
stopping rule is a documented heuristic, not a proof of completeness: the
orbit intersected with a height box is finite, so the search terminates,
but a form first reached beyond the stabilized shells would be missed.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .forms import BinaryForm, UnimodularMatrix, act, disc, height


class NonGenericForm(ValueError):
    """Orbit counting requires a nonzero discriminant."""


class InsufficientData(ValueError):
    """Exponent fits need at least 3 nonzero counts."""


@dataclass(frozen=True)
class CountPolicy:
    """Shell schedule: start at `initial_shell`, multiply by `growth`, stop
    after `stable_rounds` consecutive shells add no new qualifying form."""

    initial_shell: int = 8
    growth: Fraction = Fraction(2)
    stable_rounds: int = 2

    def __post_init__(self):
        object.__setattr__(self, "growth", Fraction(self.growth))
        if self.initial_shell < 1 or self.stable_rounds < 1 or self.growth <= 1:
            raise ValueError("policy fields must be positive (growth > 1)")

    def next_shell(self, t: int) -> int:
        return max(t + 1, math.floor(t * self.growth))


@dataclass(frozen=True)
class CountSeries:
    """(B, N) pairs with B strictly increasing and N nondecreasing."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple((int(b), int(n)) for b, n in self.points)
        for (b1, n1), (b2, n2) in zip(pts, pts[1:]):
            if b2 <= b1 or n2 < n1:
                raise ValueError("series must be increasing in B, nondecreasing in N")
        object.__setattr__(self, "points", pts)

    def to_csv(self) -> str:
        return "B,N\n" + "\n".join(f"{b},{n}" for b, n in self.points) + "\n"

    @staticmethod
    def from_csv(text: str) -> "CountSeries":
        points = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.lower().startswith("b"):
                continue
            b, n = line.split(",")
            points.append((int(b), int(n)))
        return CountSeries(tuple(points))


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of log N against log B (floating point, stated so)."""

    slope: float
    intercept: float
    residual_norm: float
    points_used: int


# ---------------------------------------------------------------------------
# unimodular enumeration
# ---------------------------------------------------------------------------

def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _t_interval(base: int, step: int, bound: int) -> tuple[int, int] | None:
    """Integer t with |base + t*step| <= bound; None marks an empty range and
    (-inf, +inf) is encoded by step == 0 checks in the caller."""
    if step == 0:
        return None  # caller treats separately
    lo_num, hi_num = -bound - base, bound - base
    if step < 0:
        lo_num, hi_num, step = -hi_num, -lo_num, -step
    lo = -((-lo_num) // step)  # ceil
    hi = hi_num // step        # floor
    if lo > hi:
        return None
    return lo, hi


def _entries_for_top_row(a: int, b: int, bound: int):
    """All (c, d) with a*d - b*c = 1 and |c|, |d| <= bound."""
    g, x, y = _egcd(a, b)
    d0, c0 = x, -y  # a*d0 - b*c0 = 1
    if a == 0:
        if abs(c0) > bound:
            return
        rng = _t_interval(d0, b, bound)
    elif b == 0:
        if abs(d0) > bound:
            return
        rng = _t_interval(c0, a, bound)
    else:
        ra = _t_interval(c0, a, bound)
        rb = _t_interval(d0, b, bound)
        rng = None if ra is None or rb is None else (max(ra[0], rb[0]),
                                                    min(ra[1], rb[1]))
    if rng is None or rng[0] > rng[1]:
        return
    for t in range(rng[0], rng[1] + 1):
        yield c0 + t * a, d0 + t * b


def _enumerate_entries(bound: int):
    """Entry tuples (a, b, c, d) of every determinant-1 matrix in the box."""
    if bound <= 0:
        return
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(a, b) != 1:
                continue
            for c, d in _entries_for_top_row(a, b, bound):
                yield a, b, c, d


def enumerate_unimodular(bound: int):
    """Yield every determinant-1 integer matrix with entries in [-T, T]
    exactly once (T = bound)."""
    for a, b, c, d in _enumerate_entries(bound):
        yield UnimodularMatrix(a, b, c, d)


# ---------------------------------------------------------------------------
# root windows
#
# A matrix (a b; c d) can only produce a form of height <= B if both outer
# image coefficients are small: f(a, c) (the z^n coefficient) and f(b, d)
# (the w^n coefficient).  Writing f(a, c) = x_m * c^m * prod_j (a - theta_j c)
# over the finite roots theta_j of f(t, 1), at least one factor must be below
# (B / |x_m * c^m|)^(1/deg), so qualifying first columns live in short
# integer windows around the root directions.  Partner columns come from the
# det-1 family (b, d) = (b0 + t*a, d0 + t*c), where the same argument applied
# to q(t) = f(b0 + t*a, d0 + t*c) confines t to windows around the roots of
# q.  Floating-point roots only steer the search: windows are padded and
# every candidate is checked in exact integer arithmetic, while the product
# bound itself guarantees no qualifying matrix lies outside the windows.
# ---------------------------------------------------------------------------

_WINDOW_PAD = 4.0


def _poly_roots(coeffs: list[int]) -> list[complex]:
    """All complex roots of an integer polynomial (leading coefficient
    first, nonzero), by Durand-Kerner iteration in float precision."""
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    lead = coeffs[0]
    monic = [x / lead for x in coeffs]
    if deg == 1:
        return [complex(-monic[1])]
    radius = 2 * max(abs(x) ** (1.0 / (i + 1)) for i, x in enumerate(monic[1:]))
    radius = max(radius, 1.0)
    seed = 0.4 + 0.9j
    zs = [radius * seed ** (k + 1) for k in range(deg)]
    for _ in range(300):
        moved = 0.0
        for k in range(deg):
            num = 1.0 + 0j
            val = 0j
            for x in monic:
                val = val * zs[k] + x
            for j in range(deg):
                if j != k:
                    num *= zs[k] - zs[j]
            if num == 0:
                zs[k] += 1e-8 * (1 + abs(zs[k]))
                continue
            step = val / num
            zs[k] -= step
            moved = max(moved, abs(step))
        if moved < 1e-12 * (1.0 + max(abs(z) for z in zs)):
            break
    return zs


def _product_windows(centers: list[complex], lead_abs: float,
                     bound: float) -> list[tuple[int, int]] | None:
    """Merged integer intervals that must contain every integer u with
    lead_abs * prod_j |u - centers[j]| <= bound; None means every u may
    qualify (no centers to window around)."""
    deg = len(centers)
    if deg == 0:
        return None if lead_abs <= bound else []
    radius = (bound / lead_abs) ** (1.0 / deg)
    spans = []
    for j, z in enumerate(centers):
        if abs(z.imag) > radius + _WINDOW_PAD:
            continue
        others = 1.0
        for k, zk in enumerate(centers):
            if k != j:
                others *= max(abs(z - zk) - radius, abs(zk.imag), 0.0)
        width = radius if others <= 0 else min(radius, bound / (lead_abs * others))
        width += _WINDOW_PAD + 1e-6 * (1.0 + abs(z))
        spans.append((math.ceil(z.real - width), math.floor(z.real + width)))
    spans.sort()
    merged: list[tuple[int, int]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def _eval_form(xs: tuple[int, ...], a: int, c: int) -> int:
    """f(a, c) for the form with coefficient vector xs."""
    acc = 0
    power = 1
    for x in xs:
        acc = acc * a + x * power
        power *= c
    return acc


def _linear_power_coeffs(const: int, slope: int, n: int) -> list[list[int]]:
    """Coefficient lists of (const + slope*t)^j for j = 0..n, ascending in t."""
    pows = [[1]]
    for _ in range(n):
        prev = pows[-1]
        cur = [0] * (len(prev) + 1)
        for i, v in enumerate(prev):
            cur[i] += const * v
            cur[i + 1] += slope * v
        pows.append(cur)
    return pows


def _partner_parameters(xs: tuple[int, ...], a: int, c: int, b0: int, d0: int,
                        b_max: int) -> list[int] | None:
    """Integer t values that can make |f(b0 + t*a, d0 + t*c)| <= b_max.

    Returns a sorted complete candidate list, or None when every t may
    qualify (never hit for forms with distinct roots, where the degree of
    q drops by at most one).
    """
    n = len(xs) - 1
    upow = _linear_power_coeffs(b0, a, n)
    vpow = _linear_power_coeffs(d0, c, n)
    q = [0] * (n + 1)
    for i, x in enumerate(xs):
        if not x:
            continue
        u = upow[n - i]
        v = vpow[i]
        for iu, cu in enumerate(u):
            if cu:
                xcu = x * cu
                for iv, cv in enumerate(v):
                    if cv:
                        q[iu + iv] += xcu * cv
    coeffs = list(reversed(q))  # leading first
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs or len(coeffs) == 1:
        return None if not coeffs or abs(coeffs[0]) <= b_max else []
    windows = _product_windows(_poly_roots(coeffs), abs(coeffs[0]), float(b_max))
    if windows is None:
        return None
    out: list[int] = []
    for lo, hi in windows:
        out.extend(range(lo, hi + 1))
    return out


def _qualifying_columns(xs: tuple[int, ...], c_lo: int, c_hi: int, b_max: int,
                        finite_roots: list[complex], lead_abs: int,
                        inf_mult: int):
    """Coprime columns (a, c) with c in [c_lo, c_hi] and |f(a, c)| <= b_max.

    c = 0 contributes the single half-box column (1, 0) when it qualifies.
    """
    if c_lo <= 0 <= c_hi and abs(xs[0]) <= b_max:
        yield 1, 0
    for c in range(max(c_lo, 1), c_hi + 1):
        centers = [z * c for z in finite_roots]
        windows = _product_windows(centers, float(lead_abs * c ** inf_mult),
                                   float(b_max))
        if windows is None:
            raise ValueError("form has no finite root directions")
        for lo, hi in windows:
            for a in range(lo, hi + 1):
                if math.gcd(a, c) == 1 and abs(_eval_form(xs, a, c)) <= b_max:
                    yield a, c


def _substituted_coeffs(xs: tuple[int, ...], a: int, b: int, c: int, d: int,
                        b_max: int) -> tuple[int, ...] | None:
    """Coefficients of f(a z + b w, c z + d w), or None once the height bound
    is exceeded.

    The outer coefficients of the image are f(a, c) and f(b, d), so those two
    evaluations reject most large matrices before the full expansion runs.
    """
    n = len(xs) - 1
    lead = 0
    power = 1
    for x in xs:
        lead = lead * a + x * power
        power *= c
    if abs(lead) > b_max:
        return None
    tail = 0
    power = 1
    for x in xs:
        tail = tail * b + x * power
        power *= d
    if abs(tail) > b_max:
        return None
    h = [xs[0]]
    qpow = [1]
    for i in range(1, n + 1):
        nh = [0] * (i + 1)
        for t, hc in enumerate(h):
            nh[t] += a * hc
            nh[t + 1] += b * hc
        nq = [0] * (i + 1)
        for t, qc in enumerate(qpow):
            nq[t] += c * qc
            nq[t + 1] += d * qc
        qpow = nq
        x = xs[i]
        if x:
            for t, qc in enumerate(qpow):
                nh[t] += x * qc
        h = nh
    if max(abs(v) for v in h) > b_max:
        return None
    return tuple(h)


class _Column:
    """A qualifying first column (a, c) with its det-1 partner family
    (b, d) = (b0 + t*a, d0 + t*c) and the candidate t values."""

    __slots__ = ("a", "c", "b0", "d0", "params")

    def __init__(self, xs: tuple[int, ...], a: int, c: int, b_max: int):
        g, x, y = _egcd(a, c)
        assert g == 1
        self.a = a
        self.c = c
        self.d0 = x
        self.b0 = -y  # a*d0 - c*b0 = 1
        self.params = _partner_parameters(xs, a, c, self.b0, self.d0, b_max)

    def matrices_in_shell(self, shell: int, prev: int):
        """Matrix entries inside the shell box but not the previous box."""
        a, c, b0, d0 = self.a, self.c, self.b0, self.d0
        if max(abs(a), c) > shell:
            return
        if self.params is None:  # degenerate partner family: scan the box
            if a and c:
                ra = _t_interval(b0, a, shell)
                rc = _t_interval(d0, c, shell)
                rng = None if ra is None or rc is None else (
                    max(ra[0], rc[0]), min(ra[1], rc[1]))
            elif a:  # c == 0: d is the constant d0
                rng = _t_interval(b0, a, shell) if abs(d0) <= shell else None
            else:    # a == 0: b is the constant b0
                rng = _t_interval(d0, c, shell) if abs(b0) <= shell else None
            if rng is None or rng[0] > rng[1]:
                return
            candidates = range(rng[0], rng[1] + 1)
        else:
            candidates = self.params
        inner = max(abs(a), c) <= prev
        for t in candidates:
            b = b0 + t * a
            d = d0 + t * c
            if abs(b) > shell or abs(d) > shell:
                continue
            if inner and abs(b) <= prev and abs(d) <= prev:
                continue  # inner box already processed
            yield a, b, c, d


def _orbit_heights(f: BinaryForm, b_max: int, policy: CountPolicy,
                   shards: int = 1) -> list[int]:
    """Sorted heights of the distinct orbit vectors with height <= b_max.

    Shells grow per the policy; each round adds the matrices of the shell
    box beyond the previous box, taken from the cached qualifying-column
    families (only the half-box with c > 0 or (a, c) = (1, 0) is walked:
    the mate -m gives the same image up to a global sign, and both signs
    are recorded per matrix).  Columns are partitioned across `shards` and
    merged by set union, so results are shard-count independent.
    """
    if shards < 1:
        raise ValueError("shard count must be positive")
    xs = f.coeffs
    stripped = list(xs)
    inf_mult = 0
    while stripped and stripped[0] == 0:
        stripped.pop(0)
        inf_mult += 1
    if len(stripped) <= 1:
        raise ValueError("form has no finite root directions")
    finite_roots = _poly_roots(stripped)
    odd = f.degree % 2 == 1
    columns: list[_Column] = []
    seen: set[tuple[int, ...]] = set()
    scanned_c = -1
    prev = 0
    shell = policy.initial_shell
    quiet = 0
    while True:
        for a, c in _qualifying_columns(xs, scanned_c + 1, shell, b_max,
                                        finite_roots, abs(stripped[0]),
                                        inf_mult):
            columns.append(_Column(xs, a, c, b_max))
        scanned_c = shell
        new = 0
        shard_sets: list[set[tuple[int, ...]]] = [set() for _ in range(shards)]
        for col in columns:
            block = shard_sets[(col.a * 92821 + col.c) % shards]
            for a, b, c, d in col.matrices_in_shell(shell, prev):
                coeffs = _substituted_coeffs(xs, a, b, c, d, b_max)
                if coeffs is None:
                    continue
                block.add(coeffs)
                if odd:
                    block.add(tuple(-v for v in coeffs))
        for block in shard_sets:
            for coeffs in block:
                if coeffs not in seen:
                    seen.add(coeffs)
                    new += 1
        quiet = quiet + 1 if new == 0 else 0
        if quiet >= policy.stable_rounds:
            break
        prev = shell
        shell = policy.next_shell(shell)
    return sorted(max(abs(v) for v in coeffs) for coeffs in seen)


def count_series(f: BinaryForm, b_grid, policy: CountPolicy | None = None,
                 shards: int = 1) -> CountSeries:
    """Counts N(B) of distinct orbit coefficient vectors with height <= B,
    for every B in the increasing grid, from one shared enumeration pass."""
    policy = policy or CountPolicy()
    grid = [int(b) for b in b_grid]
    if not grid or any(b2 <= b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValueError("grid must be nonempty and strictly increasing")
    if disc(f) == 0:
        raise NonGenericForm("orbit counting requires a nonzero discriminant")
    heights = _orbit_heights(f, grid[-1], policy, shards)
    return CountSeries(tuple((b, bisect_right(heights, b)) for b in grid))


def count_orbit(f: BinaryForm, b: int, policy: CountPolicy | None = None) -> int:
    """Number of distinct forms in the orbit of f with height <= b."""
    return count_series(f, [b], policy).points[0][1]


# ---------------------------------------------------------------------------
# exponent fit
# ---------------------------------------------------------------------------

def fit_exponent(series: CountSeries) -> FitResult:
    """Ordinary least squares on (log B, log N), entries with N >= 1 only."""
    pts = [(math.log(b), math.log(n)) for b, n in series.points if n >= 1]
    if len(pts) < 3:
        raise InsufficientData("need at least 3 entries with N >= 1")
    k = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    denom = k * sxx - sx * sx
    slope = (k * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / k
    sse = sum((y - slope * x - intercept) ** 2 for x, y in pts)
    return FitResult(slope, intercept, math.sqrt(sse), k)
