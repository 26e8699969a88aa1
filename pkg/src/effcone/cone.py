"""Exact rational cone computations.

Coordinate minima over a normalized cone slice (simplex LP with exact dual
certificates), orthant-containment certificates for dual cones, effectivity
thresholds along a ray, and Fourier-Motzkin projection as an independent
cross-check for small systems.

No floating point anywhere: inputs are coerced to `fractions.Fraction` and
every produced number is an exact rational.  The LP solver keeps tableau
rows as gcd-reduced integer vectors (constraint rows are scale-free) and
uses Bland's smallest-index rule for both the entering and the leaving
variable, so it terminates on degenerate inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


class ConeError(Exception):
    """Base class for errors raised by this module."""


class Infeasible(ConeError):
    """The constraint system together with its normalization has no solution."""


class Unbounded(ConeError):
    """The objective is unbounded below on the normalized feasible set."""


class DimensionMismatch(ConeError):
    pass


class NotAttainable(ConeError):
    """No shift along the ray lands in the cone (empty threshold set)."""


class MinusInfinity(ConeError):
    """Every sufficiently negative shift lands in the cone (threshold -oo)."""


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _vec(xs) -> tuple[Fraction, ...]:
    return tuple(_fr(x) for x in xs)


def _clear_denominators(qs: tuple[Fraction, ...]) -> tuple[int, list[int]]:
    """Return (d, ints) with d > 0 and ints == d * qs entrywise."""
    d = lcm(*(q.denominator for q in qs)) if qs else 1
    return d, [int(q * d) for q in qs]


def _reduce_ints(row: list[int]) -> list[int]:
    g = gcd(*row) if row else 0
    if g > 1:
        return [x // g for x in row]
    return row


# ---------------------------------------------------------------------------
# half-space data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeH:
    """Half-space description of a rational cone {x : rows . x >= 0}."""

    rows: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        width = len(self.labels)
        for r in self.rows:
            if len(r) != width:
                raise DimensionMismatch("constraint row width does not match labels")

    @staticmethod
    def from_rows(rows, labels=None) -> "ConeH":
        mat = tuple(_vec(r) for r in rows)
        if labels is None:
            if not mat:
                raise ValueError("need labels to build a cone with no constraints")
            labels = tuple(f"x{j}" for j in range(len(mat[0])))
        return ConeH(mat, tuple(str(s) for s in labels))

    @property
    def num_vars(self) -> int:
        return len(self.labels)

    def contains(self, point) -> bool:
        x = _vec(point)
        if len(x) != self.num_vars:
            raise DimensionMismatch("point has wrong dimension")
        return all(sum(a * b for a, b in zip(r, x)) >= 0 for r in self.rows)


def default_normalization(num_vars: int) -> tuple[tuple[Fraction, ...], Fraction]:
    """The slice sum(x) = 1 used throughout the certificates."""
    return tuple(Fraction(1) for _ in range(num_vars)), Fraction(1)


# ---------------------------------------------------------------------------
# exact simplex
# ---------------------------------------------------------------------------

_PIVOT_LIMIT = 200_000


class _Tableau:
    """Scaled-integer simplex tableau.

    Every row is an integer vector (last entry = right-hand side) that may be
    rescaled by any positive integer without changing the system, which keeps
    all arithmetic in plain ints.  Invariants: rows[i][basis[i]] > 0, the
    basis column is zero in every other row, and all right-hand sides are
    >= 0.  The objective row z satisfies z[j] = sigma * reduced_cost(j) with
    sigma > 0, hence z[basis[i]] == 0.
    """

    def __init__(self, rows: list[list[int]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.ncols = len(rows[0]) - 1  # last column is the rhs
        self.z: list[int] = []
        self.sigma = 1
        self.banned: set[int] = set()
        self.pivots = 0

    def set_cost(self, cost: list[int]) -> None:
        z = list(cost) + [0]
        sigma = 1
        for i, b in enumerate(self.basis):
            if z[b]:
                p = self.rows[i][b]
                f = z[b]
                row = self.rows[i]
                z = [p * a - f * c for a, c in zip(z, row)]
                sigma *= p
        g = gcd(sigma, *z)
        if g > 1:
            z = [a // g for a in z]
            sigma //= g
        self.z = z
        self.sigma = sigma

    def value_of(self, col: int) -> Fraction:
        if col in self.basis:
            i = self.basis.index(col)
            return Fraction(self.rows[i][-1], self.rows[i][col])
        return Fraction(0)

    def _pivot(self, r: int, e: int) -> None:
        p = self.rows[r][e]
        assert p > 0
        prow = self.rows[r]
        for i, row in enumerate(self.rows):
            if i != r and row[e]:
                f = row[e]
                self.rows[i] = _reduce_ints([p * a - f * b for a, b in zip(row, prow)])
        f = self.z[e]
        if f:
            self.z = [p * a - f * b for a, b in zip(self.z, prow)]
            self.sigma *= p
            g = gcd(self.sigma, *self.z)
            if g > 1:
                self.z = [a // g for a in self.z]
                self.sigma //= g
        self.rows[r] = _reduce_ints(prow)
        self.basis[r] = e
        self.pivots += 1
        if self.pivots > _PIVOT_LIMIT:
            raise RuntimeError("simplex pivot limit exceeded")

    def optimize(self) -> None:
        """Bland's rule loop; raises Unbounded if no leaving row exists."""
        while True:
            enter = -1
            for j in range(self.ncols):
                if j not in self.banned and self.z[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best_rhs = best_coef = 0
            for i, row in enumerate(self.rows):
                coef = row[enter]
                if coef <= 0:
                    continue
                rhs = row[-1]
                if leave < 0 or rhs * best_coef < best_rhs * coef or (
                    rhs * best_coef == best_rhs * coef and self.basis[i] < self.basis[leave]
                ):
                    leave, best_rhs, best_coef = i, rhs, coef
            if leave < 0:
                raise Unbounded("objective unbounded below")
            self._pivot(leave, enter)


@dataclass(frozen=True)
class LpResult:
    """Minimum of one coordinate over {x : A.x >= 0, norm.x = rhs}.

    `row_multipliers` (>= 0, one per constraint row) and
    `normalization_multiplier` form an exact optimality certificate:

        e_obj == sum_i row_multipliers[i] * A_i + normalization_multiplier * norm

    so every feasible x has x_obj >= normalization_multiplier * rhs = value.
    """

    value: Fraction
    witness: tuple[Fraction, ...]
    row_multipliers: tuple[Fraction, ...]
    normalization_multiplier: Fraction


def verify_lp_minimum(cone: ConeH, objective_index: int, result: LpResult,
                      normalization=None) -> bool:
    """Re-check an LpResult from scratch; raises ConeError if anything fails."""
    k = cone.num_vars
    norm_coeffs, norm_rhs = normalization or default_normalization(k)
    norm_coeffs = _vec(norm_coeffs)
    x = result.witness
    if len(x) != k or len(norm_coeffs) != k:
        raise DimensionMismatch("witness or normalization has wrong dimension")
    slacks = [sum(a * b for a, b in zip(row, x)) for row in cone.rows]
    if any(s < 0 for s in slacks):
        raise ConeError("witness violates a cone constraint")
    if sum(a * b for a, b in zip(norm_coeffs, x)) != _fr(norm_rhs):
        raise ConeError("witness violates the normalization")
    if x[objective_index] != result.value:
        raise ConeError("witness coordinate does not equal the recorded minimum")
    mus = result.row_multipliers
    nu = result.normalization_multiplier
    if len(mus) != len(cone.rows):
        raise ConeError("one multiplier per constraint row required")
    if any(mu < 0 for mu in mus):
        raise ConeError("negative row multiplier")
    for j in range(k):
        lhs = sum(mu * row[j] for mu, row in zip(mus, cone.rows)) + nu * norm_coeffs[j]
        if lhs != (1 if j == objective_index else 0):
            raise ConeError("dual multipliers do not reproduce the objective")
    if nu * _fr(norm_rhs) != result.value:
        raise ConeError("dual objective does not match the minimum")
    if any(mu * s != 0 for mu, s in zip(mus, slacks)):
        raise ConeError("complementary slackness fails")
    return True


def lp_min(cone: ConeH, objective_index: int, normalization=None) -> LpResult:
    """Exact minimum of coordinate `objective_index` over the normalized cone.

    The feasible set is {x free : cone.rows . x >= 0, norm . x = rhs} with
    norm defaulting to sum(x) = 1.  Free coordinates are split as u - v and
    a single artificial variable covers the normalization row, so phase one
    is short.  Raises Infeasible / Unbounded.
    """
    k = cone.num_vars
    if not 0 <= objective_index < k:
        raise DimensionMismatch("objective index out of range")
    norm_coeffs, norm_rhs = normalization or default_normalization(k)
    norm_coeffs = _vec(norm_coeffs)
    norm_rhs = _fr(norm_rhs)
    if len(norm_coeffs) != k:
        raise DimensionMismatch("normalization has wrong dimension")
    if norm_rhs == 0:
        raise ValueError("normalization right-hand side must be nonzero")

    m = len(cone.rows)
    # columns: u_0..u_{k-1}, v_0..v_{k-1}, s_0..s_{m-1}, artificial | rhs
    art = 2 * k + m
    ncols = art + 1

    rows: list[list[int]] = []
    row_scales: list[int] = []
    for i, g in enumerate(cone.rows):
        d, ints = _clear_denominators(g)
        r = [0] * (ncols + 1)
        for j, num in enumerate(ints):
            r[j] = -num
            r[k + j] = num
        r[2 * k + i] = 1  # slack: s_i = d * (g . x)
        rows.append(r)
        row_scales.append(d)
    d, ints = _clear_denominators(norm_coeffs + (norm_rhs,))
    sign = 1 if norm_rhs > 0 else -1
    er = [0] * (ncols + 1)
    for j in range(k):
        er[j] = sign * ints[j]
        er[k + j] = -sign * ints[j]
    er[art] = 1
    er[-1] = sign * ints[k]
    rows.append(er)
    norm_scale = Fraction(sign * d)

    tab = _Tableau(rows, [2 * k + i for i in range(m)] + [art])

    # phase one: drive the artificial variable to zero
    cost1 = [0] * ncols
    cost1[art] = 1
    tab.set_cost(cost1)
    tab.optimize()
    if tab.value_of(art) != 0:
        raise Infeasible("normalized cone slice is empty")
    if art in tab.basis:
        r = tab.basis.index(art)
        for e in range(ncols):
            if e != art and tab.rows[r][e]:
                if tab.rows[r][e] < 0:
                    tab.rows[r] = [-a for a in tab.rows[r]]
                tab._pivot(r, e)
                break
        else:
            raise ConeError("degenerate artificial row cannot be pivoted out")
    tab.banned.add(art)

    # phase two: minimize x_obj = u_obj - v_obj
    cost2 = [0] * ncols
    cost2[objective_index] = 1
    cost2[k + objective_index] = -1
    tab.set_cost(cost2)
    tab.optimize()

    witness = tuple(tab.value_of(j) - tab.value_of(k + j) for j in range(k))
    value = witness[objective_index]
    mus = tuple(Fraction(tab.z[2 * k + i], tab.sigma) * row_scales[i] for i in range(m))
    nu = -Fraction(tab.z[art], tab.sigma) * norm_scale
    result = LpResult(value, witness, mus, nu)
    verify_lp_minimum(cone, objective_index, result, (norm_coeffs, norm_rhs))
    return result


# ---------------------------------------------------------------------------
# orthant-containment certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Per-coordinate minima over {d : constraints . d >= 0, sum(d) = 1}.

    Passing (all minima >= 0) certifies that the dual cone of the constraint
    rows is contained in the nonnegative orthant.  Witnesses attain the
    minima; the dual multiplier blocks prove optimality (see LpResult).
    """

    labels: tuple[str, ...]
    constraints: tuple[tuple[Fraction, ...], ...]
    minima: tuple[Fraction, ...]
    witnesses: tuple[tuple[Fraction, ...], ...]
    row_multipliers: tuple[tuple[Fraction, ...], ...]
    normalization_multipliers: tuple[Fraction, ...]
    feasible: bool = True

    def __post_init__(self):
        cone = ConeH(self.constraints, self.labels)
        for j, (mn, wit, mus, nu) in enumerate(zip(
                self.minima, self.witnesses, self.row_multipliers,
                self.normalization_multipliers)):
            verify_lp_minimum(cone, j, LpResult(mn, wit, mus, nu))

    @property
    def passed(self) -> bool:
        return self.feasible and all(mn >= 0 for mn in self.minima)

    def as_dict(self) -> dict:
        return {
            "variables": list(self.labels),
            "constraints": [[str(q) for q in row] for row in self.constraints],
            "normalization": "sum = 1",
            "minima": {lab: str(mn) for lab, mn in zip(self.labels, self.minima)},
            "witnesses": [[str(q) for q in w] for w in self.witnesses],
            "row_multipliers": [[str(q) for q in mus] for mus in self.row_multipliers],
            "normalization_multipliers": [str(q) for q in self.normalization_multipliers],
            "feasible": self.feasible,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def dual_contained_in_orthant(matrix, labels=None) -> Certificate:
    """Certify that {d : matrix . d >= 0} lies inside the orthant {d >= 0}.

    Minimizes every coordinate over the slice sum(d) = 1 and records exact
    minima, witnesses and dual multipliers.  Raises Infeasible when the
    normalized slice is empty (reported, never silently counted as a pass)
    and Unbounded when some coordinate has no finite minimum there, which is
    a containment failure with no finite witness.
    """
    cone = ConeH.from_rows(matrix, labels)
    if all(q == 0 for row in cone.rows for q in row):
        raise ValueError("constraint matrix is zero")
    minima, witnesses, mults, norms = [], [], [], []
    for j in range(cone.num_vars):
        res = lp_min(cone, j)
        minima.append(res.value)
        witnesses.append(res.witness)
        mults.append(res.row_multipliers)
        norms.append(res.normalization_multiplier)
    return Certificate(cone.labels, cone.rows, tuple(minima), tuple(witnesses),
                       tuple(mults), tuple(norms))


# ---------------------------------------------------------------------------
# effectivity threshold along a ray
# ---------------------------------------------------------------------------

def kodaira_energy(base, direction) -> Fraction:
    """inf{a : base + a * direction >= 0 componentwise}, exactly.

    The cone is the nonnegative orthant in the coordinates supplied.  Each
    coordinate with direction > 0 contributes the lower bound -base/direction
    and the infimum is their maximum.  Raises NotAttainable when the feasible
    interval is empty (a dead coordinate, or crossing upper/lower bounds) and
    MinusInfinity when no coordinate bounds a from below.
    """
    b = _vec(base)
    d = _vec(direction)
    if len(b) != len(d):
        raise DimensionMismatch("base and direction have different lengths")
    lower = None
    upper = None
    for bj, dj in zip(b, d):
        if dj > 0:
            t = -bj / dj
            lower = t if lower is None or t > lower else lower
        elif dj < 0:
            t = -bj / dj
            upper = t if upper is None or t < upper else upper
        elif bj < 0:
            raise NotAttainable("coordinate is negative for every shift")
    if lower is not None and upper is not None and lower > upper:
        raise NotAttainable("lower bound exceeds upper bound")
    if lower is None:
        raise MinusInfinity("no coordinate bounds the shift from below")
    return lower


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection
# ---------------------------------------------------------------------------

def _canonical_ray(row: tuple[Fraction, ...]) -> tuple[int, ...]:
    d, ints = _clear_denominators(row)
    g = gcd(*ints)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def fourier_motzkin_project(cone: ConeH, var: int) -> ConeH:
    """Eliminate one variable from a homogeneous inequality system.

    Sound and complete: a point satisfies the output iff it lifts to a point
    of the input.  Exact duplicates are removed but redundant rows may
    remain (no general redundancy elimination).
    """
    if not 0 <= var < cone.num_vars:
        raise DimensionMismatch("variable index out of range")
    pos, neg, zero = [], [], []
    for row in cone.rows:
        c = row[var]
        (pos if c > 0 else neg if c < 0 else zero).append(row)

    def drop(row):
        return tuple(q for j, q in enumerate(row) if j != var)

    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for row in zero:
        r = _canonical_ray(drop(row))
        if any(r) and r not in seen:
            seen.add(r)
            out.append(r)
    for p in pos:
        for q in neg:
            comb = tuple(p[var] * q[j] - q[var] * p[j]
                         for j in range(cone.num_vars) if j != var)
            r = _canonical_ray(comb)
            if any(r) and r not in seen:
                seen.add(r)
                out.append(r)
    labels = tuple(lab for j, lab in enumerate(cone.labels) if j != var)
    return ConeH(tuple(tuple(Fraction(x) for x in r) for r in out), labels)
