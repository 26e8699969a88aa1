import json
import random
from fractions import Fraction

import pytest

from effcone.cone import (
    Certificate,
    ConeH,
    DimensionMismatch,
    Infeasible,
    MinusInfinity,
    NotAttainable,
    Unbounded,
    default_normalization,
    dual_contained_in_orthant,
    fourier_motzkin_project,
    kodaira_energy,
    lp_min,
    verify_lp_minimum,
)

Q = Fraction


# ---------------------------------------------------------------------------
# independent oracle: full Fourier-Motzkin elimination of the normalized
# system, homogenized with a slack variable t (t = 1 recovers sum(x) = 1)
# ---------------------------------------------------------------------------

def fm_minimum(rows, objective_index):
    """Returns ('infeasible',), ('unbounded',) or ('min', Fraction)."""
    k = len(rows[0]) if rows else 0
    labels = [f"x{j}" for j in range(k)] + ["t"]
    hom = [list(r) + [0] for r in rows]
    hom.append([1] * k + [-1])
    hom.append([-1] * k + [1])
    hom.append([0] * k + [1])
    cone = ConeH.from_rows(hom, labels)
    for j in range(k):
        if j == objective_index:
            continue
        var = cone.labels.index(f"x{j}")
        cone = fourier_motzkin_project(cone, var)
    xj = cone.labels.index(f"x{objective_index}")
    lower, upper = None, None
    for row in cone.rows:
        alpha, beta = row[xj], row[1 - xj]
        if alpha > 0:
            bound = -beta / alpha
            lower = bound if lower is None or bound > lower else lower
        elif alpha < 0:
            bound = -beta / alpha
            upper = bound if upper is None or bound < upper else upper
        elif beta < 0:
            return ("infeasible",)
    if lower is not None and upper is not None and lower > upper:
        return ("infeasible",)
    if lower is None:
        return ("unbounded",)
    return ("min", lower)


def test_lp_min_two_variable_example():
    cone = ConeH.from_rows([[3, -1], [-1, 1]], ["d2", "d3"])
    res = lp_min(cone, 0)
    assert res.value == Q(1, 4)
    assert res.witness == (Q(1, 4), Q(3, 4))
    assert verify_lp_minimum(cone, 0, res)
    # the feasible slice is the segment from (1/4, 3/4) to (1/2, 1/2)
    res = lp_min(cone, 1)
    assert res.value == Q(1, 2)
    assert res.witness == (Q(1, 2), Q(1, 2))


def test_lp_min_orthant_boundary():
    cone = ConeH.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    res = lp_min(cone, 1)
    assert res.value == 0


def test_lp_min_infeasible():
    cone = ConeH.from_rows([[1], [-1]])
    with pytest.raises(Infeasible):
        lp_min(cone, 0)


def test_lp_min_unbounded():
    cone = ConeH.from_rows([[0, 1]])
    with pytest.raises(Unbounded):
        lp_min(cone, 0)


def test_lp_min_custom_normalization():
    cone = ConeH.from_rows([[1, 0], [0, 1]])
    res = lp_min(cone, 0, ((Q(0), Q(1)), Q(2)))
    assert res.value == 0
    assert res.witness[1] == 2


def test_lp_min_rejects_zero_rhs():
    cone = ConeH.from_rows([[1, 0]])
    with pytest.raises(ValueError):
        lp_min(cone, 0, ((Q(1), Q(1)), Q(0)))


def test_lp_min_degenerate_ties_terminate():
    # scaled duplicate rows force degenerate pivots at every step
    rows = [[1, -1, 0], [-1, 1, 0], [2, -2, 0], [5, -5, 0],
            [1, 0, -1], [3, 0, -3], [0, 1, 0], [0, 3, 0]]
    cone = ConeH.from_rows(rows)
    res = lp_min(cone, 0)
    assert res.value == Q(1, 3)  # x0 = x1 = x2 forced, sum = 1
    oracle = fm_minimum(rows, 0)
    assert oracle == ("min", Q(1, 3))


def test_lp_min_matches_fm_on_random_small_systems():
    rng = random.Random(5)
    checked = 0
    for _ in range(160):
        k = rng.randint(2, 5)
        m = rng.randint(1, 6)
        rows = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(m)]
        if all(all(v == 0 for v in row) for row in rows):
            continue
        j = rng.randrange(k)
        oracle = fm_minimum(rows, j)
        cone = ConeH.from_rows(rows)
        if oracle[0] == "infeasible":
            with pytest.raises(Infeasible):
                lp_min(cone, j)
        elif oracle[0] == "unbounded":
            with pytest.raises(Unbounded):
                lp_min(cone, j)
        else:
            res = lp_min(cone, j)
            assert res.value == oracle[1]
            assert verify_lp_minimum(cone, j, res)
        checked += 1
    assert checked > 100


def test_lp_results_are_exact_rationals():
    cone = ConeH.from_rows([[3, -1], [-1, 1]])
    res = lp_min(cone, 0)
    assert isinstance(res.value, Fraction)
    assert all(isinstance(v, Fraction) for v in res.witness)
    assert all(isinstance(v, Fraction) for v in res.row_multipliers)
    assert isinstance(res.normalization_multiplier, Fraction)


def test_verify_rejects_tampered_result():
    cone = ConeH.from_rows([[3, -1], [-1, 1]])
    res = lp_min(cone, 0)
    bad = type(res)(res.value + 1, res.witness, res.row_multipliers,
                    res.normalization_multiplier)
    with pytest.raises(Exception):
        verify_lp_minimum(cone, 0, bad)


# ---------------------------------------------------------------------------
# orthant containment certificates
# ---------------------------------------------------------------------------

def test_certificate_identity_rows():
    cert = dual_contained_in_orthant([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert cert.minima == (0, 0, 0)
    assert cert.passed


def test_certificate_with_pinned_coordinate():
    # adjoining -x0 >= 0 to the orthant forces x0 = 0 on the slice
    cert = dual_contained_in_orthant([[1, 0], [0, 1], [-1, 0]])
    assert cert.minima == (0, 1)
    assert cert.passed


def test_certificate_failure_detected():
    cert = dual_contained_in_orthant([[1, 2], [2, 1]])
    assert cert.minima == (-1, -1)
    assert not cert.passed


def test_certificate_unbounded_coordinate_propagates():
    # {x0 >= |x1|} contains rays leaving the orthant; the x1 minimum over the
    # normalized slice is unbounded below, which is a reported failure too
    with pytest.raises(Unbounded):
        dual_contained_in_orthant([[1, 1], [1, -1]])


def test_certificate_infeasible_slice_propagates():
    with pytest.raises(Infeasible):
        dual_contained_in_orthant([[1, 0], [-1, 0], [0, 1], [0, -1]])


def test_certificate_rejects_zero_matrix():
    with pytest.raises(ValueError):
        dual_contained_in_orthant([[0, 0], [0, 0]])


def test_certificate_json_round_trip():
    cert = dual_contained_in_orthant([[3, -1], [-1, 1]], ["B[2]", "B[3]"])
    data = json.loads(cert.to_json())
    assert data["pass"] is True
    assert data["minima"] == {"B[2]": "1/4", "B[3]": "1/2"}
    assert data["witnesses"][0] == ["1/4", "3/4"]
    assert json.dumps(data, sort_keys=True) == cert.to_json()


def test_certificate_validates_on_construction():
    cert = dual_contained_in_orthant([[3, -1], [-1, 1]])
    with pytest.raises(Exception):
        Certificate(cert.labels, cert.constraints,
                    (cert.minima[0] + 1, cert.minima[1]),
                    cert.witnesses, cert.row_multipliers,
                    cert.normalization_multipliers)


# ---------------------------------------------------------------------------
# effectivity threshold
# ---------------------------------------------------------------------------

def test_kodaira_energy_full_space_example():
    base = (Q(1, 3), Q(0), Q(-1))
    direction = (Q(1, 3), Q(1), Q(2))
    assert kodaira_energy(base, direction) == Q(1, 2)


def test_kodaira_energy_zero_base():
    assert kodaira_energy((0, 0), (1, 2)) == 0


def test_kodaira_energy_dead_coordinate():
    with pytest.raises(NotAttainable):
        kodaira_energy((-1, 0), (0, 1))


def test_kodaira_energy_crossing_bounds():
    # needs a >= 1 from the first coordinate but a <= 0 from the second
    with pytest.raises(NotAttainable):
        kodaira_energy((-1, 0), (1, -1))


def test_kodaira_energy_minus_infinity():
    with pytest.raises(MinusInfinity):
        kodaira_energy((1,), (-1,))


def test_kodaira_energy_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kodaira_energy((1, 2), (1,))


def kodaira_via_lp(base, direction):
    """Independent route: minimize a over {(a, t) : a*dir + t*base >= 0,
    t = 1} with the simplex engine."""
    rows = [[d, b] for b, d in zip(base, direction)]
    cone = ConeH.from_rows(rows, ["a", "t"])
    return lp_min(cone, 0, ((Q(0), Q(1)), Q(1))).value


def test_kodaira_energy_agrees_with_lp_route():
    from effcone.fiber import fiber_class, to_A_basis
    from effcone.picard import kodaira_full, reduce_to_B, standard_class

    for n in range(3, 13):
        base = reduce_to_B(standard_class(n, "canonical")
                           + standard_class(n, "boundary")).b_vector()
        direction = reduce_to_B(standard_class(n, "hyperplane")).b_vector()
        assert kodaira_via_lp(base, direction) == kodaira_full(n) == Q(2, n)
        k = to_A_basis(fiber_class(n, "K"))
        lh = to_A_basis(fiber_class(n, "Lhalf"))
        assert kodaira_via_lp((k.a_sub + 1, k.a_top + 1),
                              (lh.a_sub, lh.a_top)) == Q(2, n)

    rng = random.Random(77)
    for _ in range(40):
        k = rng.randint(1, 5)
        base = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(k)]
        direction = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(k)]
        try:
            threshold = kodaira_energy(base, direction)
        except (NotAttainable, MinusInfinity):
            continue
        assert kodaira_via_lp(base, direction) == threshold


def test_kodaira_energy_shift_covariance():
    rng = random.Random(11)
    for _ in range(50):
        k = rng.randint(1, 6)
        base = [Q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(k)]
        direction = [Q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(k)]
        if not any(d > 0 for d in direction):
            continue
        shift = Q(rng.randint(-20, 20), rng.randint(1, 7))
        try:
            plain = kodaira_energy(base, direction)
        except NotAttainable:
            continue
        shifted = [b + shift * d for b, d in zip(base, direction)]
        try:
            moved = kodaira_energy(shifted, direction)
        except NotAttainable:
            pytest.fail("shift changed attainability")
        assert moved == plain - shift


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection
# ---------------------------------------------------------------------------

def test_fm_single_step_example():
    cone = ConeH.from_rows([[3, -1], [-1, 1]], ["d2", "d3"])
    projected = fourier_motzkin_project(cone, 1)
    assert projected.labels == ("d2",)
    assert projected.rows == ((Q(1),),)  # one combination, reduced: d2 >= 0


def test_fm_absent_variable():
    cone = ConeH.from_rows([[1, 2, 0], [0, -1, 0]], ["x", "y", "z"])
    projected = fourier_motzkin_project(cone, 2)
    assert projected.labels == ("x", "y")
    assert projected.rows == ((Q(1), Q(2)), (Q(0), Q(-1)))


def test_fm_full_elimination_of_feasible_system():
    cone = ConeH.from_rows([[1, -1, 2], [0, 1, -1], [1, 1, 1]])
    for _ in range(2):
        cone = fourier_motzkin_project(cone, 0)
    assert all(len(r) == 1 for r in cone.rows)
    # homogeneous systems stay feasible: no contradictory constant rows
    assert ConeH.from_rows(cone.rows or [[0]], cone.labels or ("x",))


def test_fm_projection_sound_and_complete():
    rng = random.Random(23)
    for _ in range(40):
        k = rng.randint(2, 4)
        m = rng.randint(1, 5)
        rows = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(m)]
        cone = ConeH.from_rows(rows)
        var = rng.randrange(k)
        projected = fourier_motzkin_project(cone, var)
        for _ in range(30):
            point = [Q(rng.randint(-6, 6), 2) for _ in range(k - 1)]
            if not projected.contains(point):
                continue
            # completeness: a lift must exist; construct it explicitly
            lower, upper = None, None
            feasible = True
            for row in cone.rows:
                coef = row[var]
                rest = sum(c * p for c, p in
                           zip([c for j, c in enumerate(row) if j != var], point))
                if coef > 0:
                    bound = -rest / coef
                    lower = bound if lower is None or bound > lower else lower
                elif coef < 0:
                    bound = -rest / coef
                    upper = bound if upper is None or bound < upper else upper
                elif rest < 0:
                    feasible = False
            assert feasible
            assert lower is None or upper is None or lower <= upper
            if lower is None and upper is None:
                lift = Q(0)
            elif lower is None:
                lift = upper
            elif upper is None:
                lift = lower
            else:
                lift = (lower + upper) / 2
            full = list(point)
            full.insert(var, lift)
            assert cone.contains(full)
        # soundness: points of the original cone project into the output
        for _ in range(10):
            point = [Q(rng.randint(-6, 6), 2) for _ in range(k)]
            if cone.contains(point):
                shadow = [p for j, p in enumerate(point) if j != var]
                assert projected.contains(shadow)
