"""Closed-form, kernel, and simplex bounds plus the dispatcher."""

import math
from fractions import Fraction

import numpy as np
import pytest

from packing_bounds.finite_bounds import (
    BoundResult,
    Inapplicable,
    Infeasible,
    best_finite_bound,
    cd_bound_closed,
    cd_bound_exact,
    cd_kernel,
    deg1_projective_product,
    deg1_sphere_product,
    deg2_sphere_product,
    select_multiindex,
    simplex_bound_grassmann,
)
from packing_bounds.orthopoly import (
    companion_root,
    dim_vector,
    eval_all,
    gauss_rule,
    gegenbauer_family,
    largest_zero,
    projective_family,
    recurrence_coeffs,
)
from packing_bounds.spaces import (
    Grassmann,
    Projective,
    ProductProjective,
    ProductSphere,
    Sphere,
    Stiefel,
)


# ---------------------------------------------------------------- small degree


def test_deg1_sphere_values():
    assert deg1_sphere_product(1, -0.5).value == pytest.approx(3.0)
    assert deg1_sphere_product(3, -1.0).value == pytest.approx(2.0)
    exact = deg1_sphere_product(2, Fraction(-1, 2))
    assert exact.value == Fraction(3)
    with pytest.raises(Inapplicable):
        deg1_sphere_product(2, 0.0)


def test_deg2_sphere_values():
    assert deg2_sphere_product(1, 3, 0.0).value == pytest.approx(6.0)
    exact = deg2_sphere_product(2, 4, Fraction(1, 16))
    assert exact.value == Fraction(2 * 8 * 15, 16 - 8)  # 2mn(1-t)/(1-mnt)
    with pytest.raises(Inapplicable):
        deg2_sphere_product(2, 4, Fraction(1, 8))


def test_deg1_projective_values():
    assert deg1_projective_product(4, 0.0).value == pytest.approx(4.0)
    assert deg1_projective_product(3, Fraction(1, 6)).value == Fraction(5)
    # neither m nor the field enters
    assert deg1_projective_product(3, 0.1, m=5).value == pytest.approx(
        deg1_projective_product(3, 0.1, m=1).value
    )
    with pytest.raises(Inapplicable):
        deg1_projective_product(4, Fraction(1, 4))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_degree_bounds_cross_exactly(m, n):
    """Both sphere bounds equal 1 + mn at t = -1/(mn), in exact arithmetic."""
    t = Fraction(-1, m * n)
    one = deg1_sphere_product(m, t).value
    two = deg2_sphere_product(m, n, t).value
    assert one == two == 1 + m * n
    assert isinstance(one, Fraction) and isinstance(two, Fraction)


# ----------------------------------------------------------------- the kernel


def test_kernel_degree_zero_is_the_coordinate_gap():
    x, y = Fraction(1, 3), Fraction(1, 7)
    for family in (gegenbauer_family(4), projective_family("C", 5)):
        kernel, npart = cd_kernel(family, (0,), (x,), (y,))
        assert kernel == 1
        assert npart == x - y


def test_kernel_vanishes_on_the_diagonal():
    family = gegenbauer_family(5)
    x = (Fraction(1, 4), Fraction(-2, 5))
    _, npart = cd_kernel(family, (2, 3), x, x)
    assert npart == 0


def test_kernel_identity_exact():
    family = gegenbauer_family(5)
    x = (Fraction(11, 100), Fraction(-42, 100), Fraction(73, 100))
    y = (Fraction(-35, 100), Fraction(27, 100), Fraction(66, 100))
    kernel, npart = cd_kernel(family, (2, 3, 1), x, y)
    assert kernel * (sum(x) - sum(y)) - npart == 0


def test_kernel_identity_float_residual():
    family = gegenbauer_family(5)
    x = (0.11, -0.42, 0.73)
    y = (-0.35, 0.27, 0.66)
    kernel, npart = cd_kernel(family, (2, 3, 1), x, y)
    assert abs(kernel * (sum(x) - sum(y)) - npart) < 1e-10


def test_kernel_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        cd_kernel(gegenbauer_family(4), (1, 2), (0.1,), (0.2,))
    with pytest.raises(ValueError):
        cd_kernel(gegenbauer_family(4), (-1,), (0.1,), (0.2,))


# -------------------------------------------------------------- kernel bounds


def test_worked_instance():
    """Hand-checked numbers for one sphere, degree index (1,)."""
    family = gegenbauer_family(3)
    assert companion_root(family, 1) == pytest.approx(1 / 3, abs=1e-12)
    exact = cd_bound_exact(family, 1, 0.0)
    assert exact.value == pytest.approx(12.0, abs=1e-9)
    assert exact.witness["k"] == [1]
    closed = cd_bound_closed(family, 1, 0.0)
    assert closed.value == pytest.approx(16.0, abs=1e-9)


@pytest.mark.parametrize(
    "family,m,ts",
    [
        (gegenbauer_family(4), 1, (-0.3, 0.0, 0.25, 0.5)),
        (gegenbauer_family(4), 2, (0.0, 0.2, 0.4)),
        (projective_family("C", 4), 2, (0.2, 0.35, 0.5)),
    ],
    ids=["sphere-m1", "sphere-m2", "proj-m2"],
)
def test_closed_form_never_beats_exact(family, m, ts):
    for t in ts:
        exact = cd_bound_exact(family, m, t)
        closed = cd_bound_closed(family, m, t)
        assert closed.witness["k"] == exact.witness["k"]
        assert closed.value >= exact.value - 1e-9


def test_selected_point_satisfies_sign_conditions():
    family = gegenbauer_family(4)
    result = cd_bound_exact(family, 2, 0.2)
    for kj, yj in zip(result.witness["k"], result.witness["y"]):
        vals = eval_all(family, kj + 1, yj)
        assert all(v >= -1e-10 for v in vals[: kj + 1])
        assert vals[kj + 1] <= 1e-10


@pytest.mark.parametrize(
    "family,m,k",
    [
        (gegenbauer_family(4), 2, (2, 3)),
        (projective_family("C", 4), 2, (2, 3)),
    ],
    ids=["sphere", "proj"],
)
def test_certificate_mean_matches_quadrature(family, m, k):
    """f_0 closed form == tensor quadrature of N(x, y) K(x, y)."""
    ys = tuple(companion_root(family, kt) for kt in k)
    dims = dim_vector(family, max(k) + 1)
    pv = [eval_all(family, kt + 1, yt) for kt, yt in zip(k, ys)]
    s_two = [
        sum(dims[i] * pv[j][i] ** 2 for i in range(kj + 1)) for j, kj in enumerate(k)
    ]
    closed = 0.0
    for t_idx, kt in enumerate(k):
        w = dims[kt] * recurrence_coeffs(family, kt).a
        rest = math.prod(s_two[j] for j in range(m) if j != t_idx)
        closed += w * pv[t_idx][kt] ** 2 * rest

    rule = gauss_rule(family, max(k) + 2)
    quad = 0.0
    for wi, xi in zip(rule.weights, rule.nodes):
        for wj, xj in zip(rule.weights, rule.nodes):
            kernel, npart = cd_kernel(family, k, (float(xi), float(xj)), ys)
            quad += wi * wj * kernel * npart
    assert quad == pytest.approx(closed, abs=1e-8 * max(1.0, abs(closed)))
    assert closed > 0


# ------------------------------------------------------------------- selector


@pytest.mark.parametrize(
    "family", [gegenbauer_family(4), projective_family("C", 5)], ids=["sphere", "proj"]
)
def test_selector_single_factor_is_the_classical_choice(family):
    """For m = 1 the search lands on the smallest k with t <= z_k."""
    k_min = 0 if family.kind == "gegenbauer" else 1
    for t in (-0.5, 0.0, 0.1, 0.3, 0.55):
        if family.support[0] == 0.0 and t < 0.0:
            continue
        expected = None
        for k in range(k_min, 17):
            level = family.support[0] if k == 0 else largest_zero(family, k)
            if t <= level + 1e-12:
                expected = (k,)
                break
        assert select_multiindex(family, 1, t) == expected


def test_selector_multifactor_feasibility_is_the_zero_sum():
    # at t=0.3, (1,2) evaluates lower but z_1 + z_2 = 0.5 < 2t, so (2,2) wins
    family = gegenbauer_family(4)
    assert select_multiindex(family, 2, 0.3) == (2, 2)
    assert largest_zero(family, 1) + largest_zero(family, 2) < 0.6


def test_selector_runs_out_of_budget():
    with pytest.raises(Infeasible):
        select_multiindex(gegenbauer_family(4), 1, 0.999, budget=3)
    with pytest.raises(ValueError):
        select_multiindex(gegenbauer_family(4), 0, 0.1)


# -------------------------------------------------------------------- simplex


def test_simplex_bound_values():
    # d^2 = 2 Delta gives exactly 2 points
    assert simplex_bound_grassmann(2, 4, math.sqrt(2.0)).value == pytest.approx(2.0)
    assert simplex_bound_grassmann(1, 2, 1.0).value == pytest.approx(2.0)
    # near the pole the rank cap takes over
    capped = simplex_bound_grassmann(2, 4, math.sqrt(1.01))
    assert capped.value == pytest.approx(10.0)
    assert capped.witness["threshold"] == 10
    assert simplex_bound_grassmann(2, 4, math.sqrt(1.01), num_points_threshold=4).value == 4.0
    with pytest.raises(Inapplicable):
        simplex_bound_grassmann(2, 4, 1.0)


# ----------------------------------------------------------------- dispatcher


def test_dispatcher_requires_exactly_one_parameter():
    with pytest.raises(ValueError):
        best_finite_bound(Sphere(3))
    with pytest.raises(ValueError):
        best_finite_bound(Sphere(3), d=1.0, t=0.5)


def test_dispatcher_sphere_picks_the_smallest_applicable():
    res = best_finite_bound(Sphere(3), t=-0.5)
    assert res.method == "deg1"
    assert res.value == pytest.approx(3.0)
    res = best_finite_bound(Sphere(3), d=math.pi / 2)
    assert res.method == "deg2"
    assert res.value == pytest.approx(6.0, abs=1e-9)


def test_dispatcher_projective_product():
    space = ProductProjective("C", 3, 2)
    res = best_finite_bound(space, d=1.1)
    t = math.cos(1.1) ** 2
    assert res.method == "deg1-proj"
    assert res.value == pytest.approx((1 - t) / (1 / 3 - t))


def test_dispatcher_grassmann_simplex():
    res = best_finite_bound(Grassmann("R", 2, 4), d=1.1)
    assert res.method == "simplex"
    assert res.value == pytest.approx(1.21 / 0.21)
    assert res.floor() == 5


def test_dispatcher_complex_grassmann_reduces_to_projective():
    # at d = sqrt(m) the product angle is t = 0 and the degree-one bound is n
    res = best_finite_bound(Grassmann("C", 2, 5), d=math.sqrt(2.0))
    assert res.method == "reduction"
    assert res.witness["via"] == "deg1-proj"
    assert res.value == pytest.approx(5.0)


def test_dispatcher_stiefel_reduces_to_product_sphere():
    space = Stiefel("R", 2, 4)
    res = best_finite_bound(space, d=2.0)
    t = 0.0  # 1 - d^2/(2m)
    candidates = [deg2_sphere_product(2, 4, t).value]
    candidates.append(cd_bound_exact(gegenbauer_family(4), 2, t).value)
    assert res.method == "reduction"
    assert res.value == pytest.approx(min(candidates))


def test_dispatcher_trivial_cases():
    res = best_finite_bound(Grassmann("R", 2, 4), d=0.0)
    assert res.method == "trivial"
    assert math.isinf(float(res.value))
    with pytest.raises(ValueError):
        res.floor()
    assert best_finite_bound(Sphere(4), t=1.0).method == "trivial"
    with pytest.raises(ValueError):
        best_finite_bound(Grassmann("R", 2, 4), t=0.3)
    with pytest.raises(ValueError):
        best_finite_bound(Stiefel("R", 2, 4), t=0.3)


def test_result_serialization():
    res = best_finite_bound(Projective("R", 4), t=0.1)
    row = res.to_json()
    assert set(row) == {"value", "method", "applicability", "witness"}
    assert isinstance(row["value"], float)
    assert all(not isinstance(v, Fraction) for v in row["witness"].values())


def test_never_beaten_spot_check():
    from packing_bounds.geometry import greedy_code

    space = ProductSphere(3, 2)
    bound = best_finite_bound(space, d=1.2)
    code = greedy_code(space, 1.2, max_iters=300, rng=1)
    assert float(bound.value) >= len(code)
