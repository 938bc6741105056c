"""Recurrence, quadrature, dimension, and root-finding checks."""

import dataclasses
import math
import numbers
import warnings
from fractions import Fraction

import numpy as np
import pytest

from packing_bounds.orthopoly import (
    BracketError,
    companion_root,
    cumulative_dimension,
    dim_vector,
    dimension,
    dimension_exact,
    eval_all,
    eval_all_exact,
    eval_pk,
    gauss_rule,
    gegenbauer_family,
    harmonic_dimension,
    jacobi_family,
    largest_zero,
    projective_family,
    recurrence_coeffs,
    squared_norm,
)

FAMILIES = [
    gegenbauer_family(3),
    gegenbauer_family(4),
    gegenbauer_family(8),
    projective_family("R", 4),
    projective_family("C", 3),
    projective_family("H", 4),
    projective_family("O", 3),
]

IDS = [f.label() for f in FAMILIES]


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_recurrence_coefficients_sum_to_one(family):
    # x P_k = a P_{k+1} + b P_k + c P_{k-1} evaluated at x = 1 forces a+b+c = 1
    for k in range(11):
        co = recurrence_coeffs(family, k, exact=True)
        assert co.a + co.b + co.c == 1
        assert co.a > 0


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_normalization_at_one(family):
    vals = eval_all(family, 12, 1.0)
    assert vals == pytest.approx([1.0] * 13, abs=1e-12)
    exact = eval_all_exact(family, 8, Fraction(1))
    assert all(v == 1 for v in exact)


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_exact_and_float_evaluation_agree(family):
    lo, hi = family.support
    x = Fraction(3, 7) * Fraction(int(hi - lo)) + Fraction(int(lo))
    exact = eval_all_exact(family, 8, x)
    vals = eval_all(family, 8, float(x))
    for e, v in zip(exact, vals):
        assert float(e) == pytest.approx(v, abs=1e-12)


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_quadrature_orthogonality(family):
    """[P_i, P_j] is diagonal and the diagonal matches squared_norm."""
    rule = gauss_rule(family, 12)
    mat = np.array([eval_all(family, 8, float(x)) for x in rule.nodes])
    gram = (mat * rule.weights[:, None]).T @ mat
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-9
    for k in range(9):
        assert gram[k, k] == pytest.approx(squared_norm(family, k, rule), rel=1e-12)


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_gauss_rule_properties(family):
    rule = gauss_rule(family, 10)
    lo, hi = family.support
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-13)
    assert np.all(rule.nodes >= lo - 1e-12) and np.all(rule.nodes <= hi + 1e-12)
    # zonal polynomials have zero mean for k >= 1
    mat = np.array([eval_all(family, 10, float(x)) for x in rule.nodes])
    means = rule.weights @ mat
    assert means[0] == pytest.approx(1.0, abs=1e-13)
    assert np.max(np.abs(means[1:])) < 1e-10


def test_gegenbauer_dimensions_match_harmonic_formula():
    for n in range(3, 11):
        family = gegenbauer_family(n)
        for k in range(11):
            d = dimension(family, k)
            assert round(d) == harmonic_dimension(n, k)
            assert abs(d - round(d)) < 1e-6


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_dimension_exact_is_rational_and_near_float(family):
    dims = dim_vector(family, 8)
    for k in range(9):
        e = dimension_exact(family, k)
        assert isinstance(e, numbers.Rational)
        assert float(e) == pytest.approx(dims[k], rel=1e-9)
        assert e >= 1


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_cumulative_dimension_increases(family):
    prev = 0.0
    for k in range(7):
        cur = cumulative_dimension(family, k)
        assert cur > prev
        prev = cur


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_zeros_interlace_and_companion_sits_between(family):
    zeros = [largest_zero(family, k) for k in range(1, 8)]
    assert all(b > a for a, b in zip(zeros, zeros[1:]))
    for k in range(1, 7):
        y = companion_root(family, k)
        assert zeros[k - 1] - 1e-12 <= y <= zeros[k] + 1e-12


@pytest.mark.parametrize("family", FAMILIES, ids=IDS)
def test_companion_root_sign_pattern(family):
    for k in range(1, 6):
        y = companion_root(family, k)
        vals = eval_all(family, k + 1, y)
        assert vals[k] + vals[k + 1] == pytest.approx(0.0, abs=1e-12)
        assert all(v >= -1e-10 for v in vals[: k + 1])
        assert vals[k + 1] <= 1e-10


def test_companion_root_degree_zero():
    # Gegenbauer: P_0 + P_1 = 1 + x vanishes at the left end of the support
    assert companion_root(gegenbauer_family(5), 0) == pytest.approx(-1.0, abs=1e-12)
    # Jacobi: P_1 never reaches -1 on [0, 1], so there is no root to find
    with pytest.raises(BracketError):
        companion_root(projective_family("C", 4), 0)


def test_eval_pk_vectorized_matches_scalar():
    family = projective_family("C", 5)
    xs = np.linspace(0.0, 1.0, 7)
    vec = eval_pk(family, 4, xs)
    for x, v in zip(xs, vec):
        assert eval_all(family, 4, float(x))[4] == pytest.approx(v, abs=1e-13)


def test_eval_pk_warns_outside_support():
    family = projective_family("R", 4)
    with pytest.warns(RuntimeWarning):
        eval_pk(family, 3, -0.5)
    # opt-out used by vectorized callers that clip themselves
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eval_pk(family, 3, -0.5, check_support=False)


def test_largest_zero_approaches_its_limit():
    """z_k for the projective R family at 2k/n = 1/2, against the limit value.

    The limiting expression 4(u+1)/(u+2)^2 at u = 1/rho = 2 equals 3/4; the
    finite-n deviation shrinks as n grows and is already below 5% at n=200.
    """
    limit = 0.75
    devs = {}
    for n in (100, 200):
        z = largest_zero(projective_family("R", n), n // 4)
        devs[n] = abs(z - limit) / limit
    assert devs[200] < 0.05
    assert devs[100] < 0.10
    assert devs[200] < devs[100]


def test_log_cumulative_dimension_approaches_entropy_limit():
    n, k = 200, 50
    family = projective_family("R", n)
    rho = 2 * k / n
    limit = (1 + rho) * math.log(1 + rho) - rho * math.log(rho)
    val = math.log(cumulative_dimension(family, k)) / n
    assert abs(val - limit) / limit < 0.05


def test_recurrence_fault_changes_values_not_dimensions():
    family = gegenbauer_family(5)
    broken = dataclasses.replace(family, recurrence_fault=1e-3)
    assert eval_all(broken, 4, 0.3)[4] != pytest.approx(eval_all(family, 4, 0.3)[4], abs=1e-9)
    # dimension data must come from the clean recurrence
    for k in range(6):
        assert dimension_exact(broken, k) == dimension_exact(family, k)


def test_family_validation():
    with pytest.raises(ValueError):
        gegenbauer_family(1)
    with pytest.raises(ValueError):
        jacobi_family(-1, 0)
    with pytest.raises(ValueError):
        projective_family("O", 4)
    with pytest.raises(ValueError):
        projective_family("X", 3)
