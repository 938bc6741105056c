"""Sampling, distances, embeddings, and greedy code construction."""

import math

import numpy as np
import pytest

from packing_bounds.geometry import (
    GrassmannPoint,
    chordal_distance,
    embed_beta,
    embed_gamma,
    embed_nu,
    greedy_code,
    principal_angles,
    product_angle,
    product_t_components,
    random_grassmann,
    random_product_point,
    random_stiefel,
    sigma_overlap,
    space_distance,
    stiefel_distance,
    verify_min_distance,
)
from packing_bounds.spaces import (
    Grassmann,
    ProductProjective,
    ProductSphere,
    Sphere,
    Stiefel,
)


@pytest.mark.parametrize("field", ["R", "C"])
def test_random_frames_are_orthonormal(field):
    rng = np.random.default_rng(11)
    for _ in range(5):
        p = random_grassmann(2, 6, field, rng)
        gram = p.basis @ p.basis.conj().T
        assert np.allclose(gram, np.eye(2), atol=1e-10)
        x = random_stiefel(3, 7, field, rng)
        gram = x.basis @ x.basis.conj().T
        assert np.allclose(gram, np.eye(3), atol=1e-10)


def test_point_constructor_rejects_skew_frames():
    bad = np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    with pytest.raises(ValueError):
        GrassmannPoint(bad, "R")


@pytest.mark.parametrize("field,m,n", [("R", 2, 5), ("C", 2, 6), ("R", 3, 8)])
def test_overlap_and_principal_angles(field, m, n):
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = random_grassmann(m, n, field, rng)
        q = random_grassmann(m, n, field, rng)
        sigma = sigma_overlap(p, q)
        assert -1e-12 <= sigma <= m + 1e-12
        assert sigma == pytest.approx(sigma_overlap(q, p), abs=1e-12)
        angles = principal_angles(p, q)
        assert angles.shape == (m,)
        assert np.all(angles >= -1e-12) and np.all(angles <= math.pi / 2 + 1e-12)
        assert sigma == pytest.approx(float(np.sum(np.cos(angles) ** 2)), abs=1e-9)
        d = chordal_distance(p, q)
        assert d * d + sigma == pytest.approx(m, abs=1e-9)


def test_self_distance_is_zero():
    rng = np.random.default_rng(5)
    p = random_grassmann(2, 5, "R", rng)
    assert chordal_distance(p, p) == pytest.approx(0.0, abs=1e-7)
    assert sigma_overlap(p, p) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("field,m,n", [("R", 2, 5), ("R", 3, 8), ("C", 2, 6)])
def test_embedding_angle_inequalities_small_sample(field, m, n):
    """cos theta(beta) <= sqrt(sigma/m) and the nu image t <= sigma/m."""
    rng = np.random.default_rng(17)
    for _ in range(200):
        p = random_grassmann(m, n, field, rng)
        q = random_grassmann(m, n, field, rng)
        sigma = sigma_overlap(p, q)
        b1, b2 = embed_beta(p), embed_beta(q)
        assert np.linalg.norm(b1) == pytest.approx(1.0, abs=1e-12)
        assert float(np.dot(b1, b2)) <= math.sqrt(sigma / m) + 1e-12
        t_nu = product_angle(embed_nu(p), embed_nu(q)).t
        assert t_nu <= sigma / m + 1e-12


def test_nu_image_components_are_squared_overlaps():
    rng = np.random.default_rng(23)
    p = random_grassmann(2, 5, "C", rng)
    q = random_grassmann(2, 5, "C", rng)
    comps = product_t_components(embed_nu(p), embed_nu(q))
    for i in range(2):
        inner = abs(np.vdot(q.basis[i], p.basis[i])) ** 2
        assert comps[i] == pytest.approx(inner, abs=1e-12)


@pytest.mark.parametrize("field", ["R", "C"])
def test_gamma_is_a_scaled_isometry(field):
    rng = np.random.default_rng(29)
    for _ in range(50):
        x = random_stiefel(3, 6, field, rng)
        y = random_stiefel(3, 6, field, rng)
        lhs = stiefel_distance(x, y)
        rhs = math.sqrt(3) * float(np.linalg.norm(embed_gamma(x) - embed_gamma(y)))
        assert lhs == pytest.approx(rhs, abs=1e-10)
        assert np.linalg.norm(embed_gamma(x)) == pytest.approx(1.0, abs=1e-12)


def test_stiefel_distance_is_frobenius():
    rng = np.random.default_rng(31)
    x = random_stiefel(2, 5, "R", rng)
    y = random_stiefel(2, 5, "R", rng)
    assert stiefel_distance(x, y) == pytest.approx(float(np.linalg.norm(x.basis - y.basis)))


def test_product_angle_range():
    rng = np.random.default_rng(37)
    for kind, field in (("sphere", "R"), ("projective", "C")):
        u = random_product_point(3, 4, kind, field, rng)
        v = random_product_point(3, 4, kind, field, rng)
        spec = product_angle(u, v)
        assert spec.kind == kind
        lo = -1.0 if kind == "sphere" else 0.0
        assert lo <= spec.t <= 1.0


def test_product_points_of_mixed_kind_do_not_compare():
    rng = np.random.default_rng(41)
    u = random_product_point(2, 3, "sphere", "R", rng)
    v = random_product_point(2, 3, "projective", "R", rng)
    with pytest.raises(ValueError):
        product_t_components(u, v)


SPACES = [
    Sphere(4),
    ProductSphere(3, 2),
    ProductProjective("C", 3, 2),
    Grassmann("R", 2, 4),
    Stiefel("R", 2, 4),
]


@pytest.mark.parametrize("space", SPACES, ids=lambda s: type(s).__name__)
def test_greedy_code_respects_minimum_distance(space):
    dist = 1.1 if isinstance(space, (Grassmann, Stiefel)) else 1.2
    code = greedy_code(space, dist, max_iters=200, rng=0)
    assert len(code) >= 2
    assert verify_min_distance(space, code, dist - 1e-12)


def test_greedy_code_is_deterministic():
    space = ProductSphere(3, 2)
    a = greedy_code(space, 1.2, max_iters=150, rng=7)
    b = greedy_code(space, 1.2, max_iters=150, rng=7)
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert space_distance(space, p, q) == pytest.approx(0.0, abs=1e-7)


def test_space_distance_kinds():
    rng = np.random.default_rng(43)
    p = random_grassmann(2, 5, "R", rng)
    q = random_grassmann(2, 5, "R", rng)
    assert space_distance(Grassmann("R", 2, 5), p, q) == pytest.approx(chordal_distance(p, q))
    u = random_product_point(2, 4, "sphere", "R", rng)
    v = random_product_point(2, 4, "sphere", "R", rng)
    theta = space_distance(ProductSphere(4, 2), u, v)
    assert 0.0 <= theta <= math.pi
