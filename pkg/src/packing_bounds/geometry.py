"""Concrete points on the manifolds: sampling, overlaps, and embeddings.

A plane p in G_{m,n}(K) is represented by an m x n matrix whose rows are an
orthonormal basis; the overlap of two planes is

    sigma(p, q) = trace(pi_p pi_q) = sum_{i,j} |<e_i, e'_j>|^2
                = sum_i cos^2 theta_i,

with theta_i the principal angles, and the chordal distance is
d_c = sqrt(m - sigma).  sigma, the principal angles, and d_c do not depend
on the chosen bases.  The embeddings:

  * beta sends a plane to the unit vector obtained by concatenating its
    realified basis rows scaled by 1/sqrt(m) (basis-dependent as a point,
    but cos theta(beta(p), beta(q)) <= sqrt(sigma/m) always);
  * gamma scales a Stiefel frame by 1/sqrt(m), an isometry onto a sphere up
    to the factor sqrt(m);
  * nu sends a plane to the m-tuple of pairwise orthogonal lines spanned by
    a basis, a point of the m-fold product of projective spaces with
    cos^2 theta(nu(p), nu(q)) <= sigma/m.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .spaces import (
    AngleSpec,
    Grassmann,
    Projective,
    ProductProjective,
    ProductSphere,
    Space,
    Sphere,
    Stiefel,
)

logger = logging.getLogger(__name__)

_ORTHO_TOL = 1e-12


def _check_frame(basis: np.ndarray, what: str) -> np.ndarray:
    basis = np.ascontiguousarray(basis)
    if basis.ndim != 2 or basis.shape[0] > basis.shape[1]:
        raise ValueError(f"{what} needs an m x n matrix with m <= n, got shape {basis.shape}")
    gram = basis @ basis.conj().T
    if not np.allclose(gram, np.eye(basis.shape[0]), atol=1e-10):
        raise ValueError(f"{what} rows are not orthonormal")
    return basis


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """A plane, as an orthonormal row basis (any basis of the same plane is
    an equivalent representative)."""

    basis: np.ndarray
    field: str

    def __post_init__(self):
        object.__setattr__(self, "basis", _check_frame(self.basis, "a plane"))

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class StiefelPoint:
    """An ordered orthonormal frame (the rows themselves matter)."""

    basis: np.ndarray
    field: str

    def __post_init__(self):
        object.__setattr__(self, "basis", _check_frame(self.basis, "a frame"))

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class ProductPoint:
    """An m-tuple of unit vectors, read as sphere points or as lines."""

    vectors: tuple
    kind: str  # "sphere" | "projective"

    def __post_init__(self):
        for v in self.vectors:
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValueError("product-point coordinates must be unit vectors")

    @property
    def m(self) -> int:
        return len(self.vectors)


def _gaussian(rng: np.random.Generator, shape, field: str) -> np.ndarray:
    if field == "R":
        return rng.standard_normal(shape)
    if field == "C":
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    raise ValueError(f"sampling supports fields R and C, got {field!r}")


def _haar_frame(m: int, n: int, field: str, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal m x n rows, Haar-distributed (QR with phase correction)."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    for _ in range(8):
        g = _gaussian(rng, (n, m), field)
        q, r = np.linalg.qr(g)
        diag = np.diagonal(r)
        if np.any(np.abs(diag) < 1e-12):  # degenerate draw: resample
            continue
        q = q * (diag / np.abs(diag)).conj()
        return np.ascontiguousarray(q.T)
    raise RuntimeError("repeatedly degenerate Gaussian draws; broken RNG state?")


def random_grassmann(m: int, n: int, field: str, rng=None) -> GrassmannPoint:
    """Uniform random plane in G_{m,n}(K), K in {R, C}."""
    rng = np.random.default_rng(rng)
    return GrassmannPoint(_haar_frame(m, n, field, rng), field)


def random_stiefel(m: int, n: int, field: str, rng=None) -> StiefelPoint:
    """Uniform random orthonormal frame in V_{m,n}(K), K in {R, C}."""
    rng = np.random.default_rng(rng)
    return StiefelPoint(_haar_frame(m, n, field, rng), field)


def random_product_point(m: int, n: int, kind: str, field: str = "R", rng=None) -> ProductPoint:
    """m independent uniform unit vectors in K^n."""
    rng = np.random.default_rng(rng)
    vecs = []
    for _ in range(m):
        v = _gaussian(rng, n, field)
        vecs.append(v / np.linalg.norm(v))
    return ProductPoint(tuple(vecs), kind)


def sigma_overlap(p, q) -> float:
    """sigma(p, q) = squared Frobenius norm of the cross-Gram matrix."""
    if p.basis.shape != q.basis.shape:
        raise ValueError("points live on different manifolds")
    cross = p.basis @ q.basis.conj().T
    return float(np.sum(np.abs(cross) ** 2))


def principal_angles(p: GrassmannPoint, q: GrassmannPoint) -> np.ndarray:
    """Principal angles in ascending order, from the cross-Gram SVD."""
    cross = p.basis @ q.basis.conj().T
    s = np.linalg.svd(cross, compute_uv=False)
    over = float(np.max(s) - 1.0)
    if over > 1e-10:
        logger.warning("clamping singular value exceeding 1 by %.3e", over)
    return np.sort(np.arccos(np.clip(s, 0.0, 1.0)))


def chordal_distance(p: GrassmannPoint, q: GrassmannPoint) -> float:
    """d_c(p, q) = sqrt(m - sigma(p, q))."""
    return math.sqrt(max(p.m - sigma_overlap(p, q), 0.0))


def stiefel_distance(x: StiefelPoint, y: StiefelPoint) -> float:
    """Euclidean distance of frames, sqrt(2) sqrt(m - sum Re<e_i, e'_i>)."""
    return float(np.linalg.norm(x.basis - y.basis))


def _realify(v: np.ndarray) -> np.ndarray:
    """Identify K^n with R^{cn} coordinatewise (z = x + iy -> (x, y))."""
    if not np.iscomplexobj(v):
        return np.asarray(v, dtype=float)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def embed_beta(p: GrassmannPoint) -> np.ndarray:
    """Unit vector in R^{cmn}: realified basis rows concatenated, / sqrt(m).

    The image point depends on the basis, but the angle between two images
    satisfies cos theta <= sqrt(sigma/m) for every choice of bases.
    """
    rows = [_realify(p.basis[i]) for i in range(p.m)]
    return np.concatenate(rows) / math.sqrt(p.m)


def embed_gamma(x: StiefelPoint) -> np.ndarray:
    """Unit vector in R^{cmn}: the frame realified and scaled by 1/sqrt(m).

    Scaled isometry: d(x, y) = sqrt(m) * ||gamma(x) - gamma(y)||.
    """
    rows = [_realify(x.basis[i]) for i in range(x.m)]
    return np.concatenate(rows) / math.sqrt(x.m)


def embed_nu(p: GrassmannPoint) -> ProductPoint:
    """The m pairwise orthogonal lines spanned by a basis of the plane."""
    return ProductPoint(tuple(p.basis[i] for i in range(p.m)), "projective")


def product_t_components(u: ProductPoint, v: ProductPoint) -> np.ndarray:
    """Per-coordinate t values: Re<u_i, v_i> (sphere) or |<u_i, v_i>|^2."""
    if u.kind != v.kind or u.m != v.m:
        raise ValueError("product points are not comparable")
    out = np.empty(u.m)
    for i, (a, b) in enumerate(zip(u.vectors, v.vectors)):
        inner = np.vdot(b, a)  # <a, b> with the second slot conjugated
        out[i] = inner.real if u.kind == "sphere" else abs(inner) ** 2
    return out


def product_angle(u: ProductPoint, v: ProductPoint) -> AngleSpec:
    """Product angle via the mean of the per-coordinate t values."""
    t = float(np.mean(product_t_components(u, v)))
    return AngleSpec(u.kind, min(max(t, -1.0), 1.0))


def _sample_point(space: Space, rng: np.random.Generator):
    if isinstance(space, Sphere):
        return random_product_point(1, space.n, "sphere", "R", rng)
    if isinstance(space, ProductSphere):
        return random_product_point(space.m, space.n, "sphere", "R", rng)
    if isinstance(space, Projective):
        fld = space.field if space.field in ("R", "C") else None
        if fld is None:
            raise ValueError("sampling supports R and C coordinates only")
        return random_product_point(1, space.n, "projective", fld, rng)
    if isinstance(space, ProductProjective):
        if space.field not in ("R", "C"):
            raise ValueError("sampling supports R and C coordinates only")
        return random_product_point(space.m, space.n, "projective", space.field, rng)
    if isinstance(space, Grassmann):
        return random_grassmann(space.m, space.n, space.field, rng)
    if isinstance(space, Stiefel):
        return random_stiefel(space.m, space.n, space.field, rng)
    raise TypeError(f"not a space: {space!r}")


def space_distance(space: Space, a, b) -> float:
    """The metric each space's bounds consume.

    Angular (product angle theta) for spheres, projective spaces, and their
    products; chordal for the Grassmannian; Euclidean for Stiefel frames.
    """
    if isinstance(space, (Sphere, ProductSphere, Projective, ProductProjective)):
        return product_angle(a, b).theta
    if isinstance(space, Grassmann):
        return chordal_distance(a, b)
    if isinstance(space, Stiefel):
        return stiefel_distance(a, b)
    raise TypeError(f"not a space: {space!r}")


def greedy_code(space: Space, min_distance: float, max_iters: int = 1000, rng=None) -> list:
    """Greedy rejection-sampled code with pairwise distances >= min_distance.

    Every accepted point is checked against all previous ones, so the
    returned list is a certificate: any upper bound for codes at this
    minimum distance must be >= its length.  Size is capped by max_iters.
    """
    rng = np.random.default_rng(rng)
    code: list = []
    for _ in range(max_iters):
        cand = _sample_point(space, rng)
        if all(space_distance(space, cand, p) >= min_distance for p in code):
            code.append(cand)
    return code


def verify_min_distance(space: Space, code: list, min_distance: float) -> bool:
    """Exhaustive pairwise re-check of a code's minimum distance."""
    for i in range(len(code)):
        for j in range(i + 1, len(code)):
            if space_distance(space, code[i], code[j]) < min_distance:
                return False
    return True
