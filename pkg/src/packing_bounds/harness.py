"""Randomized verification of the inequalities the bounds stand on.

Three suites, each reporting the worst observed violation:

  * embedding-angle-inequalities: for random plane pairs, the unit-vector
    embedding satisfies cos theta(beta(p), beta(q)) <= sqrt(sigma/m) and
    the line-tuple embedding satisfies cos^2 theta(nu(p), nu(q)) <= sigma/m;
  * kernel-identity: the product reproducing kernel satisfies
    K(x,y) (sigma(x) - sigma(y)) = N(x,y) exactly; points are drawn as
    dyadic rationals so the residual is computed in exact arithmetic and
    any deviation is a genuine defect, not roundoff;
  * zonal-positivity: sums of the zonal kernel over random codes are
    nonnegative, the positive-definiteness the LP bounds rely on.

The kernel suite accepts a fault knob that perturbs the evaluation
recurrence; it exists so the harness itself can be shown to catch a
corrupted build.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np

from . import geometry
from .finite_bounds import cd_kernel
from .orthopoly import PolyFamily, eval_pk, gegenbauer_family, projective_family
from .spaces import ProductProjective, ProductSphere, Projective, Sphere

LEMMA_SPACES = (("R", 2, 5), ("R", 3, 8), ("C", 2, 6))
_DYADIC = 1 << 20


def _report(name: str, samples: int, violations: int, worst: float, detail: str = "") -> dict:
    return {
        "name": name,
        "samples": samples,
        "violations": violations,
        "max_violation": worst,
        "passed": violations == 0,
        "skipped": False,
        "detail": detail,
    }


def _skipped(name: str) -> dict:
    return {
        "name": name,
        "samples": 0,
        "violations": 0,
        "max_violation": 0.0,
        "passed": True,
        "skipped": True,
        "detail": "budget 0",
    }


def check_embedding_inequalities(n_pairs: int, rng=None, tol: float = 1e-12) -> dict:
    """Monte-Carlo check of the two embedding angle inequalities."""
    rng = np.random.default_rng(rng)
    worst = -math.inf
    violations = 0
    for field, m, n in LEMMA_SPACES:
        for _ in range(n_pairs):
            p = geometry.random_grassmann(m, n, field, rng)
            q = geometry.random_grassmann(m, n, field, rng)
            sigma = geometry.sigma_overlap(p, q)
            cos_beta = float(np.dot(geometry.embed_beta(p), geometry.embed_beta(q)))
            t_nu = geometry.product_angle(geometry.embed_nu(p), geometry.embed_nu(q)).t
            gap = max(cos_beta - math.sqrt(sigma / m), t_nu - sigma / m)
            worst = max(worst, gap)
            if gap > tol:
                violations += 1
    return _report(
        "embedding-angle-inequalities",
        n_pairs * len(LEMMA_SPACES),
        violations,
        worst,
        "cos beta <= sqrt(sigma/m), cos^2 nu <= sigma/m",
    )


def kernel_families(fault: float = 0.0) -> list:
    """The family grid the kernel identity is exercised on."""
    fams = [gegenbauer_family(n) for n in range(3, 9)]
    for field in ("R", "C", "H"):
        fams.extend(projective_family(field, n) for n in range(3, 9))
    if fault:
        fams = [dataclasses.replace(f, recurrence_fault=fault) for f in fams]
    return fams


def _dyadic_point(family: PolyFamily, rng) -> Fraction:
    lo, hi = family.support
    num = int(rng.integers(0, _DYADIC + 1))
    return Fraction(int(lo) * (_DYADIC - num) + int(hi) * num, _DYADIC)


def check_kernel_identity(n_draws: int, rng=None, fault: float = 0.0,
                          max_m: int = 4, max_k: int = 8) -> dict:
    """Exact-arithmetic residual of K (sigma(x) - sigma(y)) = N.

    Each draw picks a family (round-robin), a width m, a multi-index with
    at least one positive entry, and dyadic rational points x, y.
    """
    rng = np.random.default_rng(rng)
    fams = kernel_families(fault)
    worst = 0.0
    violations = 0
    for i in range(n_draws):
        family = fams[i % len(fams)]
        m = int(rng.integers(1, max_m + 1))
        k = [int(v) for v in rng.integers(0, max_k + 1, size=m)]
        if max(k) == 0:
            k[int(rng.integers(0, m))] = int(rng.integers(1, max_k + 1))
        x = [_dyadic_point(family, rng) for _ in range(m)]
        y = [_dyadic_point(family, rng) for _ in range(m)]
        kernel, npart = cd_kernel(family, tuple(k), x, y)
        residual = abs(float(kernel * (sum(x) - sum(y)) - npart))
        worst = max(worst, residual)
        if residual >= 1e-10:
            violations += 1
    return _report("kernel-identity", n_draws, violations, worst, "exact dyadic draws")


POSITIVITY_SPACES = (
    Sphere(4),
    Sphere(6),
    Projective("C", 4),
    ProductSphere(3, 2),
    ProductProjective("R", 4, 2),
)


def _code_t_matrix(space, code) -> np.ndarray:
    """Per-pair, per-coordinate t values for a sampled code; shape (N, N, m)."""
    size = len(code)
    m = code[0].m
    out = np.empty((size, size, m))
    for i in range(size):
        for j in range(size):
            out[i, j] = geometry.product_t_components(code[i], code[j])
    return out


def check_zonal_positivity(n_codes: int, rng=None, code_size: int = 8,
                           max_k: int = 6, tol: float = 1e-8) -> dict:
    """Sums of zonal kernels over random codes must be nonnegative."""
    rng = np.random.default_rng(rng)
    worst = -math.inf
    violations = 0
    total = 0
    for i in range(n_codes):
        space = POSITIVITY_SPACES[i % len(POSITIVITY_SPACES)]
        m = getattr(space, "m", 1)
        kind = "sphere" if isinstance(space, (Sphere, ProductSphere)) else "projective"
        field = getattr(space, "field", "R")
        if kind == "sphere":
            family = gegenbauer_family(space.n)
        else:
            family = projective_family(field, space.n)
        code = [
            geometry.random_product_point(m, space.n, kind, field if kind == "projective" else "R", rng)
            for _ in range(code_size)
        ]
        tmat = _code_t_matrix(space, code)
        for _ in range(3):
            k = [int(v) for v in rng.integers(1, max_k + 1, size=m)]
            total += 1
            acc = np.ones((code_size, code_size))
            for j, kj in enumerate(k):
                flat = np.clip(tmat[:, :, j].ravel(), *family.support)
                acc *= eval_pk(family, kj, flat, check_support=False).reshape(code_size, code_size)
            s = float(acc.sum())
            gap = -s
            worst = max(worst, gap)
            if gap > tol * code_size**2:
                violations += 1
    return _report("zonal-positivity", total, violations, worst, "sum over code pairs >= 0")


def run_verification(samples: int = 10000, seed: int = 0, recurrence_fault: float = 0.0) -> dict:
    """Run all three suites under a shared budget and seed.

    The lemma suite gets the full pair budget, the kernel identity a tenth,
    positivity a hundredth.  samples = 0 skips everything and passes.
    """
    if samples < 0:
        raise ValueError("sample budget must be nonnegative")
    rng = np.random.default_rng(seed)
    if samples == 0:
        checks = [
            _skipped("embedding-angle-inequalities"),
            _skipped("kernel-identity"),
            _skipped("zonal-positivity"),
        ]
    else:
        checks = [
            check_embedding_inequalities(samples, rng),
            check_kernel_identity(max(samples // 10, 1), rng, fault=recurrence_fault),
            check_zonal_positivity(max(samples // 100, 1), rng),
        ]
    return {
        "seed": seed,
        "samples": samples,
        "recurrence_fault": recurrence_fault,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
