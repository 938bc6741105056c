"""Zonal orthogonal polynomial families for spheres and projective spaces.

The sphere S^{n-1} carries Gegenbauer polynomials with parameter n/2 - 1,
orthogonal for the weight (1 - x^2)^{(n-3)/2} on [-1, 1].  The projective
space P^{n-1}(K) carries Jacobi polynomials orthogonal for the weight
x^beta (1 - x)^alpha on [0, 1], where alpha = (c/2)(n-1) - 1 and
beta = c/2 - 1 with c the real degree of K (1, 2, 4, or 8 for the octonion
plane row n = 3).

Everything is normalized so that P_k(1) = 1 and the orthogonality measure
has total mass one.  Under that normalization the squared norm [P_k, P_k]
is 1/d_k where d_k is the dimension of the k-th isotypic component, and the
three-term recurrence

    x P_k(x) = a_k P_{k+1}(x) + b_k P_k(x) + c_k P_{k-1}(x)

has rational coefficients with a_k + b_k + c_k = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

try:  # fast rationals when available; plain Fractions otherwise
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover
    _rat = Fraction

__all__ = [
    "PolyFamily",
    "RecurrenceCoeffs",
    "QuadratureRule",
    "BracketError",
    "gegenbauer_family",
    "jacobi_family",
    "projective_family",
    "recurrence_coeffs",
    "eval_all",
    "eval_all_exact",
    "eval_pk",
    "gauss_rule",
    "squared_norm",
    "dimension",
    "dimension_exact",
    "dim_vector",
    "harmonic_dimension",
    "cumulative_dimension",
    "largest_zero",
    "companion_root",
    "rational",
]

GEGENBAUER = "gegenbauer"
JACOBI = "jacobi"

#: real degrees of the base fields; O appears only through the n = 3 plane
FIELD_DEGREE = {"R": 1, "C": 2, "H": 4, "O": 8}


class BracketError(RuntimeError):
    """A bracketed root search could not find a sign change."""


def rational(num, den=1):
    """Exact rational constructor (gmpy2-backed when installed)."""
    return _rat(num, den)


@dataclass(frozen=True)
class PolyFamily:
    """A zonal polynomial family, hashable so rules and roots can be cached.

    ``recurrence_fault`` scales every a_k by (1 + fault).  It exists solely
    so the verification harness can demonstrate that a corrupted recurrence
    breaks the Christoffel-Darboux identity; leave it at 0.0 otherwise.
    """

    kind: str
    n: int = 0
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    recurrence_fault: float = 0.0

    def __post_init__(self):
        if self.kind == GEGENBAUER:
            if self.n < 2:
                raise ValueError(f"Gegenbauer family needs n >= 2, got n={self.n}")
        elif self.kind == JACOBI:
            if self.alpha <= -1 or self.beta <= -1:
                raise ValueError(
                    f"Jacobi family needs alpha > -1 and beta > -1, got "
                    f"alpha={self.alpha}, beta={self.beta}"
                )
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    @property
    def support(self) -> tuple[float, float]:
        return (-1.0, 1.0) if self.kind == GEGENBAUER else (0.0, 1.0)

    def label(self) -> str:
        if self.kind == GEGENBAUER:
            return f"gegenbauer(n={self.n})"
        return f"jacobi(alpha={self.alpha}, beta={self.beta})"


def gegenbauer_family(n: int) -> PolyFamily:
    """Family for the sphere S^{n-1}."""
    return PolyFamily(GEGENBAUER, n=int(n))


def jacobi_family(alpha, beta) -> PolyFamily:
    """Family with weight x^beta (1-x)^alpha on [0, 1]."""
    return PolyFamily(JACOBI, alpha=Fraction(alpha), beta=Fraction(beta))


def projective_family(field: str, n: int) -> PolyFamily:
    """Family for the projective space P^{n-1}(K), K given by its letter."""
    if field not in FIELD_DEGREE:
        raise ValueError(f"unknown field {field!r}, expected one of R, C, H, O")
    if field == "O" and n != 3:
        raise ValueError("the octonion row is defined only for n = 3")
    if n < 2:
        raise ValueError(f"projective family needs n >= 2, got n={n}")
    c = FIELD_DEGREE[field]
    half_c = Fraction(c, 2)
    return jacobi_family(half_c * (n - 1) - 1, half_c - 1)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of x P_k = a P_{k+1} + b P_k + c P_{k-1}."""

    k: int
    a: object
    b: object
    c: object


@lru_cache(maxsize=None)
def _coeffs_fraction(family: PolyFamily, k: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact recurrence coefficients as Fractions."""
    if k < 0:
        raise ValueError("recurrence degree must be nonnegative")
    if family.kind == GEGENBAUER:
        n = family.n
        if k == 0:
            a, b, c = Fraction(1), Fraction(0), Fraction(0)
        else:
            a = Fraction(n - 2 + k, n - 2 + 2 * k)
            b = Fraction(0)
            c = Fraction(k, n - 2 + 2 * k)
    else:
        al, be = family.alpha, family.beta
        if k == 0:
            # from P_1(x) = ((alpha+beta+2) x - (beta+1)) / (alpha+1)
            a = (al + 1) / (al + be + 2)
            b = (be + 1) / (al + be + 2)
            c = Fraction(0)
        else:
            s = al + be
            a = (k + s + 1) * (k + al + 1) / ((2 * k + s + 1) * (2 * k + s + 2))
            b = ((be * be - al * al) / ((2 * k + s) * (2 * k + s + 2)) + 1) / 2
            c = Fraction(k) * (k + be) / ((2 * k + s) * (2 * k + s + 1))
    if family.recurrence_fault:
        a = a * (1 + Fraction(family.recurrence_fault))
    return a, b, c


def recurrence_coeffs(family: PolyFamily, k: int, exact: bool = False) -> RecurrenceCoeffs:
    """Three-term recurrence coefficients, exact Fractions or floats.

    They satisfy a_k + b_k + c_k = 1 (the recurrence evaluated at x = 1).
    """
    a, b, c = _coeffs_fraction(family, k)
    if exact:
        return RecurrenceCoeffs(k, a, b, c)
    return RecurrenceCoeffs(k, float(a), float(b), float(c))


@lru_cache(maxsize=None)
def _coeff_arrays(family: PolyFamily, kmax: int):
    """Float (a, b, c) arrays for degrees 0..kmax."""
    trip = [_coeffs_fraction(family, k) for k in range(kmax + 1)]
    a = np.array([float(t[0]) for t in trip])
    b = np.array([float(t[1]) for t in trip])
    c = np.array([float(t[2]) for t in trip])
    return a, b, c


def _eval_chain(family: PolyFamily, kmax: int, x: np.ndarray) -> np.ndarray:
    """Forward recurrence; rows are degrees 0..kmax, columns the points."""
    # k <= 64 in double precision is enough for every tested tolerance;
    # beyond that accumulate in extended precision.
    dtype = np.longdouble if kmax > 64 else np.float64
    a, b, c = _coeff_arrays(family, max(kmax, 1))
    out = np.empty((kmax + 1, x.size), dtype=dtype)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = (x - b[0]) / a[0]
    for k in range(1, kmax):
        out[k + 1] = ((x - b[k]) * out[k] - c[k] * out[k - 1]) / a[k]
    return out


def eval_all(family: PolyFamily, kmax: int, x: float) -> list[float]:
    """[P_0(x), ..., P_kmax(x)] at a scalar point."""
    arr = _eval_chain(family, kmax, np.array([x], dtype=float))
    return [float(v) for v in arr[:, 0]]


def eval_all_exact(family: PolyFamily, kmax: int, x) -> list:
    """Exact rational values [P_0(x), ..., P_kmax(x)]; x must be rational."""
    xr = _rat(x.numerator, x.denominator) if isinstance(x, Fraction) else _rat(x)
    vals = [_rat(1)]
    if kmax == 0:
        return vals
    coeffs = [_coeffs_fraction(family, k) for k in range(kmax)]
    a0, b0, _ = coeffs[0]
    vals.append((xr - _rat(b0)) / _rat(a0))
    for k in range(1, kmax):
        a, b, c = (_rat(v) for v in coeffs[k])
        vals.append(((xr - b) * vals[k] - c * vals[k - 1]) / a)
    return vals


def eval_pk(family: PolyFamily, k: int, x, check_support: bool = True):
    """P_k at a scalar or array of points.

    Evaluation outside the support interval is legitimate polynomial
    arithmetic but usually signals a bug upstream, so it warns.
    """
    xs = np.asarray(x, dtype=float)
    if check_support:
        lo, hi = family.support
        if np.any(xs < lo - 1e-12) or np.any(xs > hi + 1e-12):
            warnings.warn(
                f"evaluating {family.label()} outside its support [{lo}, {hi}]",
                RuntimeWarning,
                stacklevel=2,
            )
    flat = np.atleast_1d(xs).ravel()
    vals = _eval_chain(family, k, flat)[k].astype(float)
    if np.isscalar(x) or xs.ndim == 0:
        return float(vals[0])
    return vals.reshape(xs.shape)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss rule for the family's normalized measure.

    Exact for polynomials up to ``degree`` = 2 * len(nodes) - 1; weights are
    positive and sum to one.
    """

    nodes: np.ndarray
    weights: np.ndarray
    degree: int


@lru_cache(maxsize=None)
def gauss_rule(family: PolyFamily, npoints: int) -> QuadratureRule:
    """Golub-Welsch rule built from the symmetrized recurrence matrix.

    Nodes are the eigenvalues of the npoints x npoints Jacobi matrix with
    diagonal b_k and off-diagonal sqrt(a_k c_{k+1}); weights come from the
    squared first components of the orthonormal eigenvectors.  Endpoint
    singularities of the weight are never sampled pointwise.
    """
    if npoints < 1:
        raise ValueError("a quadrature rule needs at least one node")
    a, b, c = _coeff_arrays(family, npoints)
    off = np.sqrt(a[: npoints - 1] * c[1:npoints])
    nodes, vecs = eigh_tridiagonal(b[:npoints], off)
    weights = vecs[0] ** 2
    weights = weights / weights.sum()
    return QuadratureRule(nodes=nodes, weights=weights, degree=2 * npoints - 1)


def squared_norm(family: PolyFamily, k: int, rule: QuadratureRule | None = None) -> float:
    """[P_k, P_k] under the normalized measure, by Gauss quadrature."""
    if rule is None:
        rule = gauss_rule(family, k + 1)
    elif rule.degree < 2 * k:
        raise ValueError(
            f"quadrature rule exact to degree {rule.degree} cannot integrate P_{k}^2"
        )
    vals = _eval_chain(family, k, rule.nodes)[k]
    return float(np.sum(rule.weights * np.asarray(vals, dtype=float) ** 2))


def harmonic_dimension(n: int, k: int) -> int:
    """Dimension of degree-k spherical harmonics on S^{n-1} (exact integer)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    second = math.comb(n + k - 3, k - 2) if k >= 2 else 0
    return math.comb(n + k - 1, k) - second


def dimension(family: PolyFamily, k: int, rule: QuadratureRule | None = None) -> float:
    """d_k reported as 1/[P_k, P_k].

    These are dimensions of isotypic components, hence integers; a value
    farther than 1e-4 from the nearest integer indicates numerical trouble
    and warns.
    """
    d = 1.0 / squared_norm(family, k, rule)
    if abs(d - round(d)) > 1e-4 * max(1.0, abs(d)):
        warnings.warn(
            f"dimension {d!r} for {family.label()}, k={k} is far from an integer",
            RuntimeWarning,
            stacklevel=2,
        )
    return d


@lru_cache(maxsize=None)
def _dims_exact_cached(family: PolyFamily, kmax: int) -> tuple:
    """Exact d_0..d_kmax from the norm-ratio identity d_{k+1} = d_k a_k / c_{k+1}.

    Dimensions describe the measure, not the evaluation recurrence, so a
    recurrence fault never propagates here (otherwise a faulted-but-still-
    orthogonal system would satisfy the kernel identity and the harness
    could not detect the corruption).
    """
    if family.recurrence_fault:
        family = PolyFamily(family.kind, family.n, family.alpha, family.beta)
    dims = [_rat(1)]
    for k in range(kmax):
        a = _rat(_coeffs_fraction(family, k)[0])
        c_next = _rat(_coeffs_fraction(family, k + 1)[2])
        dims.append(dims[-1] * a / c_next)
    return tuple(dims)


def dimension_exact(family: PolyFamily, k: int):
    """Exact rational d_k (same quantity as ``dimension``, no quadrature)."""
    return _dims_exact_cached(family, k)[k]


def dim_vector(family: PolyFamily, kmax: int) -> np.ndarray:
    """Float vector (d_0, ..., d_kmax)."""
    if family.kind == GEGENBAUER:
        return np.array([harmonic_dimension(family.n, k) for k in range(kmax + 1)], dtype=float)
    return np.array([float(d) for d in _dims_exact_cached(family, kmax)])


def cumulative_dimension(family: PolyFamily, k: int) -> float:
    """D_k = sum of d_i for i <= k (dimension of the degree-k kernel space)."""
    return float(np.sum(dim_vector(family, k)))


@lru_cache(maxsize=None)
def largest_zero(family: PolyFamily, k: int) -> float:
    """Largest zero z_k of P_k; P_k is strictly positive on (z_k, 1].

    Seeded by the top eigenvalue of the k x k truncated recurrence matrix
    and refined by bracketed bisection to ~1e-14 in the abscissa.
    """
    if k < 1:
        raise ValueError("P_0 has no zeros")
    a, b, c = _coeff_arrays(family, k)
    off = np.sqrt(a[: k - 1] * c[1:k])
    seed = float(eigh_tridiagonal(b[:k], off, select="i", select_range=(k - 1, k - 1))[0][0])

    def pk(x: float) -> float:
        return eval_all(family, k, x)[k]

    span = family.support[1] - family.support[0]
    delta = 1e-9 * span
    lo, hi = seed - delta, seed + delta
    for _ in range(60):
        if pk(lo) < 0.0 < pk(hi):
            break
        delta *= 4.0
        lo, hi = seed - delta, seed + delta
    else:
        raise BracketError(f"could not bracket the largest zero of P_{k} near {seed}")
    return float(brentq(pk, lo, hi, xtol=1e-15, rtol=8.9e-16))


@lru_cache(maxsize=None)
def companion_root(family: PolyFamily, k: int) -> float:
    """The root y of P_k(y) + P_{k+1}(y) = 0 with z_k <= y <= z_{k+1}.

    z_0 is read as the left end of the support.  At the root, P_i(y) >= 0
    for every i <= k while P_{k+1}(y) <= 0; interlacing of zeros guarantees
    a sign change on the bracket when one exists.  A missing sign change
    (e.g. Jacobi families at k = 0, where P_1 never reaches -1) raises
    BracketError rather than approximating.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    lo = family.support[0] if k == 0 else largest_zero(family, k)
    hi = largest_zero(family, k + 1)

    def fsum(y: float) -> float:
        vals = eval_all(family, k + 1, y)
        return vals[k] + vals[k + 1]

    flo, fhi = fsum(lo), fsum(hi)
    if abs(flo) < 1e-13:
        root = lo
    elif abs(fhi) < 1e-13:
        root = hi
    elif flo < 0.0 < fhi:
        root = float(brentq(fsum, lo, hi, xtol=1e-15, rtol=8.9e-16))
    else:
        raise BracketError(
            f"P_{k} + P_{k + 1} has no sign change on [{lo:.6g}, {hi:.6g}] "
            f"for {family.label()}"
        )
    vals = eval_all(family, k + 1, root)
    if any(v < -1e-10 for v in vals[: k + 1]) or vals[k + 1] > 1e-10:
        raise BracketError(
            f"companion root {root!r} violates the sign pattern for {family.label()}"
        )
    return root
