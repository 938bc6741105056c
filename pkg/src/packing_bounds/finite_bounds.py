"""Upper bounds on code size at a fixed minimum distance.

Three layers:

  * small-degree polynomial bounds with closed forms (degree one and two on
    products of spheres, degree one on products of projective spaces),
    evaluated in whatever arithmetic the caller supplies -- rational in,
    rational out;
  * kernel bounds built from the reproducing kernel of low-degree zonal
    polynomials, in the tight evaluated form and the weaker closed form,
    with a deterministic search over the per-coordinate degree multi-index;
  * the simplex/orthoplex bound for real Grassmannians, plus a dispatcher
    that maps Grassmann and Stiefel queries onto product-space bounds
    through the standard overlap inequalities and takes the best
    applicable value.

All bounds are returned as ``BoundResult`` carrying the method tag, the
validity interval, and enough witness data to recheck the computation.
Values are real numbers, not floored counts; ``BoundResult.floor()`` gives
the integer form.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from functools import lru_cache

from . import orthopoly
from .orthopoly import (
    BracketError,
    PolyFamily,
    companion_root,
    cumulative_dimension,
    dim_vector,
    eval_all,
    eval_all_exact,
    gegenbauer_family,
    largest_zero,
    projective_family,
    rational,
    recurrence_coeffs,
)
from .spaces import (
    Grassmann,
    Projective,
    ProductProjective,
    ProductSphere,
    Space,
    Sphere,
    Stiefel,
    grassmann_to_product_angle,
    stiefel_to_product_angle,
)

_FEAS_SLACK = 1e-12


class Inapplicable(ValueError):
    """The method's validity condition fails at these parameters."""


class Infeasible(RuntimeError):
    """No admissible configuration within the search budget."""


@dataclass(frozen=True)
class BoundResult:
    """An upper bound on code size, with its provenance.

    value may be a float or an exact rational, depending on the arithmetic
    the inputs carried.  witness holds whatever is needed to recheck the
    computation (multi-index, evaluation points, overlap sums).
    """

    value: object
    method: str
    applicability: str
    witness: dict = field(default_factory=dict)

    def floor(self) -> int:
        """The bound as a code-size count."""
        if math.isinf(float(self.value)):
            raise ValueError("the trivial bound has no finite floor")
        return math.floor(float(self.value))

    def to_json(self) -> dict:
        wit = {}
        for key, val in self.witness.items():
            if isinstance(val, (list, tuple)):
                wit[key] = [float(v) if isinstance(v, numbers.Real) else v for v in val]
            elif isinstance(val, numbers.Real) and not isinstance(val, (int, bool)):
                wit[key] = float(val)
            else:
                wit[key] = val
        return {
            "value": float(self.value),
            "method": self.method,
            "applicability": self.applicability,
            "witness": wit,
        }


def _is_exact(*values) -> bool:
    return all(isinstance(v, numbers.Rational) for v in values)


def deg1_sphere_product(m: int, t) -> BoundResult:
    """Degree-one bound on an m-fold product of spheres: 1 - 1/t for t < 0.

    Independent of m and of the sphere dimension; exact when t is exact.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if not t < 0:
        raise Inapplicable(f"degree-one sphere bound needs t < 0, got t={t}")
    return BoundResult(1 - 1 / t, "deg1", "t < 0", {"m": m, "t": float(t)})


def deg2_sphere_product(m: int, n: int, t) -> BoundResult:
    """Degree-two bound on (S^{n-1})^m: 2mn(1-t)/(1-mnt) for t < 1/(mn)."""
    if m < 1 or n < 2:
        raise ValueError("need m >= 1 and n >= 2")
    mn = m * n
    if not mn * t < 1:
        raise Inapplicable(f"degree-two sphere bound needs t < 1/(mn), got t={t}")
    return BoundResult(
        2 * mn * (1 - t) / (1 - mn * t),
        "deg2",
        f"t < 1/{mn}",
        {"m": m, "n": n, "t": float(t)},
    )


def deg1_projective_product(n: int, t, m: int = 1) -> BoundResult:
    """Degree-one bound on products of projective spaces: (1-t)/(1/n - t).

    Valid for t < 1/n; the value depends on neither m nor the base field,
    because the degree-one zonal polynomial is (x - 1/n) up to scale in
    every case.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not n * t < 1:
        raise Inapplicable(f"degree-one projective bound needs t < 1/n = 1/{n}, got t={t}")
    inv_n = rational(1, n) if _is_exact(t) else 1.0 / n
    return BoundResult((1 - t) / (inv_n - t), "deg1-proj", f"t < 1/{n}", {"m": m, "n": n, "t": float(t)})


def cd_kernel(family: PolyFamily, k, x, y):
    """Reproducing kernel K and its first-order companion N on a product.

    K(x, y) = prod_j sum_{i <= k_j} d_i P_i(x_j) P_i(y_j) and N is the
    telescoped form whose defining identity is

        K(x, y) * (sigma(x) - sigma(y)) = N(x, y),

    with sigma the coordinate sum.  When every coordinate of x and y is a
    rational number the whole computation runs in exact arithmetic and the
    identity holds with zero residual; float coordinates give the float
    kernel.
    """
    k = tuple(int(v) for v in k)
    if len(k) != len(x) or len(x) != len(y):
        raise ValueError("multi-index and point lengths disagree")
    if min(k) < 0:
        raise ValueError("multi-index entries must be nonnegative")
    exact = _is_exact(*x, *y)

    if exact:
        dims = [orthopoly.dimension_exact(family, i) for i in range(max(k) + 2)]
        px = [eval_all_exact(family, kj + 1, xj) for kj, xj in zip(k, x)]
        py = [eval_all_exact(family, kj + 1, yj) for kj, yj in zip(k, y)]
    else:
        dims = list(dim_vector(family, max(k) + 1))
        px = [eval_all(family, kj + 1, float(xj)) for kj, xj in zip(k, x)]
        py = [eval_all(family, kj + 1, float(yj)) for kj, yj in zip(k, y)]

    factors = []
    for j, kj in enumerate(k):
        factors.append(sum(dims[i] * px[j][i] * py[j][i] for i in range(kj + 1)))
    kernel = math.prod(factors) if not exact else _prod(factors)

    npart = 0
    for t_idx, kt in enumerate(k):
        a_kt = recurrence_coeffs(family, kt, exact=exact).a
        if exact:
            a_kt = rational(a_kt.numerator, a_kt.denominator)
        wing = dims[kt] * a_kt * (
            px[t_idx][kt + 1] * py[t_idx][kt] - px[t_idx][kt] * py[t_idx][kt + 1]
        )
        for j in range(len(k)):
            if j != t_idx:
                wing = wing * factors[j]
        npart = npart + wing
    return kernel, npart


def _prod(values):
    out = values[0]
    for v in values[1:]:
        out = out * v
    return out


def _feasibility_level(family: PolyFamily, k: int) -> float:
    """Largest zero z_k, with z_0 read as the left end of the support."""
    return family.support[0] if k == 0 else largest_zero(family, k)


@lru_cache(maxsize=None)
def _kernel_bound_parts(family: PolyFamily, k: tuple):
    """Shared evaluation for the kernel bounds at multi-index k.

    Returns (exact_value, closed_value, y, sigma_y).  The evaluation point
    puts every coordinate at its companion root, where P_{k+1}(y) = -P_k(y)
    and the degree bound's sign conditions hold.
    """
    m = len(k)
    ys = [companion_root(family, kt) for kt in k]
    sigma_y = sum(ys)
    pv = [eval_all(family, kt + 1, yt) for kt, yt in zip(k, ys)]
    dims = dim_vector(family, max(k) + 1)

    s_one = []  # sum_i d_i P_i(y_j):      kernel against the diagonal point
    s_two = []  # sum_i d_i P_i(y_j)^2:    kernel at (y_j, y_j)
    for j, kj in enumerate(k):
        s_one.append(sum(dims[i] * pv[j][i] for i in range(kj + 1)))
        s_two.append(sum(dims[i] * pv[j][i] ** 2 for i in range(kj + 1)))

    num = 0.0
    den_sum = 0.0
    for t_idx, kt in enumerate(k):
        w = dims[kt] * recurrence_coeffs(family, kt).a
        rest_one = math.prod(s_one[j] for j in range(m) if j != t_idx)
        rest_two = math.prod(s_two[j] for j in range(m) if j != t_idx)
        num += w * (pv[t_idx][kt] - pv[t_idx][kt + 1]) * rest_one
        den_sum += w * pv[t_idx][kt] * pv[t_idx][kt + 1] * rest_two
    denominator = -(m - sigma_y) * den_sum
    exact_value = num**2 / denominator

    a_sum = sum(recurrence_coeffs(family, kt).a for kt in k)
    d_prod = math.prod(cumulative_dimension(family, kt) for kt in k)
    closed_value = 4.0 * a_sum * d_prod / (m - sigma_y)
    return exact_value, closed_value, tuple(ys), sigma_y


def select_multiindex(family: PolyFamily, m: int, t: float, budget: int = 16) -> tuple:
    """Deterministic search for the degree multi-index of the kernel bound.

    Feasibility is m*t <= sum of largest zeros z_{k_j}.  Seeds with the best
    equal-entry index, then coordinate descent over +-1 moves (at most
    ``budget`` accepted moves), minimizing the evaluated bound.  Ties break
    toward the lexicographically smallest sorted index.
    """
    if m < 1 or budget < 1:
        raise ValueError("need m >= 1 and a positive budget")
    t = float(t)
    k_min = 0 if family.kind == orthopoly.GEGENBAUER else 1

    def feasible(k: tuple) -> bool:
        return m * t <= sum(_feasibility_level(family, kj) for kj in k) + _FEAS_SLACK

    def score(k: tuple):
        try:
            return _kernel_bound_parts(family, k)[0]
        except BracketError:
            return math.inf

    best = None
    best_val = math.inf
    for k in range(k_min, budget + 1):
        cand = (k,) * m
        if not feasible(cand):
            continue
        val = score(cand)
        if val < best_val:
            best, best_val = cand, val
    if best is None:
        raise Infeasible(
            f"no feasible equal multi-index with entries <= {budget} for t={t}, m={m}"
        )

    moves = 0
    while moves < budget:
        current = best
        for i in range(m):
            for step in (-1, 1):
                trial = list(current)
                trial[i] += step
                if not k_min <= trial[i] <= budget:
                    continue
                cand = tuple(sorted(trial))
                if not feasible(cand):
                    continue
                val = score(cand)
                if val < best_val - 1e-12 or (val <= best_val + 1e-12 and cand < best):
                    best, best_val = cand, min(val, best_val)
        if best == current:
            break
        moves += 1
    if math.isinf(best_val):
        raise Infeasible(f"no evaluable multi-index within budget {budget}")
    return best


def cd_bound_exact(family: PolyFamily, m: int, t: float, budget: int = 16) -> BoundResult:
    """Kernel bound in its evaluated (tight) form.

    Selects the multi-index, places each coordinate of the comparison point
    at its companion root y_t, and evaluates the ratio whose numerator is
    the squared kernel against the diagonal and whose denominator is the
    mean of the certifying polynomial.  Valid for every t <= sigma(y)/m.
    """
    k = select_multiindex(family, m, t, budget)
    value, _, ys, sigma_y = _kernel_bound_parts(family, k)
    if m * t > sigma_y + 1e-9:
        raise Infeasible(f"selected index {k} does not cover t={t}")
    return BoundResult(
        value,
        "cd-exact",
        f"t <= {sigma_y / m:.12g}",
        {"k": list(k), "y": list(ys), "sigma_y": sigma_y},
    )


def cd_bound_closed(family: PolyFamily, m: int, t: float, budget: int = 16) -> BoundResult:
    """Kernel bound in closed form: 4 (sum_t a_{k_t}) (prod_t D_{k_t}) / (m - sigma(y)).

    A Cauchy-Schwarz relaxation of the evaluated form; never smaller on the
    same multi-index, and much simpler to read off asymptotically.
    """
    k = select_multiindex(family, m, t, budget)
    _, value, ys, sigma_y = _kernel_bound_parts(family, k)
    return BoundResult(
        value,
        "cd-closed",
        f"t <= {sigma_y / m:.12g}",
        {"k": list(k), "y": list(ys), "sigma_y": sigma_y},
    )


def simplex_bound_grassmann(m: int, n: int, d: float, num_points_threshold: int | None = None) -> BoundResult:
    """Simplex/orthoplex bound for real Grassmannians under chordal distance.

    With Delta = m(n-m)/n: a code of minimum distance d with d^2 > Delta has
    at most d^2/(d^2 - Delta) points, and at most n(n+1)/2 points
    regardless (codes larger than that cannot exceed distance sqrt(Delta)).
    The threshold can be overridden for experimentation.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    delta = m * (n - m) / n
    d2 = d * d
    if d2 <= delta:
        raise Inapplicable(
            f"simplex bound needs d^2 > m(n-m)/n = {delta:.12g}, got d^2 = {d2:.12g}"
        )
    threshold = num_points_threshold if num_points_threshold is not None else n * (n + 1) // 2
    value = min(d2 / (d2 - delta), float(threshold))
    return BoundResult(
        value,
        "simplex",
        f"d^2 > {delta:.12g}",
        {"m": m, "n": n, "delta": delta, "threshold": threshold},
    )


def _product_candidates(space, t: float, budget: int):
    """Applicable (method, thunk) pairs for a homogeneous product, in the
    fixed preference order used for tie-breaking."""
    if isinstance(space, (Sphere, ProductSphere)):
        m = getattr(space, "m", 1)
        family = gegenbauer_family(space.n)
        return [
            ("deg1", lambda: deg1_sphere_product(m, t)),
            ("deg2", lambda: deg2_sphere_product(m, space.n, t)),
            ("cd-exact", lambda: cd_bound_exact(family, m, t, budget)),
        ]
    if isinstance(space, (Projective, ProductProjective)):
        m = getattr(space, "m", 1)
        family = projective_family(space.field, space.n)
        return [
            ("deg1-proj", lambda: deg1_projective_product(space.n, t, m)),
            ("cd-exact", lambda: cd_bound_exact(family, m, t, budget)),
        ]
    raise TypeError(f"not a product space: {space!r}")


def _best_of(candidates) -> BoundResult | None:
    best = None
    for _, thunk in candidates:
        try:
            result = thunk()
        except (Inapplicable, Infeasible, BracketError):
            continue
        if best is None or float(result.value) < float(best.value) - 1e-12:
            best = result
    return best


TRIVIAL = BoundResult(math.inf, "trivial", "always", {"note": "no applicable method"})


def best_finite_bound(space: Space, d: float | None = None, t: float | None = None,
                      budget: int = 16) -> BoundResult:
    """Best applicable upper bound for a code in ``space``.

    Products of spheres or projective spaces take the inner product
    parameter ``t`` directly (or an angular distance ``d`` in radians).
    Grassmann queries take the chordal distance and are answered by the
    better of the simplex bound and the product-of-projective-spaces
    bounds at t = 1 - d^2/m; Stiefel queries take the Euclidean frame
    distance and go through the product of spheres at t = 1 - d^2/(2m).

    The overlap estimate behind those reductions is crude for small
    parameters, so reduced bounds can be weak there; they sharpen as the
    distance grows.  Returns the infinite trivial bound, flagged, when no
    method applies.
    """
    if (d is None) == (t is None):
        raise ValueError("give exactly one of d (distance) or t (inner product parameter)")

    if isinstance(space, (Sphere, ProductSphere)):
        if t is None:
            t = math.cos(d)
        if t >= 1:
            return TRIVIAL
        return _best_of(_product_candidates(space, t, budget)) or TRIVIAL

    if isinstance(space, (Projective, ProductProjective)):
        if t is None:
            t = math.cos(d) ** 2
        if t >= 1:
            return TRIVIAL
        return _best_of(_product_candidates(space, t, budget)) or TRIVIAL

    if isinstance(space, Grassmann):
        if d is None:
            raise ValueError("Grassmann bounds are parameterized by the chordal distance d")
        if d == 0:
            return TRIVIAL
        angle = grassmann_to_product_angle(d, space.m)
        inner = ProductProjective(space.field, space.n, space.m)
        candidates = []
        if space.field == "R":
            candidates.append(("simplex", lambda: simplex_bound_grassmann(space.m, space.n, d)))
        candidates.extend(_product_candidates(inner, angle.t, budget))
        best = _best_of(candidates)
        if best is None:
            return TRIVIAL
        if best.method == "simplex":
            return best
        return BoundResult(
            best.value,
            "reduction",
            best.applicability,
            {"via": best.method, "t": angle.t, **best.witness},
        )

    if isinstance(space, Stiefel):
        if d is None:
            raise ValueError("Stiefel bounds are parameterized by the frame distance d")
        if d == 0:
            return TRIVIAL
        angle = stiefel_to_product_angle(d, space.m)
        c = orthopoly.FIELD_DEGREE[space.field]
        inner = ProductSphere(c * space.n, space.m)
        best = _best_of(_product_candidates(inner, angle.t, budget))
        if best is None:
            return TRIVIAL
        return BoundResult(
            best.value,
            "reduction",
            best.applicability,
            {"via": best.method, "t": angle.t, **best.witness},
        )

    raise TypeError(f"not a space: {space!r}")
