"""Asymptotic rate bounds (nats per ambient dimension) for large codes.

The sphere rate bounds are the classical LP bound, its Elias-type
improvement obtained by intersecting with a cap, and their envelope

    R_S(theta) = { R_Y(theta)   theta < alpha*
                 { R_LP(theta)  alpha* <= theta <= pi/2
                 { 0            theta >= pi/2,

where alpha* ~ 63 deg is the tangency angle of the two curves.  The same
bound transported through t = cos^2 theta gives f(t); its convexity
defect on [0, t1] is what the product-space analysis exploits: the
constrained minimum f^(m) interpolates between f and its convex minorant
g, and the final Grassmann/Stiefel bounds are c*m times f^(m) or R_S at
the angle determined by the distance.

Conventions: rates at theta >= pi/2 are 0; theta = 0 or d = 0 report +inf
rather than raising, so grid emitters can skip the pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq, minimize_scalar

from .spaces import Grassmann, Space, Stiefel, field_degree, space_label

_EPS = 1e-12


def entropy(x: float) -> float:
    """-x ln x - (1-x) ln(1-x) on [0, 1], with 0 ln 0 = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy needs x in [0, 1], got {x}")
    out = 0.0
    if x > 0.0:
        out -= x * math.log(x)
    if x < 1.0:
        out -= (1.0 - x) * math.log(1.0 - x)
    return out


def r_lp(theta: float) -> float:
    """LP rate bound for spherical codes at angular distance theta.

    (1+s)/(2s) H((1-s)/(1+s)) with s = sin theta, on (0, pi/2]; the pole
    at theta = 0 reports +inf.
    """
    if theta < 0.0 or theta > math.pi / 2 + 1e-12:
        raise ValueError(f"r_lp needs theta in (0, pi/2], got {theta}")
    if theta == 0.0:
        return math.inf
    s = math.sin(theta)
    return (1.0 + s) / (2.0 * s) * entropy((1.0 - s) / (1.0 + s))


def r_yaglom(theta: float, phi: float, base=r_lp) -> float:
    """Cap-intersection improvement: base(alpha) - ln sin(phi).

    A code of angular distance theta intersected with a cap of angular
    radius phi has inner distance alpha with sin(alpha/2) =
    sin(theta/2)/sin(phi).  Feasibility needs theta/2 <= phi <= pi/2.
    """
    if not theta / 2 <= phi <= math.pi / 2 + 1e-12:
        raise ValueError(f"need theta/2 <= phi <= pi/2, got theta={theta}, phi={phi}")
    ratio = math.sin(theta / 2) / math.sin(phi)
    if ratio > 1.0 + 1e-12:
        raise ValueError(f"infeasible cap: sin(theta/2) > sin(phi) at theta={theta}, phi={phi}")
    alpha = 2.0 * math.asin(min(ratio, 1.0))
    return base(alpha) - math.log(math.sin(phi))


@lru_cache(maxsize=1)
def crossing_alpha() -> float:
    """The tangency angle alpha* of the cap-improved bound and the LP bound.

    Optimizing the cap radius reduces to minimizing
    h(alpha) = R_LP(alpha) + ln sin(alpha/2) over alpha; the minimizer is
    independent of theta and is exactly where the two rate curves touch.
    Root-finding on the difference of the curves is ill-posed (it does not
    change sign at a tangency), so the stationary point is located instead.
    """

    def h(alpha: float) -> float:
        return r_lp(alpha) + math.log(math.sin(alpha / 2.0))

    res = minimize_scalar(
        h,
        bounds=(math.radians(50.0), math.radians(75.0)),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(res.x)


@lru_cache(maxsize=1)
def yaglom_constant() -> float:
    """The constant in R_Y(theta) = -1/2 ln(1-cos theta) - const (~0.0687)."""
    alpha = crossing_alpha()
    return -(r_lp(alpha) + math.log(math.sin(alpha / 2.0)) + 0.5 * math.log(2.0))


def r_y(theta: float) -> float:
    """Optimized cap-intersection bound, -1/2 ln(1-cos theta) - const.

    A valid upper bound for theta <= the tangency angle; past it the
    optimal cap is the whole hemisphere and the LP bound takes over (the
    envelope r_s handles the switch).
    """
    if not 0.0 < theta <= math.pi:
        raise ValueError(f"r_y needs theta in (0, pi], got {theta}")
    return -0.5 * math.log(1.0 - math.cos(theta)) - yaglom_constant()


def r_s(theta: float) -> float:
    """Envelope rate bound for spherical codes; 0 from pi/2 on (Rankin)."""
    if theta < 0.0:
        raise ValueError(f"r_s needs theta >= 0, got {theta}")
    if theta == 0.0:
        return math.inf
    if theta >= math.pi / 2:
        return 0.0
    value = r_y(theta) if theta < crossing_alpha() else r_lp(theta)
    return max(value, 0.0)


def f_of_rho(rho: float) -> float:
    """(1+rho) ln(1+rho) - rho ln rho for rho >= 0 (0 at rho = 0)."""
    if rho < 0.0:
        raise ValueError(f"need rho >= 0, got {rho}")
    if rho == 0.0:
        return 0.0
    return (1.0 + rho) * math.log(1.0 + rho) - rho * math.log(rho)


def rho_of_t(t: float) -> float:
    """rho(t) = (-1 + (1-t)^{-1/2})/2; equals (1-sin theta)/(2 sin theta) at t = cos^2 theta."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"need t in [0, 1), got {t}")
    return 0.5 * (-1.0 + (1.0 - t) ** -0.5)


def f_of_t(t: float) -> float:
    """The LP rate as a function of t = cos^2 theta: f(t) = f_of_rho(rho(t))."""
    return f_of_rho(rho_of_t(t))


def f_prime(t: float) -> float:
    """Analytic f'(t) = ln(1 + 1/rho) * rho'(t); +inf at t = 0."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"need t in [0, 1), got {t}")
    if t == 0.0:
        return math.inf
    rho = rho_of_t(t)
    return math.log1p(1.0 / rho) * 0.25 * (1.0 - t) ** -1.5


def f_second(t: float) -> float:
    """Analytic f''(t); negative on (0, t0), positive past the inflection."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"need t in (0, 1), got {t}")
    rho = rho_of_t(t)
    d_rho = 0.25 * (1.0 - t) ** -1.5
    dd_rho = 0.375 * (1.0 - t) ** -2.5
    return math.log1p(1.0 / rho) * dd_rho - d_rho**2 / (rho * (1.0 + rho))


@lru_cache(maxsize=1)
def inflection_t0() -> float:
    """Inflection point of f, near 0.209: f is concave on [0, t0]."""
    return float(brentq(f_second, 0.1, 0.3, xtol=1e-14))


@lru_cache(maxsize=1)
def tangent_t1() -> tuple:
    """(t1, slope): the tangent line through the origin touches f at t1.

    t1 solves f(t) = t f'(t); the slope f'(t1) is ~1.089 and the line
    y = slope * t is the convex minorant of f on [0, t1].
    """
    t0 = inflection_t0()
    t1 = float(brentq(lambda t: f_of_t(t) - t * f_prime(t), t0, 0.6, xtol=1e-14))
    return t1, f_prime(t1)


def convex_minorant_g(t: float) -> float:
    """The convex minorant of f: linear up to t1, equal to f beyond."""
    t1, slope = tangent_t1()
    if not 0.0 <= t < 1.0:
        raise ValueError(f"need t in [0, 1), got {t}")
    return slope * t if t < t1 else f_of_t(t)


@lru_cache(maxsize=1)
def delta_max_gap() -> float:
    """max over [0, 1) of f - g, attained inside the concave stretch (~0.016)."""
    t1, slope = tangent_t1()
    tau = float(brentq(lambda t: f_prime(t) - slope, 1e-9, inflection_t0(), xtol=1e-14))
    return f_of_t(tau) - slope * tau


def _candidate_points(m: int, total: float, lo: float, hi: float) -> list:
    """Splits with m - r coordinates frozen at lo and r equal active ones."""
    pts = []
    for r in range(1, m + 1):
        s = (total - (m - r) * lo) / r
        if lo - 1e-15 <= s < hi:
            pts.append(tuple([lo] * (m - r) + [s] * r))
    return pts


def _pair_refine(fun, xs: list, lo: float, hi: float, sweeps: int) -> list:
    """Coordinate-pair mass transfers at fixed sum, each solved by a
    bounded scalar minimization.  Deterministic; stops when a full sweep
    yields no improvement."""
    m = len(xs)
    for _ in range(sweeps):
        improved = False
        for i in range(m):
            for j in range(i + 1, m):
                s = xs[i] + xs[j]
                u_lo = max(lo, s - (hi - _EPS))
                u_hi = min(hi - _EPS, s - lo)
                if u_hi - u_lo < 1e-13:
                    continue
                res = minimize_scalar(
                    lambda u: fun(u) + fun(s - u),
                    bounds=(u_lo, u_hi),
                    method="bounded",
                    options={"xatol": 1e-12},
                )
                if res.fun < fun(xs[i]) + fun(xs[j]) - 1e-13:
                    xs[i], xs[j] = float(res.x), s - float(res.x)
                    improved = True
        if not improved:
            break
    return xs


def _constrained_mean_min(fun, mean: float, m: int, lo: float, hi: float, budget: int):
    """min of (1/m) sum fun(x_i) over x_i in [lo, hi), sum x_i = m * mean."""
    total = m * mean
    cands = _candidate_points(m, total, lo, hi)
    if not cands:
        raise ValueError(f"no feasible split of {total} over [{lo}, {hi})^{m}")
    best = min(cands, key=lambda p: sum(fun(v) for v in p))
    xs = _pair_refine(fun, list(best), lo, hi, budget)
    value = sum(fun(v) for v in xs) / m
    cand_value = sum(fun(v) for v in best) / m
    if value > cand_value:
        return cand_value, best
    return value, tuple(xs)


def f_m_min(t: float, m: int, budget: int = 40) -> float:
    """The constrained m-fold minimum f^(m)(t) = min (1/m) sum f(t_i), sum t_i = m t.

    Seeds with the splits that put all active mass on r equal coordinates
    (the structure of the true optimum in the concave region), then
    refines by deterministic pairwise transfers.  The result is asserted
    to land in the sandwich g(t) <= f^(m)(t) <= f(t), so any solver
    regression fails loudly instead of shifting the bound.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0.0 <= t < 1.0:
        raise ValueError(f"need t in [0, 1), got {t}")
    if m == 1:
        return f_of_t(t)
    value, _ = _constrained_mean_min(f_of_t, t, m, 0.0, 1.0, budget)
    if not convex_minorant_g(t) - 1e-9 <= value <= f_of_t(t) + 1e-12:
        raise RuntimeError(
            f"constrained minimum {value!r} escaped the g/f sandwich at t={t}, m={m}"
        )
    return value


def sphere_rate_split_min(costheta: float, m: int, budget: int = 40) -> float:
    """min of (1/m) sum R_LP(theta_i) over mean cos theta_i = cos theta.

    R_LP is convex in cos theta, so the equal split is optimal and this
    returns R_LP(theta); kept as an executable check of that reduction.
    """
    if not -1.0 < costheta < 1.0:
        raise ValueError(f"need cos theta in (-1, 1), got {costheta}")

    def rate_of_cos(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return r_lp(math.acos(min(u, 1.0)))

    value, _ = _constrained_mean_min(rate_of_cos, costheta, m, -1.0, 1.0, budget)
    return value


def _check_grassmann_d(d: float, m: int) -> None:
    if not 0.0 < d <= math.sqrt(m) + 1e-12:
        raise ValueError(f"need 0 < d <= sqrt(m) = {math.sqrt(m):.6g}, got {d}")


def r1_grassmann(d: float, m: int, c: int) -> float:
    """Product-of-projective-spaces rate bound: c m f^(m)(cos^2 theta).

    theta is the product angle with cos^2 theta = 1 - d^2/m; the
    constrained minimum is over all principal-angle profiles compatible
    with the overlap, which is exactly f^(m).
    """
    _check_grassmann_d(d, m)
    t = max(1.0 - d * d / m, 0.0)
    return c * m * f_m_min(t, m)


def r2_grassmann(d: float, m: int, c: int) -> float:
    """Sphere-embedding rate bound: c m R_S(theta), cos theta = sqrt(1 - d^2/m)."""
    _check_grassmann_d(d, m)
    t = max(1.0 - d * d / m, 0.0)
    return c * m * r_s(math.acos(math.sqrt(t)))


def r_grassmann(d: float, m: int, c: int) -> float:
    """min of the two Grassmann rate bounds."""
    return min(r1_grassmann(d, m, c), r2_grassmann(d, m, c))


def r_stiefel(d: float, m: int, c: int) -> float:
    """Stiefel rate bound c m R_S(theta) with cos theta = 1 - d^2/(2m)."""
    if not 0.0 < d <= 2.0 * math.sqrt(m) + 1e-12:
        raise ValueError(f"need 0 < d <= 2 sqrt(m), got {d}")
    x = 1.0 - d * d / (2.0 * m)
    return c * m * r_s(math.acos(max(min(x, 1.0), -1.0)))


@dataclass(frozen=True)
class CurvePoint:
    """One (distance, method, rate) sample of a rate curve."""

    d: float
    method: str
    rate: float
    m: int
    c: int
    params: str


def comparison_curves(d: float, m: int, c: int) -> list:
    """Previously known rate curves at distance d, as CurvePoints.

    gv_lower is a lower (existence) bound; bn_hamming is the volume bound;
    blichfeldt and bachoc_lp are stated for the real Grassmannian only and
    are omitted when c != 1.
    """
    if d <= 0.0:
        raise ValueError("need d > 0")
    sm = math.sqrt(m)
    out = []

    def add(method: str, rate: float) -> None:
        out.append(CurvePoint(d, method, rate, m, c, f"c={c}"))

    def neg_log_sqrt(arg: float) -> float:
        return math.inf if arg <= 0.0 else -math.log(math.sqrt(arg))

    if d <= sm:
        add("gv_lower", -c * m * math.log(d / sm))
    if d <= math.sqrt(2.0 * m):
        add("bn_hamming", c * m * neg_log_sqrt(1.0 - math.sqrt(max(1.0 - d * d / (2.0 * m), 0.0))))
    if c == 1 and d <= sm:
        add("blichfeldt", m * neg_log_sqrt(1.0 - math.sqrt(max(1.0 - d * d / m, 0.0))))
        rho = 0.5 * m * (sm / d - 1.0)
        add("bachoc_lp", m * f_of_rho(rho))
    return out


def rate_curve(space: Space, d_grid) -> list:
    """Rate-bound samples over a distance grid, in deterministic order.

    Grassmann grids emit the comparison curves plus r2, r1, and their min;
    Stiefel grids emit the single envelope-based bound.  Grid points where
    a method is undefined or infinite are skipped.
    """
    if not isinstance(space, (Grassmann, Stiefel)):
        raise ValueError("rate curves cover Grassmann and Stiefel spaces")
    c = field_degree(space.field)
    m = space.m
    label = space_label(space)
    points = []
    for d in d_grid:
        d = float(d)
        row = []
        if isinstance(space, Grassmann):
            if not 0.0 < d <= math.sqrt(m) + 1e-12:
                continue
            row.extend(comparison_curves(d, m, c))
            r2 = r2_grassmann(d, m, c)
            r1 = r1_grassmann(d, m, c)
            row.append(CurvePoint(d, "r2", r2, m, c, f"c={c}"))
            row.append(CurvePoint(d, "r1", r1, m, c, f"c={c}"))
            row.append(CurvePoint(d, "min", min(r1, r2), m, c, f"c={c}"))
        else:
            if not 0.0 < d <= 2.0 * math.sqrt(m) + 1e-12:
                continue
            row.append(CurvePoint(d, "r_stiefel", r_stiefel(d, m, c), m, c, f"c={c}"))
        points.extend(
            CurvePoint(p.d, p.method, p.rate, p.m, p.c, label) for p in row if math.isfinite(p.rate)
        )
    return points
