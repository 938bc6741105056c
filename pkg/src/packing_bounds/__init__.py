"""Upper bounds for codes in spheres, projective spaces, their products,
and Grassmann/Stiefel manifolds under the chordal distance."""

from .asymptotic import (
    CurvePoint,
    comparison_curves,
    crossing_alpha,
    delta_max_gap,
    entropy,
    f_m_min,
    f_of_t,
    inflection_t0,
    r1_grassmann,
    r2_grassmann,
    r_grassmann,
    r_lp,
    r_s,
    r_stiefel,
    r_y,
    rate_curve,
    tangent_t1,
)
from .finite_bounds import (
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
from .geometry import (
    GrassmannPoint,
    ProductPoint,
    StiefelPoint,
    chordal_distance,
    embed_beta,
    embed_gamma,
    embed_nu,
    greedy_code,
    principal_angles,
    random_grassmann,
    random_stiefel,
    sigma_overlap,
)
from .harness import run_verification
from .orthopoly import (
    PolyFamily,
    companion_root,
    dimension,
    gauss_rule,
    gegenbauer_family,
    harmonic_dimension,
    jacobi_family,
    largest_zero,
    projective_family,
)
from .spaces import (
    Grassmann,
    Projective,
    ProductProjective,
    ProductSphere,
    SpaceParseError,
    Sphere,
    Stiefel,
    parse_space,
    space_label,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
