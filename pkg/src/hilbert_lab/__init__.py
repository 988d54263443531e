"""hilbert-lab: numerics for Hilbert geometries of bounded convex domains."""

__version__ = "0.1.0"

from .bodies import (
    AffineBody,
    Ball,
    BodyValidationError,
    Chord,
    ConvexBody,
    EllipsoidBody,
    HPolytope,
    MinkowskiBall,
    NotInteriorError,
    Product,
    VPolytope,
    affine_image,
    body_from_json,
    load_body,
)
from .convergence import (
    ConvergenceReport,
    NormRatioField,
    concentric_disks,
    density_convergence,
    norm_ratio_field,
    smoothed_cylinders,
)
from .directions import sphere_grid, sphere_nested
from .gallery import (
    cube,
    cylinder,
    ellipse,
    equilateral_triangle,
    interval,
    needle,
    random_polygon,
    regression_suite,
    regular_polygon,
    rounded_square,
    rounded_triangle,
    sheared_disk,
    simplex3,
    slab_product,
    square,
    unit_ball,
    unit_disk,
)
from .hyperbolicity import DeltaEstimate, delta_probe, gromov_product
from .john import (
    Ellipsoid,
    JohnMetric,
    SandwichReport,
    john_ellipsoid,
    john_metric_at,
    sandwich_check,
)
from .localgeom import (
    STEP1_GAP_LOWER,
    NormalizedFrame,
    RadialBall,
    Theorem12Report,
    center_chord_bound,
    chord_bound,
    john_normalize_ball,
    lip_lower_bound,
    metric_ball,
    theorem12_points,
    theorem12_report,
    theorem12_suite,
)
from .measure import (
    DensityValue,
    MCEstimate,
    MetricBallRegion,
    TangentUnitBall,
    density_batch,
    hilbert_density,
    integrate,
    tangent_unit_ball,
    tub_volume,
)
from .metric import (
    cross_ratio,
    dual_norm,
    dual_norm_batch,
    finsler_norm,
    finsler_norm_batch,
    geodesic_additivity_check,
    hilbert_distance,
    hilbert_distance_pairs,
    hilbert_gradient,
    ray_point_param,
)
from .spectrum import (
    SANDWICH_LOWER,
    SANDWICH_UPPER,
    SPECTRAL_LOWER_BOUND,
    CheegerEstimate,
    CylinderSandwichReport,
    MinimizeResult,
    QuotientEstimate,
    TrialFunction,
    cheeger_quotient,
    cylinder_sandwich,
    fact1_check,
    fact2_check,
    fiber_weight,
    minimize_rayleigh,
    radial_exponential,
    radial_tent,
    rayleigh_quotient,
    sobolev_quotient,
)
