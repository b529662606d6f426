"""Starburst analysis of Zernike wave aberrations.

Locates cusps of Gauss (critical points of the Hessian determinant of the
wave aberration), predicts saddle counts in closed form for the
defocus + spherical + Z_n^n family, maps caustics to the retina plane,
and classifies the resulting starburst pattern.
"""

from .caustics import (
    ARCMIN_PER_MRAD,
    EQUALLY_DISTANCED,
    NO_STARBURST,
    NON_EQUALLY_DISTANCED,
    CausticSet,
    ContourSet,
    FertilityFlag,
    ProjectedCusp,
    SpikeTip,
    StarburstSummary,
    SymmetryResult,
    extract_contours,
    fertility_report,
    map_caustics,
    map_to_retina,
    starburst_verdict,
    symmetry_order,
)
from .hessian import (
    CriticalPoint,
    CriticalPointSearch,
    HessianField,
    PointClass,
    RescaleReport,
    SolverOptions,
    build_field,
    classify_point,
    field_from_polynomial,
    find_critical_points,
    rescale_check,
    saddle_upper_bound,
)
from .regions import (
    DEFAULT_WINDOWS,
    EVEN_FAMILY,
    ODD_FAMILY,
    SUPPORTED_ORDERS,
    ABParams,
    RadiiResult,
    RegionDiagram,
    Ring,
    SaddlePrediction,
    ab_functions,
    admissible_gamma_interval,
    boundary_slacks,
    predict_saddles,
    region_diagram,
    saddle_radii,
    spherical_equivalent,
)
from .zernike import (
    MAX_RADIAL_ORDER,
    BivariatePolynomial,
    CapabilityError,
    WaveAberration,
    ZernikeTerm,
)

__version__ = "0.1.0"

__all__ = [
    "ABParams",
    "ARCMIN_PER_MRAD",
    "BivariatePolynomial",
    "CapabilityError",
    "CausticSet",
    "ContourSet",
    "CriticalPoint",
    "CriticalPointSearch",
    "DEFAULT_WINDOWS",
    "EQUALLY_DISTANCED",
    "EVEN_FAMILY",
    "FertilityFlag",
    "HessianField",
    "MAX_RADIAL_ORDER",
    "NO_STARBURST",
    "NON_EQUALLY_DISTANCED",
    "ODD_FAMILY",
    "PointClass",
    "ProjectedCusp",
    "RadiiResult",
    "RegionDiagram",
    "RescaleReport",
    "Ring",
    "SaddlePrediction",
    "SolverOptions",
    "SpikeTip",
    "StarburstSummary",
    "SUPPORTED_ORDERS",
    "SymmetryResult",
    "WaveAberration",
    "ZernikeTerm",
    "ab_functions",
    "admissible_gamma_interval",
    "boundary_slacks",
    "build_field",
    "classify_point",
    "extract_contours",
    "fertility_report",
    "field_from_polynomial",
    "find_critical_points",
    "map_caustics",
    "map_to_retina",
    "predict_saddles",
    "region_diagram",
    "rescale_check",
    "saddle_radii",
    "saddle_upper_bound",
    "spherical_equivalent",
    "starburst_verdict",
    "symmetry_order",
]
