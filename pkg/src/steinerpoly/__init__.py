"""Steiner polynomials of smooth convex bodies and bounds on their roots."""

from .body import (Ball, BallComplement, BallOffset, ConvexBody, Ellipsoid, MinkowskiSum,
                   RadiiExtrema, Translate, principal_radii, radii_extrema,
                   restricted_hessian, support_gradient, support_value, tangent_frame)
from .bounds import (BoundsReport, P2Report, PlanarChainReport, inradius, outradius,
                     p2_empirical_check, planar_chain_check, reflection_identity_check,
                     shift_identity_check, theorem2_check)
from .errors import (IntegrationError, NumericalError, PreconditionError, SteinerError,
                     SummandViolationError, UnsupportedBodyError)
from .kernels import BACKEND
from .minkowski import (SummandCertificate, ball_complement, inner_parallel, minkowski_sum,
                        outer_parallel, summand_condition)
from .quadrature import QuadratureRule, build_rule, default_level, integrate
from .roots import RootSet, StabilityReport, hurwitz_stable, roots
from .steiner import (MixedVolumeTable, SteinerPolynomial, elementary_symmetric_normalized,
                      evaluate, mixed_volume, steiner_polynomial, transform)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Ball", "BallComplement", "BallOffset", "BoundsReport", "ConvexBody",
    "Ellipsoid", "IntegrationError", "MinkowskiSum", "MixedVolumeTable", "NumericalError",
    "P2Report", "PlanarChainReport", "PreconditionError", "QuadratureRule", "RadiiExtrema",
    "RootSet", "StabilityReport", "SteinerError", "SteinerPolynomial", "SummandCertificate",
    "SummandViolationError", "Translate", "UnsupportedBodyError", "ball_complement",
    "build_rule", "default_level", "elementary_symmetric_normalized", "evaluate",
    "hurwitz_stable", "inner_parallel", "inradius", "integrate", "minkowski_sum",
    "mixed_volume", "outer_parallel", "outradius", "p2_empirical_check",
    "planar_chain_check", "principal_radii", "radii_extrema", "reflection_identity_check",
    "restricted_hessian", "roots", "shift_identity_check", "steiner_polynomial",
    "summand_condition", "support_gradient", "support_value", "tangent_frame",
    "theorem2_check", "transform",
]
