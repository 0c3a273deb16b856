"""Minkowski sums, parallel bodies and ball complements.

Subtracting a ball (``K ~ cB``) or subtracting from a ball (``cB ~ K``) keeps
the support-function algebra linear only when the subtracted body is a
Minkowski summand.  A sufficient condition: every principal radius of the
would-be summand is at most every principal radius of the other body.  The
check here uses global extrema over the sphere, which is the conservative
reading.
"""

from __future__ import annotations

from dataclasses import dataclass

from .body import Ball, BallComplement, BallOffset, ConvexBody, MinkowskiSum, radii_extrema
from .errors import PreconditionError, SummandViolationError
from .quadrature import QuadratureRule

# |margin| below this (relative to the radii involved) counts as exactly zero
BOUNDARY_RTOL = 1e-9


@dataclass(frozen=True)
class SummandCertificate:
    holds: bool
    margin: float
    directions_checked: int


def minkowski_sum(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    if a.dimension != b.dimension:
        raise PreconditionError(
            f"cannot add bodies of dimensions {a.dimension} and {b.dimension}")
    terms = []
    for body in (a, b):
        terms.extend(body.terms if isinstance(body, MinkowskiSum) else (body,))
    return MinkowskiSum(tuple(terms))


def outer_parallel(k: ConvexBody, t: float) -> ConvexBody:
    """``K + tB`` for ``t >= 0``."""
    if t < 0:
        raise PreconditionError("use inner_parallel for a negative offset")
    return BallOffset(k, float(t))


def _radius_range(body, rule):
    if isinstance(body, Ball):
        return body.radius, body.radius, 0
    if rule is None:
        ext = radii_extrema(body)
    else:
        ext = radii_extrema(body, level=rule.level, random_factor=0)
    return ext.rho_min, ext.rho_max, ext.grid_size


def summand_condition(l: ConvexBody, k: ConvexBody, rule: QuadratureRule | None = None
                      ) -> SummandCertificate:
    """Check that `l` is a Minkowski summand of `k` via curvature radii.

    ``margin = min rho(k) - max rho(l)`` over the sphere.  Margins within
    ``BOUNDARY_RTOL`` of zero are snapped to 0, so boundary cases such as
    ``c = rho_min`` are accepted.
    """
    if l.dimension != k.dimension:
        raise PreconditionError("summand check needs bodies of equal dimension")
    k_min, _, nk = _radius_range(k, rule)
    _, l_max, nl = _radius_range(l, rule)
    margin = k_min - l_max
    if abs(margin) <= BOUNDARY_RTOL * max(abs(k_min), abs(l_max), 1.0):
        margin = 0.0
    return SummandCertificate(holds=margin >= 0, margin=float(margin),
                              directions_checked=nk + nl)


def inner_parallel(k: ConvexBody, c: float, rule: QuadratureRule | None = None) -> ConvexBody:
    """``K ~ cB``, valid for ``0 < c <= rho_min(K)``."""
    if not c > 0:
        raise PreconditionError(f"inner parallel distance must be positive, got {c}")
    cert = summand_condition(Ball(k.dimension, c), k, rule)
    if not cert.holds:
        raise SummandViolationError(
            f"cB with c={c} is not a summand: smallest radius falls short by {-cert.margin:.6g}",
            cert.margin)
    return BallOffset(k, -float(c), validated=True)


def ball_complement(k: ConvexBody, c: float, rule: QuadratureRule | None = None) -> ConvexBody:
    """``cB ~ K``, valid for ``c >= rho_max(K)``; its support is ``c - p_K``."""
    if not c > 0:
        raise PreconditionError(f"ball radius must be positive, got {c}")
    cert = summand_condition(k, Ball(k.dimension, c), rule)
    if not cert.holds:
        raise SummandViolationError(
            f"K is not a summand of cB with c={c}: largest radius exceeds c by {-cert.margin:.6g}",
            cert.margin)
    return BallComplement(k, float(c), validated=True)
