"""Product quadrature rules on the unit sphere S^{n-1}, 2 <= n <= 6.

Directions are parameterized by hyperspherical angles

    u_1 = cos t_1,  u_2 = sin t_1 cos t_2,  ...,
    u_{n-1} = sin t_1 ... sin t_{n-2} cos phi,
    u_n     = sin t_1 ... sin t_{n-2} sin phi,

with surface element ``prod_k sin^{n-1-k}(t_k) dt_k dphi``.  Each polar angle
gets a Gauss rule in ``x = cos t`` for the weight ``(1 - x^2)^{(m-1)/2}``
(Gauss-Legendre when ``m = 1``, Gauss-Gegenbauer otherwise), which folds the
sine power into the weights exactly.  The azimuth gets the uniform
trapezoid rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_gegenbauer, roots_legendre

from . import kernels
from .errors import IntegrationError, PreconditionError

MAX_DIMENSION = 6


def default_level(n: int) -> int:
    if n <= 3:
        return 32
    if n <= 5:
        return 16
    return 8


def sphere_area(n: int) -> float:
    """Surface area of S^{n-1}."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes (unit directions, one per row) and positive surface weights.

    ``exactness_degree`` is the largest total degree of polynomial in the
    direction coordinates that the rule integrates exactly.
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray
    level: int
    exactness_degree: int

    def __len__(self):
        return len(self.weights)

    def sum(self, values) -> float:
        """Weighted sum of per-node values, in fixed pairwise order."""
        values = np.asarray(values, dtype=float)
        if values.shape != self.weights.shape:
            raise PreconditionError(
                f"expected {self.weights.shape} node values, got {values.shape}")
        return kernels.pairwise_sum(np.ascontiguousarray(self.weights * values))


def _polar_rule(level, m):
    if m == 1:
        x, w = roots_legendre(level)
    else:
        x, w = roots_gegenbauer(level, m / 2.0)
    return x, w


def build_rule(n: int, level: int) -> QuadratureRule:
    """Product rule on S^{n-1}.

    ``n = 2`` gives ``2*level`` equally spaced nodes on the circle.  For
    ``n >= 3`` there are ``level`` Gauss nodes per polar angle and
    ``2*level`` azimuth nodes, ``2 * level**(n-1)`` nodes in total.
    """
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= MAX_DIMENSION:
        raise PreconditionError(f"sphere dimension n must be in 2..{MAX_DIMENSION}, got {n!r}")
    if not isinstance(level, (int, np.integer)) or level < 1:
        raise PreconditionError(f"quadrature level must be a positive integer, got {level!r}")

    k = np.arange(2 * level)
    phi = k * (np.pi / level)
    w_phi = np.full(2 * level, np.pi / level)
    circle = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    if n == 2:
        return QuadratureRule(2, circle, w_phi, level, 2 * level - 1)

    # Build from the innermost factor (azimuth) outwards.
    pts, wts = circle, w_phi
    for m in range(1, n - 1):
        x, w = _polar_rule(level, m)
        s = np.sqrt(1.0 - x * x)
        pts = np.concatenate(
            [np.repeat(x, len(pts))[:, None],
             (s[:, None, None] * pts[None, :, :]).reshape(-1, pts.shape[1])],
            axis=1)
        wts = (w[:, None] * wts[None, :]).ravel()
    # renormalize away the O(eps) drift from repeated products
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return QuadratureRule(n, np.ascontiguousarray(pts), wts, level, 2 * level - 1)


def integrate(rule: QuadratureRule, f: Callable, vectorized: bool = False) -> float:
    """Integrate `f` over the sphere with `rule`.

    `f` takes one unit direction, or the whole ``(N, n)`` node array when
    `vectorized` is true.  Failures and non-finite values are reported with
    the offending node.
    """
    if vectorized:
        values = np.asarray(f(rule.nodes), dtype=float)
    else:
        values = np.empty(len(rule))
        for k, u in enumerate(rule.nodes):
            try:
                values[k] = f(u)
            except Exception as exc:
                raise IntegrationError(f"integrand failed at node {k} {u}: {exc}") from exc
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise IntegrationError(f"non-finite integrand value at node {k} {rule.nodes[k]}")
    return rule.sum(values)
