"""Mixed volumes V(K^{n-i}, B^i) and the Steiner polynomial of a body.

Each mixed volume has two integral representations over the sphere in terms
of the normalized elementary symmetric functions s_j of the principal radii:

    (A)  V_i = (1/n) int s_{n-i}(rho) du            (1 <= i <= n)
    (B)  V_i = (1/n) int p_K s_{n-i-1}(rho) du      (0 <= i <= n-1)

Where both apply, (B) is reported and their relative disagreement is kept as
an error estimate.  The Steiner polynomial is ``sum_i C(n,i) V_i t^i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .body import ConvexBody, principal_radii_batch
from .errors import PreconditionError
from .quadrature import QuadratureRule


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def elementary_symmetric_normalized(values, j: int) -> float:
    """``e_j(values) / C(m, j)``; equals ``rho**j`` when all values are rho."""
    values = np.asarray(values, dtype=float).ravel()
    m = values.size
    if not 0 <= j <= m:
        raise PreconditionError(f"j must be in 0..{m}, got {j}")
    e = kernels.elementary_symmetric(np.ascontiguousarray(values[None, :]))[0]
    return float(e[j] / math.comb(m, j))


def _normalized_symmetric_table(radii):
    m = radii.shape[1]
    e = kernels.elementary_symmetric(np.ascontiguousarray(radii))
    return e / np.array([math.comb(m, j) for j in range(m + 1)], dtype=float)


@dataclass(frozen=True)
class MixedVolumeTable:
    """``values[i] = V(K^{n-i}, B^i)``; ``method_discrepancy[i]`` is NaN
    where only one formula applies (i = 0 and i = n)."""

    values: np.ndarray
    method_discrepancy: np.ndarray
    formula_a: np.ndarray
    formula_b: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class SteinerPolynomial:
    """``S(t) = sum_i coefficients[i] * t**i`` (ascending order)."""

    dimension: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __call__(self, t):
        acc = 0.0 * t
        for c in self.coefficients[::-1]:
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def shifted(self, s: float) -> SteinerPolynomial:
        """Coefficients of ``t -> S(t + s)``."""
        c = self.coefficients
        out = np.zeros_like(c)
        for i, ci in enumerate(c):
            for k in range(i + 1):
                out[k] += ci * math.comb(i, k) * s ** (i - k)
        return SteinerPolynomial(self.dimension, out)

    def reflected(self) -> SteinerPolynomial:
        """Coefficients of ``t -> (-1)^n S(-t)``."""
        n = self.dimension
        signs = np.array([(-1.0) ** (n + i) for i in range(len(self.coefficients))])
        return SteinerPolynomial(self.dimension, signs * self.coefficients)


def evaluate(poly: SteinerPolynomial, t):
    return poly(t)


def transform(poly: SteinerPolynomial, kind: str, s: float | None = None) -> SteinerPolynomial:
    """``kind="shift"`` gives ``S(t + s)``; ``kind="reflect"`` gives ``(-1)^n S(-t)``."""
    if kind == "shift":
        if s is None:
            raise PreconditionError("shift needs an amount s")
        return poly.shifted(s)
    if kind == "reflect":
        return poly.reflected()
    raise PreconditionError(f"unknown transform {kind!r}")


def _check_rule(body, rule):
    if rule.dimension != body.dimension:
        raise PreconditionError(
            f"rule is for S^{rule.dimension - 1} but the body lives in R^{body.dimension}")


def node_data(body: ConvexBody, rule: QuadratureRule):
    """Support values and normalized symmetric functions s_0..s_{n-1} at the nodes."""
    _check_rule(body, rule)
    p = body.support(rule.nodes)
    s = _normalized_symmetric_table(principal_radii_batch(body, rule.nodes))
    return p, s


def _formulas(body, rule):
    n = body.dimension
    p, s = node_data(body, rule)
    a = np.full(n + 1, np.nan)
    b = np.full(n + 1, np.nan)
    for i in range(1, n + 1):
        a[i] = rule.sum(s[:, n - i]) / n
    for i in range(n):
        b[i] = rule.sum(p * s[:, n - i - 1]) / n
    return a, b


def _combine(a, b):
    values = np.where(np.isnan(b), a, b)
    both = ~np.isnan(a) & ~np.isnan(b)
    disc = np.full(len(a), np.nan)
    denom = np.maximum(np.abs(a[both]), np.abs(b[both]))
    disc[both] = np.where(denom > 0, np.abs(a[both] - b[both]) / np.where(denom > 0, denom, 1), 0.0)
    return values, disc


def mixed_volume(body: ConvexBody, i: int, rule: QuadratureRule) -> tuple[float, float]:
    """``(V(K^{n-i}, B^i), discrepancy)``; discrepancy is NaN at i = 0 and i = n."""
    n = body.dimension
    if not 0 <= i <= n:
        raise PreconditionError(f"mixed volume index must be in 0..{n}, got {i}")
    a, b = _formulas(body, rule)
    values, disc = _combine(a, b)
    return float(values[i]), float(disc[i])


def steiner_polynomial(body: ConvexBody, rule: QuadratureRule
                       ) -> tuple[SteinerPolynomial, MixedVolumeTable]:
    n = body.dimension
    a, b = _formulas(body, rule)
    values, disc = _combine(a, b)
    binom = np.array([math.comb(n, i) for i in range(n + 1)], dtype=float)
    table = MixedVolumeTable(values=values, method_discrepancy=disc,
                             formula_a=a, formula_b=b)
    return SteinerPolynomial(n, binom * values), table


def log_concavity_defects(table: MixedVolumeTable) -> np.ndarray:
    """``(V_{i-1} V_{i+1} - V_i^2) / V_i^2`` for 1 <= i <= n-1; should be <= 0."""
    v = table.values
    return (v[:-2] * v[2:] - v[1:-1] ** 2) / v[1:-1] ** 2
