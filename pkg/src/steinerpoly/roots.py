"""Roots of Steiner polynomials and Routh-Hurwitz stability.

Roots come from companion-matrix eigenvalues, polished by Newton's method.
Numerically multiple roots (ball-like bodies give an n-fold root) scatter
by ``eps**(1/k)`` around the true value; groups of roots that pass a Taylor
test for multiplicity are replaced by a refined common centre.

Stability is decided separately from the Routh array, so the two paths give
independent evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.cluster.hierarchy import linkage, to_tree
from scipy.spatial.distance import pdist

from .errors import NumericalError, PreconditionError

NEWTON_MAX_ITER = 20
NEWTON_RESIDUAL = 1e-13
# relative accuracy assumed for the coefficients when testing multiplicity
COEFF_NOISE = 1e-11
PIVOT_TOL = 1e-12


def _coefficients(poly) -> np.ndarray:
    c = np.asarray(getattr(poly, "coefficients", poly), dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise PreconditionError("need a polynomial of degree >= 1")
    if not np.all(np.isfinite(c)):
        raise PreconditionError("polynomial coefficients must be finite")
    if c[-1] == 0:
        raise PreconditionError("leading coefficient is zero")
    return c


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicity; ``clusters`` lists ``(root, multiplicity)``."""

    roots: np.ndarray
    real_parts_sorted: np.ndarray
    clusters: tuple[tuple[complex, int], ...]
    residuals: np.ndarray
    cluster_tol: float

    def __len__(self):
        return len(self.roots)


def _newton(c, z):
    dc = P.polyder(c)
    scale = np.max(np.abs(c))
    f = P.polyval(z, c)
    for _ in range(NEWTON_MAX_ITER):
        if abs(f) < NEWTON_RESIDUAL * scale:
            break
        d = P.polyval(z, dc)
        if d == 0:
            break
        z_new = z - f / d
        f_new = P.polyval(z_new, c)
        if not abs(f_new) < abs(f):
            break
        z, f = z_new, f_new
    return z


def _taylor(c, m):
    """Coefficients of t -> p(t + m), and the matching magnitude scales."""
    deg = len(c) - 1
    d = np.zeros(deg + 1, dtype=complex)
    scale = np.zeros(deg + 1)
    for i, ci in enumerate(c):
        for j in range(i + 1):
            term = math.comb(i, j) * m ** (i - j)
            d[j] += ci * term
            scale[j] += abs(ci) * abs(term)
    return d, scale


def _is_multiple(c, m, k, cluster_tol):
    d, scale = _taylor(c, m)
    if d[k] == 0:
        return False
    return all(abs(d[j]) <= max(cluster_tol ** (k - j) * abs(d[k]), COEFF_NOISE * scale[j])
               for j in range(k))


def _refine_multiple(c, m, k):
    q = P.polyder(c, k - 1)
    return _newton(q, m)


def _cluster(c, z, cluster_tol):
    if len(z) == 1:
        return [(z[0], 1)]
    tree = to_tree(linkage(pdist(np.column_stack([z.real, z.imag])), method="single"))
    out = []

    def visit(node):
        idx = node.pre_order()
        k = len(idx)
        if k == 1:
            out.append((z[idx[0]], 1))
            return
        m = np.mean(z[idx])
        if _is_multiple(c, m, k, cluster_tol):
            out.append((_refine_multiple(c, m, k), k))
            return
        visit(node.get_left())
        visit(node.get_right())

    visit(tree)
    return out


def _conjugate_symmetric(clusters, tol):
    real = []
    upper = []
    lower = []
    for r, k in clusters:
        if abs(r.imag) <= tol * (1 + abs(r)):
            real.append((complex(r.real, 0.0), k))
        elif r.imag > 0:
            upper.append((r, k))
        else:
            lower.append((r, k))
    out = list(real)
    for r, k in upper:
        j = min(range(len(lower)), key=lambda j: abs(lower[j][0] - r.conjugate()),
                default=None)
        if j is None:
            out.append((r, k))
            continue
        w, kw = lower.pop(j)
        avg = 0.5 * (r + w.conjugate())
        out.append((avg, k))
        out.append((avg.conjugate(), kw))
    out.extend(lower)
    return out


def roots(poly, cluster_tol: float = 1e-5) -> RootSet:
    """Complex roots of `poly` with multiplicity, real parts sorted ascending.

    Raises `NumericalError` if any returned root has residual above
    ``1e-9 * max|c| * (1 + |root|)**n``.
    """
    c = _coefficients(poly)
    n = len(c) - 1
    companion = P.polycompanion(c) if n > 1 else np.array([[-c[0] / c[1]]])
    z = np.linalg.eigvals(companion).astype(complex)
    z = np.array([_newton(c, zi) for zi in z])
    clusters = _conjugate_symmetric(_cluster(c, z, cluster_tol), 1e-14)
    clusters.sort(key=lambda rk: (rk[0].real, rk[0].imag))
    rts = np.array([r for r, k in clusters for _ in range(k)], dtype=complex)
    residuals = np.abs(P.polyval(rts, c))
    bound = 1e-9 * np.max(np.abs(c)) * (1 + np.abs(rts)) ** n
    if np.any(residuals > bound):
        raise NumericalError(f"root polishing failed; residuals {residuals} exceed {bound}")
    return RootSet(roots=rts, real_parts_sorted=np.sort(rts.real),
                   clusters=tuple((complex(r), k) for r, k in clusters),
                   residuals=residuals, cluster_tol=cluster_tol)


@dataclass(frozen=True)
class StabilityReport:
    """``margin`` is the smallest first-column entry of the Routh array of
    the monic, variable-scaled polynomial; ``marginal`` flags a pivot within
    ``PIVOT_TOL`` of zero."""

    stable: bool
    margin: float
    marginal: bool
    first_column: np.ndarray
    method: str = "routh_array"


def routh_first_column(poly) -> tuple[np.ndarray, bool]:
    """First column of the Routh array after normalization.

    The polynomial is made monic and the variable rescaled so the constant
    term has modulus one (when nonzero); this keeps every entry O(1) for a
    polynomial whose roots have similar size.  Returns the column and whether
    a near-zero pivot stopped the construction.
    """
    c = _coefficients(poly)
    c = c / c[-1]
    n = len(c) - 1
    if c[0] != 0:
        sigma = abs(c[0]) ** (1.0 / n)
        c = c * sigma ** np.arange(n + 1)
        c = c / c[-1]
    a = c[::-1]  # descending
    width = n // 2 + 1
    prev = np.zeros(width)
    cur = np.zeros(width)
    prev[:len(a[0::2])] = a[0::2]
    cur[:len(a[1::2])] = a[1::2]
    column = [prev[0], cur[0]]
    for _ in range(n - 1):
        if abs(cur[0]) <= PIVOT_TOL:
            return np.array(column), True
        nxt = np.zeros(width)
        nxt[:-1] = (cur[0] * prev[1:] - prev[0] * cur[1:]) / cur[0]
        prev, cur = cur, nxt
        column.append(cur[0])
    column = np.array(column)
    return column, bool(np.any(np.abs(column) <= PIVOT_TOL))


def hurwitz_stable(poly) -> StabilityReport:
    """Routh-Hurwitz test: all roots in the open left half-plane."""
    column, marginal = routh_first_column(poly)
    stable = (not marginal) and len(column) == _coefficients(poly).size and bool(np.all(column > 0))
    return StabilityReport(stable=stable, margin=float(np.min(column)),
                           marginal=marginal, first_column=column)
