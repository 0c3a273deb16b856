"""Convex bodies described by support functions, and their curvature data.

A body evaluates its support function ``p``, the gradient of the degree-one
homogeneous extension (the boundary point with a given outer normal) and the
full ``n x n`` Hessian of that extension, all batched over an ``(N, n)``
array of unit directions.  Principal radii of curvature are the eigenvalues
of the Hessian restricted to the tangent space of the sphere.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._sphere import householder_frame, local_minimize
from .errors import PreconditionError, UnsupportedBodyError

UNIT_TOL = 1e-12
RADII_NOISE_TOL = 1e-9
MAX_DIMENSION = 6
_CHUNK = 65536

# grid level used by radii_extrema when none is given
EXTREMA_LEVEL = {2: 64, 3: 16, 4: 8, 5: 6, 6: 4}


def as_direction(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    if d.ndim != 1:
        raise PreconditionError(f"direction must be a vector, got shape {d.shape}")
    if abs(np.linalg.norm(d) - 1.0) > UNIT_TOL:
        raise PreconditionError(f"direction {d} is not a unit vector")
    return d


def as_directions(dirs, dimension) -> np.ndarray:
    d = np.ascontiguousarray(dirs, dtype=float)
    if d.ndim != 2 or d.shape[1] != dimension:
        raise PreconditionError(
            f"expected an (N, {dimension}) array of directions, got {d.shape}")
    if d.size and np.max(np.abs(np.linalg.norm(d, axis=1) - 1.0)) > UNIT_TOL:
        raise PreconditionError("directions must be unit vectors")
    return d


def _tangent_projector(dirs):
    n = dirs.shape[1]
    return np.eye(n)[None, :, :] - dirs[:, :, None] * dirs[:, None, :]


class ConvexBody:
    """Base class for bodies with an analytic C^2 support function.

    Subclasses implement the batched ``_support``, ``_gradient`` and
    ``_hessian`` on already-validated unit directions.
    """

    dimension: int

    def support(self, dirs) -> np.ndarray:
        self.check_usable()
        return self._support(as_directions(dirs, self.dimension))

    def gradient(self, dirs) -> np.ndarray:
        self.check_usable()
        return self._gradient(as_directions(dirs, self.dimension))

    def hessian(self, dirs) -> np.ndarray:
        """Full Hessian of the homogeneous extension at each direction."""
        self.check_usable()
        return self._hessian(as_directions(dirs, self.dimension))

    def check_usable(self):
        """Raise if this body, or a nested one, is an unvalidated difference."""
        for child in self.children():
            child.check_usable()

    def children(self) -> tuple[ConvexBody, ...]:
        return ()

    def _support(self, dirs):
        raise NotImplementedError

    def _gradient(self, dirs):
        raise NotImplementedError

    def _hessian(self, dirs):
        raise UnsupportedBodyError(f"{type(self).__name__} has no analytic Hessian")


def _check_dimension(n):
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise PreconditionError(f"dimension must be an integer >= 2, got {n!r}")
    if n > MAX_DIMENSION:
        raise PreconditionError(f"dimension {n} exceeds the supported maximum {MAX_DIMENSION}")


@dataclass(frozen=True)
class Ball(ConvexBody):
    dimension: int
    radius: float

    def __post_init__(self):
        _check_dimension(self.dimension)
        if not self.radius > 0:
            raise PreconditionError(f"ball radius must be positive, got {self.radius}")

    def _support(self, dirs):
        return np.full(dirs.shape[0], float(self.radius))

    def _gradient(self, dirs):
        return self.radius * dirs

    def _hessian(self, dirs):
        return self.radius * _tangent_projector(dirs)


@dataclass(frozen=True)
class Ellipsoid(ConvexBody):
    """Axis-aligned ellipsoid centred at the origin."""

    semi_axes: tuple[float, ...]
    dimension: int = field(init=False)

    def __post_init__(self):
        axes = tuple(float(a) for a in self.semi_axes)
        object.__setattr__(self, "semi_axes", axes)
        object.__setattr__(self, "dimension", len(axes))
        _check_dimension(len(axes))
        if not all(a > 0 for a in axes):
            raise PreconditionError(f"semi-axes must be positive, got {axes}")

    @property
    def _sq(self):
        return np.square(np.array(self.semi_axes))

    def _support(self, dirs):
        return np.sqrt(np.einsum("ki,i,ki->k", dirs, self._sq, dirs))

    def _gradient(self, dirs):
        return (self._sq * dirs) / self._support(dirs)[:, None]

    def _hessian(self, dirs):
        # H = (A^2 - g g^T) / p with g = A^2 x / p
        p = self._support(dirs)
        g = (self._sq * dirs) / p[:, None]
        H = -g[:, :, None] * g[:, None, :]
        H[:, np.arange(self.dimension), np.arange(self.dimension)] += self._sq
        return H / p[:, None, None]


@dataclass(frozen=True)
class MinkowskiSum(ConvexBody):
    terms: tuple[ConvexBody, ...]
    dimension: int = field(init=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise PreconditionError("a Minkowski sum needs at least one term")
        dims = {t.dimension for t in terms}
        if len(dims) != 1:
            raise PreconditionError(f"sum terms have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "dimension", dims.pop())

    def children(self):
        return self.terms

    def _support(self, dirs):
        return sum(t._support(dirs) for t in self.terms)

    def _gradient(self, dirs):
        return sum(t._gradient(dirs) for t in self.terms)

    def _hessian(self, dirs):
        return sum(t._hessian(dirs) for t in self.terms)


@dataclass(frozen=True)
class BallOffset(ConvexBody):
    """``inner + shift*B`` for shift >= 0, ``inner ~ |shift|*B`` for shift < 0.

    A negative shift is only usable once ``validated`` is set, which
    :func:`steinerpoly.minkowski.inner_parallel` does after checking that the
    ball is a Minkowski summand of `inner`.
    """

    inner: ConvexBody
    shift: float
    validated: bool = False
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", self.inner.dimension)

    def children(self):
        return (self.inner,)

    def check_usable(self):
        if self.shift < 0 and not self.validated:
            raise PreconditionError(
                "inner parallel body used without validating the summand condition")
        super().check_usable()

    def _support(self, dirs):
        return self.inner._support(dirs) + self.shift

    def _gradient(self, dirs):
        return self.inner._gradient(dirs) + self.shift * dirs

    def _hessian(self, dirs):
        return self.inner._hessian(dirs) + self.shift * _tangent_projector(dirs)


@dataclass(frozen=True)
class BallComplement(ConvexBody):
    """``c*B ~ inner``, with support ``c - p_inner``; needs ``validated``."""

    inner: ConvexBody
    c: float
    validated: bool = False
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", self.inner.dimension)

    def children(self):
        return (self.inner,)

    def check_usable(self):
        if not self.validated:
            raise PreconditionError(
                "ball complement used without validating the summand condition")
        super().check_usable()

    def _support(self, dirs):
        return self.c - self.inner._support(dirs)

    def _gradient(self, dirs):
        return self.c * dirs - self.inner._gradient(dirs)

    def _hessian(self, dirs):
        return self.c * _tangent_projector(dirs) - self.inner._hessian(dirs)


@dataclass(frozen=True)
class Translate(ConvexBody):
    """``inner + offset``; support gains ``offset . u``, curvature is unchanged."""

    inner: ConvexBody
    offset: tuple[float, ...]
    dimension: int = field(init=False)

    def __post_init__(self):
        offset = tuple(float(v) for v in self.offset)
        if len(offset) != self.inner.dimension:
            raise PreconditionError("translation vector has the wrong dimension")
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "dimension", self.inner.dimension)

    def children(self):
        return (self.inner,)

    def _support(self, dirs):
        return self.inner._support(dirs) + dirs @ np.array(self.offset)

    def _gradient(self, dirs):
        return self.inner._gradient(dirs) + np.array(self.offset)

    def _hessian(self, dirs):
        return self.inner._hessian(dirs)


# ---------------------------------------------------------------------------
# single-direction operations


def support_value(body: ConvexBody, direction) -> float:
    d = as_direction(direction)
    return float(body.support(d[None, :])[0])


def support_gradient(body: ConvexBody, direction) -> np.ndarray:
    """Boundary point of `body` whose outer normal is `direction`."""
    d = as_direction(direction)
    return body.gradient(d[None, :])[0]


@dataclass(frozen=True)
class TangentFrame:
    base: np.ndarray
    basis: np.ndarray  # (n-1, n), rows are the tangent vectors


def tangent_frame(direction) -> TangentFrame:
    d = as_direction(direction)
    return TangentFrame(base=d, basis=householder_frame(d).T.copy())


def restricted_hessians(body: ConvexBody, dirs) -> np.ndarray:
    """Batched restricted Hessians, shape ``(N, n-1, n-1)``."""
    dirs = as_directions(dirs, body.dimension)
    return kernels.restrict_hessians(np.ascontiguousarray(body.hessian(dirs)), dirs)


def _extension(body, x):
    r = np.linalg.norm(x)
    return r * float(body.support((x / r)[None, :])[0])


def finite_difference_hessian(body: ConvexBody, direction, step=1e-4) -> np.ndarray:
    """Restricted Hessian from central differences of support values only."""
    d = as_direction(direction)
    B = householder_frame(d)
    m = B.shape[1]
    H = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            ei, ej = step * B[:, i], step * B[:, j]
            H[i, j] = H[j, i] = (
                _extension(body, d + ei + ej) - _extension(body, d + ei - ej)
                - _extension(body, d - ei + ej) + _extension(body, d - ei - ej)
            ) / (4 * step * step)
    return H


def restricted_hessian(body: ConvexBody, direction, finite_difference=False) -> np.ndarray:
    """Hessian of the support function restricted to the tangent space.

    The analytic path is the default; ``finite_difference=True`` switches to
    second differences of support values (about 1e-6 accurate).
    """
    d = as_direction(direction)
    if finite_difference:
        return finite_difference_hessian(body, d)
    return restricted_hessians(body, d[None, :])[0]


def principal_radii_batch(body: ConvexBody, dirs) -> np.ndarray:
    """Sorted principal radii at each direction, shape ``(N, n-1)``."""
    dirs = as_directions(dirs, body.dimension)
    out = np.empty((dirs.shape[0], body.dimension - 1))
    for lo in range(0, dirs.shape[0], _CHUNK):
        chunk = dirs[lo:lo + _CHUNK]
        out[lo:lo + _CHUNK] = kernels.sym_eigvals(restricted_hessians(body, chunk))
    return out


def principal_radii(body: ConvexBody, direction, finite_difference=False) -> np.ndarray:
    d = as_direction(direction)
    if finite_difference:
        H = finite_difference_hessian(body, d)
        return kernels.sym_eigvals(np.ascontiguousarray(H[None]))[0]
    return principal_radii_batch(body, d[None, :])[0]


@dataclass(frozen=True)
class RadiiExtrema:
    rho_min: float
    rho_max: float
    argmin_direction: np.ndarray
    argmax_direction: np.ndarray
    grid_size: int
    refine_tol: float


def random_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    x = np.random.default_rng(seed).standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1)[:, None]


def radii_extrema(body: ConvexBody, refine_tol: float = 1e-10, level: int | None = None,
                  random_factor: int = 10, seed: int = 0) -> RadiiExtrema:
    """Global smallest and largest principal radius over the sphere.

    Scans the product-rule nodes at `level` plus ``random_factor`` times as
    many random directions, then polishes the three best grid points of each
    kind with Nelder-Mead until the simplex is smaller than `refine_tol`.
    Not certified: `grid_size` records how many directions were scanned.
    """
    body.check_usable()
    if level is None:
        level = EXTREMA_LEVEL[body.dimension]
    return _radii_extrema(body, float(refine_tol), int(level), int(random_factor), int(seed))


@functools.lru_cache(maxsize=256)
def _radii_extrema(body, refine_tol, level, random_factor, seed):
    from .quadrature import build_rule

    nodes = build_rule(body.dimension, level).nodes
    grid = np.vstack([nodes, random_directions(body.dimension,
                                               random_factor * len(nodes), seed)])
    radii = principal_radii_batch(body, grid)
    spacing = np.pi / level

    def smallest(u):
        return principal_radii_batch(body, u[None, :])[0, 0]

    def negative_largest(u):
        return -principal_radii_batch(body, u[None, :])[0, -1]

    def polish(values, objective):
        best_dir, best_val = None, np.inf
        for k in np.argsort(values, kind="stable")[:3]:
            u, v = local_minimize(objective, grid[k], tol=refine_tol, step=spacing)
            if values[k] < v:
                u, v = grid[k], values[k]
            if v < best_val:
                best_dir, best_val = u, v
        return best_dir, best_val

    umin, vmin = polish(radii[:, 0], smallest)
    umax, vmax = polish(-radii[:, -1], negative_largest)
    return RadiiExtrema(rho_min=float(vmin), rho_max=float(-vmax),
                        argmin_direction=umin, argmax_direction=umax,
                        grid_size=len(grid), refine_tol=refine_tol)

