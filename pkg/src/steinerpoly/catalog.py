"""A fixed family of test bodies: ten per dimension for n = 2..5.

Each dimension gets balls, axis-aligned ellipsoids of varied aspect, and
Minkowski sums of an ellipsoid with a ball or with a second ellipsoid.
Aspect ratios shrink with the dimension so the default quadrature level
still resolves every mixed volume to about 1e-7.
"""

from __future__ import annotations

from .body import Ball, ConvexBody, Ellipsoid, MinkowskiSum

DIMENSIONS = (2, 3, 4, 5)

_ELLIPSOIDS = {
    2: [(2.0, 1.0), (1.1, 1.0), (3.0, 1.0), (1.0, 2.5), (4.0, 1.5)],
    3: [(3.0, 2.0, 1.0), (1.2, 1.0, 1.0), (2.0, 2.0, 1.0), (1.0, 1.5, 2.5), (1.0, 1.0, 3.0)],
    4: [(2.0, 1.5, 1.0, 1.2), (1.1, 1.0, 1.0, 1.0), (1.6, 1.6, 1.0, 1.0),
        (1.0, 1.3, 1.0, 1.8), (1.5, 1.0, 1.25, 1.0)],
    5: [(2.0, 1.5, 1.0, 1.2, 1.7), (1.1, 1.0, 1.0, 1.0, 1.0), (1.5, 1.5, 1.0, 1.0, 1.2),
        (1.0, 1.3, 1.6, 1.0, 1.1), (1.4, 1.0, 1.2, 1.0, 1.0)],
}

_BALL_RADII = (0.5, 1.0, 1.5)


def catalog(n: int) -> list[tuple[str, ConvexBody]]:
    """Ten ``(name, body)`` pairs in dimension `n`."""
    if n not in _ELLIPSOIDS:
        raise ValueError(f"the catalog covers dimensions {DIMENSIONS}, not {n}")
    out: list[tuple[str, ConvexBody]] = []
    for r in _BALL_RADII:
        out.append((f"ball{n}_r{r:g}", Ball(n, r)))
    axes = _ELLIPSOIDS[n]
    for a in axes[:5]:
        out.append(("ellipsoid_" + "x".join(f"{v:g}" for v in a), Ellipsoid(a)))
    out.append((f"ellipsoid+ball{n}", MinkowskiSum((Ellipsoid(axes[0]), Ball(n, 0.5)))))
    out.append((f"ellipsoid+ellipsoid{n}",
                MinkowskiSum((Ellipsoid(axes[0]), Ellipsoid(tuple(reversed(axes[0])))))))
    return out


def all_bodies() -> list[tuple[str, ConvexBody]]:
    return [item for n in DIMENSIONS for item in catalog(n)]
