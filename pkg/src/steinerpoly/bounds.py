"""Checks of the root bounds, the planar Bonnesen-type chain, the
inradius problem and the parallel-body identities.

Every check returns a report carrying the computed quantities and the
margins, so a failure can be traced to the quantity that caused it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

from ._sphere import householder_frame, local_minimize
from .body import ConvexBody, radii_extrema
from .errors import NumericalError, PreconditionError
from .minkowski import ball_complement, inner_parallel
from .quadrature import QuadratureRule, build_rule
from .roots import hurwitz_stable, roots
from .steiner import SteinerPolynomial, steiner_polynomial

THEOREM_TOL = 1e-4
CHAIN_TOL = 1e-7
DISC_TOL = 1e-6
STABILITY_VERIFIED_MAX_N = 5
# cutting-plane searches start from at most this many rule nodes
SEED_MAX_NODES = 4096

CHAIN_LABELS = ("-rho_max", "t1", "-R_e", "-L/(2pi)", "-R_i", "t2", "-rho_min")


# ---------------------------------------------------------------------------
# inradius / outradius


def _starts(values, count):
    return np.argsort(values, kind="stable")[:count]


def _seed_rule(rule, max_nodes=SEED_MAX_NODES):
    """`rule`, or the finest coarser rule with at most `max_nodes` nodes."""
    level = rule.level
    while len(rule) > max_nodes and level > 1:
        level -= 1
        rule = build_rule(rule.dimension, level)
    return rule


def _distinct(candidates, existing, tol=1e-9):
    """Candidates farther than `tol` from `existing` and from each other."""
    kept = []
    for u in candidates:
        if np.min(np.linalg.norm(existing - u, axis=1)) <= tol:
            continue
        if any(np.linalg.norm(u - v) <= tol for v in kept):
            continue
        kept.append(u)
    return np.array(kept).reshape(-1, existing.shape[1])


_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def _solve_lp(cost, A, b, bounds):
    res = linprog(cost, A_ub=A, b_ub=b, bounds=bounds, method="highs", options=_LP_OPTIONS)
    if res.status != 0:
        res = linprog(cost, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0:
        raise NumericalError(f"inscribed-ball LP failed: {res.message}")
    return res


def _max_inscribed_ball(dirs, p, with_duals=False):
    """Largest R with x.u + R <= p(u) at the given directions."""
    n = dirs.shape[1]
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    res = _solve_lp(cost, np.hstack([dirs, np.ones((len(dirs), 1))]), p,
                    [(None, None)] * (n + 1))
    x, R = res.x[:n], float(res.x[-1])
    if with_duals:
        return x, R, -res.ineqlin.marginals
    return x, R


def _dual_upper_bound(body, dirs, weights):
    """Polish the LP dual measure into a smooth local minimum of
    ``sum_k w_k p(u_k)`` subject to ``sum_k w_k u_k = 0``, ``sum_k w_k = 1``.

    Any feasible measure bounds the inradius from above.  Returns the bound,
    the atoms and their weights.
    """
    n = body.dimension
    frames = [householder_frame(u) for u in dirs]
    K, m = len(dirs), n - 1

    def unpack(z):
        ys = z[:K * m].reshape(K, m)
        raw = np.array([u + B @ y for u, B, y in zip(dirs, frames, ys)])
        norms = np.linalg.norm(raw, axis=1)
        return raw / norms[:, None], norms, z[K * m:]

    def objective(z):
        us, _, w = unpack(z)
        return float(w @ body.support(us))

    def objective_grad(z):
        us, norms, w = unpack(z)
        g = body.gradient(us)
        tang = g - us * np.einsum("ki,ki->k", g, us)[:, None]
        gy = np.array([B.T @ t / r for B, t, r in zip(frames, tang, norms)])
        return np.concatenate([(w[:, None] * gy).ravel(), body.support(us)])

    def balance(z):
        us, _, w = unpack(z)
        return np.concatenate([w @ us, [w.sum() - 1.0]])

    def balance_jac(z):
        us, norms, w = unpack(z)
        J = np.zeros((n + 1, K * m + K))
        for k in range(K):
            P = (np.eye(n) - np.outer(us[k], us[k])) / norms[k]
            J[:n, k * m:(k + 1) * m] = w[k] * (P @ frames[k])
            J[:n, K * m + k] = us[k]
            J[n, K * m + k] = 1.0
        return J

    z0 = np.concatenate([np.zeros(K * m), weights / weights.sum()])
    res = minimize(objective, z0, jac=objective_grad, method="SLSQP",
                   bounds=[(None, None)] * (K * m) + [(0.0, 1.0)] * K,
                   constraints=[{"type": "eq", "fun": balance, "jac": balance_jac}],
                   options={"ftol": 1e-15, "maxiter": 500})
    us, _, w = unpack(res.x)
    if np.max(np.abs(balance(res.x))) > 1e-12:
        return math.inf, us, w
    return objective(res.x), us, w


def _central_point(dirs, p, lower):
    """Chebyshev centre in (x, R) of the cuts plus the objective cut R >= lower."""
    n = dirs.shape[1]
    cost = np.zeros(n + 2)
    cost[-1] = -1.0
    A = np.vstack([np.hstack([dirs, np.ones((len(dirs), 1)), np.full((len(dirs), 1), math.sqrt(2))]),
                   np.concatenate([np.zeros(n), [-1.0, 1.0]])])
    b = np.concatenate([p, [-lower]])
    sol = _solve_lp(cost, A, b, [(None, None)] * (n + 1) + [(0, None)])
    return sol.x[:n]


def inradius(body: ConvexBody, rule: QuadratureRule, tol: float = 1e-9,
             max_rounds: int = 200) -> float:
    """Radius of the largest ball contained in `body`.

    The radius is ``max_x phi(x)`` with ``phi(x) = min_u p(u) - x.u``.  Over a
    finite set of directions this is a linear program whose value bounds the
    inradius from above; ``phi`` at any centre bounds it from below.  Starting
    from the rule nodes, each round evaluates ``phi`` at the Chebyshev centre
    of the current localization polytope (central cutting planes), adds the
    minimizing directions as new constraints, and stops once the two bounds
    agree within `tol` (relative).  The lower bound is returned.
    """
    seed = _seed_rule(rule)
    dirs = np.array(seed.nodes)
    p = body.support(dirs)
    step = math.pi / seed.level
    count = 2 * body.dimension

    def phi(x):
        def gap(u):
            return float(body.support(u[None, :])[0] - u @ x)

        def gap_grad(u):
            return body.gradient(u[None, :])[0] - x

        found = [local_minimize(gap, dirs[k], tol=1e-11, step=step, grad=gap_grad)
                 for k in _starts(p - dirs @ x, count)]
        return min(v for _, v in found), _distinct([u for u, _ in found], dirs)

    x, upper, duals = _max_inscribed_ball(dirs, p, with_duals=True)
    atoms = duals > 1e-12
    bound, us, w = _dual_upper_bound(body, dirs[atoms], duals[atoms])
    if math.isfinite(bound):
        # the centre sits at distance `bound` inside every contact point
        upper = min(upper, bound)
        x = w @ (body.gradient(us) - bound * us) / w.sum()
    lower, new = phi(x)
    for _ in range(max_rounds):
        if upper - lower <= tol * max(1.0, abs(upper)):
            return lower
        dirs = np.vstack([dirs, new])
        p = np.concatenate([p, body.support(new)])
        _, upper = _max_inscribed_ball(dirs, p)
        x = _central_point(dirs, p, lower)
        value, new = phi(x)
        lower = max(lower, value)
    raise NumericalError(
        f"inradius did not converge in {max_rounds} rounds (bracket [{lower}, {upper}])")


def _circumball(pts):
    q0 = pts[0]
    if len(pts) == 1:
        return q0.copy(), 0.0
    U = pts[1:] - q0
    G = U @ U.T
    lam = np.linalg.lstsq(2.0 * G, np.diag(G), rcond=None)[0]
    centre = q0 + lam @ U
    return centre, float(np.max(np.linalg.norm(pts - centre, axis=1)))


def _inside(point, ball):
    centre, r = ball
    return centre is not None and np.linalg.norm(point - centre) <= r * (1 + 1e-12) + 1e-14


def _welzl(points, boundary, n):
    if len(points) == 0 or len(boundary) == n + 1:
        if not boundary:
            return None, -1.0
        return _circumball(np.array(boundary))
    p = points[-1]
    ball = _welzl(points[:-1], boundary, n)
    if _inside(p, ball):
        return ball
    return _welzl(points[:-1], boundary + [p], n)


def min_enclosing_ball(points, seed: int = 0) -> tuple[np.ndarray, float]:
    """Smallest ball containing `points` (rows).

    Welzl's algorithm on a growing core set: start from the extreme points
    along each axis, add the farthest outlier, repeat until none remain.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[1]
    rng = np.random.default_rng(seed)
    core = sorted(set(np.argmax(points, axis=0)) | set(np.argmin(points, axis=0)))
    while True:
        order = rng.permutation(core)
        centre, r = _welzl([points[k] for k in order], [], n)
        d = np.linalg.norm(points - centre, axis=1)
        far = int(np.argmax(d))
        if d[far] <= r * (1 + 1e-12) + 1e-14:
            return centre, r
        core.append(far)


def outradius(body: ConvexBody, rule: QuadratureRule, tol: float = 1e-9,
              max_rounds: int = 60) -> float:
    """Radius of the smallest ball containing `body`.

    Minimum enclosing ball of the boundary points ``grad p(u)`` at the rule
    nodes, refined by adding the locally farthest boundary points from the
    current centre until the enclosing radius stops growing beyond `tol`.
    """
    dirs = np.array(rule.nodes)
    pts = body.gradient(dirs)
    step = math.pi / rule.level
    r = math.nan
    for _ in range(max_rounds):
        centre, r = min_enclosing_ball(pts)

        def neg_sq_dist(u, centre=centre):
            return -0.5 * float(np.sum((body.gradient(u[None, :])[0] - centre) ** 2))

        def neg_sq_dist_grad(u, centre=centre):
            return -body.hessian(u[None, :])[0] @ (body.gradient(u[None, :])[0] - centre)

        d = np.linalg.norm(pts - centre, axis=1)
        found = [local_minimize(neg_sq_dist, dirs[k], tol=1e-11, step=step,
                                grad=neg_sq_dist_grad)
                 for k in _starts(-d, 2 * body.dimension)]
        upper = max(math.sqrt(-2 * v) for _, v in found)
        if upper - r <= tol * max(1.0, r):
            return r
        new = _distinct([u for u, v in found if math.sqrt(-2 * v) > r], dirs)
        dirs = np.vstack([dirs, new])
        pts = np.vstack([pts, body.gradient(new)])
    raise NumericalError(f"outradius did not converge in {max_rounds} rounds (last {r})")


# ---------------------------------------------------------------------------
# root bounds


@dataclass(frozen=True)
class BoundsReport:
    rho_min: float
    rho_max: float
    real_parts: np.ndarray
    upper_margin: float  # -rho_min - r_n
    lower_margin: float  # r_1 + rho_max
    pass_: bool
    tolerance: float
    stable: bool
    hypothesis_verified: bool


def theorem2_check(body: ConvexBody, rule: QuadratureRule, tol: float = THEOREM_TOL
                   ) -> BoundsReport:
    """Real parts of the Steiner roots against ``[-rho_max, -rho_min]``.

    The bound is proved under stability of all Steiner polynomials in the
    dimension, known for ``n <= 5``; for ``n = 6`` the report is produced
    with ``hypothesis_verified=False`` and a warning.
    """
    n = body.dimension
    verified = n <= STABILITY_VERIFIED_MAX_N
    if not verified:
        warnings.warn(f"root bounds in dimension {n} rest on an unverified stability "
                      "hypothesis", stacklevel=2)
    ext = radii_extrema(body)
    poly, _ = steiner_polynomial(body, rule)
    re = roots(poly).real_parts_sorted
    upper = -ext.rho_min - re[-1]
    lower = re[0] + ext.rho_max
    return BoundsReport(rho_min=ext.rho_min, rho_max=ext.rho_max, real_parts=re,
                        upper_margin=float(upper), lower_margin=float(lower),
                        pass_=bool(upper >= -tol and lower >= -tol), tolerance=tol,
                        stable=hurwitz_stable(poly).stable, hypothesis_verified=verified)


@dataclass(frozen=True)
class PlanarChainReport:
    """The seven chain values in order and the six consecutive gaps.

    ``mode`` is ``"strict"`` for a non-disc, where ``strict`` says every gap
    exceeds the tolerance, and ``"equality"`` for a disc, where ``equal``
    says all values agree within ``disc_tol``.
    """

    values: tuple[float, ...]
    gaps: tuple[float, ...]
    mode: str
    strict: bool
    equal: bool
    tolerance: float
    labels: tuple[str, ...] = field(default=CHAIN_LABELS)

    def as_dict(self):
        return dict(zip(self.labels, self.values))


def planar_chain_check(body: ConvexBody, rule: QuadratureRule, tol: float = CHAIN_TOL,
                       disc_tol: float = DISC_TOL) -> PlanarChainReport:
    if body.dimension != 2:
        raise PreconditionError("the planar chain needs a body in the plane")
    ext = radii_extrema(body)
    poly, _ = steiner_polynomial(body, rule)
    t1, t2 = roots(poly).real_parts_sorted
    perimeter = poly.coefficients[1]
    values = (-ext.rho_max, t1, -outradius(body, rule), -perimeter / (2 * math.pi),
              -inradius(body, rule), t2, -ext.rho_min)
    values = tuple(float(v) for v in values)
    gaps = tuple(float(b - a) for a, b in zip(values, values[1:]))
    strict = all(g > tol for g in gaps)
    equal = max(values) - min(values) <= disc_tol
    mode = "equality" if ext.rho_max - ext.rho_min <= tol else "strict"
    return PlanarChainReport(values=values, gaps=gaps, mode=mode, strict=strict,
                             equal=equal, tolerance=tol)


# ---------------------------------------------------------------------------
# identities


def relative_coefficient_error(a: SteinerPolynomial, b: SteinerPolynomial,
                               reference: SteinerPolynomial) -> float:
    """Largest ``|a_i - b_i| / max(|a_i|, |b_i|, |reference_i|)``.

    The reference (the source body's polynomial) keeps coefficients that
    vanish on both sides, as for ``K ~ rho_min B`` of a ball, from turning
    rounding noise into an O(1) relative error.
    """
    ca, cb, cr = a.coefficients, b.coefficients, reference.coefficients
    denom = np.maximum.reduce([np.abs(ca), np.abs(cb), np.abs(cr)])
    return float(np.max(np.abs(ca - cb) / denom))


def shift_identity_check(body: ConvexBody, c: float, rule: QuadratureRule) -> float:
    """Compare ``S_{K ~ cB}(t)`` with ``S_K(t - c)``, two independent pipelines."""
    reduced = inner_parallel(body, c, rule)
    lhs, _ = steiner_polynomial(reduced, rule)
    base, _ = steiner_polynomial(body, rule)
    return relative_coefficient_error(lhs, base.shifted(-c), base)


def reflection_identity_check(body: ConvexBody, c: float, rule: QuadratureRule) -> float:
    """Compare ``S_{cB ~ K}(t)`` with ``(-1)^n S_K(-t - c)``.

    The right side is reflect-then-shift: ``(-1)^n S_K(-t)`` evaluated at
    ``t + c``.  In the plane of three dimensions the expanded cubic form is
    checked too, and the larger error is returned.
    """
    comp = ball_complement(body, c, rule)
    lhs, _ = steiner_polynomial(comp, rule)
    base, _ = steiner_polynomial(body, rule)
    err = relative_coefficient_error(lhs, base.reflected().shifted(c), base)
    if body.dimension == 3:
        err = max(err, relative_coefficient_error(lhs, expanded_cubic_complement(base, c), base))
    return err


def expanded_cubic_complement(base: SteinerPolynomial, c: float) -> SteinerPolynomial:
    """``-(V - A u + H u^2 - kappa u^3)`` with ``u = c + t``, written out.

    Here ``S_K(t) = V + A t + H t^2 + kappa t^3``.
    """
    if base.dimension != 3:
        raise PreconditionError("the expanded complement form is for n = 3")
    V, A, H, kappa = base.coefficients
    # u = c + t:  u^2 = c^2 + 2ct + t^2,  u^3 = c^3 + 3c^2 t + 3c t^2 + t^3
    c0 = V - A * c + H * c * c - kappa * c ** 3
    c1 = -A + 2 * H * c - 3 * kappa * c * c
    c2 = H - 3 * kappa * c
    c3 = -kappa
    return SteinerPolynomial(3, -np.array([c0, c1, c2, c3]))


# ---------------------------------------------------------------------------
# inradius problem


@dataclass(frozen=True)
class P2Report:
    """``holds`` means ``-R_i <= r_n`` up to ``tolerance``; ``marginal``
    flags a slack within the tolerance, where the verdict is not robust."""

    holds: bool
    slack: float
    marginal: bool
    tolerance: float
    inradius: float
    largest_real_part: float


def p2_empirical_check(body: ConvexBody, rule: QuadratureRule, tol: float = 1e-8) -> P2Report:
    """Empirical test of ``-inradius <= largest root real part``.

    A negative slack is numerical evidence only, never a disproof.
    """
    R_i = inradius(body, rule)
    poly, _ = steiner_polynomial(body, rule)
    r_n = float(roots(poly).real_parts_sorted[-1])
    slack = r_n + R_i
    return P2Report(holds=slack >= -tol, slack=slack, marginal=abs(slack) <= tol,
                    tolerance=tol, inradius=R_i, largest_real_part=r_n)
