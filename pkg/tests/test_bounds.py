import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from steinerpoly import (Ball, Ellipsoid, MinkowskiSum, PreconditionError, SteinerPolynomial,
                         SummandViolationError, Translate, build_rule, inradius, outradius,
                         p2_empirical_check, planar_chain_check, reflection_identity_check,
                         shift_identity_check, steiner_polynomial, theorem2_check)
from steinerpoly.body import random_directions
from steinerpoly.bounds import (expanded_cubic_complement, min_enclosing_ball,
                                relative_coefficient_error)

SYMMETRIC = [
    Ellipsoid((2.0, 1.0)),
    Ellipsoid((1.1, 1.0)),
    Ellipsoid((3.0, 2.0, 1.0)),
    MinkowskiSum((Ellipsoid((3.0, 2.0, 1.0)), Ellipsoid((1.0, 2.0, 3.0)))),
    MinkowskiSum((Ellipsoid((2.0, 1.5, 1.0, 1.2)), Ball(4, 0.5))),
    Ellipsoid((2.0, 1.5, 1.0, 1.2, 1.7)),
]


@pytest.mark.parametrize("body", SYMMETRIC, ids=lambda b: f"n{b.dimension}")
def test_radii_of_symmetric_bodies_against_dense_sampling(body, rules):
    # centred at the origin by symmetry: R_i = min p, R_e = max |grad p|
    dirs = random_directions(body.dimension, 400000, seed=5)
    p_min = body.support(dirs).min()
    g_max = np.linalg.norm(body.gradient(dirs), axis=1).max()
    rule = rules(body.dimension)
    r_in, r_out = inradius(body, rule), outradius(body, rule)
    assert r_in <= p_min + 1e-12 and p_min - r_in < 2e-3 * r_in
    assert r_out >= g_max - 1e-12 and r_out - g_max < 2e-3 * r_out


@pytest.mark.parametrize("axes", [(2.0, 1.0), (3.0, 2.0, 1.0), (2.0, 1.5, 1.0, 1.2, 1.7)])
def test_ellipsoid_radii_are_extreme_semi_axes(axes, rules):
    body = Ellipsoid(axes)
    rule = rules(len(axes))
    assert inradius(body, rule) == pytest.approx(min(axes), rel=1e-9)
    assert outradius(body, rule) == pytest.approx(max(axes), rel=1e-9)


def test_ball_radii(rules):
    assert inradius(Ball(2, 2.0), rules(2)) == pytest.approx(2.0, rel=1e-12)
    assert outradius(Ball(2, 2.0), rules(2)) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("body,offset", [
    (Ellipsoid((2.0, 1.0)), (3.0, -1.5)),
    (Ellipsoid((3.0, 2.0, 1.0)), (0.3, -1.0, 2.0)),
    (MinkowskiSum((Ellipsoid((2.0, 1.5, 1.0, 1.2)), Ball(4, 0.5))), (1.0, 2.0, -1.0, 0.5)),
])
def test_translation_invariance(body, offset, rules):
    rule = rules(body.dimension)
    moved = Translate(body, offset)
    assert inradius(moved, rule) == pytest.approx(inradius(body, rule), abs=1e-8)
    assert outradius(moved, rule) == pytest.approx(outradius(body, rule), abs=1e-8)


@given(seed=st.integers(0, 10000), n=st.integers(2, 4), count=st.integers(2, 40))
@settings(max_examples=40, deadline=None)
def test_min_enclosing_ball_against_minimax(seed, n, count):
    pts = np.random.default_rng(seed).normal(size=(count, n))
    centre, radius = min_enclosing_ball(pts)
    assert np.all(np.linalg.norm(pts - centre, axis=1) <= radius * (1 + 1e-9))
    # oracle: minimize t subject to |x_k - c|^2 <= t, a convex program
    mean = pts.mean(axis=0)
    x0 = np.append(mean, np.max(np.sum((pts - mean) ** 2, axis=1)))
    res = minimize(lambda z: z[-1], x0, jac=lambda z: np.eye(n + 1)[-1], method="SLSQP",
                   constraints=[{"type": "ineq",
                                 "fun": lambda z: z[-1] - np.sum((pts - z[:-1]) ** 2, axis=1),
                                 "jac": lambda z: np.column_stack([2 * (pts - z[:-1]),
                                                                   np.ones(len(pts))])}],
                   options={"ftol": 1e-13, "maxiter": 1000})
    assert radius == pytest.approx(np.sqrt(res.x[-1]), rel=1e-6)


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theorem2_ball_equality_case(n, rules):
    rep = theorem2_check(Ball(n, 1.5), rules(n))
    assert rep.pass_ and rep.stable and rep.hypothesis_verified
    assert abs(rep.upper_margin) < 1e-6 and abs(rep.lower_margin) < 1e-6


def test_theorem2_ellipse(rules):
    rep = theorem2_check(Ellipsoid((2.0, 1.0)), rules(2))
    assert rep.rho_min == pytest.approx(0.5) and rep.rho_max == pytest.approx(4.0)
    np.testing.assert_allclose(rep.real_parts, [-2.1565, -0.92744], atol=1e-4)
    assert rep.pass_


def test_theorem2_ellipsoid3(rules):
    rep = theorem2_check(Ellipsoid((3.0, 2.0, 1.0)), rules(3))
    assert rep.pass_
    assert np.all(rep.real_parts >= -9 - 1e-4) and np.all(rep.real_parts <= -1 / 3 + 1e-4)


def test_theorem2_dimension_six_is_flagged():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = theorem2_check(Ball(6, 1.0), build_rule(6, 4))
    assert not rep.hypothesis_verified
    assert any("hypothesis" in str(w.message) for w in caught)


def test_pass_flag_follows_margins(rules):
    rep = theorem2_check(Ellipsoid((3.0, 1.0)), rules(2), tol=1e-4)
    assert rep.pass_ == (rep.upper_margin >= -1e-4 and rep.lower_margin >= -1e-4)


def test_planar_chain_ellipse(rules):
    rep = planar_chain_check(Ellipsoid((2.0, 1.0)), rules(2))
    expected = (-4.0, -2.1566, -2.0, -1.54193, -1.0, -0.92744, -0.5)
    np.testing.assert_allclose(rep.values, expected, atol=1e-3)
    assert rep.mode == "strict" and rep.strict
    assert all(g > 0 for g in rep.gaps)
    assert rep.as_dict()["-R_i"] == rep.values[4]


def test_planar_chain_disc_equality_mode(rules):
    rep = planar_chain_check(Ball(2, 1.3), rules(2))
    assert rep.mode == "equality" and rep.equal
    np.testing.assert_allclose(rep.values, -1.3, atol=1e-6)


def test_planar_chain_near_disc(rules):
    rep = planar_chain_check(Ellipsoid((1.1, 1.0)), rules(2), tol=1e-7)
    assert rep.strict and min(rep.gaps) > 1e-7


def test_planar_chain_needs_plane(rules):
    with pytest.raises(PreconditionError):
        planar_chain_check(Ball(3, 1.0), rules(3))


# ---------------------------------------------------------------------------


def test_shift_identity_examples(rules):
    assert shift_identity_check(Ball(2, 2.0), 0.5, rules(2)) < 1e-10
    assert shift_identity_check(Ellipsoid((2.0, 1.0)), 0.45, rules(2)) < 1e-6
    assert shift_identity_check(Ellipsoid((3.0, 2.0, 1.0)), 0.3, rules(3)) < 1e-6


def test_shift_identity_propagates_violation(rules):
    with pytest.raises(SummandViolationError):
        shift_identity_check(Ellipsoid((2.0, 1.0)), 0.6, rules(2))


def test_reflection_identity_examples(rules):
    assert reflection_identity_check(Ball(2, 1.0), 3.0, rules(2)) < 1e-10
    assert reflection_identity_check(Ellipsoid((2.0, 1.0)), 4.5, rules(2)) < 1e-6
    assert reflection_identity_check(Ellipsoid((3.0, 2.0, 1.0)), 10.0, rules(3)) < 1e-6
    with pytest.raises(SummandViolationError):
        reflection_identity_check(Ellipsoid((2.0, 1.0)), 3.0, rules(2))


def test_ball_complement_of_ball_is_ball_polynomial(rules):
    # cB ~ B(1) with c = 3 is B(2)
    from steinerpoly import ball_complement
    lhs, _ = steiner_polynomial(ball_complement(Ball(3, 1.0), 3.0), rules(3))
    rhs, _ = steiner_polynomial(Ball(3, 2.0), rules(3))
    np.testing.assert_allclose(lhs.coefficients, rhs.coefficients, rtol=1e-12)


@given(c=st.lists(st.floats(0.1, 10), min_size=4, max_size=4), shift=st.floats(0, 20))
@settings(max_examples=50, deadline=None)
def test_expanded_cubic_equals_reflect_then_shift(c, shift):
    base = SteinerPolynomial(3, c)
    a = expanded_cubic_complement(base, shift).coefficients
    b = base.reflected().shifted(shift).coefficients
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9 * (1 + shift) ** 3 * max(c))


def test_expanded_cubic_needs_three_dimensions():
    with pytest.raises(PreconditionError):
        expanded_cubic_complement(SteinerPolynomial(2, [1.0, 2.0, 1.0]), 1.0)


def test_relative_coefficient_error():
    a = SteinerPolynomial(2, [1.0, 2.0, 3.0])
    b = SteinerPolynomial(2, [1.0, 2.2, 3.0])
    assert relative_coefficient_error(a, b, a) == pytest.approx(0.2 / 2.2)
    z = SteinerPolynomial(2, [0.0, 1.0, 1.0])
    z2 = SteinerPolynomial(2, [1e-17, 1.0, 1.0])
    assert relative_coefficient_error(z, z2, a) == pytest.approx(1e-17)


# ---------------------------------------------------------------------------


def test_p2_examples(rules):
    rep = p2_empirical_check(Ball(3, 1.2), rules(3))
    assert rep.holds and abs(rep.slack) < 1e-8 and rep.marginal
    rep = p2_empirical_check(Ellipsoid((2.0, 1.0)), rules(2))
    assert rep.holds and not rep.marginal
    assert rep.largest_real_part == pytest.approx(-0.92744, abs=1e-4)
    assert rep.inradius == pytest.approx(1.0, rel=1e-9)
    rep = p2_empirical_check(Ellipsoid((3.0, 2.0, 1.0)), rules(3))
    assert rep.holds and rep.slack > 0
    assert math.isclose(rep.slack, rep.largest_real_part + rep.inradius)
