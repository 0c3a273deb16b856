import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.integrate import dblquad
from hypothesis import strategies as st

from steinerpoly import IntegrationError, PreconditionError, build_rule, default_level, integrate
from steinerpoly.quadrature import sphere_area


def monomial_integral(alpha):
    """Exact integral of prod u_i^alpha_i over S^{n-1}."""
    if any(a % 2 for a in alpha):
        return 0.0
    b = [(a + 1) / 2 for a in alpha]
    return 2 * math.prod(math.gamma(x) for x in b) / math.gamma(sum(b))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_weights_sum_to_sphere_area(n):
    rule = build_rule(n, default_level(n))
    assert rule.sum(np.ones(len(rule))) == pytest.approx(sphere_area(n), rel=1e-14)
    assert np.all(rule.weights > 0)
    np.testing.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-15)


def test_known_areas():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi ** 2)


@given(n=st.integers(2, 5), data=st.data())
@settings(max_examples=80, deadline=None)
def test_polynomials_within_exactness_degree(n, data):
    level = data.draw(st.integers(2, 6))
    rule = build_rule(n, level)
    deg = rule.exactness_degree
    alpha = data.draw(st.lists(st.integers(0, deg), min_size=n, max_size=n)
                      .filter(lambda a: sum(a) <= deg))
    values = np.prod(rule.nodes ** np.array(alpha), axis=1)
    assert rule.sum(values) == pytest.approx(monomial_integral(alpha), abs=1e-13)


def test_node_counts():
    assert len(build_rule(2, 32)) == 64
    assert len(build_rule(3, 4)) == 2 * 4 ** 2
    assert len(build_rule(5, 3)) == 2 * 3 ** 4


def test_ellipsoid_support_integral_against_adaptive_quadrature():
    a2 = np.array([9.0, 4.0, 1.0])

    def integrand(phi, theta):
        u = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return np.sqrt((u * u) @ a2) * np.sin(theta)

    ref, _ = dblquad(integrand, 0, np.pi, 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-13)
    errors = [abs(integrate(build_rule(3, level), lambda u: np.sqrt((u * u) @ a2)) - ref)
              for level in (8, 16, 32)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-10 * ref


def test_integrate_vectorized_equals_pointwise():
    rule = build_rule(4, 5)
    f = lambda u: np.exp(u[..., 0]) * u[..., 1] ** 2
    assert integrate(rule, f) == integrate(rule, f, vectorized=True)


def test_integrand_failures_are_reported_with_the_node():
    rule = build_rule(3, 4)

    def boom(u):
        if u[2] > 0.9:
            raise ValueError("bad")
        return 1.0

    with pytest.raises(IntegrationError, match="node"):
        integrate(rule, boom)
    with pytest.raises(IntegrationError, match="non-finite"):
        integrate(rule, lambda u: np.nan if u[0] > 0.5 else 0.0)


@pytest.mark.parametrize("n,level", [(1, 4), (7, 4), (3, 0), (3, 2.5)])
def test_bad_parameters(n, level):
    with pytest.raises(PreconditionError):
        build_rule(n, level)


def test_sum_rejects_wrong_shape():
    with pytest.raises(PreconditionError):
        build_rule(2, 4).sum(np.ones(3))
