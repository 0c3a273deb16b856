import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from steinerpoly import _kernels_py, kernels

try:
    from steinerpoly import _kernels
except ImportError:  # pragma: no cover - built without a compiler
    _kernels = None

BACKENDS = [_kernels_py] + ([_kernels] if _kernels is not None else [])


def random_unit(rng, count, n):
    x = rng.normal(size=(count, n))
    return x / np.linalg.norm(x, axis=1)[:, None]


def tangent_hessians(rng, dirs):
    n = dirs.shape[1]
    A = rng.normal(size=(len(dirs), n, n))
    P = np.eye(n) - dirs[:, :, None] * dirs[:, None, :]
    return np.ascontiguousarray(P @ (A + A.transpose(0, 2, 1)) @ P)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_restricted_spectrum_matches_full_tangent_spectrum(impl, n, rng):
    # H kills the normal, so its spectrum is the restricted one plus a zero
    dirs = random_unit(rng, 50, n)
    dirs[0] = np.eye(n)[-1]
    dirs[1] = -np.eye(n)[-1]
    H = tangent_hessians(rng, dirs)
    M = impl.restrict_hessians(H, dirs)
    assert M.shape == (50, n - 1, n - 1)
    np.testing.assert_allclose(M, M.transpose(0, 2, 1), atol=1e-14)
    full = np.linalg.eigvalsh(H)
    for k in range(50):
        expected = np.delete(full[k], np.argmin(np.abs(full[k])))
        np.testing.assert_allclose(np.linalg.eigvalsh(M[k]), expected, atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_sym_eigvals_against_lapack(impl, m, rng):
    A = rng.normal(size=(200, m, m))
    A = np.ascontiguousarray(A + A.transpose(0, 2, 1))
    np.testing.assert_allclose(impl.sym_eigvals(A), np.linalg.eigvalsh(A), atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_sym_eigvals_repeated_and_zero(impl):
    A = np.ascontiguousarray(np.stack([np.eye(4) * 2.5, np.zeros((4, 4)), np.diag([1.0, 1, 3, 3])]))
    np.testing.assert_array_equal(impl.sym_eigvals(A)[0], 2.5)
    np.testing.assert_array_equal(impl.sym_eigvals(A)[1], 0.0)
    np.testing.assert_allclose(impl.sym_eigvals(A)[2], [1, 1, 3, 3])


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@given(vals=arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 5)),
                   elements=st.floats(-3, 3)))
@settings(max_examples=60, deadline=None)
def test_elementary_symmetric_brute_force(impl, vals):
    e = impl.elementary_symmetric(np.ascontiguousarray(vals))
    m = vals.shape[1]
    for row, erow in zip(vals, e):
        for j in range(m + 1):
            brute = sum(np.prod(c) for c in itertools.combinations(row, j)) if j else 1.0
            assert erow[j] == pytest.approx(brute, abs=1e-12, rel=1e-12)


@given(x=arrays(np.float64, st.integers(0, 300), elements=st.floats(-1e6, 1e6)))
@settings(max_examples=100, deadline=None)
def test_pairwise_sum_is_bit_identical_across_backends(x):
    x = np.ascontiguousarray(x)
    ref = _kernels_py.pairwise_sum(x)
    assert ref == pytest.approx(float(np.sum(x)), abs=1e-6)
    for impl in BACKENDS:
        assert impl.pairwise_sum(x) == ref


def test_pairwise_sum_beats_naive_accumulation():
    x = np.full(10**6, 0.1)
    naive = 0.0
    for v in x[:100000]:
        naive += v
    assert abs(_kernels_py.pairwise_sum(x[:100000]) - 10000.0) < abs(naive - 10000.0)


def test_backend_selection_flag():
    assert kernels.BACKEND in ("compiled", "python")
    out = subprocess.run(
        [sys.executable, "-c", "from steinerpoly import kernels; print(kernels.BACKEND)"],
        env={**os.environ, "STEINERPOLY_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_fallback_backend_reproduces_pipeline():
    code = (
        "from steinerpoly import *\n"
        "import numpy as np\n"
        "for b in (Ellipsoid((2.0, 1.0)), Ellipsoid((3.0, 2.0, 1.0)),"
        " MinkowskiSum((Ellipsoid((2.0, 1.5, 1.0, 1.2)), Ball(4, 0.5)))):\n"
        "    p, _ = steiner_polynomial(b, build_rule(b.dimension, 8))\n"
        "    print(' '.join(repr(float(c)) for c in p.coefficients))\n"
        "    print(' '.join(repr(float(r)) for r in roots(p).real_parts_sorted))\n")
    outs = {}
    for flag in ("", "1"):
        env = dict(os.environ)
        env.pop("STEINERPOLY_PURE_PYTHON", None)
        if flag:
            env["STEINERPOLY_PURE_PYTHON"] = flag
        outs[flag] = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                                    capture_output=True, text=True).stdout.splitlines()
    for a, b in zip(outs[""], outs["1"]):
        np.testing.assert_allclose(np.array(a.split(), float), np.array(b.split(), float),
                                   rtol=1e-12)
