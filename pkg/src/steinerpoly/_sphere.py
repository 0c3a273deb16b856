"""Local optimization of functions on the unit sphere."""

import numpy as np
from scipy.optimize import minimize


def householder_frame(direction):
    """Orthonormal basis of the tangent space at `direction`, as columns.

    Deterministic Householder completion: the reflection sending e_n to
    +-direction, with the image of e_n dropped.
    """
    d = np.asarray(direction, dtype=float)
    v = d.copy() if d[-1] > 0 else -d
    v[-1] += 1.0
    Q = np.eye(d.size) - 2.0 * np.outer(v, v) / (v @ v)
    return Q[:, :-1]


def local_minimize(f, start, tol=1e-10, step=0.05, maxiter=4000, grad=None):
    """Minimize `f` on the sphere near `start`, in a tangent chart.

    Returns ``(direction, value)``.  `f` maps a unit vector to a float.
    Without `grad` this is Nelder-Mead with simplex size `step`, stopped when
    the simplex is smaller than `tol`; with `grad` (the ambient gradient of
    a degree-zero extension of `f`, only its tangential part matters) it is
    BFGS with gradient tolerance `tol`.
    """
    start = np.asarray(start, dtype=float)
    start = start / np.linalg.norm(start)
    B = householder_frame(start)
    m = B.shape[1]

    def lift(y):
        x = start + B @ y
        return x / np.linalg.norm(x)

    if grad is not None:
        def jac(y):
            z = start + B @ y
            r = np.linalg.norm(z)
            u = z / r
            g = grad(u)
            return B.T @ ((g - u * (u @ g)) / r)

        res = minimize(lambda y: f(lift(y)), np.zeros(m), jac=jac, method="BFGS",
                       options={"gtol": tol, "maxiter": maxiter})
        best = lift(res.x)
        return best, float(f(best))

    simplex = np.vstack([np.zeros(m), step * np.eye(m)])
    res = minimize(lambda y: f(lift(y)), np.zeros(m), method="Nelder-Mead",
                   options={"xatol": tol, "fatol": 1e-15,
                            "initial_simplex": simplex, "maxiter": maxiter})
    best = lift(res.x)
    return best, float(f(best))
