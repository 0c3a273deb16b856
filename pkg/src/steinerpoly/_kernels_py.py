"""Pure numpy implementations of the per-node kernels.

Same algorithms and signatures as the compiled ``_kernels`` extension, but
vectorized over the node axis instead of looping.  Used when the extension
is not built or when ``STEINERPOLY_PURE_PYTHON`` is set.
"""

import numpy as np

MAX_SWEEPS = 60


def _householder_vectors(dirs):
    v = np.where(dirs[:, -1:] > 0, dirs, -dirs).copy()
    v[:, -1] += 1.0
    return v


def restrict_hessians(H, dirs):
    """Restrict full Hessians to the tangent spaces of `dirs`."""
    H = np.ascontiguousarray(H, dtype=float)
    dirs = np.ascontiguousarray(dirs, dtype=float)
    m = H.shape[1] - 1
    v = _householder_vectors(dirs)
    s = np.einsum("ki,ki->k", v, v)
    w = np.einsum("kij,kj->ki", H, v)
    alpha = np.einsum("ki,ki->k", v, w)
    vt, wt = v[:, :m], w[:, :m]
    out = (H[:, :m, :m]
           - (2.0 / s)[:, None, None] * (vt[:, :, None] * wt[:, None, :]
                                        + wt[:, :, None] * vt[:, None, :])
           + (4.0 * alpha / (s * s))[:, None, None] * vt[:, :, None] * vt[:, None, :])
    return np.ascontiguousarray(out)


def _jacobi_batch(a):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return _jacobi_sweeps(a)


def _jacobi_sweeps(a):
    N, m, _ = a.shape
    scale = np.sqrt(np.einsum("kij,kij->k", a, a))
    iu = np.triu_indices(m, 1)
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
        if np.all((off <= 1e-15 * scale) | (off == 0.0)):
            break
        for p in range(m):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                active = apq != 0.0
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                t = np.where(theta >= 0,
                             1.0 / (theta + np.sqrt(theta * theta + 1.0)),
                             -1.0 / (-theta + np.sqrt(theta * theta + 1.0)))
                c = np.where(active, 1.0 / np.sqrt(t * t + 1.0), 1.0)
                s = np.where(active, t * c, 0.0)
                c2, s2 = c[:, None], s[:, None]
                arp, arq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c2 * arp - s2 * arq
                a[:, :, q] = s2 * arp + c2 * arq
                arp, arq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c2 * arp - s2 * arq
                a[:, q, :] = s2 * arp + c2 * arq
    return np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)


def sym_eigvals(M):
    """Ascending eigenvalues of a stack of symmetric matrices."""
    M = np.array(M, dtype=float)
    N, m, _ = M.shape
    if m == 1:
        return M[:, :, 0].copy()
    if m == 2:
        mean = 0.5 * (M[:, 0, 0] + M[:, 1, 1])
        rad = np.hypot(0.5 * (M[:, 0, 0] - M[:, 1, 1]), M[:, 0, 1])
        return np.stack([mean - rad, mean + rad], axis=1)
    return _jacobi_batch(M)


def elementary_symmetric(vals):
    """Unnormalized elementary symmetric functions e_0..e_m of each row."""
    vals = np.asarray(vals, dtype=float)
    N, m = vals.shape
    e = np.zeros((N, m + 1))
    e[:, 0] = 1.0
    for i in range(m):
        x = vals[:, i]
        for j in range(i + 1, 0, -1):
            e[:, j] += x * e[:, j - 1]
    return e


def pairwise_sum(x):
    """Sum with a fixed tree: blocks of 8 left to right, then adjacent pairs."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n == 0:
        return 0.0
    nb = (n + 7) // 8
    blocks = np.zeros(8 * nb)
    blocks[:n] = x
    blocks = blocks.reshape(nb, 8)
    buf = blocks[:, 0].copy()
    for i in range(1, 8):
        buf = buf + blocks[:, i]
    while buf.size > 1:
        if buf.size % 2 == 1:
            buf = np.append(buf, 0.0)
        buf = buf[0::2] + buf[1::2]
    return float(buf[0])
