"""Kernel selection: compiled extension when importable, numpy otherwise.

Set the environment variable ``STEINERPOLY_PURE_PYTHON=1`` before import to
force the numpy implementations.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("STEINERPOLY_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        pass

restrict_hessians = _impl.restrict_hessians
sym_eigvals = _impl.sym_eigvals
elementary_symmetric = _impl.elementary_symmetric
pairwise_sum = _impl.pairwise_sum

__all__ = ["BACKEND", "restrict_hessians", "sym_eigvals",
           "elementary_symmetric", "pairwise_sum"]
