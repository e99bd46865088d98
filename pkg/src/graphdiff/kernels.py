"""Backend selection for the GCNN layer kernels.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension is missing or when the environment
variable GRAPHDIFF_PURE_PYTHON is set to a nonempty value. The active
backend name is exposed as BACKEND.
"""

import os

import numpy as np

if os.environ.get("GRAPHDIFF_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND


def layer_apply(lap, x, theta):
    """Polynomial filter layer: returns (cached L^k x stack, pre-activation)."""
    return _impl.layer_apply(
        np.ascontiguousarray(lap, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(theta, dtype=np.float64),
    )


def layer_grad(lap, powers, theta, d_out):
    """Reverse-mode gradients of layer_apply: returns (d_theta, d_x)."""
    return _impl.layer_grad(
        np.ascontiguousarray(lap, dtype=np.float64),
        np.ascontiguousarray(powers, dtype=np.float64),
        np.ascontiguousarray(theta, dtype=np.float64),
        np.ascontiguousarray(d_out, dtype=np.float64),
    )
