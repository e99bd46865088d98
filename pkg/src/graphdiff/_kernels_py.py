"""Pure-numpy implementation of the GCNN layer kernels.

Fallback backend used when the compiled extension is unavailable (or when
GRAPHDIFF_PURE_PYTHON=1). Semantics must match graphdiff._ckernels; the two
are cross-checked in the test suite and timed against each other in
benchmarks/bench_kernels.py.
"""

import numpy as np

BACKEND = "python"


def layer_apply(lap, x, theta):
    """One multi-channel polynomial filter layer, pre-activation.

    Args:
        lap: (N, N) Laplacian.
        x: (B, N, W_in) input features.
        theta: (K+1, W_in, W_out) per-hop coefficient matrices.

    Returns:
        powers: (K+1, B, N, W_in) with powers[k] = L^k x (cached for the
            backward pass).
        out: (B, N, W_out) with out[b] = sum_k L^k x[b] theta[k].
    """
    kp1 = theta.shape[0]
    powers = np.empty((kp1,) + x.shape)
    powers[0] = x
    for k in range(1, kp1):
        powers[k] = np.matmul(lap, powers[k - 1])
    out = np.tensordot(powers, theta, axes=([0, 3], [0, 1]))
    return powers, out


def layer_grad(lap, powers, theta, d_out):
    """Reverse-mode gradients of layer_apply.

    Args:
        lap: (N, N) Laplacian.
        powers: (K+1, B, N, W_in) cached from layer_apply.
        theta: (K+1, W_in, W_out).
        d_out: (B, N, W_out) gradient w.r.t. the layer pre-activation.

    Returns:
        d_theta: (K+1, W_in, W_out) summed over the batch.
        d_x: (B, N, W_in) gradient w.r.t. the layer input.
    """
    d_theta = np.tensordot(powers, d_out, axes=([1, 2], [0, 1]))
    # d_x = sum_k L^k (d_out theta_k^T), evaluated by Horner's rule
    # (valid because L is symmetric).
    kp1 = theta.shape[0]
    d_x = np.matmul(d_out, theta[kp1 - 1].T)
    for k in range(kp1 - 2, -1, -1):
        d_x = np.matmul(lap, d_x) + np.matmul(d_out, theta[k].T)
    return d_theta, d_x
