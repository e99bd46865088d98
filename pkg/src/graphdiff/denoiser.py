"""Estimators of the clean signal behind a noisy forward-process observation.

Two families:

* TikhonovDenoiser - the closed-form solution of the single-signal
  deconvolution problem min ||x_t - H_t x||^2_{Sigma_t^{-1}} + alpha x^T L x,
  a graph filter whose rational frequency response trades off exponential
  deconvolution against Laplacian smoothing.
* GcnnDenoiser - a trainable cascade of multi-channel polynomial graph
  filters with ReLU hidden activations and a linear output layer, trained by
  stochastic gradient descent on randomly-noised data to approximate the
  posterior mean across all noise levels.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NumericalError, ValidationError
from .graphs import gft, igft


def tikhonov_frequency_response(lam, cbar, gamma, alpha_sigma_sq):
    """Frequency response of the closed-form denoising filter.

    h(lambda) = exp((lambda+gamma) cbar)
                / (1 + alpha sigma^2 (lambda/(lambda+gamma))
                       (exp(2 (lambda+gamma) cbar) - 1))

    evaluated in the overflow-safe equivalent form
    1 / (exp(-a) + b (exp(a) - exp(-a))) with a = (lambda+gamma) cbar and
    b = alpha sigma^2 lambda / (lambda+gamma).
    """
    lam = np.asarray(lam, dtype=np.float64)
    a = (lam + gamma) * cbar
    b = alpha_sigma_sq * lam / (lam + gamma)
    return 1.0 / (np.exp(-a) + b * (np.exp(a) - np.exp(-a)))


class TikhonovDenoiser:
    """Closed-form graph-filter denoiser for a known forward process."""

    def __init__(self, process, alpha_reg=1.0):
        if alpha_reg < 0.0:
            raise ValidationError(f"alpha_reg must be nonnegative, got {alpha_reg}")
        self.process = process
        self.alpha_reg = float(alpha_reg)

    def frequency_response(self, lam, t):
        cbar = self.process.schedule.integrated_drift(t)
        return tikhonov_frequency_response(
            lam, cbar, self.process.gamma, self.alpha_reg * self.process.sigma**2
        )

    def denoise(self, x_t, t):
        if np.asarray(t).ndim == 0 and float(t) == 0.0:
            raise ValidationError("covariance singular at t=0")
        spectrum = self.process.spectrum
        response = self.frequency_response(spectrum.eigenvalues, t)
        return igft(spectrum, response * gft(spectrum, x_t))


def _init_coefficients(widths, filter_order, rng):
    coeffs = []
    for w_in, w_out in zip(widths[:-1], widths[1:]):
        bound = 1.0 / np.sqrt(w_in * (filter_order + 1))
        coeffs.append(rng.uniform(-bound, bound, size=(filter_order + 1, w_in, w_out)))
    return coeffs


class GcnnDenoiser:
    """Stacked polynomial graph-filter network predicting the clean signal.

    Input features per node are the noisy signal value and the normalized
    time t/T; hidden layers apply ReLU, the final layer is linear so the
    output can take negative values. Forward passes cache everything the
    explicit reverse-mode backward pass needs.
    """

    def __init__(self, spectrum, num_layers=3, filter_order=3, hidden_width=16,
                 horizon=1.0, seed=0, coefficients=None):
        if num_layers < 1:
            raise ValidationError("num_layers must be >= 1")
        if filter_order < 1:
            raise ValidationError("filter_order must be >= 1")
        self.spectrum = spectrum
        self.num_layers = int(num_layers)
        self.filter_order = int(filter_order)
        self.hidden_width = int(hidden_width)
        self.horizon = float(horizon)
        self.widths = [2] + [hidden_width] * (num_layers - 1) + [1]
        if coefficients is not None:
            expected = [
                (filter_order + 1, wi, wo)
                for wi, wo in zip(self.widths[:-1], self.widths[1:])
            ]
            got = [np.asarray(c).shape for c in coefficients]
            if got != expected:
                raise ValidationError(f"coefficient shapes {got} do not match {expected}")
            self.coefficients = [np.array(c, dtype=np.float64) for c in coefficients]
        else:
            rng = np.random.default_rng(seed)
            self.coefficients = _init_coefficients(self.widths, filter_order, rng)
        for c in self.coefficients:
            if not np.all(np.isfinite(c)):
                raise ValidationError("coefficients must be finite")

    def _features(self, x_t, t):
        x_t = np.asarray(x_t, dtype=np.float64)
        squeeze = x_t.ndim == 1
        x = x_t[None, :] if squeeze else x_t
        if x.shape[1] != self.spectrum.num_nodes:
            raise ValidationError("signal length does not match graph size")
        t = np.asarray(t, dtype=np.float64)
        t_col = np.broadcast_to((np.atleast_1d(t) / self.horizon)[:, None], x.shape)
        feats = np.stack([x, t_col], axis=2)
        return feats, squeeze

    def forward(self, x_t, t, with_cache=False):
        """Estimate the clean signal from (x_t, t).

        Accepts a single signal (N,) with scalar t, or a batch (B, N) with
        scalar or (B,) t. with_cache=True additionally returns the per-layer
        activations needed by backward().
        """
        feats, squeeze = self._features(x_t, t)
        lap = self.spectrum.laplacian
        cache = []
        x = feats
        for layer, theta in enumerate(self.coefficients):
            powers, pre = kernels.layer_apply(lap, x, theta)
            last = layer == self.num_layers - 1
            cache.append((powers, pre))
            x = pre if last else np.maximum(pre, 0.0)
        out = x[:, :, 0]
        out = out[0] if squeeze else out
        return (out, cache) if with_cache else out

    def backward(self, cache, d_out):
        """Gradients of sum_b <d_out_b, output_b> w.r.t. every coefficient."""
        d_out = np.asarray(d_out, dtype=np.float64)
        if d_out.ndim == 1:
            d_out = d_out[None, :]
        lap = self.spectrum.laplacian
        d_x = d_out[:, :, None]
        grads = [None] * self.num_layers
        for layer in range(self.num_layers - 1, -1, -1):
            powers, pre = cache[layer]
            # ReLU subgradient at 0 is taken as 0 (strict inequality).
            d_pre = d_x if layer == self.num_layers - 1 else d_x * (pre > 0.0)
            grads[layer], d_x = kernels.layer_grad(lap, powers, self.coefficients[layer], d_pre)
        return grads

    def gradient(self, x_t, t, x0_target):
        """Gradients of the squared-error objective 0.5 ||x0 - forward(x_t, t)||^2."""
        x0_target = np.asarray(x0_target, dtype=np.float64)
        out, cache = self.forward(x_t, t, with_cache=True)
        return self.backward(cache, out - x0_target)

    def copy(self):
        return GcnnDenoiser(
            self.spectrum,
            num_layers=self.num_layers,
            filter_order=self.filter_order,
            hidden_width=self.hidden_width,
            horizon=self.horizon,
            coefficients=[c.copy() for c in self.coefficients],
        )


def mmse_loss(x0_batch, estimates):
    """Mean over the batch of squared Euclidean error norms."""
    x0_batch = np.atleast_2d(np.asarray(x0_batch, dtype=np.float64))
    estimates = np.atleast_2d(np.asarray(estimates, dtype=np.float64))
    if x0_batch.shape != estimates.shape:
        raise ValidationError(
            f"batch shapes {x0_batch.shape} and {estimates.shape} do not match"
        )
    diff = x0_batch - estimates
    return float(np.mean(np.sum(diff * diff, axis=1)))


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    num_iterations: int = 5000
    batch_size: int = 16
    seed: int = 0
    momentum: float = 0.9
    t_floor_frac: float = 1e-3

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ValidationError("learning_rate must be positive")
        if self.num_iterations < 1 or self.batch_size < 1:
            raise ValidationError("num_iterations and batch_size must be >= 1")
        if not (0.0 <= self.momentum < 1.0):
            raise ValidationError("momentum must be in [0, 1)")


DIVERGENCE_THRESHOLD = 1e6


def train(denoiser, dataset, process, config):
    """Stochastic-gradient training of a GCNN denoiser.

    Each iteration draws a batch of clean signals, per-sample times uniform
    on [t_floor, T], noises them through the exact forward marginal, and
    descends the squared reconstruction error (momentum SGD). Deterministic
    given config.seed. Returns (denoiser, per-iteration loss trace).
    """
    signals = dataset.signals if hasattr(dataset, "signals") else np.asarray(dataset)
    if signals.shape[0] < 1:
        raise ValidationError("training dataset is empty")
    rng = np.random.default_rng(config.seed)
    horizon = process.horizon
    t_floor = config.t_floor_frac * horizon
    eigvecs = process.spectrum.eigenvectors
    trace = np.empty(config.num_iterations)
    velocity = [np.zeros_like(c) for c in denoiser.coefficients]
    batch = config.batch_size
    for it in range(config.num_iterations):
        idx = rng.integers(0, signals.shape[0], size=batch)
        x0 = signals[idx]
        t = rng.uniform(t_floor, horizon, size=batch)
        h = process.filter_diag(t)
        s = process.noise_variances(t)
        z = rng.standard_normal((batch, signals.shape[1]))
        x_t = (h * (x0 @ eigvecs) + np.sqrt(s) * z) @ eigvecs.T
        out, cache = denoiser.forward(x_t, t, with_cache=True)
        loss = mmse_loss(x0, out)
        trace[it] = loss
        if not np.isfinite(loss) or loss > DIVERGENCE_THRESHOLD:
            raise NumericalError(f"training diverged at iteration {it}: loss={loss:g}")
        grads = denoiser.backward(cache, (out - x0) / batch)
        for vel, coeff, grad in zip(velocity, denoiser.coefficients, grads):
            vel *= config.momentum
            vel += grad
            coeff -= config.learning_rate * vel
    return denoiser, trace


def checkpoint_dict(denoiser, process, graph_hash):
    """JSON-serializable checkpoint for a trained denoiser."""
    if hasattr(process, "schedule"):
        params = {
            "type": "gad",
            "sigma": process.sigma,
            "gamma": process.gamma,
            "schedule": process.schedule.to_dict(),
        }
    else:
        params = process.to_dict()
    return {
        "method": process.method,
        "architecture": {
            "layers": denoiser.num_layers,
            "K": denoiser.filter_order,
            "widths": denoiser.widths,
        },
        "coefficients": [c.tolist() for c in denoiser.coefficients],
        "forward_model_params": params,
        "graph_hash": graph_hash,
    }


def save_checkpoint(path, denoiser, process, graph_hash):
    with open(path, "w") as fh:
        json.dump(checkpoint_dict(denoiser, process, graph_hash), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_checkpoint(path, spectrum, graph_hash):
    """Rebuild (denoiser, process) from a checkpoint; verifies the graph hash."""
    from .baselines import VariancePreservingProcess, VarianceExplodingProcess
    from .forward import HeatDiffusionProcess
    from .schedules import schedule_from_dict

    with open(path) as fh:
        doc = json.load(fh)
    if doc["graph_hash"] != graph_hash:
        raise ValidationError(
            f"checkpoint graph hash {doc['graph_hash'][:12]}... does not match "
            f"the provided graph ({graph_hash[:12]}...)"
        )
    params = doc["forward_model_params"]
    kind = params["type"]
    if kind == "gad":
        process = HeatDiffusionProcess(
            spectrum,
            schedule_from_dict(params["schedule"]),
            sigma=params["sigma"],
            gamma=params["gamma"],
        )
    elif kind == "vpd":
        process = VariancePreservingProcess(
            spectrum, beta_min=params["beta_min"], beta_max=params["beta_max"],
            horizon=params["T"],
        )
    elif kind == "ved":
        process = VarianceExplodingProcess(
            spectrum, sigma_min=params["sigma_min"], sigma_max=params["sigma_max"],
            horizon=params["T"],
        )
    else:
        raise ValidationError(f"unknown process type {kind!r} in checkpoint")
    arch = doc["architecture"]
    widths = arch["widths"]
    denoiser = GcnnDenoiser(
        spectrum,
        num_layers=arch["layers"],
        filter_order=arch["K"],
        hidden_width=widths[1] if len(widths) > 2 else 1,
        horizon=process.horizon,
        coefficients=[np.array(c, dtype=np.float64) for c in doc["coefficients"]],
    )
    return denoiser, process
