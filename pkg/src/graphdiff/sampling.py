"""Score models and Euler-Maruyama reverse-SDE sampling.

The score of the noisy marginal is expressed through the posterior mean of
the clean signal (Tweedie's identity): score = Sigma_t^{-1} (H_t E[x_0|x_t]
- x_t). Both score models and the integrator work entirely in the Laplacian
eigenbasis, so the inverse covariance is only ever applied as a division by
per-mode variances, never materialized densely.

The same integrator drives the graph-aware process and the VPD/VED
baselines; they differ only in their per-mode drift, diffusion, filter, and
noise-variance callbacks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .graphs import gft, igft


@dataclass
class SamplerConfig:
    num_steps: int
    seed: int = 0
    final_denoise: bool = True
    t_floor_frac: float = 1e-3

    def __post_init__(self):
        if self.num_steps < 1:
            raise ValidationError("num_steps must be >= 1")
        if not (0.0 < self.t_floor_frac < 1.0):
            raise ValidationError("t_floor_frac must be in (0, 1)")


class TweedieScore:
    """Score from a trained denoiser via Tweedie's identity."""

    def __init__(self, process, denoiser, t_floor_frac=1e-3):
        self.process = process
        self.denoiser = denoiser
        self.t_floor = t_floor_frac * process.horizon

    def _check(self, t):
        if np.any(np.asarray(t) < self.t_floor):
            raise ValidationError(
                f"score undefined below the time floor {self.t_floor:g} "
                "(marginal covariance is singular at t=0)"
            )

    def score(self, x_t, t):
        self._check(t)
        spectrum = self.process.spectrum
        h = self.process.filter_diag(t)
        s = self.process.noise_variances(t)
        est = self.denoiser.forward(x_t, t)
        resid = h * gft(spectrum, est) - gft(spectrum, x_t)
        return igft(spectrum, resid / s)

    def posterior_mean(self, x_t, t):
        self._check(t)
        return self.denoiser.forward(x_t, t)


class GaussianOracleScore:
    """Exact score when the data law is a known Gaussian N(mean0, cov0).

    The marginal at time t is N(H_t mean0, H_t cov0 H_t + Sigma_t); its score
    and posterior mean are evaluated in the eigenbasis with one small
    symmetric solve per time step.
    """

    def __init__(self, process, mean0, cov0, t_floor_frac=1e-3):
        n = process.spectrum.num_nodes
        mean0 = np.asarray(mean0, dtype=np.float64)
        cov0 = np.asarray(cov0, dtype=np.float64)
        if mean0.shape != (n,) or cov0.shape != (n, n):
            raise ValidationError("mean0 must be (N,) and cov0 (N, N)")
        if np.max(np.abs(cov0 - cov0.T)) > 1e-10:
            raise ValidationError("cov0 must be symmetric")
        eigs = np.linalg.eigvalsh(cov0)
        if eigs.min() < -1e-10:
            raise ValidationError("cov0 must be positive semidefinite")
        self.process = process
        self.mean0 = mean0
        v = process.spectrum.eigenvectors
        self.spectral_mean0 = gft(process.spectrum, mean0)
        self.spectral_cov0 = v.T @ cov0 @ v
        self.t_floor = t_floor_frac * process.horizon

    def _check(self, t):
        if np.any(np.asarray(t) < self.t_floor):
            raise ValidationError(
                f"score undefined below the time floor {self.t_floor:g}"
            )

    def _marginal_parts(self, t):
        h = self.process.filter_diag(t)
        s = self.process.noise_variances(t)
        cov = h[:, None] * self.spectral_cov0 * h[None, :] + np.diag(s)
        return h, cov

    def score(self, x_t, t):
        self._check(t)
        spectrum = self.process.spectrum
        h, cov = self._marginal_parts(t)
        centered = gft(spectrum, np.atleast_2d(x_t)) - h * self.spectral_mean0
        solved = np.linalg.solve(cov, centered.T).T
        out = -igft(spectrum, solved)
        return out[0] if np.asarray(x_t).ndim == 1 else out

    def posterior_mean(self, x_t, t):
        self._check(t)
        spectrum = self.process.spectrum
        h, cov = self._marginal_parts(t)
        centered = gft(spectrum, np.atleast_2d(x_t)) - h * self.spectral_mean0
        gain = self.spectral_cov0 * h[None, :]
        post = self.spectral_mean0 + (gain @ np.linalg.solve(cov, centered.T)).T
        out = igft(spectrum, post)
        return out[0] if np.asarray(x_t).ndim == 1 else out


class ZeroScore:
    """Score stub returning zero; drift-only integration for tests."""

    def __init__(self, process):
        self.process = process

    def score(self, x_t, t):
        return np.zeros_like(np.asarray(x_t, dtype=np.float64))

    def posterior_mean(self, x_t, t):
        return np.asarray(x_t, dtype=np.float64)


def euler_maruyama_reverse(process, score_model, config, num_samples=None):
    """Integrate the reverse SDE from the prior down to the time floor.

    Uses the uniform grid t_k = t_floor + k (T - t_floor)/S and the step
      x <- x - dt f(x, t) + dt g(t)^2 score(x, t) + sqrt(g(t)^2 dt) z,
    which is the Euler-Maruyama discretization of the reverse-time SDE (the
    forward drift enters with flipped sign because time runs backward). When
    config.final_denoise is set, the returned samples are the score model's
    posterior-mean estimate at the floor instead of the raw state.
    """
    spectrum = process.spectrum
    horizon = process.horizon
    t_floor = config.t_floor_frac * horizon
    steps = config.num_steps
    grid = np.linspace(t_floor, horizon, steps + 1)
    rng = np.random.default_rng(config.seed)
    squeeze = num_samples is None
    m = 1 if squeeze else int(num_samples)
    x = np.atleast_2d(process.prior().sample(rng, num_samples=m))
    eigvecs = spectrum.eigenvectors
    for k in range(steps, 0, -1):
        t = grid[k]
        dt = grid[k] - grid[k - 1]
        drift = (x @ eigvecs) * process.drift_eigs(t) @ eigvecs.T
        g_sq = process.diffusion_sq(t)
        score = score_model.score(x, t)
        noise = np.sqrt(g_sq * dt) * rng.standard_normal(x.shape)
        x = x - dt * drift + dt * g_sq * score + noise
        if not np.all(np.isfinite(x)):
            raise NumericalError(
                f"reverse integration produced non-finite state at step {steps - k + 1} "
                f"(t={t:g})"
            )
    if config.final_denoise:
        x = np.atleast_2d(score_model.posterior_mean(x, grid[0]))
    return x[0] if squeeze else x
