"""Graph-agnostic diffusion baselines exposed through the same spectral API.

Both forward laws are isotropic, so they are diagonal in any orthonormal
basis; representing them in the Laplacian eigenbasis lets the training loop,
score computation, and reverse integrator treat all methods uniformly.
"""

import numpy as np

from .errors import ValidationError
from .forward import SpectralGaussian
from .graphs import gft, igft


class VariancePreservingProcess:
    """dx = -1/2 beta_t x dt + sqrt(beta_t) dw with linear beta_t.

    Marginal given x_0: mean exp(-1/2 int beta) x_0, variance
    1 - exp(-int beta) per coordinate.
    """

    method = "vpd"

    def __init__(self, spectrum, beta_min=0.1, beta_max=20.0, horizon=1.0):
        if beta_min <= 0.0 or beta_max <= beta_min:
            raise ValidationError("need 0 < beta_min < beta_max")
        if horizon <= 0.0:
            raise ValidationError("horizon must be positive")
        self.spectrum = spectrum
        self.beta_min = float(beta_min)
        self.beta_max = float(beta_max)
        self.horizon = float(horizon)

    def beta(self, t):
        return self.beta_min + (self.beta_max - self.beta_min) * (
            np.asarray(t, dtype=np.float64) / self.horizon
        )

    def beta_integral(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.beta_min * t + 0.5 * (self.beta_max - self.beta_min) * t * t / self.horizon

    def filter_diag(self, t):
        scale = np.exp(-0.5 * self.beta_integral(t))
        return np.multiply.outer(scale, np.ones(self.spectrum.num_nodes))

    def noise_variances(self, t):
        var = -np.expm1(-self.beta_integral(t))
        return np.multiply.outer(var, np.ones(self.spectrum.num_nodes))

    def drift_eigs(self, t):
        return -0.5 * self.beta(t) * np.ones(self.spectrum.num_nodes)

    def diffusion_sq(self, t):
        return float(self.beta(t))

    def marginal(self, x0, t):
        x0 = np.asarray(x0, dtype=np.float64)
        mean = igft(self.spectrum, self.filter_diag(t) * gft(self.spectrum, x0))
        return SpectralGaussian(self.spectrum, mean, self.noise_variances(t))

    def prior(self):
        n = self.spectrum.num_nodes
        return SpectralGaussian(self.spectrum, np.zeros(n), np.ones(n))

    def to_dict(self):
        return {
            "type": "vpd",
            "beta_min": self.beta_min,
            "beta_max": self.beta_max,
            "T": self.horizon,
        }


class VarianceExplodingProcess:
    """dx = sqrt(d sigma_t^2 / dt) dw with geometric sigma_t.

    No drift; the marginal given x_0 has mean x_0 and per-coordinate
    variance sigma_t^2 - sigma_min^2.
    """

    method = "ved"

    def __init__(self, spectrum, sigma_min=0.01, sigma_max=10.0, horizon=1.0):
        if sigma_min <= 0.0 or sigma_max <= sigma_min:
            raise ValidationError("need 0 < sigma_min < sigma_max")
        if horizon <= 0.0:
            raise ValidationError("horizon must be positive")
        self.spectrum = spectrum
        self.sigma_min = float(sigma_min)
        self.sigma_max = float(sigma_max)
        self.horizon = float(horizon)
        self._log_ratio = np.log(self.sigma_max / self.sigma_min)

    def sigma_at(self, t):
        u = np.asarray(t, dtype=np.float64) / self.horizon
        return self.sigma_min * np.exp(u * self._log_ratio)

    def filter_diag(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.multiply.outer(np.ones_like(t), np.ones(self.spectrum.num_nodes))

    def noise_variances(self, t):
        var = self.sigma_at(t) ** 2 - self.sigma_min**2
        return np.multiply.outer(var, np.ones(self.spectrum.num_nodes))

    def drift_eigs(self, t):
        return np.zeros(self.spectrum.num_nodes)

    def diffusion_sq(self, t):
        # d sigma_t^2 / dt for the geometric schedule
        return float(self.sigma_at(t) ** 2 * 2.0 * self._log_ratio / self.horizon)

    def marginal(self, x0, t):
        x0 = np.asarray(x0, dtype=np.float64)
        return SpectralGaussian(self.spectrum, x0.copy(), self.noise_variances(t))

    def prior(self):
        n = self.spectrum.num_nodes
        var = self.sigma_max**2 - self.sigma_min**2
        return SpectralGaussian(self.spectrum, np.zeros(n), np.full(n, var))

    def to_dict(self):
        return {
            "type": "ved",
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "T": self.horizon,
        }
