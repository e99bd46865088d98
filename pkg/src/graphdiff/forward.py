"""Graph heat-equation forward diffusion with closed-form marginals.

The process dx = -c_t (L + gamma I) x dt + sqrt(2 c_t) sigma dw has Gaussian
marginals that are diagonal in the Laplacian eigenbasis: given x_0, the mean
is the low-pass filtered V diag(h) V^T x_0 with h_i = exp(-cbar_t (lambda_i +
gamma)) and the per-mode variances are sigma^2 (1 - h_i^2) / (lambda_i +
gamma). Everything here is evaluated spectrally; no matrix exponentials and
no dense covariance factorizations are ever formed.
"""

import numpy as np

from .errors import NumericalError, ValidationError
from .graphs import gft, igft


class SpectralGaussian:
    """Gaussian with covariance diagonal in the Laplacian eigenbasis.

    Mean lives in the node domain; spectral_variances holds the per-mode
    variances s_i, so the covariance is V diag(s) V^T.
    """

    def __init__(self, spectrum, mean, spectral_variances):
        mean = np.asarray(mean, dtype=np.float64)
        spectral_variances = np.asarray(spectral_variances, dtype=np.float64)
        n = spectrum.num_nodes
        if mean.shape != (n,) or spectral_variances.shape != (n,):
            raise ValidationError("mean and spectral_variances must be length-N vectors")
        if np.any(spectral_variances < 0.0):
            raise ValidationError("spectral variances must be nonnegative")
        self.spectrum = spectrum
        self.mean = mean
        self.spectral_variances = spectral_variances

    def covariance(self):
        """Dense covariance matrix V diag(s) V^T (small graphs only)."""
        v = self.spectrum.eigenvectors
        return v @ (self.spectral_variances[:, None] * v.T)

    def sample(self, seed, num_samples=None):
        """Draw samples; deterministic given the seed.

        Returns a length-N vector when num_samples is None, otherwise an
        (num_samples, N) array.
        """
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        squeeze = num_samples is None
        m = 1 if squeeze else int(num_samples)
        z = rng.standard_normal((m, self.spectrum.num_nodes))
        out = self.mean[None, :] + igft(self.spectrum, z * np.sqrt(self.spectral_variances))
        return out[0] if squeeze else out


class HeatDiffusionProcess:
    """Forward heat diffusion on the shifted Laplacian L + gamma I.

    gamma > 0 is required so every mode decays (the zero Laplacian eigenvalue
    would otherwise never mix) and the stationary law N(0, sigma^2 (L +
    gamma I)^{-1}) exists.
    """

    method = "gad"

    def __init__(self, spectrum, schedule, sigma=1.0, gamma=0.3):
        if gamma <= 0.0:
            raise ValidationError(f"gamma must be positive, got {gamma}")
        if sigma < 0.0:
            raise ValidationError(f"sigma must be nonnegative, got {sigma}")
        self.spectrum = spectrum
        self.schedule = schedule
        self.sigma = float(sigma)
        self.gamma = float(gamma)
        self.shifted_eigenvalues = spectrum.eigenvalues + gamma

    @property
    def horizon(self):
        return self.schedule.horizon

    def filter_diag(self, t):
        """Per-mode decay h_i = exp(-cbar_t (lambda_i + gamma)), in (0, 1]."""
        cbar = self.schedule.integrated_drift(t)
        return np.exp(-np.multiply.outer(cbar, self.shifted_eigenvalues))

    def noise_variances(self, t):
        """Per-mode marginal variances sigma^2 (1 - h^2) / (lambda + gamma)."""
        h = self.filter_diag(t)
        return self.sigma**2 * (1.0 - h * h) / self.shifted_eigenvalues

    def drift_eigs(self, t):
        """Per-mode drift coefficients a_i with f(x, t) = V diag(a) V^T x."""
        return -self.schedule.drift(t) * self.shifted_eigenvalues

    def diffusion_sq(self, t):
        """Squared diffusion coefficient g(t)^2 = 2 c_t sigma^2."""
        return 2.0 * self.schedule.drift(t) * self.sigma**2

    def marginal(self, x0, t):
        """Closed-form law of x_t given x_0."""
        x0 = np.asarray(x0, dtype=np.float64)
        h = self.filter_diag(t)
        mean = igft(self.spectrum, h * gft(self.spectrum, x0))
        return SpectralGaussian(self.spectrum, mean, self.noise_variances(t))

    def stationary(self):
        """Limit law N(0, sigma^2 (L + gamma I)^{-1})."""
        n = self.spectrum.num_nodes
        return SpectralGaussian(
            self.spectrum, np.zeros(n), self.sigma**2 / self.shifted_eigenvalues
        )

    def prior(self):
        """Law the reverse sampler starts from (the stationary law)."""
        return self.stationary()


def euler_forward_simulate(process, x0, num_steps, seed, num_paths=None):
    """Euler-Maruyama simulation of the forward SDE. Test oracle only.

    Steps x <- x - c_t L_gamma x dt + sqrt(2 c_t dt) sigma z on a uniform
    grid with left-endpoint drift evaluation. The production pipeline always
    uses the exact marginals; this exists to validate them statistically.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    squeeze = num_paths is None
    m = 1 if squeeze else int(num_paths)
    x = np.tile(x0, (m, 1))
    if num_steps < 0:
        raise ValidationError("num_steps must be nonnegative")
    if num_steps == 0:
        return x[0] if squeeze else x
    rng = np.random.default_rng(seed)
    lap_shifted = process.spectrum.laplacian + process.gamma * np.eye(process.spectrum.num_nodes)
    horizon = process.horizon
    dt = horizon / num_steps
    for k in range(num_steps):
        c = process.schedule.drift(k * dt)
        noise = np.sqrt(2.0 * c * dt) * process.sigma * rng.standard_normal(x.shape)
        x = x - c * dt * (x @ lap_shifted.T) + noise
        if not np.all(np.isfinite(x)):
            raise NumericalError(f"forward simulation diverged at step {k}")
    return x[0] if squeeze else x
