"""Drift coefficient schedules and their exact integrals.

Two variants: a uniform linear schedule c_t = c*t, and a floor constrained
polynomial schedule c_t = c_min + k*(t/T)^alpha whose integral grows like
u^(alpha+1), holding back signal decay until late times. Integrals are in
closed form; nothing is quadratured.
"""

import numpy as np

from .errors import ValidationError


class UniformLinearSchedule:
    """c_t = c * t with integral c * t^2 / 2."""

    def __init__(self, c, horizon=1.0):
        if c <= 0.0:
            raise ValidationError(f"c must be positive, got {c}")
        if horizon <= 0.0:
            raise ValidationError(f"horizon must be positive, got {horizon}")
        self.c = float(c)
        self.horizon = float(horizon)

    def _check(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 0.0) or np.any(t > self.horizon):
            raise ValidationError(f"t must lie in [0, {self.horizon}], got {t}")
        return t

    def drift(self, t):
        return self.c * self._check(t)

    def integrated_drift(self, t):
        t = self._check(t)
        return 0.5 * self.c * t * t

    def to_dict(self):
        return {"type": "uls", "c": self.c, "T": self.horizon}


class FloorPolynomialSchedule:
    """c_t = c_min + k*(t/T)^alpha with k = (c_0 - c_min*T)*(alpha+1)/T.

    The integral is c_min*t + (c_0 - c_min*T)*(t/T)^(alpha+1), so the total
    accumulated drift at the horizon is exactly c_0.
    """

    def __init__(self, c_min=0.05, c_0=4.0, alpha=2.0, horizon=1.0):
        if not (0.0 < c_min < 1.0):
            raise ValidationError(f"c_min must be in (0, 1), got {c_min}")
        if alpha <= 1.0:
            raise ValidationError(f"alpha must be > 1, got {alpha}")
        if horizon <= 0.0:
            raise ValidationError(f"horizon must be positive, got {horizon}")
        if c_0 <= 0.0:
            raise ValidationError(f"c_0 must be positive, got {c_0}")
        if c_0 <= c_min * horizon:
            raise ValidationError(
                f"c_0 must exceed c_min*T = {c_min * horizon:g} so the polynomial "
                f"gain is positive, got c_0 = {c_0}"
            )
        self.c_min = float(c_min)
        self.c_0 = float(c_0)
        self.alpha = float(alpha)
        self.horizon = float(horizon)
        self.gain = (c_0 - c_min * horizon) * (alpha + 1.0) / horizon

    def _check(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 0.0) or np.any(t > self.horizon):
            raise ValidationError(f"t must lie in [0, {self.horizon}], got {t}")
        return t

    def drift(self, t):
        u = self._check(t) / self.horizon
        return self.c_min + self.gain * u**self.alpha

    def integrated_drift(self, t):
        t = self._check(t)
        u = t / self.horizon
        return self.c_min * t + (self.c_0 - self.c_min * self.horizon) * u ** (self.alpha + 1.0)

    def to_dict(self):
        return {
            "type": "fcps",
            "c_min": self.c_min,
            "c_0": self.c_0,
            "alpha": self.alpha,
            "T": self.horizon,
        }


def schedule_from_dict(d):
    kind = d.get("type")
    if kind == "uls":
        return UniformLinearSchedule(c=d["c"], horizon=d["T"])
    if kind == "fcps":
        return FloorPolynomialSchedule(
            c_min=d["c_min"], c_0=d["c_0"], alpha=d["alpha"], horizon=d["T"]
        )
    raise ValidationError(f"unknown schedule type {kind!r}")
