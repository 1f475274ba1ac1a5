"""Driving field in carrier-envelope form and two-level system parameters.

The field is E(t) = (1/2) E0(t) [exp{i(w t + phi(t))} + c.c.], i.e. a slow
envelope and quadratic (linearly chirped) phase riding on a fast carrier.
Everything downstream works with the Rabi envelope Omega(t) = mu*E0(t)/hbar
directly (natural units, hbar = 1), so envelopes are parameterized by peak
Rabi frequency rather than by field amplitude.

Only envelopes that are strictly positive everywhere are provided (constant,
Gaussian, sech): the logarithmic derivative Omega^-1 dOmega/dt enters the
nonadiabatic detuning and diverges where the envelope vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import EnvelopeUnderflow, ValidationError

__all__ = [
    "SystemParams",
    "ConstantEnvelope",
    "GaussianEnvelope",
    "SechEnvelope",
    "Chirp",
    "FieldModel",
    "EnvelopeSample",
    "rabi_at",
    "phase_at",
    "field_value",
]

#: Default smallest admissible Rabi envelope value. Below this the caller is
#: evaluating too far into a pulse wing for Omega^-1 dOmega/dt to mean
#: anything; we raise instead of silently clamping.
OMEGA_FLOOR = 1e-30


@dataclass(frozen=True)
class SystemParams:
    """Bare frequencies, dipole scale and damping rates of the two-level system.

    Parameters
    ----------
    omega_g, omega_e : float
        Bare angular frequencies of ground and excited state (rad/time unit),
        with ``omega_e > omega_g``.
    mu : float
        Dimensionless dipole scale; multiplies the Rabi envelope. Default 1.
    gamma_g, gamma_e : float
        Non-negative damping rates (1/time unit) entering the Hamiltonian as
        the anti-Hermitian term -i(gamma_j/2)|j><j|.
    """

    omega_g: float
    omega_e: float
    mu: float = 1.0
    gamma_g: float = 0.0
    gamma_e: float = 0.0

    def __post_init__(self):
        if not (self.omega_e > self.omega_g):
            raise ValidationError(
                f"omega_e ({self.omega_e}) must exceed omega_g ({self.omega_g})"
            )
        if self.gamma_g < 0 or self.gamma_e < 0:
            raise ValidationError(
                f"damping rates must be >= 0, got gamma_g={self.gamma_g}, "
                f"gamma_e={self.gamma_e}"
            )

    @property
    def gamma_sum_half(self) -> float:
        """(gamma_g + gamma_e)/2, the damping combination used throughout."""
        return 0.5 * (self.gamma_g + self.gamma_e)


@dataclass(frozen=True)
class ConstantEnvelope:
    """CW field: Omega(t) = omega0 > 0."""

    omega0: float
    kind = "constant"

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValidationError(f"constant envelope requires omega0 > 0, got {self.omega0}")

    @property
    def t_center(self) -> float:
        return 0.0

    def omega(self, t):
        return self.omega0 * np.ones_like(np.asarray(t, dtype=float))

    def log_deriv(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def dlog_deriv(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class GaussianEnvelope:
    """Gaussian pulse: Omega(t) = omega0 * exp(-((t - t_center)/tau)^2)."""

    omega0: float
    t_center: float = 0.0
    tau: float = 1.0
    kind = "gaussian"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValidationError(f"gaussian envelope requires tau > 0, got {self.tau}")
        if not self.omega0 > 0:
            raise ValidationError(f"gaussian envelope requires omega0 > 0, got {self.omega0}")

    def omega(self, t):
        x = (np.asarray(t, dtype=float) - self.t_center) / self.tau
        return self.omega0 * np.exp(-x * x)

    def log_deriv(self, t):
        return -2.0 * (np.asarray(t, dtype=float) - self.t_center) / self.tau**2

    def dlog_deriv(self, t):
        return np.full_like(np.asarray(t, dtype=float), -2.0 / self.tau**2)


@dataclass(frozen=True)
class SechEnvelope:
    """Hyperbolic-secant pulse: Omega(t) = omega0 * sech((t - t_center)/tau)."""

    omega0: float
    t_center: float = 0.0
    tau: float = 1.0
    kind = "sech"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValidationError(f"sech envelope requires tau > 0, got {self.tau}")
        if not self.omega0 > 0:
            raise ValidationError(f"sech envelope requires omega0 > 0, got {self.omega0}")

    def omega(self, t):
        x = (np.asarray(t, dtype=float) - self.t_center) / self.tau
        return self.omega0 / np.cosh(x)

    def log_deriv(self, t):
        x = (np.asarray(t, dtype=float) - self.t_center) / self.tau
        return -np.tanh(x) / self.tau

    def dlog_deriv(self, t):
        x = (np.asarray(t, dtype=float) - self.t_center) / self.tau
        return -1.0 / (np.cosh(x) ** 2 * self.tau**2)


Envelope = Union[ConstantEnvelope, GaussianEnvelope, SechEnvelope]


@dataclass(frozen=True)
class Chirp:
    """Quadratic phase phi(t) = phi0 + (beta/2)(t - t_center)^2 (linear chirp).

    ``t_center`` defaults to the envelope center when the chirp is attached
    to a :class:`FieldModel`.
    """

    phi0: float = 0.0
    beta: float = 0.0
    t_center: float | None = None


@dataclass(frozen=True)
class FieldModel:
    """Carrier frequency, Rabi envelope and chirped phase of the driving field."""

    carrier_omega: float
    envelope: Envelope
    phase: Chirp = field(default_factory=Chirp)

    @property
    def phase_center(self) -> float:
        if self.phase.t_center is not None:
            return self.phase.t_center
        return self.envelope.t_center

    def phi(self, t):
        return self.phase.phi0 + 0.5 * self.phase.beta * (np.asarray(t, dtype=float) - self.phase_center) ** 2

    def dphi(self, t):
        return self.phase.beta * (np.asarray(t, dtype=float) - self.phase_center)

    def d2phi(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.phase.beta)


@dataclass(frozen=True)
class EnvelopeSample:
    """Rabi envelope and its first two logarithmic derivatives at one time.

    ``log_deriv`` is Omega^-1 dOmega/dt, the field-amplitude nonadiabatic
    factor; ``dlog_deriv`` is its time derivative.
    """

    t: float
    omega: float
    log_deriv: float
    dlog_deriv: float


def rabi_at(
    params: SystemParams,
    field: FieldModel,
    t: float,
    floor: float = OMEGA_FLOOR,
) -> EnvelopeSample:
    """Evaluate Omega(t) = mu * envelope(t) and its log-derivatives in closed form.

    Raises
    ------
    EnvelopeUnderflow
        If Omega(t) < ``floor`` (default 1e-30): too far into a pulse wing.
    """
    omega = params.mu * float(field.envelope.omega(t))
    if omega < floor:
        raise EnvelopeUnderflow(
            f"Omega({t}) = {omega:.3e} below floor {floor:.3e}"
        )
    return EnvelopeSample(
        t=float(t),
        omega=omega,
        log_deriv=float(field.envelope.log_deriv(t)),
        dlog_deriv=float(field.envelope.dlog_deriv(t)),
    )


def phase_at(field: FieldModel, t: float) -> tuple[float, float, float]:
    """Return (phi, dphi/dt, d2phi/dt2) of the quadratic phase at time t."""
    return float(field.phi(t)), float(field.dphi(t)), float(field.d2phi(t))


def field_value(field: FieldModel, params: SystemParams, t: float) -> float:
    """Instantaneous off-diagonal coupling -mu E(t)/hbar = -Omega(t) cos(w t + phi(t)).

    This is the full-field (no rotating-wave approximation) matrix element
    used by the bare-basis integrator; the (1/2)(exp + c.c.) carrier
    structure collapses to a cosine.
    """
    omega = params.mu * float(field.envelope.omega(t))
    return -omega * math.cos(field.carrier_omega * float(t) + float(field.phi(t)))
