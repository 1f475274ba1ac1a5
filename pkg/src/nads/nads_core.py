"""Instantaneous nonadiabatic dressed-state quantities along a time grid.

All quantities are closed-form functions of the envelope, phase and damping
at one instant, except the time derivative of the nonadiabatic Rabi
frequency, which is taken by second-order finite differences along the grid
after the branch-continuous square root has been evaluated (the analytic
chain rule would need third derivatives of envelope and phase).

Complex square roots are tracked for continuity: the principal branch is
used at the first grid point (times the detuning sign where the definition
says so) and thereafter the root closer to the previous sample is kept.
Every selection is recorded so a jump can be audited.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BranchAmbiguity,
    DegenerateRabi,
    EnvelopeUnderflow,
    NumericalError,
)
from .field_model import (
    EnvelopeSample,
    FieldModel,
    SystemParams,
    OMEGA_FLOOR,
)

__all__ = [
    "NadsSnapshot",
    "SnapshotSeries",
    "detuning",
    "nonadiabatic_detuning",
    "nonadiabatic_rabi",
    "lambdas",
    "mixing_functions",
    "nads_frequencies",
    "snapshot_series",
]

#: |Omega-tilde| below which the Lambda-tilde division is refused.
RABI_DEGENERACY_FLOOR = 1e-12

#: Relative tolerance inside which the two candidate roots count as
#: equidistant from the previous sample (branch ambiguity).
BRANCH_AMBIGUITY_RTOL = 1e-14


@dataclass(frozen=True)
class NadsSnapshot:
    """Every instantaneous dressed-state quantity at one grid point."""

    t: float
    omega: float                 # Rabi envelope Omega(t)
    delta: float                 # static detuning
    delta_tilde: complex         # nonadiabatic detuning
    d_delta_tilde: complex       # its time derivative
    omega_tilde: complex         # nonadiabatic Rabi frequency
    d_omega_tilde: complex       # grid finite-difference derivative
    lambda1: complex
    lambda2: complex
    lambda_t1: complex
    lambda_t2: complex
    cos_half: complex            # complex mixing function COS(theta/2)
    sin_half: complex            # complex mixing function SIN(theta/2)
    omega_G: complex             # nonadiabatic frequency of the ground NADS
    omega_E: complex             # nonadiabatic frequency of the excited NADS


@dataclass(eq=False)
class SnapshotSeries:
    """Branch-continuous dressed-state quantities on a uniform time grid.

    Arrays are read-only once constructed; treat instances as immutable.
    ``branch_log`` maps each tracked square root to an int8 array of +1
    (principal branch kept) / -1 (negated principal chosen for continuity).
    """

    params: SystemParams
    field: FieldModel
    grid: np.ndarray
    sign_delta: int
    delta: float
    omega: np.ndarray
    log_deriv: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    delta_tilde: np.ndarray
    d_delta_tilde: np.ndarray
    omega_tilde: np.ndarray
    d_omega_tilde: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    lambda_t1: np.ndarray
    lambda_t2: np.ndarray
    cos_half: np.ndarray
    sin_half: np.ndarray
    omega_G: np.ndarray
    omega_E: np.ndarray
    branch_log: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.grid)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def snapshot(self, k: int) -> NadsSnapshot:
        """Scalar view of grid point ``k``."""
        return NadsSnapshot(
            t=float(self.grid[k]),
            omega=float(self.omega[k]),
            delta=self.delta,
            delta_tilde=complex(self.delta_tilde[k]),
            d_delta_tilde=complex(self.d_delta_tilde[k]),
            omega_tilde=complex(self.omega_tilde[k]),
            d_omega_tilde=complex(self.d_omega_tilde[k]),
            lambda1=complex(self.lambda1[k]),
            lambda2=complex(self.lambda2[k]),
            lambda_t1=complex(self.lambda_t1[k]),
            lambda_t2=complex(self.lambda_t2[k]),
            cos_half=complex(self.cos_half[k]),
            sin_half=complex(self.sin_half[k]),
            omega_G=complex(self.omega_G[k]),
            omega_E=complex(self.omega_E[k]),
        )


def detuning(params: SystemParams, field: FieldModel) -> float:
    """Static detuning: omega_e - omega_g - carrier."""
    return params.omega_e - params.omega_g - field.carrier_omega


def nonadiabatic_detuning(
    params: SystemParams,
    env: EnvelopeSample,
    phase: tuple[float, float, float],
    delta: float,
) -> tuple[complex, complex]:
    """Nonadiabatic detuning and its time derivative.

    delta_tilde = delta - i(gamma_g + gamma_e)/2 - (dphi - i Omega^-1 dOmega),
    with the damping entering as the sum of both rates. ``delta`` is the
    static detuning from :func:`detuning` (the carrier is not recoverable
    from the sample alone). The derivative uses the analytic second
    log-derivative of the envelope.
    """
    _, dphi, d2phi = phase
    delta_tilde = (
        delta
        - 1j * params.gamma_sum_half
        - (dphi - 1j * env.log_deriv)
    )
    d_delta_tilde = -d2phi + 1j * env.dlog_deriv
    return delta_tilde, d_delta_tilde


def _nearest_root(principal: complex, prev: complex, context: str) -> tuple[complex, int]:
    """Pick +-principal, whichever is closer to ``prev``; flag ties."""
    d_plus = abs(principal - prev)
    d_minus = abs(-principal - prev)
    if abs(d_plus - d_minus) <= BRANCH_AMBIGUITY_RTOL * max(d_plus, d_minus):
        raise BranchAmbiguity(
            f"{context}: both roots +-{principal:.6e} equidistant from "
            f"previous sample {prev:.6e}"
        )
    return (principal, 1) if d_plus < d_minus else (-principal, -1)


def nonadiabatic_rabi(
    omega: float,
    delta_tilde: complex,
    d_delta_tilde: complex,
    sign_delta: int,
    prev: Optional[complex] = None,
) -> complex:
    """Nonadiabatic Rabi frequency sgn(delta) sqrt(Omega^2 + delta_tilde^2 - 2i d_delta_tilde).

    Without ``prev`` the principal square root (times ``sign_delta``) is
    returned; with ``prev`` the root closer to it is kept so a time series
    stays continuous across the principal branch cut.
    """
    radicand = omega * omega + delta_tilde * delta_tilde - 2j * d_delta_tilde
    principal = cmath.sqrt(radicand)
    if prev is None:
        return sign_delta * principal
    root, _ = _nearest_root(principal, prev, "nonadiabatic Rabi frequency")
    return root


def lambdas(
    delta_tilde: complex,
    omega_tilde: complex,
    d_omega_tilde: complex,
) -> tuple[complex, complex, complex, complex]:
    """Lambda_1,2 = (delta_tilde +- omega_tilde)/2 and their tilde generalizations.

    Lambda'_j = Lambda_j - i (2 omega_tilde)^-1 d_omega_tilde, so that
    Lambda'_1 - Lambda'_2 = omega_tilde exactly.
    """
    if abs(omega_tilde) < RABI_DEGENERACY_FLOOR:
        raise DegenerateRabi(
            f"|omega_tilde| = {abs(omega_tilde):.3e} below {RABI_DEGENERACY_FLOOR:.0e}"
        )
    lam1 = 0.5 * (delta_tilde + omega_tilde)
    lam2 = 0.5 * (delta_tilde - omega_tilde)
    shift = -1j * d_omega_tilde / (2.0 * omega_tilde)
    return lam1, lam2, lam1 + shift, lam2 + shift


def mixing_functions(
    lambda_t1: complex,
    lambda_t2: complex,
    omega_tilde: complex,
    sign_delta: int,
    prev: Optional[tuple[complex, complex]] = None,
) -> tuple[complex, complex]:
    """Complex mixing functions COS(theta/2) = sqrt(Lambda'_1/omega_tilde) and
    SIN(theta/2) = sgn(delta) sqrt(-Lambda'_2/omega_tilde).

    Branch handling mirrors :func:`nonadiabatic_rabi`: principal roots (with
    the detuning sign on SIN) at the first point, nearest-root continuation
    against ``prev = (cos_half, sin_half)`` afterwards. Their squares sum to
    one whenever Lambda'_1 - Lambda'_2 = omega_tilde.
    """
    if abs(omega_tilde) < RABI_DEGENERACY_FLOOR:
        raise DegenerateRabi(
            f"|omega_tilde| = {abs(omega_tilde):.3e} below {RABI_DEGENERACY_FLOOR:.0e}"
        )
    cos_p = cmath.sqrt(lambda_t1 / omega_tilde)
    sin_p = cmath.sqrt(-lambda_t2 / omega_tilde)
    if prev is None:
        return cos_p, sign_delta * sin_p
    cos_half, _ = _nearest_root(cos_p, prev[0], "COS(theta/2)")
    sin_half, _ = _nearest_root(sin_p, prev[1], "SIN(theta/2)")
    return cos_half, sin_half


def nads_frequencies(
    params: SystemParams,
    lambda2: complex,
    env: EnvelopeSample,
    phase: tuple[float, float, float],
) -> tuple[complex, complex]:
    """Nonadiabatic frequencies of the ground and excited dressed states.

    omega'_G = omega_g + Lambda_2;
    omega'_E = omega_e - Lambda_2 - i(gamma_g+gamma_e)/2 - (dphi - i Omega^-1 dOmega).
    The asymmetry (all nonadiabatic terms on the excited side) is deliberate.
    """
    _, dphi, _ = phase
    omega_G = params.omega_g + lambda2
    omega_E = (
        params.omega_e
        - lambda2
        - 1j * params.gamma_sum_half
        - (dphi - 1j * env.log_deriv)
    )
    return omega_G, omega_E


def _central_diff(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order derivative on a uniform grid, one-sided at the ends.

    A two-point grid degrades to the single first-order difference, the
    best available estimate there.
    """
    out = np.empty_like(values)
    if len(values) == 2:
        out[:] = (values[1] - values[0]) / h
        return out
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
    out[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return out


def _attach_index(exc: NumericalError, k: int) -> NumericalError:
    return type(exc)(str(exc), grid_index=k)


def snapshot_series(
    params: SystemParams,
    field: FieldModel,
    grid: np.ndarray,
    floor: float = OMEGA_FLOOR,
) -> SnapshotSeries:
    """Evaluate every dressed-state quantity on a uniform grid of >= 2 points.

    The scan is sequential by construction (branch continuity is an
    order-dependent decision); distinct series are independent.

    Raises
    ------
    ValueError
        If the grid is not uniform or too short.
    EnvelopeUnderflow, BranchAmbiguity, DegenerateRabi
        Propagated from the per-point operations with the offending grid
        index attached.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid must be one-dimensional with at least 2 points")
    steps = np.diff(grid)
    h = float(steps[0])
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise ValueError("grid must be uniformly increasing")

    omega = params.mu * field.envelope.omega(grid)
    if np.any(omega < floor):
        k = int(np.argmax(omega < floor))
        raise EnvelopeUnderflow(
            f"Omega({grid[k]}) = {omega[k]:.3e} below floor {floor:.3e}",
            grid_index=k,
        )
    log_deriv = field.envelope.log_deriv(grid)
    dlog_deriv = field.envelope.dlog_deriv(grid)
    phi = field.phi(grid)
    dphi = field.dphi(grid)
    d2phi = field.d2phi(grid)

    delta = detuning(params, field)
    sign_delta = 1 if delta >= 0.0 else -1

    delta_tilde = (
        delta
        - 1j * params.gamma_sum_half
        - (dphi - 1j * log_deriv)
    ).astype(complex)
    d_delta_tilde = (-d2phi + 1j * dlog_deriv).astype(complex)

    n = len(grid)
    omega_tilde = np.empty(n, dtype=complex)
    branch_rabi = np.ones(n, dtype=np.int8)
    prev = None
    for k in range(n):
        try:
            omega_tilde[k] = nonadiabatic_rabi(
                float(omega[k]), complex(delta_tilde[k]), complex(d_delta_tilde[k]),
                sign_delta, prev,
            )
        except NumericalError as exc:
            raise _attach_index(exc, k) from exc
        principal = cmath.sqrt(
            float(omega[k]) ** 2 + complex(delta_tilde[k]) ** 2
            - 2j * complex(d_delta_tilde[k])
        )
        branch_rabi[k] = 1 if abs(omega_tilde[k] - principal) <= abs(omega_tilde[k] + principal) else -1
        prev = complex(omega_tilde[k])

    d_omega_tilde = _central_diff(omega_tilde, h)

    if np.any(np.abs(omega_tilde) < RABI_DEGENERACY_FLOOR):
        k = int(np.argmax(np.abs(omega_tilde) < RABI_DEGENERACY_FLOOR))
        raise DegenerateRabi(
            f"|omega_tilde| = {abs(omega_tilde[k]):.3e} below "
            f"{RABI_DEGENERACY_FLOOR:.0e}", grid_index=k,
        )
    lam1 = 0.5 * (delta_tilde + omega_tilde)
    lam2 = 0.5 * (delta_tilde - omega_tilde)
    shift = -1j * d_omega_tilde / (2.0 * omega_tilde)
    lam_t1 = lam1 + shift
    lam_t2 = lam2 + shift

    cos_half = np.empty(n, dtype=complex)
    sin_half = np.empty(n, dtype=complex)
    branch_cos = np.ones(n, dtype=np.int8)
    branch_sin = np.ones(n, dtype=np.int8)
    prev_pair = None
    for k in range(n):
        try:
            c, s = mixing_functions(
                complex(lam_t1[k]), complex(lam_t2[k]), complex(omega_tilde[k]),
                sign_delta, prev_pair,
            )
        except NumericalError as exc:
            raise _attach_index(exc, k) from exc
        cos_p = cmath.sqrt(complex(lam_t1[k]) / complex(omega_tilde[k]))
        sin_p = cmath.sqrt(-complex(lam_t2[k]) / complex(omega_tilde[k]))
        branch_cos[k] = 1 if abs(c - cos_p) <= abs(c + cos_p) else -1
        branch_sin[k] = 1 if abs(s - sin_p) <= abs(s + sin_p) else -1
        cos_half[k] = c
        sin_half[k] = s
        prev_pair = (c, s)

    omega_G = params.omega_g + lam2
    omega_E = (
        params.omega_e
        - lam2
        - 1j * params.gamma_sum_half
        - (dphi - 1j * log_deriv)
    )

    series = SnapshotSeries(
        params=params,
        field=field,
        grid=grid,
        sign_delta=sign_delta,
        delta=delta,
        omega=np.asarray(omega, dtype=float),
        log_deriv=np.asarray(log_deriv, dtype=float),
        phi=np.asarray(phi, dtype=float),
        dphi=np.asarray(dphi, dtype=float),
        delta_tilde=delta_tilde,
        d_delta_tilde=d_delta_tilde,
        omega_tilde=omega_tilde,
        d_omega_tilde=d_omega_tilde,
        lambda1=lam1,
        lambda2=lam2,
        lambda_t1=lam_t1,
        lambda_t2=lam_t2,
        cos_half=cos_half,
        sin_half=sin_half,
        omega_G=omega_G,
        omega_E=omega_E,
        branch_log={
            "omega_tilde": branch_rabi,
            "cos_half": branch_cos,
            "sin_half": branch_sin,
        },
    )
    for arr in (
        series.grid, series.omega, series.log_deriv, series.phi, series.dphi,
        series.delta_tilde, series.d_delta_tilde, series.omega_tilde,
        series.d_omega_tilde, series.lambda1, series.lambda2, series.lambda_t1,
        series.lambda_t2, series.cos_half, series.sin_half, series.omega_G,
        series.omega_E, *series.branch_log.values(),
    ):
        arr.flags.writeable = False
    return series
