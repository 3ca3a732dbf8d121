"""Gaussian hover-fluctuation model and linearized error propagation.

The UAV attitude jitters by independent Gaussian angles along the two
tilt axes.  First-order propagation turns those into a jointly Gaussian
4-vector of elevation/azimuth errors for the two links, and from there
into the two pattern-shift variables that drive the array factor.  The
Jacobians below are the exact partial derivatives of the angle map; the
azimuth derivative with respect to the cross axis carries a plus sign
(the antisymmetric form is what finite differences confirm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NadirError
from .geometry import LinkAngles

__all__ = [
    "FluctuationModel",
    "AngleJacobian",
    "AngleErrorStats",
    "ShiftStats",
    "angle_jacobian",
    "angle_error_stats",
    "shift_stats",
    "sample_fluctuation",
    "stream_rng",
]


@dataclass(frozen=True)
class FluctuationModel:
    """Means and standard deviations (radians) of the two tilt angles."""

    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 0.0
    sigma_y: float = 0.0

    def __post_init__(self):
        for v in (self.mu_x, self.mu_y, self.sigma_x, self.sigma_y):
            if not math.isfinite(v):
                raise ValueError(f"fluctuation parameters must be finite, got {self!r}")
        if self.sigma_x < 0 or self.sigma_y < 0:
            raise ValueError("standard deviations must be non-negative")

    @property
    def is_still(self) -> bool:
        return self.mu_x == self.mu_y == 0.0 and self.sigma_x == self.sigma_y == 0.0

    def scaled(self, factor: float) -> "FluctuationModel":
        """Same means, deviations multiplied by ``factor``."""
        return FluctuationModel(self.mu_x, self.mu_y, factor * self.sigma_x, factor * self.sigma_y)


@dataclass(frozen=True)
class AngleJacobian:
    """Partial derivatives of (theta, phi) w.r.t. the two tilt angles."""

    a_theta_x: float
    a_theta_y: float
    a_phi_x: float
    a_phi_y: float

    def as_matrix(self) -> np.ndarray:
        """Rows (theta, phi), columns (eps_x, eps_y)."""
        return np.array(
            [[self.a_theta_x, self.a_theta_y], [self.a_phi_x, self.a_phi_y]], dtype=float
        )


@dataclass(frozen=True)
class AngleErrorStats:
    """Gaussian parameters of the elevation/azimuth errors for one link."""

    mu_eps_theta: float
    sigma2_eps_theta: float
    mu_eps_phi: float
    sigma2_eps_phi: float


@dataclass(frozen=True, eq=False)
class ShiftStats:
    """Joint Gaussian statistics of the two pattern-shift variables.

    ``cov_matrix`` is the 4x4 covariance of the error vector
    (eps_theta_t, eps_phi_t, eps_theta_r, eps_phi_r); ``a_x``/``a_y`` are
    the trigonometric coefficient vectors of the linearized shifts;
    mu/sigma are the resulting scalar Gaussian parameters per axis.
    """

    mu_zx: float
    mu_zy: float
    sigma_zx: float
    sigma_zy: float
    cov_matrix: np.ndarray
    a_x: np.ndarray
    a_y: np.ndarray


def angle_jacobian(angles: LinkAngles) -> AngleJacobian:
    """First-order sensitivities of elevation and azimuth to axis tilts.

    With a = tan(theta_x), b = tan(theta_y), r2 = a^2 + b^2:

        d theta / d eps_x = (1 + a^2) a / (sqrt(r2) (1 + r2))
        d phi   / d eps_x = -(1 + a^2) b / r2
        d phi   / d eps_y = +(1 + b^2) a / r2

    Boresight (a = b = 0) is rejected: the map is not differentiable
    there and the exact-sampling path must be used instead.
    """
    a = math.tan(angles.theta_x)
    b = math.tan(angles.theta_y)
    r2 = a * a + b * b
    if r2 == 0.0:
        raise NadirError(
            "angle statistics are singular at boresight; use exact sampling there"
        )
    r = math.sqrt(r2)
    s = 1.0 + r2
    return AngleJacobian(
        a_theta_x=(1.0 + a * a) * a / (r * s),
        a_theta_y=(1.0 + b * b) * b / (r * s),
        a_phi_x=-(1.0 + a * a) * b / r2,
        a_phi_y=(1.0 + b * b) * a / r2,
    )


def angle_error_stats(jac: AngleJacobian, model: FluctuationModel) -> AngleErrorStats:
    """Gaussian parameters of the angle errors for one link."""
    return AngleErrorStats(
        mu_eps_theta=jac.a_theta_x * model.mu_x + jac.a_theta_y * model.mu_y,
        sigma2_eps_theta=jac.a_theta_x**2 * model.sigma_x**2 + jac.a_theta_y**2 * model.sigma_y**2,
        mu_eps_phi=jac.a_phi_x * model.mu_x + jac.a_phi_y * model.mu_y,
        sigma2_eps_phi=jac.a_phi_x**2 * model.sigma_x**2 + jac.a_phi_y**2 * model.sigma_y**2,
    )


def shift_stats(
    t_jac: AngleJacobian,
    r_jac: AngleJacobian,
    t_angles: LinkAngles,
    r_angles: LinkAngles,
    model: FluctuationModel,
) -> ShiftStats:
    """Joint Gaussian statistics of the linearized pattern shifts.

    Builds the stacked 4x2 Jacobian J of the error vector with respect to
    (eps_x, eps_y); the covariance is J diag(sigma_x^2, sigma_y^2) J^T,
    which also supplies every cross-link covariance entry.  The shift
    means and variances are the usual linear-form images mu_z = a.mu and
    sigma_z^2 = a.Sigma.a.
    """
    jac = np.vstack([t_jac.as_matrix(), r_jac.as_matrix()])  # rows: th_t, ph_t, th_r, ph_r
    mu_eps = jac @ np.array([model.mu_x, model.mu_y])
    cov = jac @ np.diag([model.sigma_x**2, model.sigma_y**2]) @ jac.T

    st, ct = math.sin(t_angles.theta), math.cos(t_angles.theta)
    sr, cr = math.sin(r_angles.theta), math.cos(r_angles.theta)
    spt, cpt = math.sin(t_angles.phi), math.cos(t_angles.phi)
    spr, cpr = math.sin(r_angles.phi), math.cos(r_angles.phi)
    a_x = np.array([ct * cpt, -st * spt, cr * cpr, -sr * spr])
    a_y = np.array([ct * spt, st * cpt, cr * spr, sr * cpr])

    return ShiftStats(
        mu_zx=float(a_x @ mu_eps),
        mu_zy=float(a_y @ mu_eps),
        sigma_zx=float(math.sqrt(a_x @ cov @ a_x)),
        sigma_zy=float(math.sqrt(a_y @ cov @ a_y)),
        cov_matrix=cov,
        a_x=a_x,
        a_y=a_y,
    )


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for a (seed, stream) pair.

    Philox is counter-based, so a (seed, stream, draw-counter) triple
    fully determines every variate; distinct streams are independent and
    may be consumed concurrently.  This is what makes sharded Monte Carlo
    runs reproducible regardless of how trials are split across workers.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_fluctuation(model: FluctuationModel, rng: np.random.Generator, size=None):
    """Draw tilt angles (eps_x, eps_y) from the model.

    Draws standard normals and scales them, so the same generator state
    yields comparable sample paths across different sigma settings.
    """
    eps_x = model.mu_x + model.sigma_x * rng.standard_normal(size)
    eps_y = model.mu_y + model.sigma_y * rng.standard_normal(size)
    return eps_x, eps_y
