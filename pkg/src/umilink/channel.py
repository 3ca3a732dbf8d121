"""Analytic moments of the Rician cascade and active-surface statistics.

Everything here is a closed-form moment: the mean/variance of the summed
envelope products feeding the Gaussian and Gamma outage approximations,
the Gaussian statistics of the per-link power sums, and the coefficients
and correlation entering the active-surface outage form.  All quantities
are in linear units; dB conversions happen at the configuration layer.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DegenerateError, UsageError
from .geometry import LinkAngles
from .specialfn import HalfOrder, laguerre_half

__all__ = [
    "ChannelParams",
    "LinkConfig",
    "CascadeMoments",
    "ActivePowerStats",
    "rician_envelope_mean",
    "cascade_moments",
    "power_sum_stats",
    "active_coefficients",
    "correlation_rho",
    "active_power_stats",
]


@dataclass(frozen=True)
class ChannelParams:
    """Large-scale and fading parameters of the two hops (linear units)."""

    k0: float
    k1: float
    alpha0: float
    alpha1: float
    c0: float
    d0: float
    d1: float

    def __post_init__(self):
        if self.k0 < 0 or self.k1 < 0:
            raise UsageError("Rician factors must be non-negative")
        if self.c0 <= 0 or self.d0 <= 0 or self.d1 <= 0:
            raise UsageError("reference loss and distances must be positive")

    @property
    def beta0(self) -> float:
        """Feeder-hop path gain c0 * d0^-alpha0."""
        return self.c0 * self.d0**-self.alpha0

    @property
    def beta1(self) -> float:
        """Served-hop path gain c0 * d1^-alpha1."""
        return self.c0 * self.d1**-self.alpha1


@dataclass(frozen=True)
class LinkConfig:
    """Powers, noise levels, and thresholds of one link budget.

    ``sigma2_f`` and ``p_f`` exist only for the active variant; ``zeta``
    is the channel-knowledge error fraction and ``sigma2_e`` the residual
    error power it multiplies (required whenever zeta > 0).
    """

    p_t: float
    m_antennas: int
    n_elements: int
    sigma2_n: float
    gamma_th: float
    variant: str = "passive"
    zeta: float = 0.0
    sigma2_e: float | None = None
    sigma2_f: float | None = None
    p_f: float | None = None

    def __post_init__(self):
        if self.variant not in ("passive", "active"):
            raise UsageError(f"variant must be 'passive' or 'active', got {self.variant!r}")
        if min(self.p_t, self.sigma2_n, self.gamma_th) < 0:
            raise UsageError("powers and thresholds must be non-negative")
        if self.m_antennas < 1 or self.n_elements < 1:
            raise UsageError("antenna and element counts must be positive")
        if not 0.0 <= self.zeta <= 1.0:
            raise UsageError(f"zeta must lie in [0, 1], got {self.zeta}")
        if self.zeta > 0 and self.sigma2_e is None:
            raise UsageError("sigma2_e is required when zeta > 0 (no default)")
        if self.variant == "active":
            if self.sigma2_f is None or self.p_f is None:
                raise UsageError("active variant requires sigma2_f and p_f")
            if self.sigma2_f < 0 or self.p_f <= 0:
                raise UsageError("active powers must be positive")
        elif self.sigma2_f is not None or self.p_f is not None:
            raise UsageError("sigma2_f / p_f are only meaningful for the active variant")

    @property
    def b1(self) -> float:
        """Effective noise inflation from imperfect channel knowledge."""
        err = 0.0 if self.sigma2_e is None else self.p_t * self.zeta * self.sigma2_e
        return err / self.sigma2_n + 1.0

    @property
    def gamma0(self) -> float:
        """Transmit SNR p_t / sigma2_n."""
        return self.p_t / self.sigma2_n


@dataclass(frozen=True)
class CascadeMoments:
    """Moments of the summed envelope product V and its Gamma match."""

    mu_v: float
    sigma2_v: float
    lambda_shape: float
    omega_scale: float


@dataclass(frozen=True)
class ActivePowerStats:
    """Everything the active-surface outage form needs beyond V's moments."""

    mu_z0: float
    sigma2_z0: float
    mu_z1: float
    sigma2_z1: float
    c1: float
    c2: float
    c3: float
    rho: float
    mu_vz: float
    a0_term: float
    a1_term: float


def rician_envelope_mean(k_linear: float) -> float:
    """Mean of a unit-power Rician envelope with linear factor K.

    E|h| = sqrt(pi / (4 (K + 1))) L_{1/2}(-K); the second moment is 1.
    """
    if k_linear < 0:
        raise UsageError("Rician factor must be non-negative")
    return math.sqrt(math.pi / (4.0 * (k_linear + 1.0))) * laguerre_half(
        HalfOrder.ONE_HALF, -k_linear
    )


def cascade_moments(params: ChannelParams, zeta: float, n_elements: int) -> CascadeMoments:
    """Mean and variance of V = sqrt(beta0 beta1 (1-zeta)) * sum_n |H_n||h_n|.

    Both scale linearly in the element count.  The Gamma match uses shape
    mu^2/sigma^2 and scale sigma^2/mu; at zeta = 1 the cascade carries no
    signal and the Gamma parameters are undefined (flagged with NaN).
    """
    if not 0.0 <= zeta <= 1.0:
        raise UsageError(f"zeta must lie in [0, 1], got {zeta}")
    e_h0 = rician_envelope_mean(params.k0)
    e_h1 = rician_envelope_mean(params.k1)
    scale2 = params.beta0 * params.beta1 * (1.0 - zeta)
    mu_v = math.sqrt(scale2) * n_elements * e_h0 * e_h1
    sigma2_v = scale2 * n_elements * (1.0 - (e_h0 * e_h1) ** 2)
    if sigma2_v == 0.0:
        warnings.warn("degenerate cascade (zeta = 1): Gamma parameters undefined", RuntimeWarning)
        return CascadeMoments(mu_v, sigma2_v, float("nan"), float("nan"))
    return CascadeMoments(mu_v, sigma2_v, mu_v**2 / sigma2_v, sigma2_v / mu_v)


def _power_sum_var_factor(k: float) -> float:
    # var(|h|^2) for a unit-power Rician envelope
    return (k * k + 4.0 * k + 2.0) / (k + 1.0) ** 2 - 1.0


def power_sum_stats(params: ChannelParams, n_elements: int):
    """Gaussian statistics of the two per-link power sums.

    Z0 = beta1 * sum |h_n|^2 over the served hop, Z1 = beta0 * sum |H_n|^2
    over the feeder hop; means are N*beta_k and variances
    N * beta_k^2 * ((K^2 + 4K + 2)/(K+1)^2 - 1).

    Returns (mu_z0, sigma2_z0, mu_z1, sigma2_z1).
    """
    n = float(n_elements)
    mu_z0 = n * params.beta1
    sigma2_z0 = n * params.beta1**2 * _power_sum_var_factor(params.k1)
    mu_z1 = n * params.beta0
    sigma2_z1 = n * params.beta0**2 * _power_sum_var_factor(params.k0)
    return mu_z0, sigma2_z0, mu_z1, sigma2_z1


def active_coefficients(
    link: LinkConfig, nominal_t: LinkAngles, nominal_r: LinkAngles, n_elements: int
):
    """Denominator constants (c1, c2, c3) of the active-surface SNR.

    c1 scales the served-hop power sum by the amplifier-noise ratio, c2
    the feeder-hop power sum by the power budget ratio, and c3 is the
    constant amplifier-noise floor; c2 and c3 carry the imperfect-CSI
    inflation b1.  Element gains enter through the frozen cos^3 values.
    """
    if link.variant != "active":
        raise UsageError("active coefficients require an active-variant link")
    cos3_t = math.cos(nominal_t.theta) ** 3
    cos3_r = math.cos(nominal_r.theta) ** 3
    c1 = link.sigma2_f / link.sigma2_n * cos3_r
    c2 = link.p_t / link.p_f * link.b1 * cos3_t
    c3 = n_elements * link.sigma2_f / link.p_f * link.b1
    return c1, c2, c3


def _cross_power_term(n: int, k_cubed: float, k_other: float) -> float:
    """E{ sum_n |H_n||h_n| * sum_m |g_m|^2 } for unit-power envelopes.

    ``k_cubed`` is the factor of the link whose envelope appears cubed in
    the diagonal term; the off-diagonal term is symmetric in both factors.
    """
    l32 = laguerre_half(HalfOrder.THREE_HALVES, -k_cubed)
    l12_other = laguerre_half(HalfOrder.ONE_HALF, -k_other)
    l12_0 = laguerre_half(HalfOrder.ONE_HALF, -k_cubed)
    diag = (
        3.0 * math.pi * n / (8.0 * (1.0 + k_cubed) ** 1.5 * (1.0 + k_other) ** 0.5)
    ) * l32 * l12_other
    off = (
        math.pi * n * (n - 1.0) / (4.0 * math.sqrt((1.0 + k_cubed) * (1.0 + k_other)))
    ) * l12_0 * l12_other
    return diag + off


def correlation_rho(params: ChannelParams, link: LinkConfig, n_elements: int, c1: float, c2: float):
    """Correlation between the cascade sum V and the weighted power sum.

    Returns (rho, mu_vz, a0_term, a1_term) where mu_vz = E{V (c1 Z0 + c2 Z1)}
    and the a-terms are the two cross-moment building blocks.
    """
    if link.variant != "active":
        raise UsageError("the V-Z correlation only exists for the active variant")
    n = n_elements
    # a1_term pairs with Z0 (served-hop envelopes cubed), a0_term with Z1.
    a1_term = _cross_power_term(n, params.k1, params.k0)
    a0_term = _cross_power_term(n, params.k0, params.k1)
    scale = math.sqrt(params.beta0 * params.beta1 * (1.0 - link.zeta))
    mu_vz = scale * (c1 * params.beta1 * a1_term + c2 * params.beta0 * a0_term)
    moments = cascade_moments(params, link.zeta, n)
    mu_z0, s2_z0, mu_z1, s2_z1 = power_sum_stats(params, n)
    sigma_z = math.sqrt(c1 * c1 * s2_z0 + c2 * c2 * s2_z1)
    sigma_v = math.sqrt(moments.sigma2_v)
    if sigma_v == 0.0 or sigma_z == 0.0:
        raise DegenerateError("V-Z correlation undefined: a deviation is zero")
    rho = (mu_vz - moments.mu_v * (c1 * mu_z0 + c2 * mu_z1)) / (sigma_v * sigma_z)
    return rho, mu_vz, a0_term, a1_term


def active_power_stats(
    params: ChannelParams,
    link: LinkConfig,
    nominal_t: LinkAngles,
    nominal_r: LinkAngles,
    n_elements: int | None = None,
) -> ActivePowerStats:
    """Bundle every active-surface statistic for the outage evaluation."""
    n = link.n_elements if n_elements is None else n_elements
    c1, c2, c3 = active_coefficients(link, nominal_t, nominal_r, n)
    mu_z0, s2_z0, mu_z1, s2_z1 = power_sum_stats(params, n)
    rho, mu_vz, a0_term, a1_term = correlation_rho(params, link, n, c1, c2)
    return ActivePowerStats(
        mu_z0=mu_z0,
        sigma2_z0=s2_z0,
        mu_z1=mu_z1,
        sigma2_z1=s2_z1,
        c1=c1,
        c2=c2,
        c3=c3,
        rho=rho,
        mu_vz=mu_vz,
        a0_term=a0_term,
        a1_term=a1_term,
    )
