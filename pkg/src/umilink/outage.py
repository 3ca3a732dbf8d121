"""Closed-form outage probability for both surface variants.

Each form is a dot product of the pattern-gain masses with a per-atom
outage kernel: a two-sided Gaussian tail difference for the two
CLT-based forms, a regularized incomplete gamma for the Gamma-matched
form.  Zero-gain atoms outage with certainty (the kernel's continuous
limit), and the out-of-model tail mass is either dropped ("paper-exact")
or counted as certain outage ("tail-as-outage", the conservative
default).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ActivePowerStats, CascadeMoments, LinkConfig
from .errors import UsageError
from .pattern import PatternDistribution
from .specialfn import q_function, regularized_lower_gamma

__all__ = [
    "TAIL_MODES",
    "OutageResult",
    "outage_passive_clt",
    "outage_passive_gamma",
    "outage_active_clt",
]

TAIL_MODES = ("paper-exact", "tail-as-outage")


@dataclass(frozen=True)
class OutageResult:
    """Outage probability with provenance."""

    probability: float
    method: str
    tail_mode: str
    atoms_used: int


def _check(dist: PatternDistribution, link: LinkConfig, tail_mode: str, variant: str):
    if link.variant != variant:
        raise UsageError(f"this outage form requires a {variant}-variant link")
    if tail_mode not in TAIL_MODES:
        raise UsageError(f"tail_mode must be one of {TAIL_MODES}, got {tail_mode!r}")
    if dist.n_side * dist.n_side != link.n_elements:
        raise UsageError(
            f"pattern distribution is for {dist.n_side**2} elements, link says {link.n_elements}"
        )


def _finish(kernel, dist, link, tail_mode, method):
    body = float(dist.masses @ kernel)
    tail = dist.tail_mass if tail_mode == "tail-as-outage" else 0.0
    prob = min(max(body + tail, 0.0), 1.0)
    return OutageResult(prob, method, tail_mode, dist.atoms)


def _threshold_roots(gains, scale):
    """sqrt(scale / gain) per atom, +inf where the gain is zero."""
    with np.errstate(divide="ignore"):
        arg = np.where(gains > 0.0, scale / np.where(gains > 0.0, gains, 1.0), np.inf)
    return np.sqrt(arg)


def outage_passive_clt(
    dist: PatternDistribution,
    moments: CascadeMoments,
    link: LinkConfig,
    tail_mode: str = "tail-as-outage",
) -> OutageResult:
    """Passive variant, Gaussian (CLT) model of the cascade sum.

    Per atom with gain g > 0 the outage kernel is
    Q((mu_v - s)/sigma_v) - Q((mu_v + s)/sigma_v) with
    s = sqrt(b1 gamma_th / (M gamma0 g)); at g = 0 the limit is 1.
    """
    _check(dist, link, tail_mode, "passive")
    scale = link.b1 * link.gamma_th / (link.m_antennas * link.gamma0)
    s = _threshold_roots(dist.gains, scale)
    sigma_v = np.sqrt(moments.sigma2_v)
    with np.errstate(invalid="ignore"):
        kernel = q_function((moments.mu_v - s) / sigma_v) - q_function(
            (moments.mu_v + s) / sigma_v
        )
    kernel = np.where(np.isinf(s), 1.0, kernel)
    return _finish(kernel, dist, link, tail_mode, "passive-clt")


def outage_passive_gamma(
    dist: PatternDistribution,
    moments: CascadeMoments,
    link: LinkConfig,
    tail_mode: str = "tail-as-outage",
) -> OutageResult:
    """Passive variant, Gamma-matched model of the cascade sum."""
    _check(dist, link, tail_mode, "passive")
    scale = link.b1 * link.gamma_th / (link.m_antennas * link.gamma0)
    s = _threshold_roots(dist.gains, scale)
    finite = ~np.isinf(s)
    kernel = np.ones_like(s)
    kernel[finite] = regularized_lower_gamma(
        moments.lambda_shape, s[finite] / moments.omega_scale
    )
    return _finish(kernel, dist, link, tail_mode, "passive-gamma")


def outage_active_clt(
    dist: PatternDistribution,
    moments: CascadeMoments,
    stats: ActivePowerStats,
    link: LinkConfig,
    tail_mode: str = "tail-as-outage",
) -> OutageResult:
    """Active variant, CLT model with the V-Z correlation correction.

    The threshold term replaces b1/gamma0 by the mean weighted power sum
    c1 mu_z0 + c2 mu_z1 + c3, and the Gaussian deviation shrinks by
    sqrt(1 - rho^2) (conditioning of V on the power sum, evaluated at the
    mean).
    """
    _check(dist, link, tail_mode, "active")
    mean_denom = stats.c1 * stats.mu_z0 + stats.c2 * stats.mu_z1 + stats.c3
    scale = link.gamma_th * mean_denom / (link.m_antennas * link.gamma0)
    s = _threshold_roots(dist.gains, scale)
    sigma_cond = np.sqrt(moments.sigma2_v) * np.sqrt(1.0 - stats.rho**2)
    with np.errstate(invalid="ignore"):
        kernel = q_function((moments.mu_v - s) / sigma_cond) - q_function(
            (moments.mu_v + s) / sigma_cond
        )
    kernel = np.where(np.isinf(s), 1.0, kernel)
    return _finish(kernel, dist, link, tail_mode, "active-clt")
