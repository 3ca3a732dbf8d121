"""Radiation pattern of the square array and its discrete distribution.

The normalized array factor is a product of two squared Dirichlet-kernel
ratios in the pattern-shift variables.  For statistics, each axis factor
is quantized into bands of equal shift width ("sectors"), the shift being
Gaussian; the joint gain then takes finitely many values and outage sums
reduce to dot products over (lobes * sectors)^2 atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UsageError
from .fluctuation import ShiftStats
from .geometry import LinkAngles
from .specialfn import q_function

__all__ = [
    "ArrayConfig",
    "PatternDistribution",
    "exact_array_factor",
    "shifts_from_angles",
    "element_gain_exact",
    "element_gain_nominal",
    "sector_gain",
    "sector_mass",
    "pattern_distribution",
    "pattern_cdf",
]

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class ArrayConfig:
    """Square array with n_side^2 elements at half-wavelength spacing.

    ``sectors`` is the number of quantization bands per lobe and
    ``lobes`` is 1 (main lobe only) or 2 (main plus first side lobe).
    Element spacing is fixed at half a wavelength, which removes the
    wavelength from the array factor entirely.
    """

    n_side: int
    sectors: int = 15
    lobes: int = 1

    def __post_init__(self):
        if self.n_side < 1:
            raise UsageError(f"n_side must be a positive integer, got {self.n_side}")
        if self.sectors < 2:
            raise UsageError(f"sectors must be at least 2, got {self.sectors}")
        if self.lobes not in (1, 2):
            raise UsageError(f"lobes must be 1 or 2, got {self.lobes}")

    @property
    def n_elements(self) -> int:
        return self.n_side * self.n_side

    @classmethod
    def from_elements(cls, n_elements: int, sectors: int = 15, lobes: int = 1) -> "ArrayConfig":
        n_side = math.isqrt(int(n_elements))
        if n_side * n_side != n_elements:
            raise UsageError(f"{n_elements} is not a perfect square")
        return cls(n_side=n_side, sectors=sectors, lobes=lobes)


def exact_array_factor(z_x, z_y, n_side: int):
    """Normalized array power gain at pattern shifts (z_x, z_y) in [0, 1].

    Product over both axes of |sin(n pi z / 2) / (n sin(pi z / 2))|^2,
    with the removable singularities (z an even integer) evaluated by
    continuity to 1.
    """

    def axis(z):
        z = np.asarray(z, dtype=float)
        num = np.sin(n_side * math.pi * z / 2.0)
        den = n_side * np.sin(math.pi * z / 2.0)
        peak = den == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(peak, 1.0, num / np.where(peak, 1.0, den))
        return ratio * ratio

    out = axis(z_x) * axis(z_y)
    if np.isscalar(z_x) and np.isscalar(z_y):
        return float(out)
    return out


def shifts_from_angles(nominal_t: LinkAngles, nominal_r: LinkAngles, fluct_t, fluct_r):
    """Exact pattern shifts (z_x, z_y) for given fluctuated angles.

    ``fluct_t`` / ``fluct_r`` are (theta_tilde, phi_tilde) pairs, scalars
    or arrays.  At the nominal angles both shifts are exactly zero: the
    surface's phase profile is steered at the nominal directions, so the
    nominal direction cosines are subtracted.
    """
    tt, pt = fluct_t
    tr, pr = fluct_r
    off_x = -(
        math.sin(nominal_t.theta) * math.cos(nominal_t.phi)
        + math.sin(nominal_r.theta) * math.cos(nominal_r.phi)
    )
    off_y = -(
        math.sin(nominal_t.theta) * math.sin(nominal_t.phi)
        + math.sin(nominal_r.theta) * math.sin(nominal_r.phi)
    )
    z_x = np.sin(tt) * np.cos(pt) + np.sin(tr) * np.cos(pr) + off_x
    z_y = np.sin(tt) * np.sin(pt) + np.sin(tr) * np.sin(pr) + off_y
    if np.isscalar(tt) or (isinstance(tt, float)):
        return float(z_x), float(z_y)
    return z_x, z_y


def element_gain_exact(theta_tilde_t, theta_tilde_r):
    """Product of the two single-element patterns, cos^3 per side.

    Zero outside the forward half-space (elevation beyond pi/2).
    """
    tt = np.asarray(theta_tilde_t, dtype=float)
    tr = np.asarray(theta_tilde_r, dtype=float)
    gt = np.where((tt >= 0) & (tt <= _HALF_PI), np.cos(tt) ** 3, 0.0)
    gr = np.where((tr >= 0) & (tr <= _HALF_PI), np.cos(tr) ** 3, 0.0)
    out = gt * gr
    if np.isscalar(theta_tilde_t) and np.isscalar(theta_tilde_r):
        return float(out)
    return out


def element_gain_nominal(t_angles: LinkAngles, r_angles: LinkAngles) -> float:
    """Element gain frozen at the nominal pointing angles."""
    return float(element_gain_exact(t_angles.theta, r_angles.theta))


def sector_gain(i, sectors: int):
    """Representative axis gain of sector ``i`` (shift-band inner edge).

    Sector 0 is the plateau around the peak and takes the limit value 1;
    sector i >= 1 takes D^2 (1 - cos(2 pi i / D)) / (2 pi^2 i^2), the
    smoothed lobe envelope at the band's inner edge.  Gains vanish when
    i is a positive multiple of D (the nulls between lobes).
    """
    idx = np.asarray(i, dtype=float)
    if np.any(idx < 0):
        raise DomainError("sector index must be non-negative")
    d = float(sectors)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = d * d * (1.0 - np.cos(2.0 * math.pi * idx / d)) / (2.0 * math.pi**2 * idx**2)
    out = np.where(idx == 0, 1.0, g)
    if np.isscalar(i):
        return float(out)
    return out


def _band_center_gain(i, sectors: int):
    # Smoothed lobe envelope at the band midpoint; placing each atom at the
    # center of its band halves the quantization bias of the staircase CDF.
    idx = np.asarray(i, dtype=float) + 0.5
    d = float(sectors)
    return d * d * (1.0 - np.cos(2.0 * math.pi * idx / d)) / (2.0 * math.pi**2 * idx**2)


def sector_mass(i, sectors: int, n_side: int, mu_z: float, sigma_z: float):
    """Probability that |Z| falls in sector ``i`` for Z ~ N(mu_z, sigma_z^2).

    Sector i covers 2i/(D n) < |Z| <= 2(i+1)/(D n) (sector 0 includes the
    origin).  For sigma_z > 0 this is the four-term Q-function band
    probability; sigma_z = 0 degenerates to an indicator on |mu_z|.
    """
    idx = np.asarray(i, dtype=float)
    if np.any(idx < 0):
        raise DomainError("sector index must be non-negative")
    dn = float(sectors * n_side)
    lo = 2.0 * idx / dn
    hi = 2.0 * (idx + 1.0) / dn
    if sigma_z < 0:
        raise DomainError("sigma_z must be non-negative")
    if sigma_z == 0.0:
        am = abs(mu_z)
        out = np.where((am <= hi) & ((am > lo) | (idx == 0)), 1.0, 0.0)
    else:
        out = (
            q_function((lo - mu_z) / sigma_z)
            - q_function((hi + mu_z) / sigma_z)
            + q_function((lo + mu_z) / sigma_z)
            - q_function((hi - mu_z) / sigma_z)
        )
        out = np.clip(out, 0.0, 1.0)
    if np.isscalar(i):
        return float(out)
    return out


@dataclass(frozen=True, eq=False)
class PatternDistribution:
    """Discrete distribution of the total pattern gain.

    ``gains`` and ``masses`` are parallel flat vectors of the
    (lobes*sectors)^2 joint atoms in row-major axis order; ``tail_mass``
    is the probability of leaving every modeled lobe, attributed to gain
    zero.  ``element_gain`` is the frozen element-pattern factor scaling
    all gains.
    """

    gains: np.ndarray
    masses: np.ndarray
    tail_mass: float
    element_gain: float
    n_side: int
    sectors: int
    lobes: int
    _order: np.ndarray = field(init=False, repr=False)
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        order = np.argsort(self.gains, kind="stable")
        object.__setattr__(self, "_order", order)
        object.__setattr__(
            self, "_cum", np.concatenate([[0.0], np.cumsum(self.masses[order])])
        )

    @property
    def atoms(self) -> int:
        return int(self.gains.size)

    def cdf(self, g):
        """P(gain <= g); right-continuous, with the tail mass at gain 0."""
        pts = np.asarray(g, dtype=float)
        sorted_gains = self.gains[self._order]
        idx = np.searchsorted(sorted_gains, pts, side="right")
        out = self._cum[idx] + self.tail_mass * (pts >= 0.0)
        if np.isscalar(g):
            return float(out)
        return out

    def to_dict(self) -> dict:
        return {
            "gains": self.gains.tolist(),
            "masses": self.masses.tolist(),
            "tail_mass": self.tail_mass,
            "element_gain": self.element_gain,
            "D": self.sectors,
            "l": self.lobes,
            "n_side": self.n_side,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PatternDistribution":
        return cls(
            gains=np.asarray(data["gains"], dtype=float),
            masses=np.asarray(data["masses"], dtype=float),
            tail_mass=float(data["tail_mass"]),
            element_gain=float(data["element_gain"]),
            n_side=int(data["n_side"]),
            sectors=int(data["D"]),
            lobes=int(data["l"]),
        )


def pattern_distribution(config: ArrayConfig, shifts: ShiftStats, q_e: float) -> PatternDistribution:
    """Assemble the joint discrete gain distribution.

    Per-axis masses are the Gaussian band probabilities; per-axis gains
    keep the exact peak value 1 in the innermost band and the smoothed
    lobe envelope at the band centers elsewhere.  Joint atoms are the
    outer products (independence of the two axis shifts), scaled by the
    frozen element gain; whatever probability the bands do not cover is
    the tail mass.
    """
    d, lobes, n = config.sectors, config.lobes, config.n_side
    idx = np.arange(lobes * d)
    axis_gain = _band_center_gain(idx, d)
    axis_gain[0] = 1.0
    mass_x = sector_mass(idx, d, n, shifts.mu_zx, shifts.sigma_zx)
    mass_y = sector_mass(idx, d, n, shifts.mu_zy, shifts.sigma_zy)
    gains = q_e * np.outer(axis_gain, axis_gain).ravel()
    masses = np.outer(mass_x, mass_y).ravel()
    tail = max(0.0, 1.0 - float(mass_x.sum()) * float(mass_y.sum()))
    return PatternDistribution(
        gains=gains,
        masses=masses,
        tail_mass=tail,
        element_gain=float(q_e),
        n_side=n,
        sectors=d,
        lobes=lobes,
    )


def pattern_cdf(dist: PatternDistribution, g):
    """CDF of the discrete pattern gain distribution at ``g`` >= 0."""
    if np.any(np.asarray(g) < 0):
        raise DomainError("pattern gain is non-negative")
    return dist.cdf(g)
