"""One-stop bundle of a fully specified link scenario.

Gathers geometry, fluctuation statistics, array quantization, channel
parameters, and the link budget, and wires the analysis chain together:
pattern distribution, cascade moments, closed-form outage, and the Monte
Carlo oracle.  All the ``with_*`` helpers return modified copies, which
is what sweeps and the element-count optimizer iterate over.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelParams,
    LinkConfig,
    active_power_stats,
    cascade_moments,
)
from .errors import UsageError
from .fluctuation import FluctuationModel, angle_jacobian, shift_stats
from .geometry import SystemGeometry
from .montecarlo import OutageEstimate, SimConfig, simulate_outage, simulate_outage_grid
from .outage import (
    OutageResult,
    outage_active_clt,
    outage_passive_clt,
    outage_passive_gamma,
)
from .pattern import ArrayConfig, PatternDistribution, element_gain_nominal, pattern_distribution

__all__ = ["Scenario", "METHODS"]

METHODS = ("passive-clt", "passive-gamma", "active-clt")


@dataclass(frozen=True)
class Scenario:
    """A complete analysis scenario; immutable, cheap to copy-modify."""

    geometry: SystemGeometry
    fluctuation: FluctuationModel
    array: ArrayConfig
    channel: ChannelParams
    link: LinkConfig
    pf_ratio: float | None = None

    def __post_init__(self):
        if self.link.n_elements != self.array.n_elements:
            raise UsageError(
                f"link says {self.link.n_elements} elements, array has {self.array.n_elements}"
            )

    # -- building blocks ------------------------------------------------

    def element_gain(self) -> float:
        return element_gain_nominal(self.geometry.t_angles, self.geometry.r_angles)

    def shift_stats(self):
        if self.fluctuation.is_still:
            return None
        return shift_stats(
            angle_jacobian(self.geometry.t_angles),
            angle_jacobian(self.geometry.r_angles),
            self.geometry.t_angles,
            self.geometry.r_angles,
            self.fluctuation,
        )

    def pattern_distribution(self) -> PatternDistribution:
        q_e = self.element_gain()
        shifts = self.shift_stats()
        if shifts is None:
            # Still platform: a single unit atom at the nominal gain.
            gains = np.full(1, q_e)
            masses = np.ones(1)
            return PatternDistribution(
                gains=gains,
                masses=masses,
                tail_mass=0.0,
                element_gain=q_e,
                n_side=self.array.n_side,
                sectors=self.array.sectors,
                lobes=self.array.lobes,
            )
        return pattern_distribution(self.array, shifts, q_e)

    def cascade_moments(self):
        return cascade_moments(self.channel, self.link.zeta, self.link.n_elements)

    def active_power_stats(self):
        return active_power_stats(
            self.channel,
            self.link,
            self.geometry.t_angles,
            self.geometry.r_angles,
        )

    # -- outage ---------------------------------------------------------

    def default_method(self) -> str:
        return "active-clt" if self.link.variant == "active" else "passive-clt"

    def closed_form_outage(
        self, method: str | None = None, tail_mode: str = "tail-as-outage"
    ) -> OutageResult:
        method = method or self.default_method()
        if method not in METHODS:
            raise UsageError(f"method must be one of {METHODS}, got {method!r}")
        dist = self.pattern_distribution()
        moments = self.cascade_moments()
        if method == "passive-clt":
            return outage_passive_clt(dist, moments, self.link, tail_mode)
        if method == "passive-gamma":
            return outage_passive_gamma(dist, moments, self.link, tail_mode)
        return outage_active_clt(dist, moments, self.active_power_stats(), self.link, tail_mode)

    def monte_carlo_outage(self, sim: SimConfig, threads: int = 1) -> OutageEstimate:
        return simulate_outage(
            self.geometry, self.fluctuation, self.array, self.channel, self.link, sim, threads
        )

    def monte_carlo_outage_grid(self, links, sim: SimConfig, threads: int = 1):
        return simulate_outage_grid(
            self.geometry, self.fluctuation, self.array, self.channel, links, sim, threads
        )

    # -- copy-modify helpers ---------------------------------------------

    def with_elements(self, n_side: int) -> "Scenario":
        array = dataclasses.replace(self.array, n_side=n_side)
        link = dataclasses.replace(self.link, n_elements=array.n_elements)
        return dataclasses.replace(self, array=array, link=link)

    def with_pt(self, p_t: float) -> "Scenario":
        """New transmit power; re-derives p_f when a budget ratio is set."""
        updates = {"p_t": p_t}
        if self.link.variant == "active" and self.pf_ratio is not None:
            updates["p_f"] = self.pf_ratio * p_t
        return dataclasses.replace(self, link=dataclasses.replace(self.link, **updates))

    def with_zeta(self, zeta: float, sigma2_e: float | None = None) -> "Scenario":
        link = dataclasses.replace(
            self.link, zeta=zeta, sigma2_e=self.link.sigma2_e if sigma2_e is None else sigma2_e
        )
        return dataclasses.replace(self, link=link)

    def with_fluctuation(self, model: FluctuationModel) -> "Scenario":
        return dataclasses.replace(self, fluctuation=model)

    def with_sectors(self, sectors: int, lobes: int | None = None) -> "Scenario":
        array = dataclasses.replace(
            self.array, sectors=sectors, lobes=self.array.lobes if lobes is None else lobes
        )
        return dataclasses.replace(self, array=array)
