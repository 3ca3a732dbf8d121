"""Monte Carlo ground truth for pattern gains and outage probability.

Trials are processed in fixed-size blocks; block ``b`` of a run draws
from the Philox stream (seed, b), so results are bit-identical no matter
how blocks are distributed over worker threads.  Within a block the draw
order is fixed: tilt angles first, then feeder-hop envelope normals,
then served-hop envelope normals.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, LinkConfig
from .errors import UsageError
from .fluctuation import FluctuationModel, sample_fluctuation, stream_rng
from .geometry import SystemGeometry, fluctuated_angles
from .pattern import (
    ArrayConfig,
    element_gain_exact,
    element_gain_nominal,
    exact_array_factor,
    shifts_from_angles,
)

__all__ = [
    "BLOCK_TRIALS",
    "SimConfig",
    "OutageEstimate",
    "wilson_interval",
    "sample_rician_envelope",
    "simulate_pattern_gain",
    "simulate_outage",
    "simulate_outage_grid",
    "full_matrix_snr_check",
]

BLOCK_TRIALS = 1 << 13
_Z95 = 1.959963984540054

PATTERN_MODES = ("exact", "treated-element-gain")


@dataclass(frozen=True)
class SimConfig:
    """Trial count, seed, and fidelity switches of a simulation run."""

    trials: int = 10**6
    seed: int = 12345
    mode: str = "reduced"
    pattern_mode: str = "exact"

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if self.mode not in ("reduced", "full-matrix"):
            raise UsageError(f"mode must be 'reduced' or 'full-matrix', got {self.mode!r}")
        if self.pattern_mode not in PATTERN_MODES:
            raise UsageError(f"pattern_mode must be one of {PATTERN_MODES}")


@dataclass(frozen=True)
class OutageEstimate:
    """Point estimate with a 95% confidence interval."""

    point: float
    ci_low: float
    ci_high: float
    trials: int


def wilson_interval(successes: int, trials: int):
    """95% Wilson score interval; rule-of-three at the boundaries."""
    if not 0 <= successes <= trials:
        raise UsageError("successes must lie in [0, trials]")
    n = float(trials)
    if successes == 0:
        return 0.0, min(1.0, 3.0 / n)
    if successes == trials:
        return max(0.0, 1.0 - 3.0 / n), 1.0
    p = successes / n
    z2 = _Z95 * _Z95
    center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n)
    half = _Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n)
    return max(0.0, center - half), min(1.0, center + half)


def sample_rician_envelope(k_linear: float, rng: np.random.Generator, size=None):
    """Unit-second-moment Rician envelope draws with linear factor K."""
    if k_linear < 0:
        raise UsageError("Rician factor must be non-negative")
    los = math.sqrt(k_linear / (k_linear + 1.0))
    scatter = math.sqrt(1.0 / (2.0 * (k_linear + 1.0)))
    g1 = rng.standard_normal(size)
    g2 = rng.standard_normal(size)
    return np.hypot(los + scatter * g1, scatter * g2)


def _pattern_gain_block(geometry, model, config, pattern_mode, rng, size):
    """One vectorized draw of the exact pattern-gain chain."""
    eps_x, eps_y = sample_fluctuation(model, rng, size)
    fluct_t = fluctuated_angles(geometry.t_angles, eps_x, eps_y)
    fluct_r = fluctuated_angles(geometry.r_angles, eps_x, eps_y)
    z_x, z_y = shifts_from_angles(geometry.t_angles, geometry.r_angles, fluct_t, fluct_r)
    g_array = exact_array_factor(z_x, z_y, config.n_side)
    if pattern_mode == "exact":
        g_elem = element_gain_exact(fluct_t[0], fluct_r[0])
        elem_t = np.cos(fluct_t[0]) ** 3
        elem_r = np.cos(fluct_r[0]) ** 3
    else:
        q_e = element_gain_nominal(geometry.t_angles, geometry.r_angles)
        g_elem = np.full_like(np.asarray(g_array, dtype=float), q_e)
        elem_t = np.full_like(g_elem, math.cos(geometry.t_angles.theta) ** 3)
        elem_r = np.full_like(g_elem, math.cos(geometry.r_angles.theta) ** 3)
    return g_elem * g_array, elem_t, elem_r


def simulate_pattern_gain(
    geometry: SystemGeometry,
    model: FluctuationModel,
    config: ArrayConfig,
    pattern_mode: str,
    rng: np.random.Generator,
    size=None,
):
    """Draw total pattern gains through the exact angle chain.

    ``pattern_mode`` 'exact' evaluates the per-draw element patterns;
    'treated-element-gain' freezes them at the nominal angles so only the
    array factor fluctuates.
    """
    if pattern_mode not in PATTERN_MODES:
        raise UsageError(f"pattern_mode must be one of {PATTERN_MODES}")
    gain, _, _ = _pattern_gain_block(geometry, model, config, pattern_mode, rng, size)
    if size is None:
        return float(gain)
    return gain


def _blocks(trials: int):
    full, rest = divmod(trials, BLOCK_TRIALS)
    for b in range(full):
        yield b, BLOCK_TRIALS
    if rest:
        yield full, rest


def _outage_counts_block(geometry, model, array_config, params, links, sim, block, size):
    """Outage counts for every link config on one block's shared draws."""
    rng = stream_rng(sim.seed, block)
    gain, elem_t, elem_r = _pattern_gain_block(
        geometry, model, array_config, sim.pattern_mode, rng, size
    )
    n = array_config.n_elements
    env_h0 = sample_rician_envelope(params.k0, rng, (size, n))  # feeder hop
    env_h1 = sample_rician_envelope(params.k1, rng, (size, n))  # served hop
    cascade = (env_h0 * env_h1).sum(axis=1)
    sum_p0 = (env_h0 * env_h0).sum(axis=1)
    sum_p1 = (env_h1 * env_h1).sum(axis=1)

    counts = []
    for link in links:
        err = 0.0 if link.sigma2_e is None else link.p_t * link.zeta * link.sigma2_e
        u = params.beta0 * params.beta1 * (1.0 - link.zeta) * cascade**2
        if link.variant == "passive":
            snr = link.p_t * link.m_antennas * gain * u / (err + link.sigma2_n)
        else:
            amp2 = link.p_f / (link.p_t * params.beta0 * elem_t * sum_p0 + n * link.sigma2_f)
            noise = params.beta1 * amp2 * elem_r * link.sigma2_f * sum_p1 + err + link.sigma2_n
            snr = link.p_t * link.m_antennas * amp2 * gain * u / noise
        counts.append(int(np.count_nonzero(snr <= link.gamma_th)))
    return counts


def simulate_outage_grid(
    geometry: SystemGeometry,
    model: FluctuationModel,
    array_config: ArrayConfig,
    params: ChannelParams,
    links,
    sim: SimConfig,
    threads: int = 1,
):
    """Outage estimates for several link budgets on shared channel draws.

    All links must use the same element count (the draw shapes depend on
    it).  Results are bit-identical to running :func:`simulate_outage`
    per link with the same seed, and independent of ``threads``.
    """
    links = list(links)
    for link in links:
        if link.n_elements != array_config.n_elements:
            raise UsageError("all links in a grid must share the array's element count")
    if sim.mode != "reduced":
        raise UsageError("grids are only supported in reduced mode")
    plan = list(_blocks(sim.trials))
    worker = lambda item: _outage_counts_block(
        geometry, model, array_config, params, links, sim, item[0], item[1]
    )
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_block = list(pool.map(worker, plan))
    else:
        per_block = [worker(item) for item in plan]
    totals = [sum(counts[j] for counts in per_block) for j in range(len(links))]
    out = []
    for k in totals:
        lo, hi = wilson_interval(k, sim.trials)
        out.append(OutageEstimate(k / sim.trials, lo, hi, sim.trials))
    return out


def simulate_outage(
    geometry: SystemGeometry,
    model: FluctuationModel,
    array_config: ArrayConfig,
    params: ChannelParams,
    link: LinkConfig,
    sim: SimConfig,
    threads: int = 1,
) -> OutageEstimate:
    """Estimate the outage probability by simulation.

    Reduced mode samples the envelope-level SNR (optimal phasing cancels
    all channel phases, so envelopes are sufficient); full-matrix mode
    evaluates the explicit beamformed matrix expression and is restricted
    to a still platform, where the two models provably coincide.
    """
    if sim.mode == "full-matrix":
        if not model.is_still:
            raise UsageError("full-matrix mode is only verified for a still platform")
        count = 0
        for b, size in _blocks(sim.trials):
            rng = stream_rng(sim.seed, b)
            snr_full, _ = _full_matrix_snr(
                geometry, params, link, link.m_antennas, array_config.n_elements, rng, size
            )
            count += int(np.count_nonzero(snr_full <= link.gamma_th))
        lo, hi = wilson_interval(count, sim.trials)
        return OutageEstimate(count / sim.trials, lo, hi, sim.trials)
    return simulate_outage_grid(geometry, model, array_config, params, [link], sim, threads)[0]


def _steering_phases(theta, phi, count):
    """Per-element phase exponents k * pi * sin(theta)cos/sin(phi)."""
    k = np.arange(count)
    return (
        math.pi * k * math.sin(theta) * math.cos(phi),
        math.pi * k * math.sin(theta) * math.sin(phi),
    )


def _array_response(theta, phi, n_side):
    px, py = _steering_phases(theta, phi, n_side)
    ax = np.exp(-1j * px)
    ay = np.exp(-1j * py)
    return np.kron(ax, ay)


def _full_matrix_snr(geometry, params, link, m_antennas, n_elements, rng, size):
    """Vectorized evaluation of the explicit matrix SNR and its scalar form."""
    n_side = math.isqrt(n_elements)
    if n_side * n_side != n_elements:
        raise UsageError(f"{n_elements} is not a perfect square")
    t, r = geometry.t_angles, geometry.r_angles
    cos3_t = math.cos(t.theta) ** 3
    cos3_r = math.cos(r.theta) ** 3
    q_e = cos3_t * cos3_r

    # Feeder-side small-scale coefficients are rank-one across antennas
    # (strong line-of-sight), so one coefficient per element suffices.
    los0 = math.sqrt(params.k0 / (params.k0 + 1.0))
    sc0 = math.sqrt(1.0 / (2.0 * (params.k0 + 1.0)))
    los1 = math.sqrt(params.k1 / (params.k1 + 1.0))
    sc1 = math.sqrt(1.0 / (2.0 * (params.k1 + 1.0)))
    h_t = los0 + sc0 * (rng.standard_normal((size, n_elements)) + 1j * rng.standard_normal((size, n_elements)))
    h_r = los1 + sc1 * (rng.standard_normal((size, n_elements)) + 1j * rng.standard_normal((size, n_elements)))

    a_t = _array_response(t.theta, t.phi, n_side)
    a_r = _array_response(r.theta, r.phi, n_side)
    # Feeder array response at the serving node's antenna array: the
    # direction convention cancels in the aligned product.
    dvec = geometry.irs.as_array() - geometry.bs.as_array()
    theta0 = math.acos(dvec[2] / geometry.d0)
    phi0 = math.atan2(dvec[1], dvec[0])
    kb = np.arange(m_antennas)
    a_b = np.exp(-1j * math.pi * kb * math.sin(theta0) * math.cos(phi0))

    hbar_t = math.sqrt(params.beta0 * cos3_t) * h_t * a_t[None, :]  # element axis; antenna factor a_b
    hbar_r = math.sqrt(params.beta1 * cos3_r) * h_r * a_r[None, :]

    # Per-element cascade coefficient for the reference antenna column.
    casc = np.conj(hbar_r) * hbar_t * a_b[0]
    phase_align = np.exp(-1j * np.angle(casc))

    err = 0.0 if link.sigma2_e is None else link.p_t * link.zeta * link.sigma2_e
    sum_p0 = (np.abs(h_t) ** 2).sum(axis=1)
    sum_p1 = (np.abs(h_r) ** 2).sum(axis=1)
    if link.variant == "active":
        amp2 = link.p_f / (link.p_t * params.beta0 * cos3_t * sum_p0 + n_elements * link.sigma2_f)
        sigma2_f = link.sigma2_f
    else:
        amp2 = np.ones(size)
        sigma2_f = 0.0

    # Row vector v_m = sum_n conj(hbar_r) A Phi hbar_t a_b[m]/a_b[0]; with the
    # alignment every entry has the same magnitude, so MRT yields |v| = sqrt(M) |v_0|.
    v0 = (casc * phase_align).sum(axis=1) * np.sqrt(amp2)
    signal = m_antennas * np.abs(v0) ** 2
    denom = amp2 * (np.abs(hbar_r) ** 2).sum(axis=1) * sigma2_f + err + link.sigma2_n
    snr_full = link.p_t * (1.0 - link.zeta) * signal / denom

    cascade = (np.abs(h_t) * np.abs(h_r)).sum(axis=1)
    u = params.beta0 * params.beta1 * (1.0 - link.zeta) * cascade**2
    if link.variant == "active":
        noise = params.beta1 * amp2 * cos3_r * sigma2_f * (np.abs(h_r) ** 2).sum(axis=1) + err + link.sigma2_n
        snr_reduced = link.p_t * link.m_antennas * amp2 * q_e * u / noise
    else:
        snr_reduced = link.p_t * link.m_antennas * q_e * u / (err + link.sigma2_n)
    return snr_full, snr_reduced


def full_matrix_snr_check(
    geometry: SystemGeometry,
    params: ChannelParams,
    link: LinkConfig,
    m_antennas: int,
    n_elements: int,
    rng: np.random.Generator,
):
    """One random draw of the matrix SNR and its reduced scalar form.

    Valid only for a still platform: under fluctuations the scalar model
    composes the pattern loss multiplicatively, which is a different
    model from per-element phase misalignment.  At zero fluctuation the
    aligned matrix expression provably collapses to the scalar one.
    """
    snr_full, snr_reduced = _full_matrix_snr(
        geometry, params, link, m_antennas, n_elements, rng, 1
    )
    return float(snr_full[0]), float(snr_reduced[0])
