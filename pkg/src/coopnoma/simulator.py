"""Monte Carlo engine for the two-phase cooperative protocol.

Every trial reads eight uniforms from a Philox stream keyed by the master seed,
at a counter determined by the trial index alone: distance of the near user,
distance of the far user, angle, then the three Exp(1) gains ``|h_A|²``,
``|h_B|²``, ``|g|²``. Two words are reserved. Trials are grouped in fixed-size
blocks, so counts do not depend on how many workers process the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .geometry import Scheme, TopologyDraw, topology_from_uniforms
from .kernels import _trials_py
from .model import (
    FEASIBILITY_RTOL,
    DerivedThresholds,
    LinkRealization,
    NetworkConfig,
    mrc_sinr_far,
    power_splitting_coefficient,
    sinr_far_direct,
    snr_near_x2,
)

BLOCK_SIZE = 1 << 16
DEFAULT_TRIALS = 1_000_000


@dataclass(frozen=True)
class RngPolicy:
    """Counter-based stream policy: trial ``i`` draws are a pure function of (seed, i)."""

    master_seed: int = 0

    def __post_init__(self):
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an integer in [0, 2**64)")

    def uniforms(self, trial_index: int) -> np.ndarray:
        return _trials_py.uniforms(self.master_seed, trial_index, 1)[0]


@dataclass(frozen=True)
class TrialOutcome:
    near_outage: bool
    far_outage_coop: bool
    far_outage_noncoop: bool
    relay_decoded: bool
    beta: float
    topology: TopologyDraw | None = field(default=None, compare=False)


def outcome_from_realization(
    cfg: NetworkConfig, thresholds: DerivedThresholds, realization: LinkRealization
) -> TrialOutcome:
    """Apply the protocol's decision rules to one set of distances and gains."""
    eps_a = thresholds.require_sic()
    topo = realization.topology
    direct = sinr_far_direct(cfg, realization.h_a_sq, topo.d_a)
    y = realization.h_b_sq / (1.0 + topo.d_b**cfg.alpha)
    decoded = y >= eps_a
    if decoded:
        beta = power_splitting_coefficient(cfg, thresholds, realization.h_b_sq, topo.d_b)
        combined = mrc_sinr_far(cfg, realization, beta)
        x2 = snr_near_x2(cfg, realization.h_b_sq, topo.d_b, beta)
        near_out = x2 < thresholds.tau2 * (1.0 - FEASIBILITY_RTOL)
        if thresholds.near_feasible and near_out:
            # the split leaves SNR ≥ τ2 whenever ε_A ≥ ε_B; anything else is a bug
            raise AssertionError(f"near-user x2 stage failed on a feasible configuration (snr={x2})")
    else:
        beta = 0.0
        combined = direct
        near_out = True
    return TrialOutcome(
        near_outage=near_out,
        far_outage_coop=combined < thresholds.tau1,
        far_outage_noncoop=direct < thresholds.tau1,
        relay_decoded=decoded,
        beta=beta,
        topology=topo,
    )


def run_trial(
    cfg: NetworkConfig,
    thresholds: DerivedThresholds,
    scheme,
    trial_index: int,
    rng_policy: RngPolicy,
    approx_relay_distance: bool = False,
) -> TrialOutcome:
    """Simulate a single trial with the scalar model functions.

    Uses the same uniforms as the batch kernels, so it can replay any trial of an
    ``estimate_outage`` run.

    Raises:
        InfeasibleSICError: before drawing anything, if SIC is impossible.
    """
    thresholds.require_sic()
    u = rng_policy.uniforms(trial_index)
    topo = topology_from_uniforms(cfg, Scheme(scheme), u[0], u[1], u[2])
    if approx_relay_distance:
        topo = TopologyDraw(topo.d_a, topo.d_b, topo.theta, topo.d_a)
    gains = -np.log1p(-u[3:6])
    realization = LinkRealization(float(gains[0]), float(gains[1]), float(gains[2]), topo)
    return outcome_from_realization(cfg, thresholds, realization)


@dataclass(frozen=True)
class OutageEstimate:
    """Empirical outage probability with its binomial standard error."""

    probability: float
    stderr: float
    trials: int
    scheme: str
    user: str
    seed: int

    @classmethod
    def from_count(cls, count: int, trials: int, scheme, user: str, seed: int) -> "OutageEstimate":
        p = count / trials
        return cls(p, math.sqrt(p * (1.0 - p) / trials), trials, str(Scheme(scheme)), user, seed)

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        """True when ``value`` lies within ``sigmas`` standard errors of the estimate."""
        return abs(self.probability - value) <= sigmas * self.stderr


class OutageEstimates(NamedTuple):
    near: OutageEstimate
    far_coop: OutageEstimate
    far_noncoop: OutageEstimate
    relay_decoded: float


def _blocks(trials: int, block_size: int):
    return [(lo, min(lo + block_size, trials)) for lo in range(0, trials, block_size)]


def estimate_outage(
    cfg: NetworkConfig,
    scheme,
    trials: int = DEFAULT_TRIALS,
    rng_policy: RngPolicy = RngPolicy(),
    *,
    workers: int = 1,
    backend: str | None = None,
    approx_relay_distance: bool = False,
    block_size: int = BLOCK_SIZE,
) -> OutageEstimates:
    """Estimate near, cooperative-far and direct-only-far outage over ``trials`` trials.

    Args:
        cfg: network configuration; ``cfg.rho`` is the linear SNR.
        scheme: selection scheme (``Scheme`` or its string value).
        trials: number of independent trials, at least 1.
        rng_policy: master seed; reusing it across SNR points gives common random numbers.
        workers: threads used to process blocks; does not change the result.
        backend: ``"cython"`` or ``"python"``; defaults to the best available.
        approx_relay_distance: use ``d_C = d_A`` instead of the law of cosines.
        block_size: trials per block. Changing it does not change the result either.

    Raises:
        InfeasibleSICError: if SIC is impossible, before any trial runs.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    scheme = Scheme(scheme)
    packed = kernels.KernelParams.build(cfg, scheme, approx_relay_distance).pack()
    seed = rng_policy.master_seed
    blocks = _blocks(int(trials), block_size)

    def run(block):
        return kernels.count_block(packed, seed, block[0], block[1], backend)

    if workers == 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    near, coop, noncoop, decoded = (sum(col) for col in zip(*parts))
    trials = int(trials)
    return OutageEstimates(
        OutageEstimate.from_count(near, trials, scheme, "near", seed),
        OutageEstimate.from_count(coop, trials, scheme, "far_coop", seed),
        OutageEstimate.from_count(noncoop, trials, scheme, "far_noncoop", seed),
        decoded / trials,
    )


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    scheme: str
    config: NetworkConfig
    estimates: OutageEstimates


def sweep(
    cfg_base: NetworkConfig,
    snr_grid_db: Sequence[float],
    schemes: Sequence,
    trials: int = DEFAULT_TRIALS,
    rng_policy: RngPolicy = RngPolicy(),
    **kwargs,
) -> list[SweepRow]:
    """One ``estimate_outage`` per (SNR, scheme), all sharing the master seed."""
    grid = list(snr_grid_db)
    if not grid:
        raise ValueError("SNR grid is empty")
    rows = []
    for snr in grid:
        cfg = cfg_base.with_snr_db(snr)
        for scheme in schemes:
            est = estimate_outage(cfg, scheme, trials, rng_policy, **kwargs)
            rows.append(SweepRow(float(snr), str(Scheme(scheme)), cfg, est))
    return rows


__all__ = [
    "BLOCK_SIZE",
    "DEFAULT_TRIALS",
    "OutageEstimate",
    "OutageEstimates",
    "RngPolicy",
    "SweepRow",
    "TrialOutcome",
    "estimate_outage",
    "outcome_from_realization",
    "run_trial",
    "sweep",
]
