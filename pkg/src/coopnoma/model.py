"""Network parameterization, NOMA thresholds and per-link protocol arithmetic.

Noise power is normalised to one, so the BS transmit power equals the transmit
SNR ``rho``. Every link uses the bounded path loss ``1 + d**alpha``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

from .geometry import TopologyDraw

# Relative slack on the ε_A ≥ ε_B comparison; the boundary case (e.g. R1 = R2 = 1
# with 0.8/0.2 power split) is feasible but lands a few ulps either side in floats.
FEASIBILITY_RTOL = 1e-9
_LN2 = math.log(2.0)


class InfeasibleSICError(ValueError):
    """Raised when |p1|² − τ1|p2|² ≤ 0, so the near user can never run SIC."""


@dataclass(frozen=True)
class NetworkConfig:
    """Full parameterization of one cooperative SWIPT-NOMA cell.

    Lengths are in metres, densities in users/m², rates in bits per channel use.
    ``rho`` is the linear transmit SNR.
    """

    r_da: float = 10.0
    r_dc: float = 8.0
    r_db: float = 2.0
    lambda_a: float = 1.0
    lambda_b: float = 1.0
    alpha: float = 3.0
    eta: float = 0.7
    p1_sq: float = 0.8
    p2_sq: float = 0.2
    r1: float = 0.3
    r2: float = 0.5
    rho: float = 1000.0

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ValueError("invalid NetworkConfig: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                out.append(f"{f.name} must be a finite number")
        if out:
            return out
        if abs(self.p1_sq + self.p2_sq - 1.0) > 1e-9:
            out.append("p1_sq + p2_sq must equal 1")
        if not self.p1_sq > self.p2_sq > 0:
            out.append("need p1_sq > p2_sq > 0")
        if not 0 < self.r_db < self.r_dc < self.r_da:
            out.append("need 0 < r_db < r_dc < r_da")
        if self.rho <= 0:
            out.append("rho must be positive")
        if self.alpha < 2:
            out.append("alpha must be >= 2")
        if not 0 <= self.eta <= 1:
            out.append("eta must lie in [0, 1]")
        if self.lambda_a < 0 or self.lambda_b < 0:
            out.append("densities must be nonnegative")
        if self.r1 < 0 or self.r2 < 0:
            out.append("rates must be nonnegative")
        return out

    def with_snr_db(self, snr_db: float) -> "NetworkConfig":
        return replace(self, rho=db_to_linear(snr_db))

    def replace(self, **changes) -> "NetworkConfig":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(rho: float) -> float:
    return 10.0 * math.log10(rho)


@dataclass(frozen=True)
class DerivedThresholds:
    tau1: float
    tau2: float
    eps_a: Optional[float]
    eps_b: float
    sic_feasible: bool
    near_feasible: bool

    def require_sic(self) -> float:
        """Return ``eps_a``, raising :class:`InfeasibleSICError` when SIC is impossible."""
        if not self.sic_feasible:
            raise InfeasibleSICError(
                "p1_sq - tau1*p2_sq <= 0: the near user cannot decode the far user's message"
            )
        return self.eps_a


def derive_thresholds(cfg: NetworkConfig) -> DerivedThresholds:
    tau1 = math.expm1(2.0 * cfg.r1 * _LN2)
    tau2 = math.expm1(2.0 * cfg.r2 * _LN2)
    margin = cfg.p1_sq - cfg.p2_sq * tau1
    eps_b = tau2 / (cfg.rho * cfg.p2_sq)
    if margin > 0:
        eps_a = tau1 / (cfg.rho * margin)
        near_feasible = eps_a >= eps_b * (1.0 - FEASIBILITY_RTOL)
    else:
        eps_a = None
        near_feasible = False
    return DerivedThresholds(
        tau1=tau1,
        tau2=tau2,
        eps_a=eps_a,
        eps_b=eps_b,
        sic_feasible=margin > 0,
        near_feasible=near_feasible,
    )


def path_loss(cfg: NetworkConfig, d: float) -> float:
    return 1.0 + d**cfg.alpha


def sinr_far_direct(cfg: NetworkConfig, h_a_sq: float, d_a: float) -> float:
    """SINR at the far user for its own message on the direct BS link."""
    num = cfg.rho * h_a_sq * cfg.p1_sq
    return num / (cfg.rho * cfg.p2_sq * h_a_sq + path_loss(cfg, d_a))


def sinr_near_x1(cfg: NetworkConfig, h_b_sq: float, d_b: float, beta: float) -> float:
    """SINR at the near user when decoding the far user's message after power splitting."""
    g = cfg.rho * h_b_sq * (1.0 - beta)
    return g * cfg.p1_sq / (g * cfg.p2_sq + path_loss(cfg, d_b))


def snr_near_x2(cfg: NetworkConfig, h_b_sq: float, d_b: float, beta: float) -> float:
    """SNR at the near user for its own message once the far message is cancelled."""
    return cfg.rho * h_b_sq * cfg.p2_sq * (1.0 - beta) / path_loss(cfg, d_b)


def power_splitting_coefficient(
    cfg: NetworkConfig, thresholds: DerivedThresholds, h_b_sq: float, d_b: float
) -> float:
    """Fraction of received power the near user diverts to harvesting.

    Chosen so that the remainder supports exactly rate R1 for the far user's
    message; clamped at zero when even the full signal is not enough.
    """
    thresholds.require_sic()
    tau1 = thresholds.tau1
    margin = cfg.p1_sq - tau1 * cfg.p2_sq
    if h_b_sq <= 0:
        return 0.0
    return max(0.0, 1.0 - tau1 * path_loss(cfg, d_b) / (cfg.rho * margin * h_b_sq))


def relay_snr(
    cfg: NetworkConfig, h_b_sq: float, g_sq: float, d_b: float, d_c: float, beta: float
) -> float:
    """SNR of the copy forwarded by the near user with its harvested energy."""
    num = cfg.eta * cfg.rho * beta * h_b_sq * g_sq
    return num / (path_loss(cfg, d_c) * path_loss(cfg, d_b))


@dataclass(frozen=True)
class LinkRealization:
    """Exponential(1) channel power gains together with the geometry they were drawn on."""

    h_a_sq: float
    h_b_sq: float
    g_sq: float
    topology: TopologyDraw

    def __post_init__(self):
        if min(self.h_a_sq, self.h_b_sq, self.g_sq) < 0:
            raise ValueError("channel power gains must be nonnegative")


def mrc_sinr_far(cfg: NetworkConfig, realization: LinkRealization, beta: float) -> float:
    """Far-user SINR after maximal-ratio combining the direct and relayed copies."""
    topo = realization.topology
    direct = sinr_far_direct(cfg, realization.h_a_sq, topo.d_a)
    relayed = relay_snr(cfg, realization.h_b_sq, realization.g_sq, topo.d_b, topo.d_c, beta)
    return direct + relayed

