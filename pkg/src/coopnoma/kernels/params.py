"""Flat parameter block shared by the compiled and pure-Python trial kernels."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

from ..geometry import Region, Scheme, far_region, near_region
from ..model import FEASIBILITY_RTOL, NetworkConfig, derive_thresholds

# Uniform draws consumed per trial; u6 and u7 are reserved so the layout can grow
# without shifting existing streams.
DRAWS_PER_TRIAL = 8
# Philox emits four 64-bit words per counter increment.
COUNTER_STEPS_PER_TRIAL = DRAWS_PER_TRIAL // 4

# Indices into ``KernelParams.pack()``.
NEAR_LAW, NEAR_INNER, NEAR_OUTER, NEAR_PL, NEAR_Q1 = range(0, 5)
FAR_LAW, FAR_INNER, FAR_OUTER, FAR_PL, FAR_Q1 = range(5, 10)
ALPHA, ETA, RHO, P1, P2, TAU1, TAU2, EPS_A, APPROX_RELAY, NEAR_TOL = range(10, 20)
N_PARAMS = 20


def _law_terms(region: Region):
    pl = math.pi * region.density
    q1 = -math.expm1(-region.span) if pl > 0 else 0.0
    return region.inner, region.outer, pl, q1


@dataclass(frozen=True)
class KernelParams:
    near_law: int
    near_inner: float
    near_outer: float
    near_pl: float
    near_q1: float
    far_law: int
    far_inner: float
    far_outer: float
    far_pl: float
    far_q1: float
    alpha: float
    eta: float
    rho: float
    p1: float
    p2: float
    tau1: float
    tau2: float
    eps_a: float
    approx_relay: int
    near_tol: float

    @classmethod
    def build(cls, cfg: NetworkConfig, scheme, approx_relay_distance: bool = False) -> "KernelParams":
        """Freeze everything a trial needs; raises InfeasibleSICError before any trial runs."""
        scheme = Scheme(scheme)
        th = derive_thresholds(cfg)
        eps_a = th.require_sic()
        nr, fr = near_region(cfg), far_region(cfg)
        for law, region in ((scheme.near_law, nr), (scheme.far_law, fr)):
            if law != 0 and region.density <= 0:
                raise ValueError("nearest/farthest selection needs a positive density")
        return cls(
            int(scheme.near_law), *_law_terms(nr),
            int(scheme.far_law), *_law_terms(fr),
            cfg.alpha, cfg.eta, cfg.rho, cfg.p1_sq, cfg.p2_sq,
            th.tau1, th.tau2, eps_a, int(bool(approx_relay_distance)),
            th.tau2 * (1.0 - FEASIBILITY_RTOL),
        )  # fmt: skip

    def pack(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)
