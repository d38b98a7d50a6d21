"""Parameter sweeps that regenerate each published figure as a table of points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Scheme
from .model import NetworkConfig

QUANTITIES = ("near", "far_coop", "far_noncoop", "throughput")


@dataclass(frozen=True)
class FigurePoint:
    curve: str
    x_name: str
    x: float
    scheme: Scheme
    quantity: str
    config: NetworkConfig


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    title: str
    base: NetworkConfig
    build: Callable[[NetworkConfig], list[FigurePoint]]

    def points(self, base: NetworkConfig | None = None) -> list[FigurePoint]:
        return self.build(base or self.base)


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid ``start, start + step, …, stop``."""
    if step <= 0:
        raise ValueError("SNR step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    if n < 1:
        return []
    return [float(start + i * step) for i in range(n)]


NEAR_SCHEMES = (Scheme.RNRF, Scheme.NNNF)  # NNNF and NNFF share the near-user rule
ALL_SCHEMES = tuple(Scheme)
FIG_SNR = snr_grid(0.0, 50.0, 5.0)

_CELL = NetworkConfig(r_da=10.0, r_dc=8.0, r_db=2.0, lambda_a=1.0, lambda_b=1.0, eta=0.7, p1_sq=0.8, p2_sq=0.2)


def _snr_points(curve, cfg, schemes, quantities, grid=FIG_SNR):
    out = []
    for snr in grid:
        c = cfg.with_snr_db(snr)
        for s in schemes:
            for q in quantities:
                out.append(FigurePoint(curve, "snr_db", snr, s, q, c))
    return out


def _fig2(base):
    pts = []
    for alpha in (2.0, 3.0, 4.0):
        for r1, r2 in ((1.0, 0.5), (0.5, 1.0)):
            cfg = base.replace(alpha=alpha, r1=r1, r2=r2)
            pts += _snr_points(f"alpha={alpha:g},R1={r1:g},R2={r2:g}", cfg, NEAR_SCHEMES, ("near",))
    return pts


def _fig3(base):
    pts = []
    densities = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0]
    for r_db in (1.0, 2.0, 3.0):
        for lam in densities:
            cfg = base.replace(r_db=r_db, lambda_b=lam)
            for s in NEAR_SCHEMES:
                pts.append(FigurePoint(f"R_DB={r_db:g}", "lambda_b", lam, s, "near", cfg))
    return pts


def _fig4(base):
    pts = []
    grid = [float(v) for v in np.round(np.arange(0.0, 2.0001, 0.25), 10)]
    for r2 in grid:
        for r1 in grid:
            cfg = base.replace(r1=r1, r2=r2)
            for s in NEAR_SCHEMES:
                pts.append(FigurePoint(f"R2={r2:g}", "r1", r1, s, "near", cfg))
    return pts


def _fig5(base):
    pts = []
    for alpha in (2.0, 3.0):
        pts += _snr_points(f"alpha={alpha:g}", base.replace(alpha=alpha), ALL_SCHEMES, ("far_coop",))
    return pts


def _fig6(base):
    pts = []
    r1_grid = [round(0.1 * i, 10) for i in range(1, 11)]
    for r_dc in (6.0, 8.0):
        for r_db in (1.0, 2.0):
            for r1 in r1_grid:
                cfg = base.replace(r_dc=r_dc, r_da=r_dc + 2.0, r_db=r_db, r1=r1)
                for s in ALL_SCHEMES:
                    pts.append(FigurePoint(f"R_DC={r_dc:g},R_DB={r_db:g}", "r1", r1, s, "far_coop", cfg))
    return pts


def _fig7(base):
    return _snr_points("alpha=3", base, ALL_SCHEMES, ("far_coop", "far_noncoop"))


def _fig8(base):
    pts = []
    for r2 in (0.5, 1.0, 2.0):
        pts += _snr_points(f"R1={base.r1:g},R2={r2:g}", base.replace(r2=r2), ALL_SCHEMES, ("throughput",))
    return pts


FIGURES: dict[int, FigureSpec] = {
    2: FigureSpec(2, "near-user outage vs SNR for several path-loss exponents", _CELL.replace(r_db=2.0, lambda_b=1.0), _fig2),
    3: FigureSpec(3, "near-user outage vs near-user density", _CELL.replace(alpha=2.0, r1=1.0, r2=0.5, rho=1000.0), _fig3),
    4: FigureSpec(4, "near-user outage vs target rates", _CELL.replace(alpha=2.0, r_db=2.0, rho=1000.0), _fig4),
    5: FigureSpec(5, "far-user outage vs SNR for several path-loss exponents", _CELL.replace(r1=0.3), _fig5),
    6: FigureSpec(6, "far-user outage vs far-user rate", _CELL.replace(alpha=2.0, rho=1000.0), _fig6),
    7: FigureSpec(7, "cooperative vs direct-only far-user outage", _CELL.replace(alpha=3.0, r1=0.3), _fig7),
    8: FigureSpec(8, "delay-sensitive throughput vs SNR for several near-user rates", _CELL.replace(alpha=2.0, r1=1.0, r2=0.5), _fig8),
}


def figure(figure_id: int) -> FigureSpec:
    try:
        return FIGURES[int(figure_id)]
    except (KeyError, ValueError):
        raise KeyError(f"unknown figure id {figure_id!r}; known: {sorted(FIGURES)}") from None
