"""Vectorised numpy implementation of the trial kernel (fallback when the extension is absent)."""

from __future__ import annotations

import numpy as np

from . import params as P

_SUB_BLOCK = 1 << 14
_TWO_PI = 2.0 * np.pi
_U53 = 2.0**-53


def _distance(law, inner, outer, pl, q1, u):
    if law == 0:
        return np.sqrt(inner * inner + u * (outer * outer - inner * inner))
    if law == 1:
        r2 = inner * inner - np.log1p(-u * q1) / pl
    else:
        r2 = outer * outer + np.log1p(-(1.0 - u) * q1) / pl
    return np.sqrt(np.clip(r2, inner * inner, outer * outer))


def _path_loss(d, alpha):
    # integer exponents by multiplication, matching the compiled backend exactly
    if alpha == 2.0:
        return 1.0 + d * d
    if alpha == 3.0:
        return 1.0 + d * d * d
    if alpha == 4.0:
        d2 = d * d
        return 1.0 + d2 * d2
    return 1.0 + d**alpha


def _counts_from_uniforms(p, u):
    near_law, far_law = int(p[P.NEAR_LAW]), int(p[P.FAR_LAW])
    d_b = _distance(near_law, p[P.NEAR_INNER], p[P.NEAR_OUTER], p[P.NEAR_PL], p[P.NEAR_Q1], u[:, 0])
    d_a = _distance(far_law, p[P.FAR_INNER], p[P.FAR_OUTER], p[P.FAR_PL], p[P.FAR_Q1], u[:, 1])
    h_a = -np.log1p(-u[:, 3])
    h_b = -np.log1p(-u[:, 4])
    g = -np.log1p(-u[:, 5])
    if p[P.APPROX_RELAY]:
        d_c = d_a
    else:
        theta = _TWO_PI * u[:, 2]
        d_c = np.sqrt(np.maximum(d_a * d_a + d_b * d_b - 2.0 * d_a * d_b * np.cos(theta), 0.0))

    alpha, rho, eps_a = p[P.ALPHA], p[P.RHO], p[P.EPS_A]
    l_a = _path_loss(d_a, alpha)
    l_b = _path_loss(d_b, alpha)
    l_c = _path_loss(d_c, alpha)

    y = h_b / l_b
    decoded = y >= eps_a
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(decoded, np.maximum(0.0, 1.0 - eps_a / y), 0.0)
    relay = np.where(decoded, p[P.ETA] * rho * beta * h_b * g / (l_c * l_b), 0.0)
    snr_x2 = rho * h_b * p[P.P2] * (1.0 - beta) / l_b
    near_out = ~decoded | (snr_x2 < p[P.NEAR_TOL])

    direct = rho * h_a * p[P.P1] / (rho * p[P.P2] * h_a + l_a)
    tau1 = p[P.TAU1]
    noncoop = direct < tau1
    coop = (direct + relay) < tau1
    return (
        int(np.count_nonzero(near_out)),
        int(np.count_nonzero(coop)),
        int(np.count_nonzero(noncoop)),
        int(np.count_nonzero(decoded)),
    )


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """The ``(count, 8)`` uniforms in [0, 1) for trials ``start .. start + count``."""
    bg = np.random.Philox(key=seed, counter=P.COUNTER_STEPS_PER_TRIAL * start)
    raw = bg.random_raw(P.DRAWS_PER_TRIAL * count).reshape(count, P.DRAWS_PER_TRIAL)
    return (raw >> np.uint64(11)).astype(np.float64) * _U53


def count_block(packed: np.ndarray, seed: int, start: int, stop: int):
    """Return ``(near, far_coop, far_noncoop, decoded)`` outage counts over trials [start, stop)."""
    totals = [0, 0, 0, 0]
    for lo in range(start, stop, _SUB_BLOCK):
        hi = min(lo + _SUB_BLOCK, stop)
        c = _counts_from_uniforms(packed, uniforms(seed, lo, hi - lo))
        for j in range(4):
            totals[j] += c[j]
    return tuple(totals)
