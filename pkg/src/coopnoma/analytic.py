"""Analytic outage, diversity and throughput evaluation for the three selection schemes.

Notation used throughout: ``X = |h_A|²/L_A`` and ``Y = |h_B|²/L_B`` are the
path-loss-normalised far and near channel gains, with ``L = 1 + d**alpha``. The
near user decodes the far message iff ``Y ≥ ε_A``, and the far user's direct link
fails iff ``X < ε_A``. A far outage splits into

* ``theta1``: the relay decodes but direct + relayed SINR is still below ``τ1``;
* ``theta2``: the relay fails and so does the direct link, ``F_X(ε_A)·F_Y(ε_A)``.

Every expectation over a user distance is taken with a Chebyshev-Gauss rule
mapped onto the distance support, weighted by that distance law's PDF. The
``closed_form`` variant swaps in exact α = 2 expressions wherever they exist, and
the ``oracle`` variant integrates the exact Bessel-kernel form adaptively.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate, stats

from .geometry import (
    DistanceLaw,
    Region,
    Scheme,
    distance_pdf,
    far_region,
    near_region,
)
from .model import NetworkConfig, derive_thresholds
from .numerics import QuadratureSpec, c0_constant, chebyshev_rule, one_minus_x_k1

DEFAULT_QUAD = QuadratureSpec()
ORACLE_EPSABS = 1e-8


class Variant(str, enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"
    HIGH_SNR = "high_snr"
    ORACLE = "oracle"

    def __str__(self):
        return self.value


class User(str, enum.Enum):
    NEAR = "near"
    FAR = "far"

    def __str__(self):
        return self.value


class IntegrationError(ArithmeticError):
    """The adaptive oracle integrator failed to reach its tolerance."""


class DegenerateFitError(ValueError):
    """A diversity fit was requested on data that cannot support it."""


class OutageValue(float):
    """A probability in [0, 1] that remembers the unclamped value it came from.

    Attributes:
        raw: value before clamping.
        flag: ``""`` when in range, ``"clamped_high"``/``"clamped_low"`` when
            clamped, ``"infeasible_sic"``/``"infeasible_near"`` when the rates
            make the near user's decoding impossible and the value is forced to 1.
    """

    raw: float
    flag: str

    def __new__(cls, raw: float, flag: Optional[str] = None):
        raw = float(raw)
        if math.isnan(raw):
            raise ArithmeticError("outage evaluation produced NaN")
        value = min(max(raw, 0.0), 1.0)
        obj = super().__new__(cls, value)
        obj.raw = raw
        if flag is None:
            flag = "clamped_high" if raw > 1.0 else "clamped_low" if raw < 0.0 else ""
        obj.flag = flag
        return obj

    @property
    def clamped(self) -> bool:
        return self.flag.startswith("clamped")

    def __repr__(self):
        extra = f", raw={self.raw!r}, flag={self.flag!r}" if self.flag else ""
        return f"OutageValue({float(self)!r}{extra})"

    def __reduce__(self):
        return (OutageValue, (self.raw, self.flag))


def _resolve_variant(variant, alpha: float) -> Variant:
    if variant is None:
        return Variant.CLOSED_FORM if alpha == 2 else Variant.QUADRATURE
    variant = Variant(variant)
    if variant is Variant.CLOSED_FORM and alpha != 2:
        raise ValueError("the closed_form variant requires alpha == 2")
    return variant


# --- distance measures --------------------------------------------------------


@dataclass(frozen=True)
class DistanceMeasure:
    """Quadrature nodes and weights with ``E[g(d)] ≈ Σ_j weights[j]·g(nodes[j])``."""

    law: DistanceLaw
    region: Region
    nodes: np.ndarray
    weights: np.ndarray

    def path_loss(self, alpha: float) -> np.ndarray:
        return 1.0 + self.nodes**alpha

    def expect(self, values) -> float:
        return float(np.dot(self.weights, values))


def distance_measure(law: DistanceLaw, region: Region, order: int) -> DistanceMeasure:
    rule = chebyshev_rule(order)
    r = rule.map_nodes(region.inner, region.outer)
    half = 0.5 * (region.outer - region.inner)
    w = rule.sqrt_weights * half * distance_pdf(law, region, r)
    return DistanceMeasure(DistanceLaw(law), region, r, w)


def _near_measure(cfg, scheme, quad) -> DistanceMeasure:
    return distance_measure(Scheme(scheme).near_law, near_region(cfg), quad.n_b)


def _far_measure(cfg, scheme, quad) -> DistanceMeasure:
    return distance_measure(Scheme(scheme).far_law, far_region(cfg), quad.k_a)


# --- channel CDFs ---------------------------------------------------------------


def _expm1_ratio(k: float, span: float) -> float:
    """``(1 − e^{−k·span}) / k``, continuous through ``k = 0``."""
    if abs(k * span) < 1e-12:
        return span * (1.0 - 0.5 * k * span)
    return -math.expm1(-k * span) / k


def _laplace_r2_alpha2(law: DistanceLaw, region: Region, eps: float) -> float:
    """Exact ``E[e^{−ε d²}]`` for each distance law."""
    a2, b2 = region.inner**2, region.outer**2
    span = b2 - a2
    if law is DistanceLaw.RANDOM:
        return math.exp(-eps * a2) * _expm1_ratio(eps, span) / span
    pl = math.pi * region.density
    if law is DistanceLaw.NEAREST:
        return region.xi * math.exp(-eps * a2) * 0.5 * _expm1_ratio(pl + eps, span)
    # farthest: combine exponents so nothing overflows for dense rings
    return region.xi * math.exp(-eps * b2) * 0.5 * _expm1_ratio(pl - eps, span)


def _mean_r2_alpha2(law: DistanceLaw, region: Region) -> float:
    """Exact ``E[d²]``, used by the linearised α = 2 CDF."""
    a2, b2 = region.inner**2, region.outer**2
    span = b2 - a2
    if law is DistanceLaw.RANDOM:
        return 0.5 * (a2 + b2)
    pl = math.pi * region.density
    q = math.exp(-pl * span)
    # E[d² − a²] for a truncated exponential with rate πλ on [0, span]
    tail = 1.0 / pl - span * q / (1.0 - q)
    if law is DistanceLaw.NEAREST:
        return a2 + tail
    return b2 - tail


def channel_cdf(
    eps: float,
    law: DistanceLaw,
    region: Region,
    alpha: float,
    order: int = 30,
    variant=None,
) -> float:
    """``Pr(|h|²/(1 + d^α) < eps)`` with Exp(1) ``|h|²`` and ``d`` drawn from ``law`` on ``region``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return 0.0
    law = DistanceLaw(law)
    variant = _resolve_variant(variant, alpha)
    if variant is Variant.CLOSED_FORM:
        return float(-math.expm1(-eps) + math.exp(-eps) * (1.0 - _laplace_r2_alpha2(law, region, eps)))
    if variant is Variant.ORACLE:
        return _channel_cdf_oracle(eps, law, region, alpha)
    m = distance_measure(law, region, order)
    loss = m.path_loss(alpha)
    if variant is Variant.HIGH_SNR:
        return eps * m.expect(loss)
    return m.expect(-np.expm1(-loss * eps))


def _channel_cdf_oracle(eps, law, region, alpha) -> float:
    def f(r):
        return float(distance_pdf(law, region, r)) * -math.expm1(-(1.0 + r**alpha) * eps)

    return _quad(f, region.inner, region.outer, what="channel CDF")


def cdf_near_channel(eps: float, cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> float:
    """CDF of the near user's normalised gain ``Y`` under the scheme's near-user law."""
    return channel_cdf(eps, Scheme(scheme).near_law, near_region(cfg), cfg.alpha, quad.n_b, variant)


def cdf_far_channel(eps: float, cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> float:
    """CDF of the far user's normalised gain ``X`` under the scheme's far-user law."""
    return channel_cdf(eps, Scheme(scheme).far_law, far_region(cfg), cfg.alpha, quad.k_a, variant)


def _linear_cdf_slope(law, region, alpha, order, variant) -> float:
    """``E[L]`` such that ``F(ε) ≈ ε·E[L]`` for small ε."""
    if variant is Variant.CLOSED_FORM:
        return 1.0 + _mean_r2_alpha2(law, region)
    m = distance_measure(law, region, order)
    return m.expect(m.path_loss(alpha))


# --- near user ----------------------------------------------------------------


def outage_near(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> OutageValue:
    """Near-user outage: the relay fails to decode the far message, or rates are infeasible.

    Given ``ε_A ≥ ε_B`` the split that leaves exactly ``τ1`` for the far message also
    leaves enough for the near message, so the outage equals ``F_Y(ε_A)``.
    """
    variant = _resolve_variant(variant, cfg.alpha)
    th = derive_thresholds(cfg)
    if not th.sic_feasible:
        return OutageValue(1.0, "infeasible_sic")
    if not th.near_feasible:
        return OutageValue(1.0, "infeasible_near")
    scheme = Scheme(scheme)
    if variant is Variant.HIGH_SNR:
        slope = _linear_cdf_slope(scheme.near_law, near_region(cfg), cfg.alpha, quad.n_b, Variant.QUADRATURE)
        return OutageValue(th.eps_a * slope)
    return OutageValue(cdf_near_channel(th.eps_a, cfg, quad, scheme, variant))


def outage_near_rnrf(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, variant=None) -> OutageValue:
    return outage_near(cfg, quad, Scheme.RNRF, variant)


def outage_near_nnnf(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, variant=None) -> OutageValue:
    return outage_near(cfg, quad, Scheme.NNNF, variant)


def outage_near_high_snr(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF) -> OutageValue:
    """First-order approximation ``ε_A·E[1 + d_B^α]``, proportional to ``1/ρ``."""
    return outage_near(cfg, quad, scheme, Variant.HIGH_SNR)


# --- far user -----------------------------------------------------------------


@dataclass(frozen=True)
class AuxiliaryConstants:
    """Every quadrature ingredient of a far-user evaluation, exposed for inspection.

    Attributes:
        near_nodes, near_weights: distance nodes and PDF-weighted quadrature weights
            for the near user.
        far_nodes, far_weights: the same for the far user.
        threshold_nodes: nodes ``t_m`` on ``(0, ε_A)`` for the direct-link gain.
        cheb_near, cheb_far, cheb_threshold: raw Chebyshev nodes on [-1, 1].
        omega_near, omega_far, omega_threshold: Chebyshev weights ``π/order``.
        residual_sinr: ``τ1 − SINR_direct(t_m)`` at each threshold node, positive.
        xi_near, xi_far: normalisers of the nearest/farthest distance PDFs
            (``nan`` for a random pick or an empty process).
        zeta1: common prefactor ``−ω_N ω_K ω_M ε_A / (4 (R_A + R_C) η ρ)`` of the
            RNRF expansion.
        c0: expansion constant ``γ − 1/2``.
    """

    near_nodes: np.ndarray
    near_weights: np.ndarray
    far_nodes: np.ndarray
    far_weights: np.ndarray
    threshold_nodes: np.ndarray
    cheb_near: np.ndarray
    cheb_far: np.ndarray
    cheb_threshold: np.ndarray
    omega_near: float
    omega_far: float
    omega_threshold: float
    residual_sinr: np.ndarray
    xi_near: float
    xi_far: float
    zeta1: float
    c0: float
    eps_a: float
    tau1: float


def auxiliary_constants(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF) -> AuxiliaryConstants:
    th = derive_thresholds(cfg)
    eps = th.require_sic()
    scheme = Scheme(scheme)
    nm, fm = _near_measure(cfg, scheme, quad), _far_measure(cfg, scheme, quad)
    rule_n, rule_k, rule_m = chebyshev_rule(quad.n_b), chebyshev_rule(quad.k_a), chebyshev_rule(quad.m_t)
    t = rule_m.map_nodes(0.0, eps)
    nr, fr = near_region(cfg), far_region(cfg)

    def xi(region, law):
        if law is DistanceLaw.RANDOM or region.density <= 0:
            return float("nan")
        return region.xi

    if cfg.eta > 0:
        zeta1 = -(rule_n.weight * rule_k.weight * rule_m.weight * eps) / (4.0 * (cfg.r_da + cfg.r_dc) * cfg.eta * cfg.rho)
    else:
        zeta1 = float("-inf")
    return AuxiliaryConstants(
        near_nodes=nm.nodes,
        near_weights=nm.weights,
        far_nodes=fm.nodes,
        far_weights=fm.weights,
        threshold_nodes=t,
        cheb_near=rule_n.nodes,
        cheb_far=rule_k.nodes,
        cheb_threshold=rule_m.nodes,
        omega_near=rule_n.weight,
        omega_far=rule_k.weight,
        omega_threshold=rule_m.weight,
        residual_sinr=_residual_sinr(cfg, th.tau1, t),
        xi_near=xi(nr, scheme.near_law),
        xi_far=xi(fr, scheme.far_law),
        zeta1=zeta1,
        c0=c0_constant(),
        eps_a=eps,
        tau1=th.tau1,
    )


def _residual_sinr(cfg: NetworkConfig, tau1: float, x):
    """``τ1 − ρ x p1 / (ρ x p2 + 1)``: SINR still missing after a direct gain ``x``."""
    x = np.asarray(x, dtype=float)
    return tau1 - cfg.rho * x * cfg.p1_sq / (cfg.rho * x * cfg.p2_sq + 1.0)


def _near_log_moments(cfg, scheme, quad, closed: bool) -> tuple[float, float]:
    """``(E[L_B], E[L_B ln L_B])`` over the near-user law."""
    scheme = Scheme(scheme)
    if closed and scheme.near_law is DistanceLaw.RANDOM:
        r2 = cfg.r_db**2
        m1 = 0.5 * (r2 + 2.0)
        m2 = (1.0 + r2) ** 2 * math.log1p(r2) / (2.0 * r2) - 0.25 * (r2 + 2.0)
        return m1, m2
    m = _near_measure(cfg, scheme, quad)
    loss = m.path_loss(cfg.alpha)
    return m.expect(loss), m.expect(loss * np.log(loss))


def _theta1_expansion(cfg, quad, scheme, eps, tau1, closed: bool) -> float:
    """Relay-decoded outage term using the small-argument Bessel expansion.

    ``1 − u K1(u) ≈ −(u²/4)(ln(u²/4) + 2 c0)`` with ``u²/4 = χ L_B L_A / (ηρ)``;
    the near-distance average factors out as ``E[L_B]`` and ``E[L_B ln L_B]``.
    """
    m1, m2 = _near_log_moments(cfg, scheme, quad, closed)
    fm = _far_measure(cfg, scheme, quad)
    la = fm.path_loss(cfg.alpha)[:, None]
    rule = chebyshev_rule(quad.m_t)
    t = rule.map_nodes(0.0, eps)[None, :]
    chi = _residual_sinr(cfg, tau1, t)
    er = cfg.eta * cfg.rho
    bracket = m1 * (np.log(chi * la / er) + 2.0 * c0_constant()) + m2
    inner = 0.5 * eps * np.sum(rule.sqrt_weights[None, :] * chi * np.exp(-la * t) * bracket, axis=1)
    return float(-np.dot(fm.weights, la[:, 0] ** 2 * inner) / er)


@dataclass(frozen=True)
class FarOutageParts:
    theta1: float
    theta2: float

    @property
    def total(self) -> float:
        return self.theta1 + self.theta2


def far_outage_parts(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> FarOutageParts:
    """The two additive terms of the cooperative far-user outage, unclamped."""
    th = derive_thresholds(cfg)
    eps = th.require_sic()
    scheme = Scheme(scheme)
    variant = _resolve_variant(variant, cfg.alpha)
    if variant is Variant.ORACLE:
        return _far_oracle_parts(cfg, scheme)
    if eps == 0:
        return FarOutageParts(0.0, 0.0)
    closed = variant is Variant.CLOSED_FORM
    nr, fr = near_region(cfg), far_region(cfg)
    if variant is Variant.HIGH_SNR:
        theta2 = (
            eps
            * eps
            * _linear_cdf_slope(scheme.near_law, nr, cfg.alpha, quad.n_b, variant)
            * _linear_cdf_slope(scheme.far_law, fr, cfg.alpha, quad.k_a, variant)
        )
        fy = fx = None
    else:
        fy = channel_cdf(eps, scheme.near_law, nr, cfg.alpha, quad.n_b, variant)
        fx = channel_cdf(eps, scheme.far_law, fr, cfg.alpha, quad.k_a, variant)
        theta2 = fx * fy
    if cfg.eta == 0:
        # no harvested power: the relay adds nothing, so theta1 = Pr(X < ε, Y ≥ ε)
        if fx is None:
            fx = channel_cdf(eps, scheme.far_law, fr, cfg.alpha, quad.k_a, Variant.QUADRATURE)
            fy = channel_cdf(eps, scheme.near_law, nr, cfg.alpha, quad.n_b, Variant.QUADRATURE)
        return FarOutageParts(fx * (1.0 - fy), theta2)
    return FarOutageParts(_theta1_expansion(cfg, quad, scheme, eps, th.tau1, closed), theta2)


def outage_far(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> OutageValue:
    """Cooperative far-user outage, clamped to [0, 1] with the raw value kept.

    Raises:
        InfeasibleSICError: if ``p1² − τ1 p2² ≤ 0``.
    """
    return OutageValue(far_outage_parts(cfg, quad, scheme, variant).total)


def outage_far_rnrf(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, variant=None) -> OutageValue:
    return outage_far(cfg, quad, Scheme.RNRF, variant)


def outage_far_nnnf(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, variant=None) -> OutageValue:
    return outage_far(cfg, quad, Scheme.NNNF, variant)


def outage_far_nnff(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, variant=None) -> OutageValue:
    return outage_far(cfg, quad, Scheme.NNFF, variant)


def outage_far_noncooperative(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> OutageValue:
    """Far-user outage on the direct link alone, ``F_X(ε_A)``."""
    th = derive_thresholds(cfg)
    eps = th.require_sic()
    variant = _resolve_variant(variant, cfg.alpha)
    scheme = Scheme(scheme)
    if variant is Variant.HIGH_SNR:
        return OutageValue(eps * _linear_cdf_slope(scheme.far_law, far_region(cfg), cfg.alpha, quad.k_a, Variant.QUADRATURE))
    return OutageValue(cdf_far_channel(eps, cfg, quad, scheme, variant))


# --- exact Bessel-kernel oracle -------------------------------------------------


def _quad(f, a, b, what, epsabs=ORACLE_EPSABS, epsrel=1e-9, limit=200, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, points=points)
        except integrate.IntegrationWarning as exc:
            raise IntegrationError(f"{what}: adaptive quadrature on [{a}, {b}] did not converge ({exc})") from None
    return val


def _relay_decoded_kernel(cfg, tau1, eps, lb, la) -> float:
    """``∫_0^ε L_A e^{−L_A x} (1 − u K1(u)) dx`` with ``u = 2√(χ(x) L_B L_A / (ηρ))``."""
    scale = 4.0 * lb * la / (cfg.eta * cfg.rho)
    rho, p1, p2 = cfg.rho, cfg.p1_sq, cfg.p2_sq

    def f(x):
        chi = tau1 - rho * x * p1 / (rho * x * p2 + 1.0)
        if chi <= 0.0:
            return 0.0
        return la * math.exp(-la * x) * one_minus_x_k1(math.sqrt(chi * scale))

    return _quad(f, 0.0, eps, "relay-decoded kernel", epsabs=ORACLE_EPSABS * 1e-3)


def _far_oracle_parts(cfg: NetworkConfig, scheme: Scheme) -> FarOutageParts:
    th = derive_thresholds(cfg)
    eps = th.require_sic()
    nr, fr = near_region(cfg), far_region(cfg)
    fx = _channel_cdf_oracle(eps, scheme.far_law, fr, cfg.alpha) if eps > 0 else 0.0
    fy = _channel_cdf_oracle(eps, scheme.near_law, nr, cfg.alpha) if eps > 0 else 0.0
    if eps == 0:
        return FarOutageParts(0.0, 0.0)
    if cfg.eta == 0:
        return FarOutageParts(fx * (1.0 - fy), fx * fy)
    alpha = cfg.alpha

    def over_far(rb):
        lb = 1.0 + rb**alpha

        def g(ra):
            la = 1.0 + ra**alpha
            return float(distance_pdf(scheme.far_law, fr, ra)) * _relay_decoded_kernel(cfg, th.tau1, eps, lb, la)

        inner = _quad(g, fr.inner, fr.outer, "far-user distance integral")
        return float(distance_pdf(scheme.near_law, nr, rb)) * math.exp(-lb * eps) * inner

    theta1 = _quad(over_far, nr.inner, nr.outer, "near-user distance integral")
    return FarOutageParts(theta1, fx * fy)


def outage_far_oracle(cfg: NetworkConfig, scheme=Scheme.RNRF) -> OutageValue:
    """Exact-kernel far-user outage with the near-to-far distance taken as ``d_A``.

    Integrates ``1 − u K1(u)`` without the small-argument expansion, so it is valid
    at every SNR. Slow (nested adaptive quadrature); intended as a reference.

    Raises:
        IntegrationError: if any nested integral fails to converge.
    """
    return OutageValue(_far_oracle_parts(cfg, Scheme(scheme)).total)


def outage_far_rnrf_oracle(cfg: NetworkConfig) -> OutageValue:
    return outage_far_oracle(cfg, Scheme.RNRF)


def outage_near_oracle(cfg: NetworkConfig, scheme=Scheme.RNRF) -> OutageValue:
    """Near-user outage with the distance average done by adaptive quadrature."""
    return outage_near(cfg, DEFAULT_QUAD, scheme, Variant.ORACLE)


# --- dispatch -------------------------------------------------------------------


def evaluate(cfg: NetworkConfig, scheme, user, variant=None, quad: QuadratureSpec = DEFAULT_QUAD, cooperative: bool = True) -> OutageValue:
    """Single entry point used by sweeps: outage of ``user`` under ``scheme``."""
    if User(user) is User.NEAR:
        return outage_near(cfg, quad, scheme, variant)
    if cooperative:
        return outage_far(cfg, quad, scheme, variant)
    return outage_far_noncooperative(cfg, quad, scheme, variant)


# --- diversity and throughput -------------------------------------------------


@dataclass(frozen=True)
class DiversityFit:
    """Fitted decay exponent with a Student-t confidence band."""

    slope: float
    stderr: float
    low: float
    high: float
    points: int
    model: str


def _fit_arrays(points: Iterable[Sequence[float]], model: str):
    if model not in ("plain", "log-corrected"):
        raise ValueError(f"unknown diversity model {model!r}")
    pts = [(float(r), float(p)) for r, p in points]
    if len(pts) < 3:
        raise DegenerateFitError(f"need at least 3 points, got {len(pts)}")
    rho = np.array([r for r, _ in pts])
    prob = np.array([p for _, p in pts])
    if not np.all(np.isfinite(prob)) or np.any(prob <= 0.0) or np.any(prob >= 1.0):
        raise DegenerateFitError("probabilities must lie strictly inside (0, 1)")
    if np.any(rho <= 0):
        raise DegenerateFitError("SNR values must be positive")
    if model == "log-corrected" and np.any(rho <= 1.0):
        raise DegenerateFitError("the log-corrected model needs rho > 1")
    x = np.log(rho)
    if np.ptp(x) == 0:
        raise DegenerateFitError("all points share one SNR")
    y = -np.log(prob)
    if model == "log-corrected":
        # P = c ln(ρ) / ρ^d  ⇒  −ln P + ln ln ρ = d ln ρ − ln c
        y = y + np.log(x)
    return x, y


def diversity_fit(points: Iterable[Sequence[float]], model: str = "plain") -> float:
    """Least-squares decay exponent of an outage curve.

    Args:
        points: ``(rho, probability)`` pairs with linear ``rho``.
        model: ``"plain"`` fits ``P ∝ ρ^−d``; ``"log-corrected"`` fits ``P ∝ ln ρ / ρ^d``.

    Returns:
        The exponent ``d``.

    Raises:
        DegenerateFitError: fewer than three points, or probabilities at 0/1.
    """
    x, y = _fit_arrays(points, model)
    return float(np.polyfit(x, y, 1)[0])


def diversity_fit_band(points: Iterable[Sequence[float]], model: str = "plain", confidence: float = 0.95) -> DiversityFit:
    x, y = _fit_arrays(points, model)
    res = stats.linregress(x, y)
    n = len(x)
    if n > 2:
        half = stats.t.ppf(0.5 + confidence / 2.0, n - 2) * res.stderr
    else:  # pragma: no cover - guarded by _fit_arrays
        half = float("inf")
    return DiversityFit(float(res.slope), float(res.stderr), float(res.slope - half), float(res.slope + half), n, model)


def throughput_from_outages(p_far: float, p_near: float, r1: float, r2: float) -> float:
    return (1.0 - p_far) * r1 + (1.0 - p_near) * r2


def throughput_delay_sensitive(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD, scheme=Scheme.RNRF, variant=None) -> float:
    """Delay-sensitive throughput ``(1 − P_far) R1 + (1 − P_near) R2`` in BPCU."""
    p_far = outage_far(cfg, quad, scheme, variant)
    p_near = outage_near(cfg, quad, scheme, variant)
    return throughput_from_outages(p_far, p_near, cfg.r1, cfg.r2)
