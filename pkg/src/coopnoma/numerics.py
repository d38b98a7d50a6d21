"""Gauss-Chebyshev quadrature and the special functions used by the outage formulas.

The quadrature rule used throughout the analytic engine approximates a plain
integral over ``[-1, 1]``::

    ∫ f(x) dx  ≈  Σ_n (π/N) √(1 − φ_n²) f(φ_n),    φ_n = cos((2n − 1)π / 2N)

i.e. a Chebyshev-Gauss rule of the first kind applied to ``f(x)√(1 − x²)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209008240243


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature orders for the three kinds of integral in the outage formulas.

    Attributes:
        n_b: order for integrals over the near-user disc.
        k_a: order for integrals over the far-user ring.
        m_t: order for the integral over the channel threshold ``x ∈ (0, ε_A)``.
    """

    n_b: int = 30
    k_a: int = 30
    m_t: int = 30

    def __post_init__(self):
        for name in ("n_b", "k_a", "m_t"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"quadrature order {name} must be a positive integer, got {value!r}")

    @classmethod
    def uniform(cls, order: int) -> "QuadratureSpec":
        return cls(order, order, order)

    @classmethod
    def parse(cls, text: str) -> "QuadratureSpec":
        """Parse ``"N,K,M"`` (or a single ``"N"`` used for all three)."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"invalid quadrature spec {text!r}") from None
        if len(values) == 1:
            return cls.uniform(values[0])
        if len(values) != 3:
            raise ValueError(f"quadrature spec needs 1 or 3 orders, got {text!r}")
        return cls(*values)

    def __str__(self):
        return f"{self.n_b},{self.k_a},{self.m_t}"


@dataclass(frozen=True, eq=False)
class ChebyshevRule:
    """Chebyshev-Gauss nodes ``φ_n`` and their common weight ``ω = π/N``."""

    nodes: np.ndarray
    weight: float

    @property
    def order(self) -> int:
        return len(self.nodes)

    @property
    def sqrt_weights(self) -> np.ndarray:
        """``ω √(1 − φ_n²)``, the effective weights for a plain integral on [-1, 1]."""
        return self.weight * np.sqrt(1.0 - self.nodes**2)

    def integrate(self, f, a: float = -1.0, b: float = 1.0) -> float:
        """Approximate ``∫_a^b f(x) dx``; ``f`` must accept numpy arrays."""
        half = 0.5 * (b - a)
        x = half * (self.nodes + 1.0) + a
        return float(half * np.sum(self.sqrt_weights * f(x)))

    def weighted_moment(self, g) -> float:
        """Approximate ``∫_{-1}^{1} g(x) √(1 − x²) dx`` (exact for polynomial g of degree ≤ 2N − 3)."""
        return float(self.weight * np.sum((1.0 - self.nodes**2) * g(self.nodes)))

    def map_nodes(self, a: float, b: float) -> np.ndarray:
        """Nodes affinely mapped from [-1, 1] onto [a, b]."""
        return 0.5 * (b - a) * (self.nodes + 1.0) + a


@lru_cache(maxsize=64)
def _rule(order: int) -> ChebyshevRule:
    n = np.arange(1, order + 1)
    nodes = np.cos((2 * n - 1) * np.pi / (2 * order))
    nodes.setflags(write=False)
    return ChebyshevRule(nodes=nodes, weight=math.pi / order)


def chebyshev_rule(order: int) -> ChebyshevRule:
    if int(order) != order or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    return _rule(int(order))


def digamma_int(n: int) -> float:
    """ψ(n) for a positive integer n, via ψ(n) = −γ + H_{n−1}."""
    if n < 1:
        raise ValueError("digamma_int needs a positive integer")
    return -EULER_GAMMA + math.fsum(1.0 / k for k in range(1, n))


def c0_constant() -> float:
    """``c0 = −ψ(1)/2 − ψ(2)/2``, which equals ``γ − 1/2``."""
    return -0.5 * digamma_int(1) - 0.5 * digamma_int(2)


# --- modified Bessel function of the second kind, order one -----------------

_SERIES_TERMS = 30
_CF_MAXIT = 10000
_CF_EPS = 1e-16


def _k1_parts_small(x: float) -> tuple[float, float]:
    """Return (I1(x)·ln(x/2), S) with K1(x) = 1/x + I1 ln(x/2) − (x/4)·S, for 0 < x ≤ 2."""
    y = 0.25 * x * x
    term = 1.0  # y^k / (k! (k+1)!)
    psi_k1 = -EULER_GAMMA  # ψ(k+1)
    psi_k2 = 1.0 - EULER_GAMMA  # ψ(k+2)
    i1_sum = 0.0
    s = 0.0
    for k in range(_SERIES_TERMS):
        i1_sum += term
        s += (psi_k1 + psi_k2) * term
        psi_k1 += 1.0 / (k + 1)
        psi_k2 += 1.0 / (k + 2)
        term *= y / ((k + 1) * (k + 2))
        if term < 1e-18 * i1_sum:
            i1_sum += term
            s += (psi_k1 + psi_k2) * term
            break
    i1 = 0.5 * x * i1_sum
    return i1 * math.log(0.5 * x), s


def _k1_large(x: float) -> float:
    # Steed's continued fraction CF2 (Temme's method) at order 0, recurring up to K1.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _CF_MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _CF_EPS:
            break
    else:  # pragma: no cover - the fraction converges in < 100 steps for x ≥ 2
        raise ArithmeticError(f"K1 continued fraction did not converge at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    return k0 * (x + 0.5 - h) / x


def _k1_scalar(x: float) -> float:
    if not x > 0.0:
        raise ValueError(f"bessel_k1 is defined for x > 0, got {x!r}")
    if x <= 2.0:
        log_term, s = _k1_parts_small(x)
        return 1.0 / x + log_term - 0.25 * x * s
    if x > 705.0:
        return 0.0
    return _k1_large(x)


def bessel_k1(x):
    """Modified Bessel function of the second kind ``K1(x)`` for ``x > 0``.

    Power series below ``x = 2``, Steed's continued fraction above. Accepts a
    scalar or an array; relative accuracy is about 1e-14 across the range.

    Raises:
        ValueError: if any argument is ``≤ 0`` or NaN.
    """
    if np.ndim(x) == 0:
        return _k1_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_k1_scalar, otypes=[float])(arr)


def one_minus_x_k1(x: float) -> float:
    """``1 − x·K1(x)`` without the cancellation that the direct form suffers near 0."""
    if not x > 0.0:
        if x == 0.0:
            return 0.0
        raise ValueError(f"one_minus_x_k1 needs x ≥ 0, got {x!r}")
    if x <= 2.0:
        log_term, s = _k1_parts_small(x)
        return -x * log_term + 0.25 * x * x * s
    return 1.0 - x * _k1_scalar(x)


def small_argument_xk1(x):
    """Leading small-argument expansion ``x K1(x) ≈ 1 + (x²/2)(ln(x/2) + c0)``."""
    x = np.asarray(x, dtype=float)
    out = 1.0 + 0.5 * x * x * (np.log(0.5 * x) + c0_constant())
    return float(out) if out.ndim == 0 else out
