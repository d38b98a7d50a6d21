"""User deployments: PPP regions, distance laws of the selected users, and topology draws.

Near users live in a disc around the BS, far users in a ring. A selection scheme
picks one user from each group, and only the picked user's distance matters, so
distances are drawn directly from their marginal laws by inverse transform:

* random pick: the point is uniform in the region;
* nearest pick: survival ``(e^{-πλ(r²−a²)} − e^{-πλ(b²−a²)}) / (1 − e^{-πλ(b²−a²)})``;
* farthest pick: CDF ``(e^{-πλ(b²−r²)} − e^{-πλ(b²−a²)}) / (1 − e^{-πλ(b²−a²)})``.

Both are conditioned on the region holding at least one user.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .model import NetworkConfig


class DistanceLaw(enum.IntEnum):
    RANDOM = 0
    NEAREST = 1
    FARTHEST = 2


class Scheme(str, enum.Enum):
    """User-pair selection scheme: (near pick, far pick)."""

    RNRF = "rnrf"
    NNNF = "nnnf"
    NNFF = "nnff"

    @property
    def near_law(self) -> DistanceLaw:
        return DistanceLaw.RANDOM if self is Scheme.RNRF else DistanceLaw.NEAREST

    @property
    def far_law(self) -> DistanceLaw:
        return {
            Scheme.RNRF: DistanceLaw.RANDOM,
            Scheme.NNNF: DistanceLaw.NEAREST,
            Scheme.NNFF: DistanceLaw.FARTHEST,
        }[self]

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> list["Scheme"]:
        text = text.strip().lower()
        if text == "all":
            return list(cls)
        return [cls(part.strip()) for part in text.split(",")]


@dataclass(frozen=True)
class Region:
    """A disc (``inner == 0``) or ring hosting a homogeneous PPP."""

    kind: str
    inner: float
    outer: float
    density: float

    def __post_init__(self):
        if self.kind not in ("disc", "ring"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not self.outer > self.inner >= 0:
            raise ValueError("need outer > inner >= 0")
        if self.kind == "disc" and self.inner != 0:
            raise ValueError("a disc has inner radius 0")
        if self.density < 0:
            raise ValueError("density must be nonnegative")

    @classmethod
    def disc(cls, radius: float, density: float) -> "Region":
        return cls("disc", 0.0, radius, density)

    @classmethod
    def ring(cls, inner: float, outer: float, density: float) -> "Region":
        return cls("ring", inner, outer, density)

    @property
    def area(self) -> float:
        return math.pi * (self.outer**2 - self.inner**2)

    @property
    def mean_count(self) -> float:
        return self.density * self.area

    @property
    def span(self) -> float:
        """``πλ(b² − a²)``, the mean count, used by the nearest/farthest laws."""
        return self.mean_count

    @property
    def xi(self) -> float:
        """Normaliser ``2πλ / (1 − e^{−πλ(b² − a²)})`` of the nearest/farthest PDFs."""
        if self.density <= 0:
            raise ValueError("nearest/farthest laws need a positive density")
        return 2.0 * math.pi * self.density / -math.expm1(-self.span)


def near_region(cfg: "NetworkConfig") -> Region:
    return Region.disc(cfg.r_db, cfg.lambda_b)


def far_region(cfg: "NetworkConfig") -> Region:
    return Region.ring(cfg.r_dc, cfg.r_da, cfg.lambda_a)


def sample_count(region: Region, rng: np.random.Generator, size=None):
    """Number of users in the region: Poisson with mean ``λ·area``."""
    return rng.poisson(region.mean_count, size=size)


# --- inverse transforms (u ∈ [0, 1) → distance) -----------------------------


def random_distance_from_uniform(region: Region, u):
    a2, b2 = region.inner**2, region.outer**2
    return np.sqrt(a2 + np.asarray(u) * (b2 - a2))


def nearest_distance_from_uniform(region: Region, u):
    pl = math.pi * region.density
    if pl <= 0:
        raise ValueError("nearest-user law needs a positive density")
    q1 = -math.expm1(-region.span)
    with np.errstate(divide="ignore"):
        r2 = region.inner**2 - np.log1p(-np.asarray(u) * q1) / pl
    return np.sqrt(np.clip(r2, region.inner**2, region.outer**2))


def farthest_distance_from_uniform(region: Region, u):
    pl = math.pi * region.density
    if pl <= 0:
        raise ValueError("farthest-user law needs a positive density")
    q1 = -math.expm1(-region.span)
    with np.errstate(divide="ignore"):
        r2 = region.outer**2 + np.log1p(-(1.0 - np.asarray(u)) * q1) / pl
    return np.sqrt(np.clip(r2, region.inner**2, region.outer**2))


_FROM_UNIFORM = {
    DistanceLaw.RANDOM: random_distance_from_uniform,
    DistanceLaw.NEAREST: nearest_distance_from_uniform,
    DistanceLaw.FARTHEST: farthest_distance_from_uniform,
}


def distance_from_uniform(law: DistanceLaw, region: Region, u):
    return _FROM_UNIFORM[DistanceLaw(law)](region, u)


def sample_random_distance(region: Region, rng: np.random.Generator, size=None):
    return random_distance_from_uniform(region, rng.random(size))


def sample_nearest_distance(region: Region, rng: np.random.Generator, size=None):
    return nearest_distance_from_uniform(region, rng.random(size))


def sample_farthest_distance(region: Region, rng: np.random.Generator, size=None):
    if region.kind != "ring":
        raise ValueError("the farthest-user law is only used on the far-user ring")
    return farthest_distance_from_uniform(region, rng.random(size))


# --- closed-form CDFs and PDFs ----------------------------------------------


def distance_cdf(law: DistanceLaw, region: Region, r):
    r = np.clip(np.asarray(r, dtype=float), region.inner, region.outer)
    a2, b2 = region.inner**2, region.outer**2
    law = DistanceLaw(law)
    if law is DistanceLaw.RANDOM:
        return (r**2 - a2) / (b2 - a2)
    pl = math.pi * region.density
    q1 = -math.expm1(-region.span)
    if law is DistanceLaw.NEAREST:
        # 1 − survival = (1 − e^{−πλ(r² − a²)}) / (1 − e^{−πλ(b² − a²)})
        return -np.expm1(-pl * (r**2 - a2)) / q1
    return (np.exp(-pl * (b2 - r**2)) - math.exp(-region.span)) / q1


def distance_pdf(law: DistanceLaw, region: Region, r):
    r = np.asarray(r, dtype=float)
    inside = (r >= region.inner) & (r <= region.outer)
    a2, b2 = region.inner**2, region.outer**2
    law = DistanceLaw(law)
    if law is DistanceLaw.RANDOM:
        out = 2.0 * r / (b2 - a2)
    elif law is DistanceLaw.NEAREST:
        out = region.xi * r * np.exp(-math.pi * region.density * (r**2 - a2))
    else:
        out = region.xi * r * np.exp(-math.pi * region.density * (b2 - r**2))
    return np.where(inside, out, 0.0)


# --- topologies --------------------------------------------------------------


@dataclass(frozen=True)
class TopologyDraw:
    """Geometry of one selected pair: BS→far, BS→near, the angle between them, near→far."""

    d_a: float
    d_b: float
    theta: float
    d_c: float


def relay_distance(d_a, d_b, theta):
    """Near-to-far distance by the law of cosines."""
    sq = d_a * d_a + d_b * d_b - 2.0 * d_a * d_b * np.cos(theta)
    return np.sqrt(np.maximum(sq, 0.0))


def topology_from_uniforms(cfg: "NetworkConfig", scheme: Scheme, u_near, u_far, u_theta) -> TopologyDraw:
    scheme = Scheme(scheme)
    d_b = float(distance_from_uniform(scheme.near_law, near_region(cfg), u_near))
    d_a = float(distance_from_uniform(scheme.far_law, far_region(cfg), u_far))
    theta = 2.0 * math.pi * float(u_theta)
    return TopologyDraw(d_a=d_a, d_b=d_b, theta=theta, d_c=float(relay_distance(d_a, d_b, theta)))


def draw_topology(cfg: "NetworkConfig", scheme: Scheme, rng: np.random.Generator) -> TopologyDraw:
    u = rng.random(3)
    return topology_from_uniforms(cfg, scheme, u[0], u[1], u[2])


def materialize_ppp(region: Region, rng: np.random.Generator) -> np.ndarray:
    """Draw a full PPP realization in the region; returns an ``(n, 2)`` array of points.

    Debug helper for validating the marginal samplers against explicit point sets.
    """
    n = sample_count(region, rng)
    r = sample_random_distance(region, rng, size=n)
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def select_distance(points: np.ndarray, law: DistanceLaw) -> float | None:
    """Distance of the user a selection law would pick from an explicit point set."""
    if len(points) == 0:
        return None
    d = np.hypot(points[:, 0], points[:, 1])
    law = DistanceLaw(law)
    if law is DistanceLaw.NEAREST:
        return float(d.min())
    if law is DistanceLaw.FARTHEST:
        return float(d.max())
    return float(d[0])
