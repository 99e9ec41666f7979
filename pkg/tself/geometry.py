"""
tself.geometry - Poincaré disk, Lorentz model and their t-selves
================================================================

Disk points are complex numbers strictly inside the unit circle. The disk
metric used throughout has curvature -1:

    d(0, z) = log((1 + r)/(1 - r)) = 2·atanh(r),   r = |z|

and the two-point distance is the origin case after a Möbius translation.
A t-self replaces any distortion d with lift(d, t) = log_t(exp d).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from logging import getLogger
from typing import NamedTuple, Optional, Union

import numpy as np

from tself.errors import DomainError
from tself.tempered import T_CLASSICAL_EPS, Temper, is_classical, lift, lift_array

log = getLogger("tself")

# Largest encodable norm; 1 - 1e-15 is exactly representable with margin
MAX_RADIUS = 1.0 - 1e-15
LN10 = math.log(10.0)


# === Poincaré disk ===

@dataclass(frozen=True)
class DiskPoint:
    """
    Point of the open unit disk. Norms in (MAX_RADIUS, 1) are pulled back to
    MAX_RADIUS with `clamped=True`; norms >= 1 are rejected.
    """

    z: complex
    clamped: bool = False

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"disk point must be finite, got {z!r}")
        r = abs(z)
        if r >= 1.0:
            raise DomainError(f"|z| = {r!r} is not strictly inside the unit disk")
        if r > MAX_RADIUS:
            z = z * (MAX_RADIUS / r)
            object.__setattr__(self, "clamped", True)
        object.__setattr__(self, "z", z)

    @classmethod
    def onto_disk(cls, z: complex) -> "DiskPoint":
        """For numerically produced points: clamp instead of rejecting |z| >= 1."""
        z = complex(z)
        r = abs(z)
        if r > MAX_RADIUS:
            return cls(z * (MAX_RADIUS / r), clamped=True)
        return cls(z)

    @classmethod
    def from_polar(cls, r: float, theta: float) -> "DiskPoint":
        return cls(cmath.rect(r, theta))

    @property
    def r(self) -> float:
        return abs(self.z)

    @property
    def angle(self) -> float:
        return cmath.phase(self.z)

    @property
    def xy(self) -> tuple[float, float]:
        return self.z.real, self.z.imag


Pointish = Union[DiskPoint, complex, float]
ORIGIN = DiskPoint(0j)


def _c(p: Pointish) -> complex:
    return p.z if isinstance(p, DiskPoint) else complex(p)


def mobius_translate(z: Pointish, a: Pointish) -> DiskPoint:
    """Disk isometry sending a to the origin: (z - a)/(1 - conj(a)·z)."""
    z, a = _c(z), _c(a)
    return DiskPoint.onto_disk((z - a) / (1.0 - a.conjugate() * z))


def inverse_mobius_translate(w: Pointish, a: Pointish) -> DiskPoint:
    """Inverse of mobius_translate(·, a): sends the origin back to a."""
    w, a = _c(w), _c(a)
    return DiskPoint.onto_disk((w + a) / (1.0 + a.conjugate() * w))


def poincare_dist_origin(r: float) -> float:
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")
    return 2.0 * math.atanh(r)


def radius_for_distance(d: float) -> float:
    """Inverse of poincare_dist_origin."""
    return min(math.tanh(0.5 * d), MAX_RADIUS)


def poincare_dist(x: Pointish, y: Pointish) -> float:
    x, y = _c(x), _c(y)
    if x == y:
        return 0.0
    r = abs((y - x) / (1.0 - x.conjugate() * y))
    return poincare_dist_origin(min(r, MAX_RADIUS))


def t_self_dist(x: Pointish, y: Pointish, t: Temper) -> float:
    return lift(poincare_dist(x, y), t)


def t_self_origin_dist(r: float, t: Temper) -> float:
    """d^(t)(0, z) for |z| = r, i.e. log_t((1 + r)/(1 - r))."""
    return lift(poincare_dist_origin(r), t)


def weakened_triangle_gap(x: Pointish, y: Pointish, z: Pointish, t: Temper) -> float:
    """
    d(x,y) + d(y,z) + max(0, 1-t)·d(x,y)·d(y,z) - d(x,z) for the t-self
    distance; never negative.
    """
    dxy, dyz, dxz = t_self_dist(x, y, t), t_self_dist(y, z, t), t_self_dist(x, z, t)
    return dxy + dyz + max(0.0, 1.0 - t) * dxy * dyz - dxz


# === Radius remapping ===

class RadiusMap(NamedTuple):
    radius: float
    saturated: bool


def embed_t_radius(r: float, t: Temper) -> RadiusMap:
    """
    Norm r' whose t-self distance to the origin equals the plain distance of
    norm r: log_t((1+r')/(1-r')) = log((1+r)/(1-r)).

    Closed form r' = (E - 1)/(E + 1) = tanh(log(E)/2), E = exp_t(D). When
    exp_t(D) diverges (t > 1, D >= 1/(t-1)) or r' rounds to the boundary, the
    result is MAX_RADIUS with `saturated=True`.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"embed_t_radius needs r in [0, 1), got {r!r}")
    if r == 0.0 or is_classical(t):
        return RadiusMap(r, False)

    d = poincare_dist_origin(r)
    x = (1.0 - t) * d
    if x <= -1.0:
        log.warning("embed_t_radius(%r, t=%r) saturates: D=%.4g >= 1/(t-1)", r, t, d)
        return RadiusMap(MAX_RADIUS, True)

    log_e = math.log1p(x) / (1.0 - t)
    radius = math.tanh(0.5 * log_e)
    if radius > MAX_RADIUS:
        log.warning("embed_t_radius(%r, t=%r) rounds to the boundary", r, t)
        return RadiusMap(MAX_RADIUS, True)
    return RadiusMap(radius, False)


def isoline_radius(p: float, t: Temper) -> float:
    """
    Disk norm of the posterior isoline p: |2p - 1| remapped by embed_t_radius.
    p in {0, 1} is the boundary circle and returns 1.0.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"isoline probability must lie in [0, 1], got {p!r}")
    r = abs(2.0 * p - 1.0)
    if r >= 1.0:
        return 1.0
    return embed_t_radius(r, t).radius


# === Hyperbolicity and encoding ===

def t_for_hyperbolicity(tau: float) -> Temper:
    """t = 1 + 1/tau, for which sup_z lift(z, t) = tau."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return 1.0 + 1.0 / tau


def lift_supremum(t: Temper) -> float:
    """sup over z >= 0 of lift(z, t): 1/(t-1) for t > 1, unbounded otherwise."""
    return 1.0 / (t - 1.0) if t > 1.0 and not is_classical(t) else math.inf


def _log_encodable(k: float) -> float:
    # log(2·10^k - 1) without forming 10^k
    return math.log(2.0) + k * LN10 + math.log1p(-0.5 * 10.0 ** (-k))


def log_max_encodable_distance(k: float, t: Temper) -> float:
    """log of max_encodable_distance, finite even when the value overflows."""
    if not k > 0:
        raise DomainError(f"k must be positive, got {k!r}")
    big = _log_encodable(k)
    if is_classical(t):
        return math.log(big)
    x = (1.0 - t) * big
    if x > 0:
        # log(expm1(x)) = x + log1p(-exp(-x))
        return x + math.log1p(-math.exp(-x)) - math.log(1.0 - t)
    return math.log(-math.expm1(x)) - math.log(t - 1.0)


def max_encodable_distance(k: float, t: Temper) -> float:
    """
    log_t(2·10^k - 1): the largest t-self distance from the origin a disk
    point of norm 1 - 10^-k can represent.
    """
    if not k > 0:
        raise DomainError(f"k must be positive, got {k!r}")
    big = _log_encodable(k)
    if is_classical(t):
        return big
    x = (1.0 - t) * big
    if x > 709.78:
        raise DomainError(
            f"max_encodable_distance({k}, t={t}) overflows a float; "
            f"its log is {log_max_encodable_distance(k, t)!r}"
        )
    return math.expm1(x) / (1.0 - t)


@dataclass(frozen=True)
class TselfConfig:
    """
    Encoding trade-off for a t-self disk: closeness exponent k, temperature
    t (so f_k = 1 - t), and optional radius budget g_k which must satisfy
    log(1 + f_k·g_k)/f_k <= k·log(10).
    """

    k: float
    t: Temper
    g_k: Optional[float] = None

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"k must be positive, got {self.k!r}")
        if self.g_k is not None and not self.g_k >= 0:
            raise DomainError(f"g_k must be >= 0, got {self.g_k!r}")

    @property
    def f_k(self) -> float:
        return 1.0 - self.t

    def satisfies_budget(self) -> bool:
        if self.g_k is None:
            return True
        f, g, bound = self.f_k, self.g_k, self.k * LN10
        slack = 1e-12 * max(1.0, bound)
        if abs(f) < T_CLASSICAL_EPS:
            return g <= bound + slack
        if 1.0 + f * g <= 0.0:
            return False
        return math.log1p(f * g) / f <= bound + slack

    def hyperbolic_constant(self, tau: float) -> float:
        """Constant of the t-self of a tau-hyperbolic space: (exp(f·tau) - 1)/f."""
        return lift(tau, self.t)

    def max_distance(self) -> float:
        return max_encodable_distance(self.k, self.t)


# === Lorentz model ===

def lorentz_inner(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """-x0·y0 + Σ xi·yi along the last axis."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


@dataclass(frozen=True)
class LorentzPoint:
    coords: np.ndarray
    c: float

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if not self.c > 0:
            raise DomainError(f"curvature c must be positive, got {self.c!r}")
        if coords.ndim != 1 or coords.size < 2 or not coords[0] > 0:
            raise DomainError("Lorentz coordinates need x0 > 0 and at least one spatial axis")
        residual = float(lorentz_inner(coords, coords)) + 1.0 / self.c
        if abs(residual) > 1e-9 * max(1.0, coords[0] ** 2):
            raise DomainError(f"point is off the hyperboloid x∘x = -1/c (residual {residual:.3g})")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_spatial(cls, v, c: float) -> "LorentzPoint":
        v = np.asarray(v, dtype=float)
        x0 = math.sqrt(1.0 / c + float(v @ v))
        return cls(np.concatenate(([x0], v)), c)


def lorentz_dist(x: LorentzPoint, y: LorentzPoint) -> float:
    if x.c != y.c:
        raise DomainError(f"curvature mismatch: {x.c!r} vs {y.c!r}")
    return max(0.0, -2.0 / x.c - 2.0 * float(lorentz_inner(x.coords, y.coords)))


def lorentz_tself_dist(x: LorentzPoint, y: LorentzPoint, t: Temper) -> float:
    return lift(lorentz_dist(x, y), t)


def sample_lorentz(n: int, d: int, c: float, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """n points of H_c in R^{d,1}: Gaussian spatial part, x0 from the constraint."""
    v = rng.normal(scale=scale, size=(n, d))
    x0 = np.sqrt(1.0 / c + np.sum(v * v, axis=1))
    return np.column_stack((x0, v))


def _lorentz_dist_array(x: np.ndarray, y: np.ndarray, c: float) -> np.ndarray:
    return np.maximum(0.0, -2.0 / c - 2.0 * lorentz_inner(x, y))


def delta_triangle_violations(
    delta: float, n: int, rng: np.random.Generator, d: int = 2, scale: float = 1.0
) -> int:
    """
    Monte Carlo count of triples breaking d(x,z) <= d(x,y) + d(y,z) + delta for
    the t-self of H_c with t = 1 + 1/delta, c = 2/delta. Every side of every
    triple is tested against the other two.
    """
    t, c = 1.0 + 1.0 / delta, 2.0 / delta
    x, y, z = (sample_lorentz(n, d, c, rng, scale) for _ in range(3))
    dxy = lift_array(_lorentz_dist_array(x, y, c), t)
    dyz = lift_array(_lorentz_dist_array(y, z, c), t)
    dxz = lift_array(_lorentz_dist_array(x, z, c), t)
    tol = 1e-12
    bad = (dxz > dxy + dyz + delta + tol) | (dxy > dxz + dyz + delta + tol) | (dyz > dxy + dxz + delta + tol)
    return int(np.count_nonzero(bad))


def find_triangle_violation(
    n: int, rng: np.random.Generator, c: float = 1.0, d: int = 2
) -> Optional[tuple[LorentzPoint, LorentzPoint, LorentzPoint]]:
    """Search n random triples for one where raw d_L breaks the triangle inequality."""
    x, y, z = (sample_lorentz(n, d, c, rng) for _ in range(3))
    dxy, dyz, dxz = _lorentz_dist_array(x, y, c), _lorentz_dist_array(y, z, c), _lorentz_dist_array(x, z, c)
    # (a, b, mid): d(a, b) > d(a, mid) + d(mid, b)
    for bad, (a, b, mid) in (
        (dxz > dxy + dyz, (x, z, y)),
        (dxy > dxz + dyz, (x, y, z)),
        (dyz > dxy + dxz, (y, z, x)),
    ):
        hits = np.flatnonzero(bad)
        if hits.size:
            i = int(hits[0])
            return LorentzPoint(a[i], c), LorentzPoint(mid[i], c), LorentzPoint(b[i], c)
    return None


__all__ = [
    "MAX_RADIUS", "DiskPoint", "ORIGIN", "RadiusMap", "TselfConfig", "LorentzPoint",
    "mobius_translate", "inverse_mobius_translate",
    "poincare_dist", "poincare_dist_origin", "radius_for_distance",
    "t_self_dist", "t_self_origin_dist", "weakened_triangle_gap",
    "embed_t_radius", "isoline_radius",
    "t_for_hyperbolicity", "lift_supremum", "max_encodable_distance", "log_max_encodable_distance",
    "lorentz_inner", "lorentz_dist", "lorentz_tself_dist", "sample_lorentz",
    "delta_triangle_violations", "find_triangle_violation",
]
