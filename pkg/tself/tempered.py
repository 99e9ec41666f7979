"""
tself.tempered - tempered algebra, t-integration and t-differentiation
=====================================================================

Everything here is parameterised by a temperature `t` (a plain float). At
t = 1 every operation reduces to its classical counterpart; that case is
handled by an explicit branch whenever |1 - t| < 1e-12 so no formula ever
divides by (1 - t) near 1.

Building blocks
---------------
* `t_add` / `t_sub`         a ⊕_t b = a + b + (1-t)ab and its inverse
* `log_t` / `exp_t`         deformed logarithm / exponential
* `t_mul` / `t_div`         exp_t(log_t x ± log_t y)
* `lift`                    log_t ∘ exp, the map turning d into its t-self
* `t_riemann_sum`           ⊕_t-folded Riemann sum (product form)
* `t_integrate`             lift of an adaptive Simpson integral
* `t_derivative`            tempered difference quotient + Richardson
* `cosh_t`, divergences, mean-value points

Example
-------
```python
>>> from tself.tempered import t_integrate
>>> round(t_integrate(lambda x: x**2, 0.0, 1.0, t=0.0), 7)
0.3956124
```
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import reduce
from logging import getLogger
from typing import NamedTuple

import numpy as np
from scipy import optimize, special

from tself.errors import DomainError, QuadratureError

log = getLogger("tself")

Temper = float
RealFn = Callable[[float], float]

T_CLASSICAL_EPS = 1e-12
_EXP_MAX = 709.78  # math.exp overflows beyond this


def is_classical(t: Temper) -> bool:
    """True when t is close enough to 1 to take the classical branch."""
    return abs(1.0 - t) < T_CLASSICAL_EPS


class Clamped(NamedTuple):
    value: float
    clamped: bool


# === Algebra ===

def t_add(a: float, b: float, t: Temper) -> float:
    return a + b + (1.0 - t) * a * b


def t_sub(a: float, b: float, t: Temper) -> float:
    den = 1.0 + (1.0 - t) * b
    if den == 0.0:
        raise DomainError(f"t_sub: singular denominator, b = {b!r} = -1/(1-t) at t={t!r}")
    return (a - b) / den


def t_fold(terms: Sequence[float], t: Temper) -> float:
    """Left fold of ⊕_t; 0 is its neutral element."""
    return reduce(lambda acc, x: t_add(acc, x, t), terms, 0.0)


def log_t(z: float, t: Temper) -> float:
    if not z > 0.0:
        raise DomainError(f"log_t requires z > 0, got {z!r}")
    if is_classical(t):
        return math.log(z)
    return math.expm1((1.0 - t) * math.log(z)) / (1.0 - t)


def exp_t_clamped(z: float, t: Temper) -> Clamped:
    """
    exp_t with the positive-part convention: for t < 1 a base
    1 + (1-t)z <= 0 yields 0 and sets the flag; for t > 1 it is an error.
    """
    if is_classical(t):
        return Clamped(math.inf if z > _EXP_MAX else math.exp(z), False)
    x = (1.0 - t) * z
    if 1.0 + x <= 0.0:
        if t < 1.0:
            return Clamped(0.0, True)
        raise DomainError(f"exp_t: base 1+(1-t)z = {1.0 + x!r} <= 0 for t={t!r} > 1")
    e = math.log1p(x) / (1.0 - t)
    return Clamped(math.inf if e > _EXP_MAX else math.exp(e), False)


def exp_t(z: float, t: Temper) -> float:
    value, clamped = exp_t_clamped(z, t)
    if clamped:
        log.debug("exp_t(%r, t=%r) clamped to 0", z, t)
    return value


def t_mul(x: float, y: float, t: Temper) -> float:
    if is_classical(t):
        return x * y
    return exp_t(log_t(x, t) + log_t(y, t), t)


def t_div(x: float, y: float, t: Temper) -> float:
    if is_classical(t):
        if y == 0.0:
            raise DomainError("t_div: division by zero")
        return x / y
    return exp_t(log_t(x, t) - log_t(y, t), t)


def lift(z: float, t: Temper) -> float:
    """
    log_t(exp z) = (exp((1-t)z) - 1)/(1-t). Strictly increasing and sign
    preserving; bounded above by 1/(t-1) when t > 1.
    """
    if is_classical(t):
        return float(z)
    x = (1.0 - t) * z
    if x > _EXP_MAX:
        log.warning("lift(%r, t=%r) overflows; returning inf", z, t)
        return math.inf
    return math.expm1(x) / (1.0 - t)


def lift_array(z: np.ndarray, t: Temper) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if is_classical(t):
        return z.copy()
    with np.errstate(over="ignore"):
        return np.expm1((1.0 - t) * z) / (1.0 - t)


def cosh_t(z: float, t: Temper) -> float:
    return 0.5 * (exp_t(z, t) + exp_t(-z, t))


def cosh_t_conjugate(z: float, t: Temper) -> float:
    """
    (exp_t z + exp_{2-t}(-z))/2. Since exp_{2-t}(-log_t u) = 1/u,
    cosh_t_conjugate(lift(a, t), t) = cosh(a) for every t.
    """
    return 0.5 * (exp_t(z, t) + exp_t(-z, 2.0 - t))


# === Riemann t-sums ===

@dataclass(frozen=True)
class Partition:
    """Points a = x_0 < ... < x_n = b with one sample per cell."""

    points: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise DomainError("partition needs at least two points")
        if not np.all(np.diff(points) > 0):
            raise DomainError("partition points must be strictly increasing")
        if samples.shape != (points.size - 1,):
            raise DomainError(f"expected {points.size - 1} samples, got {samples.size}")
        if np.any(samples < points[:-1]) or np.any(samples > points[1:]):
            raise DomainError("every sample must lie inside its cell")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def regular(cls, a: float, b: float, n: int, where: str = "mid") -> "Partition":
        if n < 1 or not b > a:
            raise DomainError(f"regular partition needs n >= 1 and a < b, got n={n}, [{a}, {b}]")
        points = np.linspace(a, b, n + 1)
        if where == "mid":
            samples = 0.5 * (points[:-1] + points[1:])
        elif where == "left":
            samples = points[:-1].copy()
        elif where == "right":
            samples = points[1:].copy()
        else:
            raise ValueError(f"unknown sample placement {where!r}")
        return cls(points, samples)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.points)

    @property
    def step(self) -> float:
        return float(self.widths.max())


def _evaluate(f: RealFn, xs: np.ndarray) -> np.ndarray:
    """Call f on the whole array when it vectorises, element-wise otherwise."""
    try:
        values = np.asarray(f(xs), dtype=float)
        return np.broadcast_to(values, xs.shape).astype(float)
    except (TypeError, ValueError):
        return np.array([f(float(x)) for x in xs], dtype=float)


def t_riemann_sum(f: RealFn, partition: Partition, t: Temper) -> float:
    """
    ⊕_t-fold of the cell terms |I_i| f(ξ_i), computed in product form
    (prod(1 + (1-t)|I_i| f(ξ_i)) - 1)/(1-t) through a sum of log1p when all
    factors are positive.
    """
    terms = partition.widths * _evaluate(f, partition.samples)
    if not np.all(np.isfinite(terms)):
        raise DomainError("f is not finite on every sample point")
    if is_classical(t):
        return math.fsum(terms)

    q = (1.0 - t) * terms
    if np.all(q > -1.0):
        log_prod = float(np.sum(np.log1p(q)))
        if log_prod > _EXP_MAX:
            log.warning("t_riemann_sum overflow (log of product = %.4g)", log_prod)
            return math.inf if t < 1.0 else -math.inf
        return math.expm1(log_prod) / (1.0 - t)

    with np.errstate(over="ignore"):
        prod = float(np.prod(1.0 + q))
    if not math.isfinite(prod):
        log.warning("t_riemann_sum overflow in direct product")
    return (prod - 1.0) / (1.0 - t)


# === Quadrature ===

def integrate(f: RealFn, a: float, b: float, tol: float = 1e-10, max_depth: int = 50) -> tuple[float, float]:
    """
    Adaptive Simpson's rule with Richardson correction.

    Returns (value, error_estimate); raises QuadratureError when the
    recursion bottoms out with an error estimate above tol.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = integrate(f, b, a, tol, max_depth)
        return -value, error

    def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    unresolved = []

    def _adaptive(a, b, fa, fm, fb, s_whole, depth, tol):
        m = 0.5 * (a + b)
        h = 0.5 * (b - a)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)

        s_left = _simpson(fa, flm, fm, 0.5 * h)
        s_right = _simpson(fm, frm, fb, 0.5 * h)
        s_combined = s_left + s_right
        error_estimate = (s_combined - s_whole) / 15.0

        if abs(error_estimate) < tol or depth >= max_depth:
            if abs(error_estimate) >= tol:
                unresolved.append(abs(error_estimate))
            return s_combined + error_estimate, abs(error_estimate)

        left, left_err = _adaptive(a, m, fa, flm, fm, s_left, depth + 1, 0.5 * tol)
        right, right_err = _adaptive(m, b, fm, frm, fb, s_right, depth + 1, 0.5 * tol)
        return left + right, left_err + right_err

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    s_whole = _simpson(fa, fm, fb, 0.5 * (b - a))
    value, error = _adaptive(a, b, fa, fm, fb, s_whole, 0, tol)

    if not math.isfinite(value):
        raise QuadratureError("integrand is not finite on the interval", value, error)
    if unresolved and error > tol:
        raise QuadratureError(
            f"adaptive Simpson hit max_depth={max_depth} on [{a}, {b}]", value, error
        )
    return value, error


def t_integrate(f: RealFn, a: float, b: float, t: Temper, tol: float = 1e-10) -> float:
    """Tempered integral: lift of the classical integral."""
    value, _ = integrate(f, a, b, tol)
    return lift(value, t)


# === t-derivative ===

def t_derivative_with_error(
    f: RealFn, z: float, t: Temper, h: float | None = None
) -> tuple[float, float]:
    """
    Symmetric tempered difference quotient
    [(f(z+h) ⊖_t f(z)) - (f(z-h) ⊖_t f(z))]/(2h), extrapolated over two
    Richardson levels (h, h/2, h/4). Returns (value, |last correction|).
    """
    if h is None:
        h = 1e-4 * max(1.0, abs(z))
    fz = f(z)
    if 1.0 + (1.0 - t) * fz == 0.0:
        raise DomainError(f"t_derivative: f(z) = -1/(1-t) at z={z!r}, t={t!r}")

    def quotient(step: float) -> float:
        return (t_sub(f(z + step), fz, t) - t_sub(f(z - step), fz, t)) / (2.0 * step)

    d0, d1, d2 = quotient(h), quotient(h / 2.0), quotient(h / 4.0)
    r0 = (4.0 * d1 - d0) / 3.0
    r1 = (4.0 * d2 - d1) / 3.0
    value = (16.0 * r1 - r0) / 15.0
    return value, abs(value - r1)


def t_derivative(f: RealFn, z: float, t: Temper, h: float | None = None) -> float:
    return t_derivative_with_error(f, z, t, h)[0]


# === Mean-value points ===

def _bisect_root(g: RealFn, a: float, b: float, what: str) -> float:
    ga, gb = g(a), g(b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if ga * gb > 0.0:
        raise DomainError(f"{what}: no sign change on [{a}, {b}] (is f monotone and smooth?)")
    return float(optimize.bisect(g, a, b, xtol=1e-10))


def t_mean_value_point(f: RealFn, a: float, b: float, t: Temper) -> float:
    """c in [a, b] with D_t f(c)·(b-a) = (f(b) ⊖_t f(c)) - (f(a) ⊖_t f(c))."""
    fa, fb = f(a), f(b)

    def gap(c: float) -> float:
        fc = f(c)
        return t_derivative(f, c, t) * (b - a) - (t_sub(fb, fc, t) - t_sub(fa, fc, t))

    return _bisect_root(gap, a, b, "t_mean_value_point")


def t_integral_mean_value_point(f: RealFn, a: float, b: float, t: Temper, tol: float = 1e-10) -> float:
    """c in [a, b] with (b-a)·lift(f(c), t') = ∫_t f, where t' = 1 - (1-t)(b-a)."""
    target = t_integrate(f, a, b, t, tol)
    t_prime = 1.0 - (1.0 - t) * (b - a)
    return _bisect_root(lambda c: (b - a) * lift(f(c), t_prime) - target, a, b, "t_integral_mean_value_point")


# === Divergences ===

@dataclass(frozen=True)
class ProbVector:
    entries: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 1 or entries.size == 0:
            raise DomainError("ProbVector needs a non-empty 1-d array")
        if np.any(entries < 0) or not np.all(np.isfinite(entries)):
            raise DomainError("ProbVector entries must be finite and >= 0")
        if self.normalized and abs(entries.sum() - 1.0) > 1e-12:
            raise DomainError(f"normalized ProbVector sums to {entries.sum()!r}")
        object.__setattr__(self, "entries", entries)

    def outer(self, other: "ProbVector") -> "ProbVector":
        """Product measure, flattened."""
        return ProbVector(np.outer(self.entries, other.entries).ravel(), self.normalized and other.normalized)


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    p = p.entries if isinstance(p, ProbVector) else np.asarray(p, dtype=float)
    q = q.entries if isinstance(q, ProbVector) else np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape} vs {q.shape}")
    if np.any((q <= 0) & (p > 0)):
        raise DomainError("q must be positive wherever p is")
    return p, q


def tsallis_div(p, q, t: Temper) -> float:
    """(Σ p (p/q)^{1-t} - 1)/(1-t); KL at t = 1. t-additive on products."""
    p, q = _pair(p, q)
    if is_classical(t):
        return float(np.sum(special.rel_entr(p, q)))
    support = p > 0
    s = np.sum(p[support] * (p[support] / q[support]) ** (1.0 - t))
    return float((s - 1.0) / (1.0 - t))


def tempered_rel_entropy(p, q, t: Temper) -> float:
    """
    Bregman divergence of z·log_t z - log_{t-1} z:

        Σ (p^{2-t} - p q^{1-t})/(1-t) - (p^{2-t} - q^{2-t})/(2-t)

    On the co-simplex Σ p^{2-t} = Σ q^{2-t} = 1 this is
    (1 - Σ p q^{1-t})/(1-t). At t = 1: generalised KL Σ p log(p/q) - p + q.
    """
    p, q = _pair(p, q)
    if is_classical(t):
        return float(np.sum(special.kl_div(p, q)))
    if t >= 2.0 and np.any(p == 0):
        raise DomainError("tempered_rel_entropy with t >= 2 needs p > 0 everywhere")
    first = (p ** (2.0 - t) - p * q ** (1.0 - t)) / (1.0 - t)
    if abs(2.0 - t) < T_CLASSICAL_EPS:
        second = np.log(p) - np.log(q)
    else:
        second = (p ** (2.0 - t) - q ** (2.0 - t)) / (2.0 - t)
    return float(np.sum(first - second))


def to_co_simplex(p, t: Temper) -> ProbVector:
    """Rescale a positive vector so that Σ p^{2-t} = 1."""
    entries = p.entries if isinstance(p, ProbVector) else np.asarray(p, dtype=float)
    if abs(2.0 - t) < T_CLASSICAL_EPS:
        raise DomainError("the co-simplex is undefined at t = 2")
    s = float(np.sum(entries ** (2.0 - t)))
    if not s > 0:
        raise DomainError("cannot rescale the zero vector")
    return ProbVector(entries * s ** (-1.0 / (2.0 - t)), normalized=is_classical(t))


__all__ = [
    "Temper", "Clamped", "Partition", "ProbVector", "is_classical",
    "t_add", "t_sub", "t_fold", "log_t", "exp_t", "exp_t_clamped", "t_mul", "t_div",
    "lift", "lift_array", "cosh_t", "cosh_t_conjugate",
    "t_riemann_sum", "integrate", "t_integrate", "t_derivative", "t_derivative_with_error",
    "t_mean_value_point", "t_integral_mean_value_point",
    "tsallis_div", "tempered_rel_entropy", "to_co_simplex",
]
