"""
tself.selftest - invariant suites runnable from the command line
================================================================

Each suite is a list of named checks; a check takes a seeded generator and
returns (passed, detail). Sizes are kept small enough for an interactive
run; the test-suite exercises the same properties at full scale.
"""

from __future__ import annotations

import math
from logging import getLogger
from typing import Callable, NamedTuple, Sequence

import numpy as np

from tself.boosting import boost, ensemble_margins
from tself.data import Sample
from tself.geometry import (
    DiskPoint,
    delta_triangle_violations,
    embed_t_radius,
    find_triangle_violation,
    max_encodable_distance,
    mobius_translate,
    poincare_dist,
    poincare_dist_origin,
    t_self_origin_dist,
)
from tself.layout import apply_t_self, sarkar_layout, sector_violations
from tself.mdt import check_invariant_M, create_mdt, verify_structure
from tself.tempered import (
    Partition,
    cosh_t_conjugate,
    integrate,
    lift,
    t_add,
    t_derivative,
    t_integrate,
    t_riemann_sum,
    t_sub,
)
from tself.trees import random_tree

log = getLogger("tself")

Check = Callable[[np.random.Generator], tuple[bool, str]]


class CheckResult(NamedTuple):
    suite: str
    name: str
    passed: bool
    detail: str


def random_polynomial(rng: np.random.Generator, degree: int = 3) -> np.polynomial.Polynomial:
    return np.polynomial.Polynomial(rng.uniform(-1.0, 1.0, size=degree + 1))


def synthetic_sample(rng: np.random.Generator, m: int = 200, d: int = 3, noise: float = 0.3) -> Sample:
    """Gaussian features, labels from the sign of a noisy linear score."""
    X = rng.normal(size=(m, d))
    score = X @ np.linspace(1.0, 0.2, d) + noise * rng.normal(size=m)
    y = np.where(score >= 0.0, 1, -1)
    y[:2] = (1, -1)
    return Sample.from_arrays(X, y)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


# === core ===

def _check_volterra(rng):
    worst = 0.0
    for _ in range(10):
        f = random_polynomial(rng)
        a, b = sorted(rng.uniform(-1.0, 1.0, size=2))
        value, _ = integrate(f, a, b)
        worst = max(worst, _rel(1.0 + t_integrate(f, a, b, 0.0), math.exp(value)))
    return worst < 1e-10, f"max relative gap {worst:.2e}"


def _check_riemann(rng):
    got = t_riemann_sum(lambda x: 1.0, Partition.regular(0.0, 1.0, 100_000), 0.0)
    gap = _rel(got, math.e - 1.0)
    return gap < 1e-5, f"f=1, t=0, n=1e5: relative gap {gap:.2e}"


def _check_fundamental(rng):
    worst = 0.0
    for t in (-1.0, 0.0, 0.5, 1.0, 2.0):
        f = random_polynomial(rng)
        for z in rng.uniform(-0.5, 0.5, size=4):
            d = t_derivative(lambda s: t_integrate(f, -1.0, s, t), float(z), t)
            worst = max(worst, abs(d - f(z)))
    return worst < 1e-4, f"max |D_t F - f| {worst:.2e}"


def _check_algebra(rng):
    worst = 0.0
    for t in (-1.0, 0.0, 0.5, 2.0):
        a, b = rng.uniform(-0.4, 0.4, size=2)
        worst = max(worst, abs(t_sub(t_add(a, b, t), b, t) - a))
    return worst < 1e-12, f"max |(a ⊕ b) ⊖ b - a| {worst:.2e}"


def _check_pythagoras(rng):
    worst = 0.0
    for _ in range(25):
        a, b = rng.uniform(0.05, 2.0, size=2)
        c = math.acosh(math.cosh(a) * math.cosh(b))
        for t in (0.0, 0.5, 1.0, 2.0):
            lhs = cosh_t_conjugate(lift(c, t), t)
            rhs = cosh_t_conjugate(lift(a, t), t) * cosh_t_conjugate(lift(b, t), t)
            worst = max(worst, abs(lhs - rhs) / rhs)
    return worst < 1e-9, f"max relative gap {worst:.2e}"


# === geometry ===

def _check_embed(rng):
    worst = 0.0
    for r in np.linspace(0.0, 1.0 - 1e-6, 50):
        for t in (0.0, 0.3, 0.6, 1.0):
            mapped = embed_t_radius(float(r), t).radius
            worst = max(worst, _rel(t_self_origin_dist(mapped, t), poincare_dist_origin(float(r))))
    return worst < 1e-9, f"max residual {worst:.2e}"


def _check_encoding(rng):
    d = max_encodable_distance(16, 1.0)
    return 37.3 <= d <= 37.6, f"max_encodable_distance(16, 1) = {d:.4f}"


def _check_isometry(rng):
    worst = 0.0
    for _ in range(50):
        x, y, a = (DiskPoint.from_polar(rng.uniform(0, 0.95), rng.uniform(-math.pi, math.pi)) for _ in range(3))
        worst = max(worst, _rel(poincare_dist(mobius_translate(x, a), mobius_translate(y, a)), poincare_dist(x, y)))
    return worst < 1e-9, f"max relative gap {worst:.2e}"


def _check_lorentz(rng):
    bad = sum(delta_triangle_violations(delta, 10_000, rng) for delta in (0.1, 0.01))
    witness = find_triangle_violation(2_000, rng)
    ok = bad == 0 and witness is not None
    return ok, f"{bad} delta violations, raw witness {'found' if witness else 'missing'}"


# === mdt ===

def _check_invariant(rng):
    mismatches, problems = 0, 0
    for _ in range(100):
        dt = random_tree(rng, 3, int(rng.integers(0, 7)))
        mdt = create_mdt(dt)
        xs = [tuple(row) for row in rng.uniform(size=(50, 3)).tolist()]
        mismatches += len(check_invariant_M(dt, mdt, xs).mismatches)
        problems += len(verify_structure(dt, mdt))
    return mismatches == 0 and problems == 0, f"{mismatches} mismatches, {problems} structural problems"


def _check_layout(rng):
    worst_rho, worst_t, escapes = 0.0, 0.0, 0
    for _ in range(20):
        mdt = create_mdt(random_tree(rng, 3, 5))
        layout = sarkar_layout(mdt)
        escapes += len(sector_violations(mdt, layout))
        worst_rho = max(worst_rho, layout.rho)
        worst_t = max(worst_t, abs(apply_t_self(layout, 0.7).rho - layout.rho))
    ok = worst_rho <= 0.10 and worst_t < 1e-9 and escapes == 0
    return ok, f"max rho {worst_rho:.2e}, t-self drift {worst_t:.2e}, {escapes} sector escapes"


# === boost ===

def _check_boost(rng):
    sample = synthetic_sample(rng)
    ens = boost(sample, 5, 7)
    monotone = all(b <= a + 1e-12 for a, b in zip(ens.losses, ens.losses[1:]))
    closed = 1.0 / (1.0 + np.exp(sample.labels * ensemble_margins(ens, sample)))
    gap = float(np.max(np.abs(ens.weights[-1] - closed)))
    kappa = max(_rel(m.max_abs_prediction(), l.kappa_star) for l, m in zip(ens.leverages, ens.mdts))
    ok = monotone and gap < 1e-10 and kappa < 1e-6
    return ok, f"loss monotone={monotone}, weight gap {gap:.2e}, kappa* gap {kappa:.2e}"


SUITES: dict[str, list[tuple[str, Check]]] = {
    "core": [
        ("volterra", _check_volterra),
        ("riemann_t_sum", _check_riemann),
        ("fundamental_theorem", _check_fundamental),
        ("t_algebra", _check_algebra),
        ("t_pythagoras", _check_pythagoras),
    ],
    "geometry": [
        ("embed_t_residual", _check_embed),
        ("encoding_bound", _check_encoding),
        ("mobius_isometry", _check_isometry),
        ("lorentz_delta_metric", _check_lorentz),
    ],
    "mdt": [
        ("invariant_M", _check_invariant),
        ("layout", _check_layout),
    ],
    "boost": [
        ("logisticboost", _check_boost),
    ],
}


def run_suites(names: Sequence[str], seed: int = 0) -> list[CheckResult]:
    """Run the named suites ("all" expands to every suite) with one generator per check."""
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")

    results = []
    for suite in names:
        for name, check in SUITES[suite]:
            try:
                passed, detail = check(np.random.default_rng(seed))
            except Exception as e:  # a crashing check is a failed check
                log.exception("check %s.%s raised", suite, name)
                passed, detail = False, f"{type(e).__name__}: {e}"
            results.append(CheckResult(suite, name, bool(passed), detail))
    return results


__all__ = ["CheckResult", "SUITES", "run_suites", "synthetic_sample", "random_polynomial"]
