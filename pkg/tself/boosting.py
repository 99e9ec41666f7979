"""
tself.boosting - LOGISTICBOOST over log-loss decision trees
===========================================================

Every example starts at weight 1/2. At iteration j a tree is induced on the
normalised weights, its leaves are re-estimated on the same snapshot, and its
leveraging coefficient comes from the secant bound of the logistic loss:

    r_j   = E_w̃[ y·H_j(x) ] / (κ)*_j           (κ)*_j = max leaf |link(p⁺)|
    (κ)_j = log((1 + r_j)/(1 - r_j))
    α_j   = (κ)_j / (κ)*_j

Weights follow w ← w / (w + (1 - w)·exp(α·y·h)), kept in logit space so that
w_{T+1} = 1/(1 + exp(y·H̃(x))) holds to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from logging import getLogger
from typing import Any, NamedTuple, Sequence

import numpy as np
from scipy import special

from tself.data import Sample, Value
from tself.mdt import MonotonicDecisionTree, create_mdt, mdt_predict
from tself.trees import DecisionTree, dt_predict, induce_dt
from tself.utils.logutils import log_call

log = getLogger("tself")

R_MAX = 1.0 - 1e-10
_W_LO = np.finfo(float).tiny
_W_HI = np.nextafter(1.0, 0.0)
_EXP_CAP = 700.0
KAPPA_TOL = 1e-12


class Leverage(NamedTuple):
    kappa: float
    kappa_star: float
    r: float
    alpha: float
    clamped: bool = False


def weight_update(w, alpha: float, y, h):
    """
    w / (w + (1 - w)·exp(α·y·h)), kept strictly inside (0, 1). Accepts
    scalars or arrays. The result never moves against the sign of α·y·h, so
    an exponent that rounds to exp(x) = 1 leaves w unchanged.
    """
    w = np.asarray(w, dtype=float)
    x = alpha * np.asarray(y, dtype=float) * np.asarray(h, dtype=float)
    e = np.exp(np.clip(x, -_EXP_CAP, _EXP_CAP))
    ratio = w / (w + (1.0 - w) * e)
    out = np.where(e > 1.0, np.minimum(ratio, w), np.where(e < 1.0, np.maximum(ratio, w), w))
    out = np.clip(out, _W_LO, _W_HI)
    return float(out) if out.ndim == 0 else out


def logistic_loss(margins) -> float:
    """Mean of log(1 + exp(-margin))."""
    return float(np.mean(np.logaddexp(0.0, -np.asarray(margins, dtype=float))))


def secant_bound(alpha: float, r: float, kappa_star: float) -> float:
    """
    Upper bound on E_w̃ log(1 + exp(-α·z)) for margins z in [-R, R], R = (κ)*,
    from the secant of the convex loss; minimised at α = log((1+r)/(1-r))/R.
    """
    x = alpha * kappa_star
    return 0.5 * (1.0 + r) * float(np.logaddexp(0.0, -x)) + 0.5 * (1.0 - r) * float(np.logaddexp(0.0, x))


def leverage(tree: DecisionTree, sample: Sample, weights) -> Leverage:
    weights = np.asarray(weights, dtype=float)
    normalized = weights / weights.sum()
    fitted = tree.reestimate(sample, normalized)
    kappa_star = fitted.max_abs_confidence()
    if kappa_star <= KAPPA_TOL:
        # posteriors that differ from 1/2 only by rounding: a useless tree
        return Leverage(0.0, 0.0, 0.0, 0.0)

    r = float(np.sum(normalized * sample.labels * fitted.predict_values(sample))) / kappa_star
    clamped = r > R_MAX
    if clamped:
        log.warning("normalised edge r = %.12g clamped to 1 - 1e-10 (perfect weak learner)", r)
    r = min(max(r, 0.0), R_MAX)
    kappa = 2.0 * math.atanh(r)
    return Leverage(kappa, kappa_star, r, kappa / kappa_star, clamped)


@dataclass
class BoostedEnsemble:
    trees: list[DecisionTree]
    leverages: list[Leverage]
    weights: list[np.ndarray] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)
    stopped_early: bool = False
    feature_names: tuple[str, ...] = ()
    feature_kinds: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.trees)

    @property
    def alphas(self) -> list[float]:
        return [lev.alpha for lev in self.leverages]

    @cached_property
    def mdts(self) -> list[MonotonicDecisionTree]:
        return [create_mdt(tree) for tree in self.trees]

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature_names": list(self.feature_names),
            "feature_kinds": list(self.feature_kinds),
            "stopped_early": self.stopped_early,
            "losses": list(self.losses),
            "trees": [
                {"tree": tree.to_dict(), "leverage": lev._asdict()}
                for tree, lev in zip(self.trees, self.leverages)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoostedEnsemble":
        trees = [DecisionTree.from_dict(item["tree"]) for item in d["trees"]]
        leverages = [Leverage(**item["leverage"]) for item in d["trees"]]
        return cls(
            trees,
            leverages,
            losses=[float(v) for v in d.get("losses", [])],
            stopped_early=bool(d.get("stopped_early", False)),
            feature_names=tuple(d.get("feature_names", ())),
            feature_kinds=tuple(d.get("feature_kinds", ())),
        )


@log_call()
def boost(sample: Sample, T: int, max_nodes: int = 31, jobs: int = 1) -> BoostedEnsemble:
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    y = sample.labels.astype(float)
    logit_w = np.zeros(sample.m)
    margins = np.zeros(sample.m)

    ens = BoostedEnsemble(
        [], [], [special.expit(logit_w)], [logistic_loss(margins)],
        feature_names=sample.feature_names, feature_kinds=sample.feature_kinds,
    )
    for j in range(T):
        w = np.clip(special.expit(logit_w), _W_LO, _W_HI)
        normalized = w / w.sum()
        tree = induce_dt(sample, normalized, max_nodes, jobs).reestimate(sample, normalized)
        lev = leverage(tree, sample, normalized)
        h = tree.predict_values(sample)

        logit_w -= lev.alpha * y * h
        margins += lev.alpha * h
        ens.trees.append(tree)
        ens.leverages.append(lev)
        ens.weights.append(np.clip(special.expit(logit_w), _W_LO, _W_HI))
        ens.losses.append(logistic_loss(y * margins))
        log.info("iteration %d: %d nodes, r=%.4f, alpha=%.4f, loss=%.6f", j + 1, len(tree), lev.r, lev.alpha, ens.losses[-1])

        if lev.r == 0.0:
            ens.stopped_early = True
            log.warning("boosting stopped at iteration %d: the induced tree has zero edge", j + 1)
            break
    return ens


def ensemble_predict(ens: BoostedEnsemble, x: Sequence[Value], as_mdt: bool = False) -> float:
    """Σ_j α_j·H_j(x); with as_mdt each tree is replaced by its MDT, α_j unchanged."""
    if not ens.trees:
        raise ValueError("ensemble is empty")
    if as_mdt:
        return float(sum(lev.alpha * mdt_predict(m, x) for m, lev in zip(ens.mdts, ens.leverages)))
    return float(sum(lev.alpha * dt_predict(tree, x).value for tree, lev in zip(ens.trees, ens.leverages)))


def ensemble_margins(ens: BoostedEnsemble, sample: Sample, as_mdt: bool = False) -> np.ndarray:
    """H̃(x_i) for every example of the sample."""
    if as_mdt:
        rows = list(sample.rows())
        return np.array([
            sum(lev.alpha * mdt_predict(m, x) for m, lev in zip(ens.mdts, ens.leverages)) for x in rows
        ])
    out = np.zeros(sample.m)
    for tree, lev in zip(ens.trees, ens.leverages):
        out += lev.alpha * tree.predict_values(sample)
    return out


def ensemble_error(ens: BoostedEnsemble, sample: Sample, as_mdt: bool = False) -> float:
    """Misclassification rate in percent; H̃ = 0 predicts the positive class."""
    predicted = np.where(ensemble_margins(ens, sample, as_mdt) >= 0.0, 1, -1)
    return 100.0 * float(np.mean(predicted != sample.labels))


__all__ = [
    "Leverage", "BoostedEnsemble", "weight_update", "logistic_loss", "secant_bound",
    "leverage", "boost", "ensemble_predict", "ensemble_margins", "ensemble_error",
]
