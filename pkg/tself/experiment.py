"""
tself.experiment - K-fold cross-validation of LOGISTICBOOST
===========================================================

Each fold boosts on its training part and measures the test error of the
ensemble twice: with its decision trees, and with every tree replaced by
its MDT under the same leveraging coefficients. The two error lists are
compared with a paired Student t-test.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from logging import getLogger
from typing import Any

import numpy as np
from scipy import stats

from tself.boosting import BoostedEnsemble, boost, ensemble_error
from tself.data import Sample, stratified_folds
from tself.utils.yaml_tools import FlowList

log = getLogger("tself")


@dataclass
class FoldResult:
    fold: int
    ensemble: BoostedEnsemble
    dt_error: float
    mdt_error: float


@dataclass
class CVResult:
    folds: list[FoldResult]
    seed: int
    assignments: np.ndarray

    @property
    def dt_errors(self) -> np.ndarray:
        return np.array([f.dt_error for f in self.folds])

    @property
    def mdt_errors(self) -> np.ndarray:
        return np.array([f.mdt_error for f in self.folds])

    @staticmethod
    def _mean_std(errors: np.ndarray) -> tuple[float, float]:
        return float(errors.mean()), float(errors.std(ddof=1)) if errors.size > 1 else 0.0

    @property
    def dt_summary(self) -> tuple[float, float]:
        return self._mean_std(self.dt_errors)

    @property
    def mdt_summary(self) -> tuple[float, float]:
        return self._mean_std(self.mdt_errors)

    @property
    def p_value(self) -> float:
        """Paired t-test of DT vs MDT errors; 1.0 when the folds agree exactly."""
        dt, mdt = self.dt_errors, self.mdt_errors
        if np.all(dt == mdt):
            return 1.0
        return float(stats.ttest_rel(dt, mdt).pvalue)

    def to_report(self) -> dict[str, Any]:
        (dm, ds), (mm, ms) = self.dt_summary, self.mdt_summary
        return {
            "seed": self.seed,
            "folds": len(self.folds),
            "dt": {"mean": dm, "std": ds, "errors": FlowList(self.dt_errors.tolist())},
            "mdt": {"mean": mm, "std": ms, "errors": FlowList(self.mdt_errors.tolist())},
            "paired_t_test_p": self.p_value,
            "stopped_early": FlowList([f.fold for f in self.folds if f.ensemble.stopped_early]),
        }


def _run_fold(fold: int, train: Sample, test: Sample, trees: int, tree_size: int) -> FoldResult:
    ens = boost(train, trees, tree_size)
    result = FoldResult(fold, ens, ensemble_error(ens, test), ensemble_error(ens, test, as_mdt=True))
    log.info("fold %d: DT error %.2f%%, MDT error %.2f%%", fold, result.dt_error, result.mdt_error)
    return result


def cross_validate(
    sample: Sample, k: int = 10, seed: int = 0, trees: int = 20, tree_size: int = 31, jobs: int = 1
) -> CVResult:
    plan = stratified_folds(sample, k, seed)
    tasks = [
        (fold, sample.subset(train), sample.subset(test), trees, tree_size)
        for fold, (train, test) in enumerate(plan)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_fold, *zip(*tasks)))
    else:
        results = [_run_fold(*task) for task in tasks]
    results.sort(key=lambda r: r.fold)
    return CVResult(results, seed, plan.assignments)


__all__ = ["FoldResult", "CVResult", "cross_validate"]
