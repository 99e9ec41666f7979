import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize_scalar

from tself.boosting import (
    R_MAX,
    BoostedEnsemble,
    Leverage,
    boost,
    ensemble_error,
    ensemble_margins,
    ensemble_predict,
    leverage,
    logistic_loss,
    secant_bound,
    weight_update,
)
from tself.data import Sample, load_csv
from tself.experiment import cross_validate
from tself.selftest import synthetic_sample
from tself.trees import induce_dt

probabilities = st.floats(min_value=1e-6, max_value=1.0 - 1e-6)
alphas = st.floats(min_value=0.0, max_value=5.0)
outputs = st.floats(min_value=-10.0, max_value=10.0)


def balanced_constant_sample(m: int = 40) -> Sample:
    return Sample.from_arrays(np.ones((m, 1)), np.tile([1, -1], m // 2))


def separable_sample() -> Sample:
    x = np.arange(20.0).reshape(-1, 1)
    return Sample.from_arrays(x, np.where(x[:, 0] >= 10.0, 1, -1))


# === weight update ===

def test_weight_update_examples():
    assert weight_update(0.5, 1.0, 1, math.log(3.0)) == pytest.approx(0.25)
    assert weight_update(0.5, 1.0, -1, math.log(3.0)) == pytest.approx(0.75)
    assert weight_update(0.3, 0.0, 1, 5.0) == pytest.approx(0.3)
    out = weight_update(np.array([0.5, 0.5]), 1.0, np.array([1, -1]), np.array([0.0, 2.0]))
    assert out.tolist() == pytest.approx([0.5, 1.0 / (1.0 + math.exp(-2.0))])


@given(probabilities, alphas, st.sampled_from([-1, 1]), outputs)
def test_weight_update_stays_in_open_interval(w, alpha, y, h):
    new = weight_update(w, alpha, y, h)
    assert 0.0 < new < 1.0
    if alpha * y * h > 0:
        assert new <= w
    elif alpha * y * h < 0:
        assert new >= w


def test_weight_update_matches_ratio_form():
    w, alpha, h = 0.2, 0.7, 1.3
    assert weight_update(w, alpha, 1, h) == pytest.approx(w / (w + (1 - w) * math.exp(alpha * h)))


@pytest.mark.parametrize(
    "w, alpha, y, h",
    [
        (0.009765625, 1.0, -1, 2.1e-53),
        (0.8995344370460534, 1.0, -1, -1.2e-29),
        (0.3, 2.0, 1, 1e-300),
    ],
)
def test_weight_update_with_vanishing_exponent_keeps_w(w, alpha, y, h):
    assert weight_update(w, alpha, y, h) == w


def test_weight_update_saturates_without_overflow():
    assert 0.0 < weight_update(0.5, 1.0, 1, 1e6) < 1e-300
    assert weight_update(0.5, 1.0, -1, 1e6) < 1.0


# === leveraging coefficients ===

def test_useless_tree_has_zero_leverage():
    s = balanced_constant_sample()
    tree = induce_dt(s)
    assert len(tree) == 1
    assert leverage(tree, s, np.full(s.m, 0.5)) == Leverage(0.0, 0.0, 0.0, 0.0)


@pytest.mark.parametrize("m", [10, 38, 1000])
def test_rounding_noise_in_posteriors_gives_zero_leverage(m):
    s = balanced_constant_sample(m)
    paired = np.repeat(np.random.default_rng(m).uniform(0.1, 1.0, size=m // 2), 2)
    lev = leverage(induce_dt(s), s, paired)
    assert lev == Leverage(0.0, 0.0, 0.0, 0.0)


def test_perfect_tree_has_edge_near_one():
    s = separable_sample()
    lev = leverage(induce_dt(s), s, np.full(s.m, 0.5))
    assert 1.0 - 1e-8 < lev.r <= R_MAX
    assert math.isfinite(lev.alpha) and lev.alpha > 0.5


def test_edge_of_one_is_clamped():
    s = Sample.from_arrays(np.arange(6.0).reshape(-1, 1), [1] * 6)
    lev = leverage(induce_dt(s), s, np.full(s.m, 0.5))
    assert lev.clamped
    assert lev.r == R_MAX
    assert lev.kappa == pytest.approx(2.0 * math.atanh(R_MAX))
    assert lev.alpha == pytest.approx(lev.kappa / lev.kappa_star)


def test_alpha_minimises_the_secant_bound(sample):
    tree = induce_dt(sample, max_nodes=7)
    weights = np.random.default_rng(1).uniform(0.2, 0.8, sample.m)
    lev = leverage(tree, sample, weights)
    assert 0.0 < lev.r < 1.0
    best = minimize_scalar(lambda a: secant_bound(a, lev.r, lev.kappa_star), bracket=(0.0, 1.0), tol=1e-12)
    assert lev.alpha == pytest.approx(best.x, abs=1e-5)
    assert secant_bound(lev.alpha, lev.r, lev.kappa_star) <= secant_bound(0.0, lev.r, lev.kappa_star)


def test_logistic_loss():
    assert logistic_loss(np.zeros(5)) == pytest.approx(math.log(2.0))
    assert logistic_loss([50.0]) == pytest.approx(0.0, abs=1e-20)


# === boosting ===

def test_single_round(sample):
    ens = boost(sample, T=1, max_nodes=7)
    assert len(ens) == 1
    assert len(ens.losses) == 2 and len(ens.weights) == 2
    assert ens.losses[0] == pytest.approx(math.log(2.0))
    assert ens.weights[0].tolist() == [0.5] * sample.m


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_boosting_lowers_the_loss(seed):
    s = synthetic_sample(np.random.default_rng(seed), m=200, d=3)
    ens = boost(s, T=20, max_nodes=7)
    assert len(ens) == 20 and not ens.stopped_early
    assert np.all(np.diff(ens.losses) <= 1e-12)
    assert ens.losses[-1] < ens.losses[1] < ens.losses[0]
    assert ensemble_error(ens, s) < 50.0


def test_weights_have_closed_form(sample):
    ens = boost(sample, T=10, max_nodes=7)
    margins = ensemble_margins(ens, sample)
    expected = 1.0 / (1.0 + np.exp(sample.labels * margins))
    assert np.allclose(ens.weights[-1], expected, rtol=1e-10, atol=0.0)


def test_kappa_star_matches_mdt_maximum(sample):
    ens = boost(sample, T=5, max_nodes=15)
    for lev, mdt in zip(ens.leverages, ens.mdts):
        assert mdt.max_abs_prediction() == pytest.approx(lev.kappa_star, rel=1e-6)


def test_zero_edge_stops_early():
    s = balanced_constant_sample()
    ens = boost(s, T=5)
    assert ens.stopped_early
    assert len(ens) == 1
    assert ens.alphas == [0.0]
    assert ensemble_predict(ens, (1.0,)) == 0.0
    assert ensemble_predict(ens, (1.0,), as_mdt=True) == 0.0
    assert ensemble_error(ens, s) == 50.0  # H = 0 predicts the positive class


def test_mdt_predictions_follow_the_ensemble(sample):
    ens = boost(sample, T=4, max_nodes=7)
    x = sample.row(0)
    dt_value = ensemble_predict(ens, x)
    assert dt_value == pytest.approx(ensemble_margins(ens, sample)[0])
    assert ensemble_predict(ens, x, as_mdt=True) == pytest.approx(ensemble_margins(ens, sample, as_mdt=True)[0])


def test_ensemble_dict_round_trip(sample):
    ens = boost(sample, T=3, max_nodes=7)
    back = BoostedEnsemble.from_dict(ens.to_dict())
    assert back.alphas == ens.alphas
    assert back.losses == ens.losses
    assert np.array_equal(ensemble_margins(back, sample), ensemble_margins(ens, sample))


def test_empty_ensemble_and_bad_rounds(sample):
    with pytest.raises(ValueError):
        boost(sample, T=0)
    with pytest.raises(ValueError):
        ensemble_predict(BoostedEnsemble([], []), sample.row(0))


@pytest.mark.skipif("TSELF_BREASTWISC" not in os.environ, reason="set TSELF_BREASTWISC to a breast-cancer-wisconsin CSV")
def test_breastwisc_cross_validation():
    data = load_csv(os.environ["TSELF_BREASTWISC"], os.environ.get("TSELF_BREASTWISC_LABEL", "class"),
                    os.environ.get("TSELF_BREASTWISC_POSITIVE", "4"))
    result = cross_validate(data, 10, 0, trees=20, tree_size=31)
    assert len(result.folds) == 10
    assert result.dt_summary[0] <= 10.0
    assert result.p_value > 0.05
