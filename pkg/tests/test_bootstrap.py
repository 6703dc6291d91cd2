import numpy as np
import pytest

from statsel.errors import DomainError, InsufficientData
from statsel.stats import bootstrap_ci, bootstrap_correlation, bootstrap_result


def test_same_seed_same_interval():
    g = {"a": [1.0, 2.5, 3.0, 4.2, 5.1], "b": [2.0, 2.2, 2.9, 3.3]}
    assert bootstrap_ci(g, seed=7) == bootstrap_ci(g, seed=7)
    assert bootstrap_ci(g, seed=7).difference_ci != bootstrap_ci(g, seed=8).difference_ci


def test_interval_contains_point_estimate_and_is_ordered():
    rng = np.random.default_rng(1)
    g = {"x": rng.normal(3, 1, 40), "y": rng.normal(0, 1, 40)}
    ci = bootstrap_ci(g)
    for v in ci.group_cis.values():
        assert v["lo"] <= v["mean"] <= v["hi"]
    lo, hi = ci.difference_ci
    assert lo <= ci.difference <= hi
    assert ci.significant


def test_contrast_order_flips_sign():
    g = {"a": [1.0, 2.0, 3.0], "b": [5.0, 6.0, 7.0]}
    ab = bootstrap_ci(g, contrast=("a", "b"))
    ba = bootstrap_ci(g, contrast=("b", "a"))
    assert ab.difference == -ba.difference


def test_result_has_no_p_value():
    r = bootstrap_result({"a": [1.0, 2.0, 3.0], "b": [2.0, 3.0, 5.0]})
    assert r.p_value is None and r.p_two_sided is None
    assert r.confidence_interval[0] == 0.95


def test_resample_count_not_block_multiple():
    ci = bootstrap_ci({"a": [1.0, 2.0, 4.0]}, resamples=2345)
    assert ci.resamples == 2345 and ci.difference is None


def test_bad_arguments():
    with pytest.raises(DomainError):
        bootstrap_ci({"a": [1.0, 2.0]}, level=1.0)
    with pytest.raises(DomainError):
        bootstrap_ci({"a": [1.0, 2.0]}, resamples=10)
    with pytest.raises(InsufficientData):
        bootstrap_ci({"a": [1.0]})


def test_correlation_interval():
    rng = np.random.default_rng(0)
    x = rng.normal(size=60)
    y = x + rng.normal(size=60)
    r = bootstrap_correlation(x, y, seed=3)
    level, lo, hi = r.confidence_interval
    assert lo <= r.statistic <= hi and lo > 0
    assert r == bootstrap_correlation(x, y, seed=3)
