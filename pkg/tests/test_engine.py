import numpy as np
import pytest
import scipy.stats as ss

from statsel.engine import analyze, execute_test
from statsel.errors import DataError
from support import (
    DEMO,
    columns_dataset,
    comparison_spec,
    grouped_dataset,
    relationship_spec,
    rng,
)


def test_uscrime_end_to_end():
    rep = analyze(DEMO / "uscrime.analysis")
    t = rep.entry("students_t").result
    assert t.p_two_sided == pytest.approx(0.000123649, rel=1e-4)
    assert rep.entry("welch_t").result.p_two_sided == pytest.approx(0.000650578, rel=1e-4)
    assert rep.entry("mann_whitney_u").result.p_value == pytest.approx(9.27319e-05, rel=1e-4)
    assert rep.sidedness == "greater" and not rep.bootstrap_fallback


def test_spec_path_and_data_override(tmp_path):
    src = (DEMO / "uscrime.csv").read_text()
    (tmp_path / "copy.csv").write_text(src)
    a = analyze(DEMO / "uscrime.analysis")
    b = analyze(DEMO / "uscrime.analysis", data_path=tmp_path / "copy.csv")
    assert a == b


def test_missing_data_path_is_an_error():
    with pytest.raises(DataError):
        analyze(comparison_spec())


def test_between_groups_runners_match_scipy():
    r = rng(2)
    a, b = r.normal(1, 1, 25), r.normal(0, 1.4, 30)
    v = comparison_spec()
    ds = grouped_dataset({"a": a, "b": b}, v)
    t = execute_test("students_t", v, ds).result
    assert t.p_value == pytest.approx(ss.ttest_ind(a, b, alternative="greater").pvalue, rel=1e-9)
    w = execute_test("welch_t", v, ds).result
    assert w.p_two_sided == pytest.approx(ss.ttest_ind(a, b, equal_var=False).pvalue, rel=1e-9)
    f = execute_test("f_test", v, ds).result
    assert f.statistic == pytest.approx(t.statistic ** 2, rel=1e-10)


def test_within_subjects_runners():
    r = rng(4)
    base = r.normal(5, 2, 20)
    a, b = base + r.normal(0.8, 1, 20), base + r.normal(0, 1, 20)
    v = comparison_spec(within=True)
    ds = grouped_dataset({"a": a, "b": b}, v, within=True)
    rep = analyze(v, ds)
    assert set(rep.valid_tests) <= {"paired_t", "wilcoxon_signed_rank", "rm_anova", "friedman"}
    pt = execute_test("paired_t", v, ds).result
    assert pt.p_value == pytest.approx(ss.ttest_rel(a, b, alternative="greater").pvalue, rel=1e-9)
    rm = execute_test("rm_anova", v, ds).result
    assert rm.statistic == pytest.approx(pt.statistic ** 2, rel=1e-10)


def test_incomplete_units_are_excluded_and_reported():
    v = comparison_spec(within=True)
    ds = grouped_dataset({"a": [1, 2, 3, 4, 6], "b": [2, 3, 5, 7]}, v, within=True)
    ex = execute_test("paired_t", v, ds)
    assert ex.exclusions == {"incomplete_units": 1}
    assert ex.result.sample_sizes == {"pairs": 4}


def test_missing_and_other_category_rows_are_counted():
    v = comparison_spec(("a", "b", "c"))
    ds = grouped_dataset({"a": [1, 2, None, 4], "b": [2, 3, 5, 7], "c": [9, 9, 8]}, v)
    ex = execute_test("mann_whitney_u", v, ds)
    assert ex.exclusions == {"dropped_missing": 1, "other_categories": 3}


def test_linear_relationship_runners_match_scipy():
    r = rng(6)
    x = r.normal(size=40)
    y = x + r.normal(size=40)
    v = relationship_spec("ratio", "ratio")
    ds = columns_dataset({"x": list(x), "y": list(y)}, v)
    rep = analyze(v, ds)
    assert rep.valid_tests == ["pearson_r", "spearman_rho", "kendall_tau"]
    assert rep.entry("pearson_r").result.statistic == pytest.approx(ss.pearsonr(x, y)[0], rel=1e-12)
    assert rep.entry("kendall_tau").result.statistic == pytest.approx(ss.kendalltau(x, y)[0], rel=1e-12)


def test_proportion_runners():
    v = relationship_spec("nominal {a, b}", "nominal {u, v}")
    xs, ys = list("aaaaabbbbbbaab"), list("uuuuvvvvvuvuvu")
    rep = analyze(v, columns_dataset({"x": xs, "y": ys}, v))
    assert rep.valid_tests == ["chi_square", "fisher_exact"]
    table = [[sum(1 for x, y in zip(xs, ys) if x == r and y == c) for c in "uv"] for r in "ab"]
    assert rep.entry("fisher_exact").result.p_two_sided == pytest.approx(
        ss.fisher_exact(table).pvalue, rel=1e-9)


def test_bootstrap_fallback_for_skewed_pointbiserial():
    r = rng(1)
    v = relationship_spec("nominal {lo, hi}", "ratio")
    ds = columns_dataset({"x": ["lo"] * 40 + ["hi"] * 40, "y": list(r.exponential(size=80))}, v)
    rep = analyze(v, ds, resamples=2000, seed=5)
    assert rep.valid_tests == ["bootstrap"] and rep.bootstrap_fallback
    res = rep.entry("bootstrap").result
    assert res.p_value is None and res.details["contrast"] == ["hi", "lo"]
    lo, hi = res.confidence_interval[1:]
    assert lo < res.statistic < hi
    assert analyze(v, ds, resamples=2000, seed=5) == rep


def test_bootstrap_refuses_nominal_outcome():
    v = relationship_spec("nominal {a, b}", "nominal {u, v}")
    ds = columns_dataset({"x": list("abab"), "y": list("uvuu")}, v)
    ex = execute_test("bootstrap", v, ds)
    assert ex.result is None and ex.error.startswith("DataError")


def test_errors_are_captured_per_test():
    v = comparison_spec()
    ds = grouped_dataset({"a": [1], "b": [2, 3]}, v)
    ex = execute_test("students_t", v, ds)
    assert ex.result is None and ex.error.startswith("InsufficientData")


def test_seed_changes_bootstrap_only():
    v = comparison_spec()
    r = rng(8)
    ds = grouped_dataset({"a": r.normal(1, 1, 20), "b": r.normal(0, 1, 20)}, v)
    a = execute_test("bootstrap", v, ds, seed=1, resamples=1000).result
    b = execute_test("bootstrap", v, ds, seed=2, resamples=1000).result
    assert a.statistic == b.statistic
    assert a.confidence_interval != b.confidence_interval
    assert execute_test("students_t", v, ds, seed=1) == execute_test("students_t", v, ds, seed=2)


def test_factorial_design_runs_both_anova_ids():
    r = rng(9)
    v = comparison_spec(extra_vars="h = nominal {p, q}", extra_ind=", h")
    n = 12
    g = ["a"] * (2 * n) + ["b"] * (2 * n)
    h = (["p"] * n + ["q"] * n) * 2
    y = [r.normal(1.0 if gi == "a" else 0.0) + (0.5 if hi == "q" else 0) for gi, hi in zip(g, h)]
    ds = columns_dataset({"g": g, "h": h, "y": y}, v)
    fa = execute_test("factorial_anova", v, ds).result
    tw = execute_test("two_way_anova", v, ds).result
    assert fa.test == "factorial_anova" and tw.test == "two_way_anova"
    assert fa.statistic == tw.statistic
    assert np.isfinite(fa.statistic)
