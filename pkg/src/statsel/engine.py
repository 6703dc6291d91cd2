"""Execution of the selected tests, and the one-call analysis pipeline."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import stats
from .dataset import _numeric_column, group_samples, load_csv, pair_samples
from .errors import DataError, StatselError
from .solver import build_knowledge_base, role_binding, select_tests
from .speclang import GROUP_COMPARISON, ValidatedSpec, load_spec, validate_spec


@dataclass(frozen=True)
class Execution:
    """One executed test: a result, or the error that stopped it."""

    test: str
    result: stats.TestResult | None = None
    error: str | None = None
    exclusions: dict = field(default_factory=dict)


def _groups(ds, outcome, factor, categories=None):
    g = group_samples(ds, outcome, factor, categories)
    return g, {"dropped_missing": g.dropped, "other_categories": g.filtered}


def _paired(ds, outcome, factor, vspec, categories=None):
    p = pair_samples(ds, outcome, factor, vspec.design.key, categories)
    return p, {"incomplete_units": p.excluded}


def _aligned(ds, columns):
    """Rows where every listed column is present (numeric columns coded)."""
    cols = [c if isinstance(c, tuple) else ds[c] for c in columns]
    keep = [i for i in range(ds.row_count) if all(col[i] is not None for col in cols)]
    return [[col[i] for i in keep] for col in cols], ds.row_count - len(keep)


def _comparison_pair(h):
    return (h.left, h.right)


def _run(test, vspec, ds, binding, seed, resamples):
    h = vspec.hypothesis
    side = h.sidedness
    y, x = binding["outcome"], binding["factor"]
    group_form = h.form == GROUP_COMPARISON

    if test in ("students_t", "welch_t", "mann_whitney_u"):
        g, exc = _groups(ds, y, x, _comparison_pair(h))
        a, b = g.samples
        if test == "mann_whitney_u":
            return stats.mann_whitney_u(a, b, side), exc
        return stats.independent_t(a, b, "student" if test == "students_t" else "welch", side), exc
    if test in ("paired_t", "wilcoxon_signed_rank"):
        p, exc = _paired(ds, y, x, vspec, _comparison_pair(h))
        a, b = p.matrix[:, 0], p.matrix[:, 1]
        if test == "paired_t":
            return stats.paired_t(a, b, side), exc
        return stats.wilcoxon_signed_rank(a, b, side), exc
    if test in ("f_test", "kruskal_wallis"):
        g, exc = _groups(ds, y, x)
        fn = stats.one_way_anova if test == "f_test" else stats.kruskal_wallis
        return fn(list(g.samples)), exc
    if test in ("rm_anova", "friedman"):
        p, exc = _paired(ds, y, x, vspec)
        fn = stats.rm_one_way_anova if test == "rm_anova" else stats.friedman
        return fn(p.matrix), exc
    if test in ("factorial_anova", "two_way_anova"):
        factors = list(binding["factors*"])
        (yy, *fs), dropped = _aligned(ds, [_numeric_column(ds, y), *factors])
        res = stats.factorial_anova(np.asarray(yy, dtype=float), fs, factors)
        return dataclasses.replace(res, test=test), {"dropped_missing": dropped}
    if test in ("pearson_r", "spearman_rho", "kendall_tau"):
        a, b = binding["x"], binding["y"]
        (xa, xb), dropped = _aligned(ds, [_numeric_column(ds, a), _numeric_column(ds, b)])
        fn = {"pearson_r": stats.pearson_r, "spearman_rho": stats.spearman_rho,
              "kendall_tau": stats.kendall_tau}[test]
        return fn(xa, xb, side), {"dropped_missing": dropped}
    if test == "pointbiserial":
        # the second declared category is coded 1
        second = vspec.variable(x).categories[1]
        (yy, xx), dropped = _aligned(ds, [_numeric_column(ds, y), x])
        codes = [1.0 if c == second else 0.0 for c in xx]
        return stats.pointbiserial_r(yy, codes, side), {"dropped_missing": dropped}
    if test in ("chi_square", "fisher_exact"):
        rows_levels = vspec.variable(x).categories
        if group_form and test == "fisher_exact":
            rows_levels = _comparison_pair(h)
        (xx, yy), dropped = _aligned(ds, [x, y])
        table = stats.contingency_table(xx, yy, rows_levels, vspec.variable(y).categories)
        exc = {"dropped_missing": dropped}
        if test == "chi_square":
            return stats.chi_square_test(table), exc
        # association direction only has a meaning for a stated relationship sign
        return stats.fisher_exact(table, "two-sided" if group_form else side), exc
    if test == "bootstrap":
        return _bootstrap(vspec, ds, binding, seed, resamples)
    raise StatselError(f"no runner for test {test!r}")


def _bootstrap(vspec, ds, binding, seed, resamples):
    h = vspec.hypothesis
    y, x = binding["outcome"], binding["factor"]
    y_decl, x_decl = vspec.variable(y), vspec.variable(x)
    if y_decl.dtype == "nominal":
        raise DataError(f"{y} is nominal; the bootstrap needs a numeric or ordinal outcome")
    if x_decl.is_categorical:
        g, exc = _groups(ds, y, x)
        if h.form == GROUP_COMPARISON:
            contrast = _comparison_pair(h)
        else:
            contrast = (x_decl.categories[1], x_decl.categories[0])
        res = stats.bootstrap_result(g.as_dict(), resamples=resamples, seed=seed,
                                     contrast=contrast)
        return res, exc
    (xa, xb), dropped = _aligned(ds, [_numeric_column(ds, binding["x"]),
                                      _numeric_column(ds, binding["y"])])
    res = stats.bootstrap_correlation(xa, xb, resamples=resamples, seed=seed)
    return res, {"dropped_missing": dropped}


def execute_test(test, vspec, dataset, binding=None, seed=stats.bootstrap.DEFAULT_SEED,
                 resamples=stats.bootstrap.DEFAULT_RESAMPLES):
    """Run one test; statistical or data errors are captured, not raised."""
    binding = binding if binding is not None else role_binding(vspec)
    try:
        result, exclusions = _run(test, vspec, dataset, binding, seed, resamples)
    except StatselError as exc:
        return Execution(test, None, f"{type(exc).__name__}: {exc}")
    return Execution(test, result, None, exclusions)


def run_tests(vspec, dataset, outcome, seed=stats.bootstrap.DEFAULT_SEED,
              resamples=stats.bootstrap.DEFAULT_RESAMPLES):
    binding = role_binding(vspec)
    return [execute_test(t, vspec, dataset, binding, seed, resamples)
            for t in outcome.valid_tests]


def analyze(spec, dataset=None, *, seed=stats.bootstrap.DEFAULT_SEED,
            resamples=stats.bootstrap.DEFAULT_RESAMPLES, data_path=None, base_dir=None):
    """Validate, load, select, execute and report.

    ``spec`` may be a path, an :class:`AnalysisSpec` or a validated spec.
    Without ``dataset`` the CSV named by ``data_path`` (or by the spec's data
    section, relative to ``base_dir`` or to the spec file) is loaded.
    """
    from .report import build_report

    if isinstance(spec, (str, Path)):
        path = Path(spec)
        base_dir = base_dir if base_dir is not None else path.parent
        spec = load_spec(path)
    vspec = spec if isinstance(spec, ValidatedSpec) else validate_spec(spec)
    if dataset is None:
        target = data_path if data_path is not None else vspec.data_path
        if target is None:
            raise DataError("no data given: the spec has no data path and none was supplied")
        target = Path(target)
        if not target.is_absolute() and base_dir is not None and data_path is None:
            target = Path(base_dir) / target
        dataset = load_csv(target, vspec)
    kb = build_knowledge_base()
    outcome = select_tests(vspec, dataset, kb=kb)
    executions = run_tests(vspec, dataset, outcome, seed, resamples)
    return build_report(vspec, outcome, executions, kb=kb, seed=seed, resamples=resamples)
