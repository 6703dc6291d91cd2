"""Mean comparisons: t-tests and the ANOVA family."""
import math

import numpy as np

from ..errors import DegenerateSample, DomainError, EmptyCell, InsufficientData, NoCompleteUnits
from .distributions import f_sf
from .result import TestResult, as_vector, check_sidedness, require_n, t_pvalues


def _zero_se_t(diff):
    # zero standard error: t is 0 for equal means, +-inf otherwise
    if diff == 0.0:
        return 0.0
    return math.copysign(math.inf, diff)


def independent_t(a, b, variant="student", sidedness="two-sided"):
    """Two-sample t-test of mean(a) - mean(b).

    ``variant="student"`` pools the variances (n1 + n2 - 2 dof);
    ``variant="welch"`` uses the Welch-Satterthwaite dof.  Cohen's d uses the
    pooled standard deviation in both cases.

    When both samples have zero variance the statistic is 0 for equal means
    (p = 1) and infinite otherwise, which drives the p-value to 0 in the
    direction of the difference.
    """
    check_sidedness(sidedness)
    if variant not in ("student", "welch"):
        raise DomainError(f"unknown t-test variant {variant!r}")
    a, b = as_vector(a, "a"), as_vector(b, "b")
    require_n(a, 2, "each group")
    require_n(b, 2, "each group")
    n1, n2 = len(a), len(b)
    v1, v2 = float(a.var(ddof=1)), float(b.var(ddof=1))
    diff = float(a.mean() - b.mean())
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)

    if variant == "student":
        df = n1 + n2 - 2
        se = math.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    else:
        q1, q2 = v1 / n1, v2 / n2
        se = math.sqrt(q1 + q2)
        if se > 0:
            df = (q1 + q2) ** 2 / (q1 * q1 / (n1 - 1) + q2 * q2 / (n2 - 1))
        else:
            df = n1 + n2 - 2
    t = diff / se if se > 0 else _zero_se_t(diff)
    p, p2 = t_pvalues(t, df, sidedness)
    sd = math.sqrt(pooled)
    d = diff / sd if sd > 0 else _zero_se_t(diff)
    name = "students_t" if variant == "student" else "welch_t"
    return TestResult(name, "t", t, p, p2, sidedness, dof=(df,), effect_size=("cohens_d", d),
                      sample_sizes={"n1": n1, "n2": n2},
                      details={"mean_difference": diff})


def paired_t(a, b, sidedness="two-sided"):
    """Paired t-test on the differences a - b (n - 1 dof); effect size d_z."""
    check_sidedness(sidedness)
    a, b = as_vector(a, "a"), as_vector(b, "b")
    if len(a) != len(b):
        raise DomainError("paired samples must have equal length")
    d = a - b
    require_n(d, 2, "pairs")
    n = len(d)
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean != 0.0:
            raise DegenerateSample("all paired differences are equal and nonzero")
        t = 0.0
        dz = 0.0
    else:
        t = mean / (sd / math.sqrt(n))
        dz = mean / sd
    p, p2 = t_pvalues(t, n - 1, sidedness)
    return TestResult("paired_t", "t", t, p, p2, sidedness, dof=(n - 1,),
                      effect_size=("cohens_d", dz), sample_sizes={"pairs": n},
                      details={"mean_difference": mean})


def _f_result(test, f, df1, df2, effect, sizes, details):
    p = f_sf(f, df1, df2) if f > 0 else 1.0
    return TestResult(test, "F", f, p, p, "two-sided", dof=(df1, df2), effect_size=effect,
                      sample_sizes=sizes, details=details)


def one_way_anova(groups):
    """Between-subjects one-way ANOVA; effect size eta squared."""
    groups = [as_vector(g, "group") for g in groups]
    k = len(groups)
    if k < 2:
        raise InsufficientData(2, k, "one-way ANOVA groups")
    for g in groups:
        require_n(g, 2, "each group")
    sizes = np.array([len(g) for g in groups], dtype=float)
    big_n = int(sizes.sum())
    means = np.array([g.mean() for g in groups])
    grand = float(np.concatenate(groups).mean())
    ss_between = float(np.sum(sizes * (means - grand) ** 2))
    ss_within = float(sum(np.sum((g - g.mean()) ** 2) for g in groups))
    df1, df2 = k - 1, big_n - k
    if ss_within == 0.0:
        if ss_between > 1e-12 * max(1.0, grand * grand) * big_n:
            raise DegenerateSample("zero within-group variance with differing group means")
        f = 0.0
    else:
        f = (ss_between / df1) / (ss_within / df2)
    eta = ss_between / (ss_between + ss_within) if ss_between + ss_within > 0 else 0.0
    return _f_result("f_test", f, df1, df2, ("eta_squared", eta),
                     {"groups": [int(s) for s in sizes], "N": big_n},
                     {"ss_between": ss_between, "ss_within": ss_within})


def rm_one_way_anova(matrix):
    """One-way repeated-measures ANOVA on a units x conditions matrix.

    SS_total = SS_subjects + SS_conditions + SS_error; F compares conditions
    with error on (k-1, (n-1)(k-1)) dof.  Effect size is partial eta squared.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise NoCompleteUnits("repeated-measures ANOVA needs a non-empty units x conditions matrix")
    if not np.all(np.isfinite(x)):
        raise DomainError("matrix contains non-finite values")
    n, k = x.shape
    if n < 2:
        raise InsufficientData(2, n, "units")
    if k < 2:
        raise InsufficientData(2, k, "conditions")
    grand = x.mean()
    row = x.mean(axis=1, keepdims=True)
    col = x.mean(axis=0, keepdims=True)
    ss_subjects = float(k * np.sum((row - grand) ** 2))
    ss_conditions = float(n * np.sum((col - grand) ** 2))
    ss_error = float(np.sum((x - row - col + grand) ** 2))
    df1, df2 = k - 1, (n - 1) * (k - 1)
    scale = float(np.sum((x - grand) ** 2))
    if ss_error <= 1e-14 * scale or ss_error == 0.0:
        if ss_conditions > 1e-14 * scale:
            raise DegenerateSample("conditions differ but the error term is zero")
        f = 0.0
    else:
        f = (ss_conditions / df1) / (ss_error / df2)
    denom = ss_conditions + ss_error
    partial = ss_conditions / denom if denom > 0 else 0.0
    return _f_result("rm_anova", f, df1, df2, ("partial_eta_squared", partial),
                     {"units": n, "conditions": k},
                     {"ss_subjects": ss_subjects, "ss_conditions": ss_conditions,
                      "ss_error": ss_error})


def _dummies(labels, levels):
    # treatment coding, first level as reference
    return np.column_stack([(labels == lv).astype(float) for lv in levels[1:]])


def _rss(y, *blocks):
    x = np.column_stack([np.ones(len(y)), *blocks])
    beta, *_ = np.linalg.lstsq(x, y, rcond=None)
    r = y - x @ beta
    return float(r @ r)


def factorial_anova(y, factors, names=None):
    """Between-subjects ANOVA with one or two factors, Type II sums of squares.

    ``factors`` is a list of label arrays aligned with ``y``.  The returned
    result carries the first factor's F as its statistic; the full table is
    in ``details["effects"]``.  With a single factor this is the one-way
    ANOVA.
    """
    y = as_vector(y, "outcome")
    factors = [np.asarray(f, dtype=object) for f in factors]
    if not 1 <= len(factors) <= 2:
        raise DomainError("factorial ANOVA supports one or two factors")
    names = list(names) if names else [f"factor{i + 1}" for i in range(len(factors))]
    for f in factors:
        if len(f) != len(y):
            raise DomainError("factor and outcome lengths differ")
    levels = [list(dict.fromkeys(f.tolist())) for f in factors]
    for nm, lv in zip(names, levels):
        if len(lv) < 2:
            raise InsufficientData(2, len(lv), f"levels of {nm}")
    big_n = len(y)
    mains = [_dummies(f, lv) for f, lv in zip(factors, levels)]
    total = float(np.sum((y - y.mean()) ** 2))

    rows = []
    if len(factors) == 1:
        rss_full = _rss(y, mains[0])
        df_resid = big_n - len(levels[0])
        rows.append((names[0], len(levels[0]) - 1, max(0.0, total - rss_full)))
    else:
        a, b = factors
        for la in levels[0]:
            for lb in levels[1]:
                if not np.any((a == la) & (b == lb)):
                    raise EmptyCell(f"no observations for {names[0]}={la}, {names[1]}={lb}")
        inter = np.column_stack([ca * cb for ca in mains[0].T for cb in mains[1].T])
        rss_a = _rss(y, mains[0])
        rss_b = _rss(y, mains[1])
        rss_ab = _rss(y, mains[0], mains[1])
        rss_full = _rss(y, mains[0], mains[1], inter)
        da, db = len(levels[0]) - 1, len(levels[1]) - 1
        df_resid = big_n - len(levels[0]) * len(levels[1])
        rows.append((names[0], da, max(0.0, rss_b - rss_ab)))
        rows.append((names[1], db, max(0.0, rss_a - rss_ab)))
        rows.append((f"{names[0]}:{names[1]}", da * db, max(0.0, rss_ab - rss_full)))
    if df_resid <= 0:
        raise InsufficientData(df_resid + big_n + 1, big_n, "observations for the residual term")

    ss_resid = 0.0 if total == 0.0 else rss_full
    effects = []
    for name, df, ss in rows:
        if total == 0.0:
            ss = 0.0
        if ss_resid <= 1e-14 * total:
            if ss > 1e-14 * total:
                raise DegenerateSample(f"{name}: zero residual variance with a nonzero effect")
            f, p = 0.0, 1.0
        else:
            f = (ss / df) / (ss_resid / df_resid)
            p = f_sf(f, df, df_resid) if f > 0 else 1.0
        partial = ss / (ss + ss_resid) if ss + ss_resid > 0 else 0.0
        effects.append({"effect": name, "df": df, "sum_sq": ss, "mean_sq": ss / df,
                        "F": f, "p_value": p, "partial_eta_squared": partial})
    first = effects[0]
    return TestResult("factorial_anova", "F", first["F"], first["p_value"], first["p_value"],
                      "two-sided", dof=(first["df"], df_resid),
                      effect_size=("partial_eta_squared", first["partial_eta_squared"]),
                      sample_sizes={"N": big_n},
                      details={"effects": effects,
                               "residual": {"df": df_resid, "sum_sq": ss_resid}})
