"""Tests on contingency tables: Pearson chi-square and Fisher's exact test."""
import math

import numpy as np

from ..errors import DomainError, NotTwoByTwo, ZeroMargin
from .distributions import chi2_sf
from .result import TestResult, check_sidedness

# relative slack when comparing table probabilities for the two-sided Fisher p
FISHER_TIE_SLACK = 1e-7


def contingency_table(rows, cols, row_levels, col_levels):
    """Cross-tabulate two aligned label sequences; pairs with a missing label are skipped."""
    ri = {lv: i for i, lv in enumerate(row_levels)}
    ci = {lv: j for j, lv in enumerate(col_levels)}
    table = np.zeros((len(row_levels), len(col_levels)), dtype=np.int64)
    for r, c in zip(rows, cols):
        if r in ri and c in ci:
            table[ri[r], ci[c]] += 1
    return table


def _table(observed):
    t = np.asarray(observed)
    if t.ndim != 2 or t.shape[0] < 2 or t.shape[1] < 2:
        raise DomainError("a contingency table needs at least 2 rows and 2 columns")
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("contingency counts must be finite and nonnegative")
    if np.any(t.sum(axis=0) == 0) or np.any(t.sum(axis=1) == 0):
        raise ZeroMargin("a row or column of the table sums to zero")
    return t


def chi_square_test(observed):
    """Pearson chi-square test of independence (no continuity correction)."""
    t = _table(observed).astype(float)
    total = t.sum()
    expected = np.outer(t.sum(axis=1), t.sum(axis=0)) / total
    chi2 = float(np.sum((t - expected) ** 2 / expected))
    r, c = t.shape
    df = (r - 1) * (c - 1)
    p = chi2_sf(chi2, df)
    v = math.sqrt(chi2 / (total * (min(r, c) - 1)))
    notes = ()
    if np.any(expected < 5):
        notes = (f"{int(np.sum(expected < 5))} expected count(s) below 5; "
                 "the chi-square approximation may be poor",)
    return TestResult("chi_square", "chi2", chi2, p, p, "two-sided", dof=(df,),
                      effect_size=("cramers_v", v), sample_sizes={"N": int(total)},
                      details={"expected": expected.tolist(), "observed": t.astype(int).tolist()},
                      notes=notes)


def fisher_weights(table):
    """Hypergeometric numerators C(c1, a) C(c2, r1 - a) over the support of a.

    Returns (support, weights, denominator) as exact integers.
    """
    (a, b), (c, d) = table
    r1, c1, c2 = a + b, a + c, b + d
    n = a + b + c + d
    lo, hi = max(0, r1 - c2), min(r1, c1)
    support = list(range(lo, hi + 1))
    weights = [math.comb(c1, x) * math.comb(c2, r1 - x) for x in support]
    return support, weights, math.comb(n, r1)


def fisher_exact(observed, sidedness="two-sided"):
    """Fisher's exact test on a 2x2 table by hypergeometric enumeration.

    ``"greater"`` means the top-left cell (first row, first column) is
    larger than expected: the first row favours the first column.  The
    two-sided p sums every table no more probable than the observed one.
    """
    check_sidedness(sidedness)
    t = np.asarray(observed)
    if t.shape != (2, 2):
        raise NotTwoByTwo(f"Fisher's exact test needs a 2x2 table, got shape {t.shape}")
    t = _table(t)
    if np.any(t != np.round(t)):
        raise DomainError("Fisher's exact test needs integer counts")
    cells = [[int(v) for v in row] for row in t]
    support, weights, denom = fisher_weights(cells)
    a_obs = cells[0][0]
    w_obs = weights[support.index(a_obs)]
    scale = round(1 / FISHER_TIE_SLACK)
    two_num = sum(w for w in weights if w * scale <= w_obs * (scale + 1))
    upper = sum(w for x, w in zip(support, weights) if x >= a_obs)
    lower = sum(w for x, w in zip(support, weights) if x <= a_obs)
    p2 = min(1.0, two_num / denom)
    p = {"greater": upper / denom, "less": lower / denom, "two-sided": p2}[sidedness]
    (a, b), (c, d) = cells
    odds = (a * d) / (b * c) if b * c > 0 else math.inf if a * d > 0 else float("nan")
    return TestResult("fisher_exact", "odds_ratio", odds, min(1.0, p), p2, sidedness,
                      effect_size=("odds_ratio", odds), sample_sizes={"N": a + b + c + d},
                      details={"observed": cells})
