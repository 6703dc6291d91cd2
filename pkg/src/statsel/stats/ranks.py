"""Rank tests: Mann-Whitney U, Wilcoxon signed rank, Kruskal-Wallis, Friedman.

Exact null distributions are built by counting (integer dynamic
programming), so exact p-values are ratios of integers.
"""
import math
from functools import lru_cache

import numpy as np

from ..errors import AllZeroDifferences, DegenerateSample, DomainError, InsufficientData, NoCompleteUnits
from .distributions import chi2_sf
from .result import TestResult, as_vector, check_sidedness, rankdata, require_n, tie_counts, z_pvalues

# enumeration limits; beyond these (or with ties) the normal approximation is used
MW_EXACT_MAX_N = 20
WILCOXON_EXACT_MAX_N = 15


@lru_cache(maxsize=None)
def mann_whitney_counts(n1, n2):
    """Number of group labelings giving U = 0..n1*n2 (U counts pairs with x > y).

    Recurrence on the largest observation: it belongs to x (adding n2 to U)
    or to y (adding nothing).
    """
    if n1 == 0 or n2 == 0:
        return (1,)
    with_x = mann_whitney_counts(n1 - 1, n2)
    with_y = mann_whitney_counts(n1, n2 - 1)
    out = [0] * (n1 * n2 + 1)
    for u, c in enumerate(with_x):
        out[u + n2] += c
    for u, c in enumerate(with_y):
        out[u] += c
    return tuple(out)


@lru_cache(maxsize=None)
def signed_rank_counts(n):
    """Number of sign patterns giving W+ = 0..n(n+1)/2 for ranks 1..n."""
    counts = [1]
    for r in range(1, n + 1):
        nxt = counts + [0] * r
        for s, c in enumerate(counts):
            nxt[s + r] += c
        counts = nxt
    return tuple(counts)


def _exact_pvalues(counts, observed, sidedness):
    total = sum(counts)
    k = int(observed)
    le = sum(counts[:k + 1])
    ge = sum(counts[k:])
    two = min(total, 2 * min(le, ge)) / total
    if sidedness == "greater":
        return ge / total, two
    if sidedness == "less":
        return le / total, two
    return two, two


def _approx_pvalues(stat, mean, sd, sidedness):
    """Normal approximation with a 0.5 continuity correction."""
    if sd == 0.0:
        return 1.0, 1.0
    dev = stat - mean
    z_up = (dev - 0.5) / sd
    z_lo = (dev + 0.5) / sd
    z_two = max(abs(dev) - 0.5, 0.0) / sd
    two = min(1.0, 2.0 * z_pvalues(z_two, "greater")[0])
    if sidedness == "greater":
        return z_pvalues(z_up, "greater")[0], two
    if sidedness == "less":
        return z_pvalues(z_lo, "less")[0], two
    return two, two


def mann_whitney_u(a, b, sidedness="two-sided", exact=None):
    """Mann-Whitney U (Wilcoxon rank-sum) test of a against b.

    The statistic is U for ``a``: the number of (a_i, b_j) pairs with
    a_i > b_j, ties counting one half.  ``sidedness="greater"`` tests for a
    stochastically larger than b.  ``exact=None`` enumerates when
    n1 + n2 <= 20 and there are no ties.
    """
    check_sidedness(sidedness)
    a, b = as_vector(a, "a"), as_vector(b, "b")
    require_n(a, 1, "each group")
    require_n(b, 1, "each group")
    n1, n2 = len(a), len(b)
    big_n = n1 + n2
    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled)
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    ties = tie_counts(pooled)
    has_ties = bool(np.any(ties > 1))
    mean = n1 * n2 / 2.0
    tie_term = float(np.sum(ties ** 3 - ties)) / (big_n * (big_n - 1)) if big_n > 1 else 0.0
    sd = math.sqrt(n1 * n2 / 12.0 * ((big_n + 1) - tie_term))
    if exact is None:
        exact = big_n <= MW_EXACT_MAX_N and not has_ties
    elif exact and has_ties:
        raise DomainError("exact Mann-Whitney p-values need tie-free data")
    if exact:
        p, p2 = _exact_pvalues(mann_whitney_counts(n1, n2), u, sidedness)
    else:
        p, p2 = _approx_pvalues(u, mean, sd, sidedness)
    z = (u - mean) / sd if sd > 0 else 0.0
    return TestResult("mann_whitney_u", "U", u, p, p2, sidedness,
                      effect_size=("r", abs(z) / math.sqrt(big_n)),
                      sample_sizes={"n1": n1, "n2": n2},
                      details={"U2": n1 * n2 - u, "z": z, "exact": bool(exact)})


def wilcoxon_signed_rank(a, b=None, sidedness="two-sided", exact=None):
    """Wilcoxon signed-rank test on differences a - b (or on ``a`` alone).

    Zero differences are dropped and counted.  The reported statistic is
    W = min(W+, W-); direction uses W+.  ``exact=None`` enumerates sign
    patterns when at most 15 nonzero differences remain and no |d| is tied.
    """
    check_sidedness(sidedness)
    d = as_vector(a, "a")
    if b is not None:
        b = as_vector(b, "b")
        if len(b) != len(d):
            raise DomainError("paired samples must have equal length")
        d = d - b
    zeros = int(np.sum(d == 0.0))
    d = d[d != 0.0]
    n = len(d)
    if n == 0:
        raise AllZeroDifferences("every paired difference is zero")
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    ties = tie_counts(np.abs(d))
    has_ties = bool(np.any(ties > 1))
    mean = n * (n + 1) / 4.0
    sd = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(ties ** 3 - ties)) / 48.0)
    if exact is None:
        exact = n <= WILCOXON_EXACT_MAX_N and not has_ties
    elif exact and has_ties:
        raise DomainError("exact signed-rank p-values need untied |differences|")
    if exact:
        p, p2 = _exact_pvalues(signed_rank_counts(n), w_plus, sidedness)
    else:
        p, p2 = _approx_pvalues(w_plus, mean, sd, sidedness)
    z = (w_plus - mean) / sd if sd > 0 else 0.0
    return TestResult("wilcoxon_signed_rank", "W", min(w_plus, w_minus), p, p2, sidedness,
                      effect_size=("r", abs(z) / math.sqrt(n)),
                      sample_sizes={"pairs": n + zeros, "nonzero": n},
                      details={"W_plus": w_plus, "W_minus": w_minus, "zero_differences": zeros,
                               "z": z, "exact": bool(exact)})


def kruskal_wallis(groups):
    """Kruskal-Wallis H with tie correction; effect size epsilon squared."""
    groups = [as_vector(g, "group") for g in groups]
    k = len(groups)
    if k < 2:
        raise InsufficientData(2, k, "Kruskal-Wallis groups")
    for g in groups:
        require_n(g, 1, "each group")
    pooled = np.concatenate(groups)
    big_n = len(pooled)
    if big_n < 3:
        raise InsufficientData(3, big_n, "Kruskal-Wallis")
    ranks = rankdata(pooled)
    h = 0.0
    start = 0
    for g in groups:
        r = ranks[start:start + len(g)].sum()
        h += r * r / len(g)
        start += len(g)
    h = 12.0 / (big_n * (big_n + 1)) * h - 3.0 * (big_n + 1)
    ties = tie_counts(pooled)
    correction = 1.0 - float(np.sum(ties ** 3 - ties)) / (big_n ** 3 - big_n)
    if correction == 0.0:
        raise DegenerateSample("all values are tied")
    h = max(0.0, h / correction)
    p = chi2_sf(h, k - 1)
    return TestResult("kruskal_wallis", "H", h, p, p, "two-sided", dof=(k - 1,),
                      effect_size=("epsilon_squared", h / (big_n - 1)),
                      sample_sizes={"groups": [len(g) for g in groups], "N": big_n})


def friedman(matrix):
    """Friedman Q on a units x conditions matrix (ranks within units, ties averaged).

    Q = 12 / (n k (k+1)) * sum R_j^2 - 3 n (k+1), referred to chi-square
    with k - 1 dof.  Kendall's W = Q / (n (k - 1)) is reported as effect size.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise NoCompleteUnits("Friedman needs a non-empty units x conditions matrix")
    if not np.all(np.isfinite(x)):
        raise DomainError("matrix contains non-finite values")
    n, k = x.shape
    if n < 2:
        raise InsufficientData(2, n, "units")
    if k < 2:
        raise InsufficientData(2, k, "conditions")
    ranks = np.vstack([rankdata(row) for row in x])
    col = ranks.sum(axis=0)
    q = 12.0 / (n * k * (k + 1)) * float(np.sum(col ** 2)) - 3.0 * n * (k + 1)
    q = max(0.0, q)
    p = chi2_sf(q, k - 1)
    return TestResult("friedman", "Q", q, p, p, "two-sided", dof=(k - 1,),
                      effect_size=("kendalls_w", q / (n * (k - 1))),
                      sample_sizes={"units": n, "conditions": k},
                      details={"rank_sums": col.tolist()})
