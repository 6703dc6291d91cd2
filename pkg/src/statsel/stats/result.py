from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import DomainError, InsufficientData
from .distributions import normal_cdf, normal_sf, t_cdf, t_sf

SIDEDNESS = ("two-sided", "greater", "less")


@dataclass(frozen=True)
class TestResult:
    """Outcome of one executed test.

    ``p_value`` is taken in the direction of the hypothesis (``sidedness``);
    ``p_two_sided`` is always reported alongside it.  Omnibus tests (F,
    H, Q, chi-square) are inherently two-sided and report the same value in
    both fields.  The bootstrap reports no p-value.
    """

    __test__ = False  # not a pytest class

    test: str
    statistic_name: str
    statistic: float
    p_value: Optional[float]
    p_two_sided: Optional[float]
    sidedness: str = "two-sided"
    dof: Optional[tuple] = None
    effect_size: Optional[tuple] = None
    confidence_interval: Optional[tuple] = None
    sample_sizes: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    notes: tuple = ()


def check_sidedness(sidedness):
    if sidedness not in SIDEDNESS:
        raise DomainError(f"sidedness must be one of {SIDEDNESS}, got {sidedness!r}")
    return sidedness


def as_vector(x, name="sample"):
    arr = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return arr


def require_n(arr, n, what="sample"):
    if len(arr) < n:
        raise InsufficientData(n, len(arr), what)


def t_pvalues(t, df, sidedness):
    """(directional p, two-sided p) for a t statistic."""
    if math.isnan(t):
        return 1.0, 1.0
    upper, lower = t_sf(t, df), t_cdf(t, df)
    two = min(1.0, 2.0 * min(upper, lower))
    if sidedness == "greater":
        return upper, two
    if sidedness == "less":
        return lower, two
    return two, two


def z_pvalues(z, sidedness):
    upper, lower = normal_sf(z), normal_cdf(z)
    two = min(1.0, 2.0 * min(upper, lower))
    if sidedness == "greater":
        return upper, two
    if sidedness == "less":
        return lower, two
    return two, two


def rankdata(values):
    """Average ranks (1-based), ties share the mean of the ranks they span."""
    a = np.asarray(values, dtype=float)
    order = np.argsort(a, kind="mergesort")
    sorted_a = a[order]
    ranks = np.empty(len(a), dtype=float)
    i = 0
    n = len(a)
    while i < n:
        j = i
        while j + 1 < n and sorted_a[j + 1] == sorted_a[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def tie_counts(values):
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return counts
