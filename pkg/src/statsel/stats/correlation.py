"""Correlation tests: Pearson (and point-biserial), Spearman, Kendall tau-b."""
import math

import numpy as np

from ..errors import DegenerateSample, DomainError
from .result import (
    TestResult,
    as_vector,
    check_sidedness,
    rankdata,
    require_n,
    t_pvalues,
    tie_counts,
    z_pvalues,
)


def _paired_vectors(x, y):
    x, y = as_vector(x, "x"), as_vector(y, "y")
    if len(x) != len(y):
        raise DomainError(f"x and y differ in length ({len(x)} vs {len(y)})")
    require_n(x, 3, "correlation")
    return x, y


def _pearson(x, y):
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSample("correlation is undefined for a constant variable")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _r_to_t(r, n):
    if abs(r) >= 1.0:
        return math.copysign(math.inf, r)
    return r * math.sqrt((n - 2) / (1.0 - r * r))


def pearson_r(x, y, sidedness="two-sided", test="pearson_r"):
    """Pearson product-moment correlation with its t-test (n - 2 dof).

    Called with ``y`` coded 0/1 this is the point-biserial correlation.
    """
    check_sidedness(sidedness)
    x, y = _paired_vectors(x, y)
    n = len(x)
    r = _pearson(x, y)
    t = _r_to_t(r, n)
    p, p2 = t_pvalues(t, n - 2, sidedness)
    return TestResult(test, "r", r, p, p2, sidedness, dof=(n - 2,), effect_size=("r", r),
                      sample_sizes={"n": n}, details={"t": t})


def pointbiserial_r(continuous, dichotomous, sidedness="two-sided"):
    """Pearson r between a continuous variable and a 0/1 coded dichotomy."""
    codes = as_vector(dichotomous, "dichotomous")
    if not set(np.unique(codes)) <= {0.0, 1.0}:
        raise DomainError("the dichotomous variable must be coded 0/1")
    return pearson_r(continuous, codes, sidedness, test="pointbiserial")


def spearman_rho(x, y, sidedness="two-sided"):
    check_sidedness(sidedness)
    x, y = _paired_vectors(x, y)
    n = len(x)
    rho = _pearson(rankdata(x), rankdata(y))
    t = _r_to_t(rho, n)
    p, p2 = t_pvalues(t, n - 2, sidedness)
    return TestResult("spearman_rho", "rho", rho, p, p2, sidedness, dof=(n - 2,),
                      effect_size=("rho", rho), sample_sizes={"n": n}, details={"t": t})


def kendall_tau(x, y, sidedness="two-sided"):
    """Kendall tau-b; p from the normal approximation with tie-corrected variance."""
    check_sidedness(sidedness)
    x, y = _paired_vectors(x, y)
    n = len(x)
    s = 0
    for i in range(n - 1):
        s += int(np.sum(np.sign(x[i + 1:] - x[i]) * np.sign(y[i + 1:] - y[i])))
    n0 = n * (n - 1) // 2
    tx, ty = tie_counts(x), tie_counts(y)
    n1 = int(np.sum(tx * (tx - 1) // 2))
    n2 = int(np.sum(ty * (ty - 1) // 2))
    if n0 == n1 or n0 == n2:
        raise DegenerateSample("Kendall's tau is undefined when a variable is entirely tied")
    tau = s / math.sqrt((n0 - n1) * (n0 - n2))

    var = (n * (n - 1) * (2 * n + 5)
           - np.sum(tx * (tx - 1) * (2 * tx + 5))
           - np.sum(ty * (ty - 1) * (2 * ty + 5))) / 18.0
    var += (np.sum(tx * (tx - 1) * (tx - 2)) * np.sum(ty * (ty - 1) * (ty - 2))
            / (9.0 * n * (n - 1) * (n - 2)))
    var += np.sum(tx * (tx - 1)) * np.sum(ty * (ty - 1)) / (2.0 * n * (n - 1))
    z = s / math.sqrt(var)
    p, p2 = z_pvalues(z, sidedness)
    return TestResult("kendall_tau", "tau", tau, p, p2, sidedness, effect_size=("tau", tau),
                      sample_sizes={"n": n}, details={"S": s, "z": z})
