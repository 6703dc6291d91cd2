"""Precondition atoms and their evaluation.

An atom is a property of one or more variables (normality, equal variance,
data type, number of groups, independence of observations...).  Structural
atoms are decided from declarations and design alone; normality and equal
variance run Shapiro-Wilk and Levene's test on the data.  User claims in the
assumptions override computed values, and every evaluation is memoized for
the duration of a run.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Optional

import numpy as np

from .dataset import _numeric_column, group_samples
from .errors import DegenerateSample, DomainError, EmptyGroup, InsufficientData, StatselError
from .stats.distributions import f_sf, normal_sf

# atom kinds
VARIABLE_COUNT = "variable_count"
DTYPE = "dtype"
NORMALITY = "normality"
EQUAL_VARIANCE = "equal_variance"
INDEPENDENT = "independent_observations"
DEPENDENT = "dependent_observations"
GROUP_COUNT = "group_count"
ATOM_KINDS = (VARIABLE_COUNT, DTYPE, NORMALITY, EQUAL_VARIANCE, INDEPENDENT, DEPENDENT,
              GROUP_COUNT)
STRUCTURAL_KINDS = (VARIABLE_COUNT, DTYPE, INDEPENDENT, DEPENDENT, GROUP_COUNT)

# Data-type classes.  "ordinal" means an ordered scale: ordinal, interval or ratio.
DTYPE_CLASSES = {
    "continuous": ("interval", "ratio"),
    "categorical": ("nominal", "ordinal"),
    "ordinal": ("ordinal", "interval", "ratio"),
}

# footnote codes of the precondition vocabulary, used in reports
_CODES = {VARIABLE_COUNT: None, DTYPE: 4, NORMALITY: 5, EQUAL_VARIANCE: 6,
          INDEPENDENT: 7, DEPENDENT: 7, GROUP_COUNT: None}


@dataclass(frozen=True, order=True)
class PropertyId:
    """One precondition atom.

    ``param`` qualifies the kind: ``"=2"`` / ``">=2"`` for counts, a class
    name from :data:`DTYPE_CLASSES` for dtype atoms.  For normality,
    ``variables`` is ``(y,)`` or ``(y, x)`` (``y`` within each category of
    ``x``); for equal variance it is ``(y, x)``.
    """

    kind: str
    variables: tuple
    param: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")

    @property
    def structural(self):
        return self.kind in STRUCTURAL_KINDS

    @property
    def code(self):
        if self.kind == VARIABLE_COUNT:
            return 2 if self.param == "=2" else 3 if self.param == ">=2" else 1
        if self.kind == GROUP_COUNT:
            return 8 if self.param == "=2" else 9
        return _CODES[self.kind]

    def label(self):
        if self.kind == NORMALITY and len(self.variables) == 2:
            args = f"{self.variables[0]} | {self.variables[1]}"
        elif self.kind == EQUAL_VARIANCE:
            args = " | ".join(self.variables)
        else:
            args = ", ".join(self.variables)
        if self.param is not None:
            return f"{self.kind}[{self.param}]({args})"
        return f"{self.kind}({args})"

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class PropertyValue:
    """Truth of an atom with its provenance.

    ``provenance`` is ``assumed`` (from a user claim), ``computed`` (from a
    statistical check, with ``evidence``) or ``structural``.  For assumed
    values the check is still run when the data allow it; its outcome is
    kept in ``checked``/``evidence`` so conflicts can be reported.
    """

    truth: bool
    provenance: str
    evidence: Optional[dict] = None
    checked: Optional[bool] = None

    @property
    def conflicts(self):
        return self.provenance == "assumed" and self.checked is not None and self.checked != self.truth


# ---------------------------------------------------------------------------
# Shapiro-Wilk (Royston 1995, AS R94)

_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)
_STD_NORMAL = NormalDist()


def _poly(coeffs, x):
    out = 0.0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def shapiro_weights(n):
    """Royston's approximation to the Shapiro-Wilk coefficients (ascending order)."""
    if n < 3:
        raise InsufficientData(3, n, "Shapiro-Wilk")
    if n == 3:
        return np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    m = np.array([_STD_NORMAL.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)])
    mm = float(m @ m)
    u = 1.0 / math.sqrt(n)
    a = np.empty(n)
    an = m[-1] / math.sqrt(mm) + _poly(_C1, u)
    if n > 5:
        an1 = m[-2] / math.sqrt(mm) + _poly(_C2, u)
        phi = (mm - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an ** 2 - 2 * an1 ** 2)
        a[:] = m / math.sqrt(phi)
        a[-1], a[-2] = an, an1
        a[0], a[1] = -an, -an1
    else:
        phi = (mm - 2 * m[-1] ** 2) / (1 - 2 * an ** 2)
        a[:] = m / math.sqrt(phi)
        a[-1], a[0] = an, -an
    return a


def shapiro_wilk(sample):
    """Shapiro-Wilk W and its p-value (Royston's normalising transformations).

    Requires 3 <= n <= 5000 and a non-constant sample.
    """
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = len(x)
    if n < 3:
        raise InsufficientData(3, n, "Shapiro-Wilk")
    if n > 5000:
        raise DomainError(f"Shapiro-Wilk supports at most 5000 observations, got {n}")
    if not np.all(np.isfinite(x)):
        raise DegenerateSample("sample contains non-finite values")
    ss = float(np.sum((x - x.mean()) ** 2))
    if ss == 0.0 or x[0] == x[-1]:
        raise DegenerateSample("Shapiro-Wilk needs a non-constant sample")
    a = shapiro_weights(n)
    w = float(a @ x) ** 2 / ss
    w = min(w, 1.0)

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        return w, max(0.0, min(1.0, p))
    w1 = math.log1p(-w) if w < 1.0 else -math.inf
    if n <= 11:
        gamma = _poly(_G, n)
        if w1 >= gamma:
            return w, 0.0
        y = -math.log(gamma - w1)
        mean = _poly(_C3, n)
        sd = math.exp(_poly(_C4, n))
    else:
        y = w1
        ln = math.log(n)
        mean = _poly(_C5, ln)
        sd = math.exp(_poly(_C6, ln))
    if math.isinf(y):
        return w, 1.0
    return w, normal_sf((y - mean) / sd)


# ---------------------------------------------------------------------------
# Levene

def levene_test(groups, center="mean"):
    """Levene's test for equal variances.

    W is the one-way ANOVA F statistic on absolute deviations from each
    group's center (``"mean"``, or ``"median"`` for Brown-Forsythe), with
    (k - 1, N - k) dof.
    """
    if hasattr(groups, "samples"):
        categories, samples = groups.categories, groups.samples
    else:
        samples = [np.asarray(g, dtype=float).ravel() for g in groups]
        categories = list(range(len(samples)))
    k = len(samples)
    if k < 2:
        raise InsufficientData(2, k, "Levene groups")
    for c, g in zip(categories, samples):
        if len(g) == 0:
            raise EmptyGroup(c)
        if len(g) < 2:
            raise InsufficientData(2, len(g), f"Levene group {c}")
    if center not in ("mean", "median"):
        raise ValueError(f"unknown Levene center {center!r}")
    fn = np.mean if center == "mean" else np.median
    z = [np.abs(g - fn(g)) for g in samples]
    sizes = np.array([len(g) for g in z], dtype=float)
    big_n = sizes.sum()
    zbar = np.array([g.mean() for g in z])
    grand = float(np.concatenate(z).mean())
    between = float(np.sum(sizes * (zbar - grand) ** 2)) / (k - 1)
    within = float(sum(np.sum((g - g.mean()) ** 2) for g in z)) / (big_n - k)
    if within == 0.0:
        if between == 0.0:
            return 0.0, 1.0
        return math.inf, 0.0
    w = between / within
    return w, f_sf(w, k - 1, big_n - k) if w > 0 else 1.0


# ---------------------------------------------------------------------------
# evaluation

@dataclass
class PropertyCache:
    """Memo table from atom to value (or to the error its evaluation raised).

    Each key is computed at most once even under concurrent access: a
    per-key lock serialises the first evaluation.
    """

    entries: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _key_locks: dict = field(default_factory=dict, repr=False)

    def get_or_compute(self, prop, compute):
        if prop in self.entries:
            return self.entries[prop]
        if prop in self.errors:
            raise self.errors[prop]
        with self._lock:
            lock = self._key_locks.setdefault(prop, threading.Lock())
        with lock:
            if prop in self.entries:
                return self.entries[prop]
            if prop in self.errors:
                raise self.errors[prop]
            try:
                value = compute()
            except StatselError as exc:
                self.errors[prop] = exc
                raise
            self.entries[prop] = value
            return value

    def __contains__(self, prop):
        return prop in self.entries or prop in self.errors

    def __len__(self):
        return len(self.entries) + len(self.errors)


@dataclass
class EvalContext:
    """What atom evaluation may consult: the validated spec and (lazily) the data."""

    spec: object
    dataset: object = None
    levene_center: str = "mean"

    @property
    def alpha(self):
        return self.spec.assumptions.alpha

    def decl(self, name):
        return self.spec.variable(name)


def find_claim(prop, assumptions):
    """The user claim covering ``prop``, if any.

    A claim about normality of ``y`` overall also covers normality of ``y``
    within groups of any factor.
    """
    if prop.kind not in (NORMALITY, EQUAL_VARIANCE):
        return None
    for c in assumptions.claims:
        if c.property != prop.kind:
            continue
        if tuple(c.variables) == prop.variables:
            return c
        if prop.kind == NORMALITY and len(c.variables) == 1 and c.variables[0] == prop.variables[0]:
            return c
    return None


def _structural(prop, ctx):
    design = ctx.spec.design
    if prop.kind == VARIABLE_COUNT:
        n = len(prop.variables)
        return n == 2 if prop.param == "=2" else n >= 2 if prop.param == ">=2" else n == 1
    if prop.kind == DTYPE:
        return ctx.decl(prop.variables[0]).dtype in DTYPE_CLASSES[prop.param]
    if prop.kind == GROUP_COUNT:
        decl = ctx.decl(prop.variables[0])
        k = len(decl.categories) if decl.is_categorical else 0
        return k == 2 if prop.param == "=2" else k >= 2
    within = all(v in design.within_subjects for v in prop.variables)
    if prop.kind == DEPENDENT:
        return within
    return not any(v in design.within_subjects for v in prop.variables)


def _check_normality(prop, ctx):
    y = prop.variables[0]
    if ctx.dataset is None:
        raise InsufficientData(3, 0, "normality check (no data loaded)")
    if len(prop.variables) == 2:
        groups = group_samples(ctx.dataset, y, prop.variables[1])
        samples = dict(zip(groups.categories, groups.samples))
    else:
        col = np.array([v for v in _numeric_column(ctx.dataset, y) if v is not None], dtype=float)
        samples = {"all": col}
    evidence = {}
    ok = True
    for label, s in samples.items():
        w, p = shapiro_wilk(s)
        evidence[str(label)] = {"test": "shapiro_wilk", "W": w, "p_value": p, "n": len(s)}
        ok = ok and p > ctx.alpha
    return ok, evidence


def _check_equal_variance(prop, ctx):
    y, x = prop.variables
    if ctx.dataset is None:
        raise InsufficientData(2, 0, "equal-variance check (no data loaded)")
    groups = group_samples(ctx.dataset, y, x)
    w, p = levene_test(groups, center=ctx.levene_center)
    return p > ctx.alpha, {"test": f"levene[{ctx.levene_center}]", "W": w, "p_value": p,
                           "groups": {str(c): len(s) for c, s in zip(groups.categories, groups.samples)}}


def _compute(prop, ctx):
    """(truth, evidence) from data; raises for insufficient or degenerate data."""
    if prop.kind == NORMALITY:
        if not ctx.decl(prop.variables[0]).is_continuous:
            return False, None
        return _check_normality(prop, ctx)
    return _check_equal_variance(prop, ctx)


def evaluate_property(prop, ctx, cache=None):
    """Decide one atom, consulting and filling ``cache``.

    Order of precedence: structural atoms (never touch data); the
    continuous-only axiom for normality; a user claim (``assumed``, with the
    computed check attached when it can run); the computed check at level
    alpha (passes when p > alpha).
    """
    cache = cache if cache is not None else PropertyCache()

    def compute():
        if prop.structural:
            return PropertyValue(_structural(prop, ctx), "structural")
        if prop.kind == NORMALITY and not ctx.decl(prop.variables[0]).is_continuous:
            return PropertyValue(False, "structural")
        claim = find_claim(prop, ctx.spec.assumptions)
        if claim is not None:
            try:
                truth, evidence = _compute(prop, ctx)
            except StatselError:
                return PropertyValue(claim.value, "assumed")
            return PropertyValue(claim.value, "assumed", evidence, truth)
        truth, evidence = _compute(prop, ctx)
        return PropertyValue(truth, "computed", evidence, truth)

    return cache.get_or_compute(prop, compute)
