"""Percentile bootstrap for group means, their difference, and correlation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSample, DomainError, InsufficientData
from .result import TestResult, as_vector

DEFAULT_RESAMPLES = 10_000
DEFAULT_SEED = 0
_BLOCK = 2_000


def _resampled_means(sample, resamples, seed_seq):
    """Means of ``resamples`` bootstrap draws, generated in fixed-size blocks.

    Block ``i`` uses the i-th spawned child of ``seed_seq``, so the result does
    not depend on how the blocks are scheduled.
    """
    n = len(sample)
    n_blocks = -(-resamples // _BLOCK)
    out = np.empty(resamples)
    for i, child in enumerate(seed_seq.spawn(n_blocks)):
        rng = np.random.Generator(np.random.PCG64(child))
        size = min(_BLOCK, resamples - i * _BLOCK)
        idx = rng.integers(0, n, size=(size, n))
        out[i * _BLOCK:i * _BLOCK + size] = sample[idx].mean(axis=1)
    return out


def _percentile(draws, level):
    lo, hi = np.quantile(draws, [(1 - level) / 2, 1 - (1 - level) / 2])
    return float(lo), float(hi)


@dataclass(frozen=True)
class BootstrapCI:
    level: float
    group_cis: dict
    difference: float | None
    difference_ci: tuple | None
    resamples: int
    seed: int
    contrast: tuple | None = None

    @property
    def significant(self):
        """True when the difference interval excludes zero."""
        if self.difference_ci is None:
            return None
        lo, hi = self.difference_ci
        return not lo <= 0.0 <= hi


def bootstrap_ci(groups, level=0.95, resamples=DEFAULT_RESAMPLES, seed=DEFAULT_SEED,
                 contrast=None):
    """Percentile CIs for each group mean and for a difference of two means.

    ``groups`` maps labels to samples (any ordered mapping).  ``contrast``
    names the two groups whose mean difference (first minus second) gets an
    interval; it defaults to the first two groups.  Each group draws from its
    own child of ``SeedSequence(seed)``.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    if resamples < 1000:
        raise DomainError(f"use at least 1000 resamples, got {resamples}")
    labels = list(groups)
    samples = {k: as_vector(groups[k], f"group {k}") for k in labels}
    for k, s in samples.items():
        if len(s) < 2:
            raise InsufficientData(2, len(s), f"group {k}")

    children = np.random.SeedSequence(seed).spawn(len(labels))
    draws = {k: _resampled_means(samples[k], resamples, child)
             for k, child in zip(labels, children)}
    group_cis = {}
    for k in labels:
        lo, hi = _percentile(draws[k], level)
        group_cis[k] = {"mean": float(samples[k].mean()), "lo": lo, "hi": hi,
                        "n": len(samples[k])}

    diff = diff_ci = None
    if contrast is None and len(labels) >= 2:
        contrast = (labels[0], labels[1])
    if contrast is not None:
        left, right = contrast
        diff = float(samples[left].mean() - samples[right].mean())
        diff_ci = _percentile(draws[left] - draws[right], level)
    return BootstrapCI(level, group_cis, diff, diff_ci, resamples, seed, contrast)


def bootstrap_result(groups, level=0.95, resamples=DEFAULT_RESAMPLES, seed=DEFAULT_SEED,
                     contrast=None):
    """Wrap :func:`bootstrap_ci` as a :class:`TestResult` (no p-value)."""
    ci = bootstrap_ci(groups, level, resamples, seed, contrast)
    interval = (level, *ci.difference_ci) if ci.difference_ci is not None else None
    return TestResult(
        "bootstrap", "mean_difference", ci.difference if ci.difference is not None else float("nan"),
        None, None, "two-sided", confidence_interval=interval,
        sample_sizes={str(k): v["n"] for k, v in ci.group_cis.items()},
        details={"groups": {str(k): v for k, v in ci.group_cis.items()},
                 "contrast": [str(c) for c in ci.contrast] if ci.contrast else None,
                 "significant": ci.significant, "resamples": resamples, "seed": seed,
                 "generator": "PCG64"},
    )


def bootstrap_correlation(x, y, level=0.95, resamples=DEFAULT_RESAMPLES, seed=DEFAULT_SEED):
    """Percentile CI for Pearson's r, resampling (x, y) pairs.

    Resamples in which either coordinate is constant have no correlation and
    are discarded; their count is reported.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    if resamples < 1000:
        raise DomainError(f"use at least 1000 resamples, got {resamples}")
    x, y = as_vector(x, "x"), as_vector(y, "y")
    if len(x) != len(y):
        raise DomainError(f"x and y differ in length ({len(x)} vs {len(y)})")
    if len(x) < 3:
        raise InsufficientData(3, len(x), "pairs")
    n = len(x)
    n_blocks = -(-resamples // _BLOCK)
    rs = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_blocks)):
        rng = np.random.Generator(np.random.PCG64(child))
        size = min(_BLOCK, resamples - i * _BLOCK)
        idx = rng.integers(0, n, size=(size, n))
        bx, by = x[idx], y[idx]
        dx = bx - bx.mean(axis=1, keepdims=True)
        dy = by - by.mean(axis=1, keepdims=True)
        sxx, syy = (dx * dx).sum(axis=1), (dy * dy).sum(axis=1)
        ok = (sxx > 0) & (syy > 0)
        rs.append((dx * dy).sum(axis=1)[ok] / np.sqrt(sxx[ok] * syy[ok]))
    draws = np.clip(np.concatenate(rs), -1.0, 1.0)
    if len(draws) == 0:
        raise DegenerateSample("every resample has a constant variable")
    dx, dy = x - x.mean(), y - y.mean()
    if float(dx @ dx) == 0.0 or float(dy @ dy) == 0.0:
        raise DegenerateSample("correlation is undefined for a constant variable")
    r = float(dx @ dy) / math.sqrt(float(dx @ dx) * float(dy @ dy))
    lo, hi = _percentile(draws, level)
    return TestResult(
        "bootstrap", "r", r, None, None, "two-sided", confidence_interval=(level, lo, hi),
        effect_size=("r", r), sample_sizes={"n": n},
        details={"significant": not lo <= 0.0 <= hi, "resamples": resamples,
                 "discarded": resamples - len(draws), "seed": seed, "generator": "PCG64"},
    )
