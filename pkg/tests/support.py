"""Builders for small synthetic analyses used across the test modules."""
from pathlib import Path

import numpy as np

from statsel.dataset import Dataset
from statsel.speclang import parse_spec, validate_spec

ROOT = Path(__file__).resolve().parent.parent
DEMO = ROOT / "demo"
DATA = Path(__file__).resolve().parent / "data"


def spec(text):
    return validate_spec(parse_spec(text))


def comparison_spec(categories=("a", "b"), dtype="ratio", relation=">", claims="",
                    within=False, extra_vars="", extra_ind=""):
    cats = ", ".join(categories)
    design = "study_type = experiment\nindependent = g{}\ndependent = y\n".format(extra_ind)
    if within:
        design += "key = id\nwithin_subjects = g\n"
    ydecl = f"{dtype} {{lo, mid, hi}}" if dtype == "ordinal" else dtype
    return spec(f"""
[variables]
g = nominal {{{cats}}}
y = {ydecl}
{extra_vars}
[design]
{design}
[assumptions]
{claims}
[hypothesis]
expr = g:{categories[0]} {relation} g:{categories[1]}
""")


def grouped_dataset(groups, vspec, within=False):
    """Long-format dataset from ``{category: values}``.

    With ``within=True`` the i-th value of every group belongs to unit ``u<i>``.
    """
    g, y, ids = [], [], []
    for cat, values in groups.items():
        for i, v in enumerate(values):
            g.append(cat)
            y.append(v if v is None or isinstance(v, str) else float(v))
            ids.append(f"u{i:04d}")
    cols = {"g": g, "y": y}
    if within:
        cols["id"] = ids
    dtypes = {v.name: v.dtype for v in vspec.variables}
    cats = {v.name: v.categories for v in vspec.variables if v.is_categorical}
    return Dataset.from_columns(cols, dtypes=dtypes, categories=cats,
                                key_column="id" if within else None)


def relationship_spec(xdecl, ydecl, sign="+", claims=""):
    return spec(f"""
[variables]
x = {xdecl}
y = {ydecl}
[design]
study_type = observational
contributor = x
outcome = y
[assumptions]
{claims}
[hypothesis]
expr = x ~ {sign}y
""")


def columns_dataset(columns, vspec, key=None):
    dtypes = {v.name: v.dtype for v in vspec.variables}
    cats = {v.name: v.categories for v in vspec.variables if v.is_categorical}
    return Dataset.from_columns(columns, dtypes=dtypes, categories=cats, key_column=key)


def rng(seed):
    return np.random.default_rng(seed)


def uscrime_spec():
    from statsel.speclang import load_spec, validate_spec
    return validate_spec(load_spec(DEMO / "uscrime.analysis"))


def brute_force_valid(rules, truth, binding, form):
    """Valid tests by evaluating every conjunction in full (no short circuit)."""
    valid = [r.test for r in rules
             if not r.fallback and form in r.forms and all([truth[a] for a in r.bind(binding)])]
    if not valid and any(r.fallback for r in rules):
        valid = [r.test for r in rules if r.fallback]
    return valid


def solver_oracle_sweep(n_subsets=50, seed=0, max_atoms=12):
    """Compare select_tests with brute force over every truth assignment.

    Returns (subsets checked, assignments checked, mismatches).
    """
    import random

    from statsel.properties import PropertyCache, PropertyValue
    from statsel.solver import build_knowledge_base, role_binding, select_tests

    specs = [uscrime_spec(), relationship_spec("nominal {lo, hi}", "ratio")]
    kb = build_knowledge_base()
    fallback = [r for r in kb if r.fallback]
    candidates = [r for r in kb if not r.fallback]
    rnd = random.Random(seed)
    assignments = 0
    mismatches = []
    for i in range(n_subsets):
        vspec = specs[i % 2]
        binding = role_binding(vspec)
        form = vspec.hypothesis.form
        while True:
            subset = rnd.sample(candidates, rnd.randint(1, len(candidates)))
            atoms = sorted({a for r in subset if form in r.forms for a in r.bind(binding)})
            if len(atoms) <= max_atoms:
                break
        rules = sorted(subset + fallback, key=lambda r: r.power_rank)
        for mask in range(2 ** len(atoms)):
            truth = {a: bool(mask >> i & 1) for i, a in enumerate(atoms)}
            cache = PropertyCache()
            cache.entries.update({a: PropertyValue(t, "computed") for a, t in truth.items()})
            got = select_tests(vspec, None, cache=cache, kb=rules).valid_tests
            want = brute_force_valid(rules, truth, binding, form)
            assignments += 1
            if got != want:
                mismatches.append((tuple(r.test for r in rules), mask, got, want))
    return n_subsets, assignments, mismatches
