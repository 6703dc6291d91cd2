import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statsel.dataset import load_csv
from statsel.properties import NORMALITY, PropertyCache, PropertyId, PropertyValue
from statsel.solver import (
    build_knowledge_base,
    knowledge_base_json,
    reconcile_assumptions,
    role_binding,
    select_tests,
    solve,
)
from support import (
    DEMO,
    brute_force_valid,
    comparison_spec,
    grouped_dataset,
    relationship_spec,
    solver_oracle_sweep,
    uscrime_spec,
)

KB = {r.test: r for r in build_knowledge_base()}


def codes(test):
    return sorted({a.code for a in KB[test].bind(role_binding(uscrime_spec()))} - {None})


@pytest.mark.parametrize("test,expected", [
    ("students_t", [2, 4, 5, 6, 7, 8]),
    ("welch_t", [2, 4, 5, 7, 8]),
    ("mann_whitney_u", [2, 4, 7, 8]),
    ("paired_t", [2, 4, 5, 7, 8]),
    ("wilcoxon_signed_rank", [2, 4, 7, 8]),
    ("f_test", [2, 4, 5, 6, 7, 9]),
    ("kruskal_wallis", [2, 4, 7, 9]),
    ("rm_anova", [2, 4, 5, 6, 7, 9]),
    ("friedman", [2, 4, 7, 9]),
    ("factorial_anova", [3, 4, 5, 6, 7, 9]),
])
def test_comparison_rules_carry_the_vocabulary_codes(test, expected):
    assert codes(test) == expected


def test_paired_tests_require_dependence_and_independent_tests_do_not():
    for t in ("paired_t", "wilcoxon_signed_rank", "rm_anova", "friedman"):
        assert "dependent_observations" in {a.kind for a in KB[t].atoms}
    for t in ("students_t", "welch_t", "mann_whitney_u", "f_test", "kruskal_wallis"):
        assert "independent_observations" in {a.kind for a in KB[t].atoms}


def test_relationship_rules():
    b = role_binding(relationship_spec("ratio", "ratio"))
    kinds = lambda t: sorted(a.code for a in KB[t].bind(b))  # noqa: E731
    assert kinds("pearson_r") == [2, 4, 4, 5, 5]
    assert kinds("kendall_tau") == [2, 4, 4]
    assert kinds("spearman_rho") == [2, 4, 4]


def test_bootstrap_has_empty_conjunction_and_others_do_not():
    for r in KB.values():
        assert (not r.atoms) == (r.test == "bootstrap")
    assert len(KB) == 18
    power = [r.power_rank for r in build_knowledge_base()]
    assert power == sorted(power) and len(set(power)) == len(power)


def test_kb_json_lists_everything():
    doc = json.loads(knowledge_base_json())
    assert [d["test"] for d in doc] == [r.test for r in build_knowledge_base()]
    assert doc[-1]["atoms"] == [] and doc[-1]["fallback"]


def test_uscrime_selection():
    v = uscrime_spec()
    out = select_tests(v, load_csv(DEMO / "uscrime.csv", v))
    assert {"students_t", "welch_t", "mann_whitney_u"} <= set(out.valid_tests)
    assert set(out.valid_tests) | set(out.invalid_tests) == set(KB)
    assert not set(out.valid_tests) & set(out.invalid_tests)
    assert out.warnings == [] and not out.fallback
    for v_ in out.valid:
        assert len(v_.values) == len(v_.atoms) and all(x.truth for x in v_.values)


def test_within_subjects_allows_only_dependent_tests():
    v = comparison_spec(within=True)
    rng = np.random.default_rng(3)
    base = rng.normal(10, 2, 30)
    ds = grouped_dataset({"a": base + rng.normal(0.5, 1, 30), "b": base + rng.normal(0, 1, 30)},
                         v, within=True)
    out = select_tests(v, ds)
    assert set(out.valid_tests) <= {"paired_t", "wilcoxon_signed_rank", "rm_anova", "friedman"}
    assert "wilcoxon_signed_rank" in out.valid_tests
    assert out.failing_atom("students_t").kind == "independent_observations"


def test_all_atoms_false_gives_bootstrap_only():
    v = uscrime_spec()
    b = role_binding(v)
    cache = PropertyCache()
    for r in KB.values():
        for a in r.bind(b):
            cache.entries[a] = PropertyValue(False, "computed")
    out = select_tests(v, None, cache=cache)
    assert out.valid_tests == ["bootstrap"] and out.fallback


def test_evaluation_errors_invalidate_only_the_test():
    # two observations per group: Shapiro-Wilk cannot run, rank tests still can
    v = comparison_spec()
    ds = grouped_dataset({"a": [1.0, 2.0], "b": [3.0, 5.0]}, v)
    out = select_tests(v, ds)
    assert "mann_whitney_u" in out.valid_tests
    bad = [i for i in out.invalid if i.test == "students_t"][0]
    assert bad.atom.kind == NORMALITY and "could not evaluate" in bad.reason


def test_atoms_are_evaluated_once_across_tests():
    v = uscrime_spec()
    ds = load_csv(DEMO / "uscrime.csv", v)
    out = select_tests(v, ds)
    normal = PropertyId(NORMALITY, ("Prob", "So"))
    assert normal in out.cache.entries
    # Student's t, Welch, F-test and both ANOVA ids need it; the memo holds one entry
    users = [x for x in out.valid if normal in x.atoms]
    assert len(users) >= 4
    assert all(x.values[x.atoms.index(normal)] is out.cache.entries[normal] for x in users)


def test_lazy_short_circuit():
    evaluated = []

    def evaluate(atom):
        evaluated.append(atom)
        return PropertyValue(atom != "x", "computed")

    class R:
        def __init__(self, test, fallback=False):
            self.test, self.fallback = test, fallback

    out = solve([(R("t1"), ("x", "y", "z")), (R("t2"), ("y",)), (R("boot", True), ())], evaluate)
    assert evaluated == ["x", "y"]
    assert out.valid_tests == ["t2"]
    assert out.failing_atom("t1") == "x"


def test_determinism_across_threads():
    v = uscrime_spec()
    ds = load_csv(DEMO / "uscrime.csv", v)

    def run(_):
        out = select_tests(v, ds)
        return out.valid_tests, [(i.test, i.atom) for i in out.invalid]

    with ThreadPoolExecutor(4) as pool:
        results = list(pool.map(run, range(8)))
    assert all(r == results[0] for r in results)


def test_reconcile_assumptions():
    v = comparison_spec(claims="normality(y) = true")
    rng = np.random.default_rng(0)
    ds = grouped_dataset({"a": rng.exponential(size=40), "b": rng.exponential(size=40)}, v)
    out = select_tests(v, ds)
    assert len(out.warnings) == 1
    w = out.warnings[0]
    assert w.assumed is True and w.computed is False and w.evidence
    assert "students_t" in out.valid_tests
    # no assumptions: nothing to reconcile
    plain = comparison_spec()
    assert select_tests(plain, grouped_dataset({"a": [1.0] * 3, "b": [2.0] * 3}, plain)).warnings == []
    # an assumption whose property was never computed
    assert reconcile_assumptions(v.assumptions, PropertyCache()) == []


def test_solver_matches_brute_force_on_random_rule_subsets():
    _, assignments, mismatches = solver_oracle_sweep(n_subsets=12, seed=99)
    assert assignments > 0 and mismatches == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**14 - 1), st.integers(0, 13))
def test_monotonicity(mask, flip):
    v = uscrime_spec()
    b = role_binding(v)
    rules = build_knowledge_base()
    atoms = sorted({a for r in rules if v.hypothesis.form in r.forms for a in r.bind(b)})
    truth = {a: bool(mask >> i & 1) for i, a in enumerate(atoms)}
    before = set(brute_force_valid(rules, truth, b, v.hypothesis.form))
    truth[atoms[flip % len(atoms)]] = True
    after = set(brute_force_valid(rules, truth, b, v.hypothesis.form))
    assert before - {"bootstrap"} <= after

    def chosen(t):
        cache = PropertyCache()
        cache.entries.update({a: PropertyValue(x, "assumed") for a, x in t.items()})
        return set(select_tests(v, None, cache=cache).valid_tests)
    assert chosen(truth) == after
