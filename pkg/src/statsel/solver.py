"""Test knowledge base and selection of the valid tests.

Every test is a conjunction of precondition atoms.  A test is valid exactly
when all its atoms hold.  Atoms are evaluated lazily, left to right, stopping
at the first false one, and every evaluation goes through one shared memo
table, so a property needed by several tests is checked once.  User claims
seed that table (see :func:`statsel.properties.evaluate_property`).  When no
test survives, the bootstrap, whose conjunction is empty, is the fallback.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import StatselError
from .properties import (
    DEPENDENT,
    DTYPE,
    EQUAL_VARIANCE,
    GROUP_COUNT,
    INDEPENDENT,
    NORMALITY,
    VARIABLE_COUNT,
    EvalContext,
    PropertyCache,
    PropertyId,
    evaluate_property,
)
from .speclang import GROUP_COMPARISON, LINEAR_RELATIONSHIP

FAMILIES = ("parametric", "nonparametric", "proportion", "resampling")
BOTH_FORMS = (GROUP_COMPARISON, LINEAR_RELATIONSHIP)


@dataclass(frozen=True)
class AtomTemplate:
    """An atom over role names; ``roles`` may include ``"factors*"``, which
    expands to one atom per design factor (or contributes all of them to a
    variable count)."""

    kind: str
    roles: tuple
    param: str | None = None


@dataclass(frozen=True)
class TestRequirement:
    __test__ = False

    test: str
    name: str
    family: str
    power_rank: int
    forms: tuple
    atoms: tuple = ()
    fallback: bool = False

    def bind(self, binding):
        """Instantiate the atom templates for concrete variables."""
        return _bind(self, tuple(sorted(binding.items())))


@lru_cache(maxsize=1024)
def _bind(req, items):
    binding = dict(items)
    out = []
    for t in req.atoms:
        if "factors*" in t.roles:
            if t.kind == VARIABLE_COUNT:
                names = []
                for r in t.roles:
                    names.extend(binding["factors*"] if r == "factors*" else [binding[r]])
                out.append(PropertyId(t.kind, tuple(names), t.param))
            else:
                for f in binding["factors*"]:
                    names = tuple(f if r == "factors*" else binding[r] for r in t.roles)
                    out.append(PropertyId(t.kind, names, t.param))
        else:
            out.append(PropertyId(t.kind, tuple(binding[r] for r in t.roles), t.param))
    return tuple(dict.fromkeys(out))


def _a(kind, *roles, param=None):
    return AtomTemplate(kind, roles, param)


def build_knowledge_base():
    """All supported tests with their precondition conjunctions, in power order."""
    vc2 = _a(VARIABLE_COUNT, "outcome", "factor", param="=2")
    cont_y = _a(DTYPE, "outcome", param="continuous")
    ord_y = _a(DTYPE, "outcome", param="ordinal")
    cat_x = _a(DTYPE, "factor", param="categorical")
    cat_y = _a(DTYPE, "outcome", param="categorical")
    norm = _a(NORMALITY, "outcome", "factor")
    eqvar = _a(EQUAL_VARIANCE, "outcome", "factor")
    indep = _a(INDEPENDENT, "factor")
    dep = _a(DEPENDENT, "factor")
    two = _a(GROUP_COUNT, "factor", param="=2")
    many = _a(GROUP_COUNT, "factor", param=">=2")
    xy2 = _a(VARIABLE_COUNT, "x", "y", param="=2")
    comparison = (GROUP_COMPARISON,)
    relation = (LINEAR_RELATIONSHIP,)
    factorial_atoms = (
        _a(VARIABLE_COUNT, "outcome", "factors*", param=">=2"),
        cont_y,
        _a(DTYPE, "factors*", param="categorical"),
        _a(NORMALITY, "outcome", "factors*"),
        _a(EQUAL_VARIANCE, "outcome", "factors*"),
        _a(INDEPENDENT, "factors*"),
        _a(GROUP_COUNT, "factors*", param=">=2"),
    )
    rows = [
        # parametric
        ("pearson_r", "Pearson's r", "parametric", relation,
         (xy2, _a(DTYPE, "x", param="continuous"), _a(DTYPE, "y", param="continuous"),
          _a(NORMALITY, "x"), _a(NORMALITY, "y"))),
        ("pointbiserial", "Pointbiserial r", "parametric", relation,
         (vc2, cont_y, cat_x, norm, two)),
        ("students_t", "Student's t-test", "parametric", comparison,
         (vc2, cont_y, cat_x, norm, eqvar, indep, two)),
        ("welch_t", "Welch's t-test", "parametric", comparison,
         (vc2, cont_y, cat_x, norm, indep, two)),
        ("paired_t", "Paired t-test", "parametric", comparison,
         (vc2, cont_y, cat_x, norm, dep, two)),
        ("f_test", "F-test", "parametric", comparison,
         (vc2, cont_y, cat_x, norm, eqvar, indep, many)),
        ("rm_anova", "RM one-way ANOVA", "parametric", comparison,
         (vc2, cont_y, cat_x, norm, eqvar, dep, many)),
        ("factorial_anova", "Factorial ANOVA", "parametric", comparison, factorial_atoms),
        ("two_way_anova", "Two-way ANOVA", "parametric", comparison, factorial_atoms),
        # nonparametric
        ("spearman_rho", "Spearman's rho", "nonparametric", relation,
         (xy2, _a(DTYPE, "x", param="ordinal"), _a(DTYPE, "y", param="ordinal"))),
        ("kendall_tau", "Kendall's tau", "nonparametric", relation,
         (xy2, _a(DTYPE, "x", param="ordinal"), _a(DTYPE, "y", param="ordinal"))),
        ("mann_whitney_u", "Mann-Whitney U", "nonparametric", comparison,
         (vc2, ord_y, cat_x, indep, two)),
        ("wilcoxon_signed_rank", "Wilcoxon signed rank", "nonparametric", comparison,
         (vc2, ord_y, cat_x, dep, two)),
        ("kruskal_wallis", "Kruskal-Wallis", "nonparametric", comparison,
         (vc2, ord_y, cat_x, indep, many)),
        ("friedman", "Friedman", "nonparametric", comparison,
         (vc2, ord_y, cat_x, dep, many)),
        # proportions
        ("chi_square", "Chi-square", "proportion", BOTH_FORMS,
         (vc2, cat_x, cat_y, many, _a(GROUP_COUNT, "outcome", param=">=2"))),
        ("fisher_exact", "Fisher's exact", "proportion", BOTH_FORMS,
         (vc2, cat_x, cat_y, two, _a(GROUP_COUNT, "outcome", param="=2"))),
    ]
    kb = [TestRequirement(test, name, family, rank, forms, atoms)
          for rank, (test, name, family, forms, atoms) in enumerate(rows)]
    kb.append(TestRequirement("bootstrap", "Bootstrap", "resampling", len(kb),
                              BOTH_FORMS, (), fallback=True))
    return kb


def knowledge_base_json(kb=None):
    """Machine-readable listing of every test and its atoms."""
    kb = kb if kb is not None else build_knowledge_base()
    doc = [
        {
            "test": r.test,
            "name": r.name,
            "family": r.family,
            "power_rank": r.power_rank,
            "forms": list(r.forms),
            "fallback": r.fallback,
            "atoms": [{"kind": a.kind, "roles": list(a.roles), "param": a.param} for a in r.atoms],
        }
        for r in kb
    ]
    return json.dumps(doc, indent=2) + "\n"


def role_binding(vspec):
    """Map role names used by the knowledge base to concrete variables."""
    h = vspec.hypothesis
    design = vspec.design
    if h.form == GROUP_COMPARISON:
        outcome, factor = h.dependent, h.independent
    else:
        a, b = h.variables
        cat_a = vspec.variable(a).is_categorical
        cat_b = vspec.variable(b).is_categorical
        if cat_a != cat_b:
            factor, outcome = (a, b) if cat_a else (b, a)
        elif a in design.dependent:
            outcome, factor = a, b
        else:
            outcome, factor = b, a
    factors = [factor] + [f for f in design.independent if f != factor and f != outcome]
    if h.form == LINEAR_RELATIONSHIP:
        x, y = h.variables
    else:
        x, y = factor, outcome
    return {"outcome": outcome, "factor": factor, "factors*": tuple(factors), "x": x, "y": y}


@dataclass(frozen=True)
class ValidTest:
    test: str
    atoms: tuple
    values: tuple


@dataclass(frozen=True)
class InvalidTest:
    test: str
    atom: PropertyId | None
    reason: str


@dataclass
class SelectionOutcome:
    valid: list = field(default_factory=list)
    invalid: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    fallback: bool = False
    cache: PropertyCache | None = None

    @property
    def valid_tests(self):
        return [v.test for v in self.valid]

    @property
    def invalid_tests(self):
        return [i.test for i in self.invalid]

    def failing_atom(self, test):
        for i in self.invalid:
            if i.test == test:
                return i.atom
        return None


def solve(rules, evaluate):
    """Core selection over already-bound rules.

    ``rules`` is a sequence of ``(requirement, atoms)`` in power order;
    ``evaluate(atom)`` returns an object with a boolean ``truth`` (or raises
    :class:`StatselError`, which invalidates only the test being examined).
    """
    outcome = SelectionOutcome()
    fallbacks = []
    for req, atoms in rules:
        if req.fallback:
            fallbacks.append((req, atoms))
            continue
        values = []
        failed = None
        for atom in atoms:
            try:
                value = evaluate(atom)
            except StatselError as exc:
                failed = InvalidTest(req.test, atom, f"could not evaluate: {exc}")
                break
            if not value.truth:
                failed = InvalidTest(req.test, atom, f"{atom} does not hold")
                break
            values.append(value)
        if failed is None:
            outcome.valid.append(ValidTest(req.test, tuple(atoms), tuple(values)))
        else:
            outcome.invalid.append(failed)
    for req, atoms in fallbacks:
        if outcome.valid:
            outcome.invalid.append(InvalidTest(req.test, None, "not needed: other tests are valid"))
        else:
            outcome.valid.append(ValidTest(req.test, (), ()))
            outcome.fallback = True
    return outcome


def select_tests(vspec, dataset, cache=None, kb=None, levene_center="mean"):
    """Find the valid tests for a validated spec on a dataset."""
    kb = kb if kb is not None else build_knowledge_base()
    cache = cache if cache is not None else PropertyCache()
    ctx = EvalContext(vspec, dataset, levene_center)
    binding = role_binding(vspec)
    form = vspec.hypothesis.form

    rules = []
    off_form = []
    for req in sorted(kb, key=lambda r: r.power_rank):
        if form not in req.forms:
            off_form.append(InvalidTest(req.test, None, f"does not test a {form.replace('_', ' ')}"))
            continue
        rules.append((req, req.bind(binding)))
    outcome = solve(rules, lambda atom: evaluate_property(atom, ctx, cache))
    outcome.invalid.extend(off_form)
    outcome.cache = cache
    outcome.warnings = reconcile_assumptions(vspec.assumptions, cache)
    return outcome


@dataclass(frozen=True)
class AssumptionConflict:
    atom: PropertyId
    assumed: bool
    computed: bool
    evidence: dict | None

    @property
    def message(self):
        return (f"assumption {self.atom} = {str(self.assumed).lower()} contradicts the data "
                f"check ({str(self.computed).lower()}); the assumption was used")

    def __str__(self):
        return self.message


def reconcile_assumptions(assumptions, cache):
    """One conflict per atom whose assumed value disagrees with its computed check."""
    if not assumptions.claims:
        return []
    out = []
    for atom in sorted(cache.entries):
        value = cache.entries[atom]
        if value.conflicts:
            out.append(AssumptionConflict(atom, value.truth, value.checked, value.evidence))
    return out
