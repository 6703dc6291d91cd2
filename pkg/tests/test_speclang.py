import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statsel.errors import (
    DuplicateVariable,
    HypothesisRoleError,
    IncompleteDesign,
    InvalidAlpha,
    InvalidAssumption,
    InvalidDeclaration,
    MissingSection,
    RoleConflict,
    SpecSyntaxError,
    UnknownCategory,
    UnknownVariable,
    UnsupportedForm,
    WithinWithoutKey,
)
from statsel.speclang import (
    GROUP_COMPARISON,
    LINEAR_RELATIONSHIP,
    AnalysisSpec,
    AssumptionSet,
    Claim,
    StudyDesignDecl,
    VariableDecl,
    dump_spec,
    load_spec,
    parse_hypothesis,
    parse_spec,
    validate_spec,
)
from support import DEMO

USCRIME = (DEMO / "uscrime.analysis").read_text()


def test_uscrime_spec_mirrors_the_scenario():
    s = parse_spec(USCRIME)
    assert s.data_path == "uscrime.csv"
    assert s.variable("So") == VariableDecl("So", "nominal", ("0", "1"))
    assert s.variable("Prob") == VariableDecl("Prob", "ratio", (), (0.0, 1.0))
    assert s.design == StudyDesignDecl("observational", ("So",), ("Prob",))
    assert s.assumptions == AssumptionSet(0.05, (Claim("normality", ("Prob",), True),))
    h = s.hypothesis
    assert (h.form, h.dependent, h.independent, h.left, h.right, h.relation) == (
        GROUP_COMPARISON, "Prob", "So", "1", "0", ">")
    assert h.sidedness == "greater"
    v = validate_spec(s)
    assert v.roles == {"So": "contributor", "Prob": "outcome"}


def test_json_twin_parses_to_the_same_spec():
    assert load_spec(DEMO / "uscrime.json") == load_spec(DEMO / "uscrime.analysis")


def _doc(variables="x = ratio\ng = nominal {a, b}", design="study_type = experiment\n"
         "independent = g\ndependent = x", hypothesis="expr = g:a > g:b", extra=""):
    return (f"[variables]\n{variables}\n[design]\n{design}\n[hypothesis]\n{hypothesis}\n"
            f"{extra}")


@pytest.mark.parametrize("text,error", [
    ("[variables]\nx = ratio\n", MissingSection),
    (_doc(variables="x = ratio\nx = ordinal {a}"), DuplicateVariable),
    (_doc(variables="x = weird\ng = nominal {a, b}"), SpecSyntaxError),
    (_doc(hypothesis="expr = g:a > g:c"), UnknownCategory),
    (_doc(hypothesis="expr = q:a > q:b"), UnknownVariable),
    (_doc(hypothesis="expr = g:a > x:b"), UnsupportedForm),
    (_doc(hypothesis="expr = x ~ g ~ x"), UnsupportedForm),
    (_doc(extra="[bogus]\n"), SpecSyntaxError),
    ("x = 1\n", SpecSyntaxError),
    (_doc(design="study_type = experiment\ncolour = g"), SpecSyntaxError),
    (_doc(extra="[assumptions]\nalpha = lots\n"), SpecSyntaxError),
    (_doc(extra="[assumptions]\nskewness(x) = true\n"), SpecSyntaxError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_spec(text)


def test_syntax_error_carries_line_number():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("[variables]\nx = ratio\nthis line is wrong\n")
    assert info.value.line == 3


@pytest.mark.parametrize("text,error", [
    (_doc(design="study_type = experiment\nindependent = g, x\ndependent = x"), RoleConflict),
    (_doc(design="study_type = experiment\nindependent = g", hypothesis="expr = g ~ x"),
     IncompleteDesign),
    (_doc(design="study_type = experiment\nindependent = g\ndependent = x\n"
          "within_subjects = g"), WithinWithoutKey),
    (_doc(extra="[assumptions]\nalpha = 1.5\n"), InvalidAlpha),
    (_doc(extra="[assumptions]\nnormality(g) = true\n"), InvalidAssumption),
    (_doc(extra="[assumptions]\nequal_variance(x | x) = true\n"), InvalidAssumption),
    (_doc(variables="x = ratio {a}\ng = nominal {a, b}"), InvalidDeclaration),
    (_doc(variables="x = ratio [3, 1]\ng = nominal {a, b}"), InvalidDeclaration),
    (_doc(variables="x = ratio\ng = nominal {a, a, b}"), InvalidDeclaration),
    (_doc(variables="x = ratio\ng = nominal", hypothesis="expr = g ~ x"), InvalidDeclaration),
    (_doc(design="study_type = experiment\nindependent = x\ndependent = g",
          hypothesis="expr = g:a > g:b\ndependent = x"), HypothesisRoleError),
])
def test_validation_errors(text, error):
    with pytest.raises(error):
        validate_spec(parse_spec(text))


def test_json_rejects_unknown_keys():
    with pytest.raises(SpecSyntaxError):
        parse_spec('{"variables": [], "design": {}, "hypothesis": {}, "extra": 1}', fmt="json")
    with pytest.raises(MissingSection):
        parse_spec('{"variables": [{"name": "x", "dtype": "ratio"}]}', fmt="json")


def test_relationship_forms():
    decls = (VariableDecl("a", "ratio"), VariableDecl("b", "ordinal", ("lo", "hi")))
    assert parse_hypothesis("a ~ +b", decls).sidedness == "greater"
    assert parse_hypothesis("a ~ -b", decls).sidedness == "less"
    h = parse_hypothesis("a ~ b", decls)
    assert (h.form, h.sign, h.sidedness) == (LINEAR_RELATIONSHIP, "nonzero", "two-sided")


def test_quoted_categories_and_not_equal_sign():
    decls = (VariableDecl("y", "ratio"), VariableDecl("g", "nominal", ("new york", "a:b")))
    h = parse_hypothesis('g:"new york" ≠ g:"a:b"', decls, "y")
    assert (h.left, h.right, h.relation) == ("new york", "a:b", "!=")
    assert parse_hypothesis(h.expr(), decls, "y") == h


def test_stray_variable_warns_but_validates():
    text = _doc(variables="x = ratio\ng = nominal {a, b}\nz = interval")
    with pytest.warns(UserWarning):
        v = validate_spec(parse_spec(text))
    assert v.roles["z"] == "covariate"


# round trip over generated specs -------------------------------------------

names = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)
labels = st.text(st.characters(whitelist_categories=("Ll", "Lu", "Nd"), whitelist_characters=" -:"),
                 min_size=1, max_size=6).map(str.strip).filter(bool)


@st.composite
def specs(draw):
    n_vars = draw(st.integers(2, 4))
    vnames = draw(st.lists(names, min_size=n_vars, max_size=n_vars, unique=True))
    cats = draw(st.lists(labels, min_size=2, max_size=4, unique=True))
    g = VariableDecl(vnames[0], draw(st.sampled_from(["nominal", "ordinal"])), tuple(cats))
    others = []
    for nm in vnames[1:]:
        lo = draw(st.floats(-1e6, 1e6, allow_nan=False))
        hi = lo + draw(st.floats(0, 1e6))
        rng = draw(st.sampled_from([None, (lo, hi)]))
        others.append(VariableDecl(nm, draw(st.sampled_from(["interval", "ratio"])), (), rng))
    variables = (g, *others)
    y = others[0].name
    study = draw(st.sampled_from(["observational", "experiment"]))
    within = draw(st.booleans())
    design = StudyDesignDecl(study, (g.name,), (y,), "uid" if within else None,
                             (g.name,) if within else ())
    claims = draw(st.lists(st.sampled_from([
        Claim("normality", (y,), True), Claim("normality", (y, g.name), False),
        Claim("equal_variance", (y, g.name), True)]), max_size=3, unique=True))
    alpha = draw(st.floats(0.001, 0.5))
    if draw(st.booleans()):
        left, right = draw(st.permutations(cats))[:2]
        expr = f'{g.name}:"{left}" {draw(st.sampled_from([">", "<", "!="]))} {g.name}:"{right}"'
        hyp = parse_hypothesis(expr, variables, y)
    else:
        hyp = parse_hypothesis(f"{g.name} ~ {draw(st.sampled_from(['+', '-', '']))}{y}",
                               variables)
    path = draw(st.sampled_from([None, "data.csv", "sub dir/d.csv"]))
    return AnalysisSpec(path, variables, design, AssumptionSet(alpha, tuple(claims)), hyp)


@settings(max_examples=150, deadline=None)
@given(specs(), st.sampled_from(["text", "json"]))
def test_dump_then_parse_round_trips(s, fmt):
    assert parse_spec(dump_spec(s, fmt=fmt), fmt=fmt) == s
