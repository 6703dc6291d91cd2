"""Analysis spec language: data types, parser, validator and serializer.

A spec has five sections (``data``, ``variables``, ``design``,
``assumptions``, ``hypothesis``).  Two encodings are accepted: a small
line-oriented key/value text format (grammar in ``docs/spec-format.md``) and
an equivalent JSON document, selected by a ``.json`` file extension.

Example::

    [data]
    path = uscrime.csv

    [variables]
    So = nominal {0, 1}
    Prob = ratio [0, 1]

    [design]
    study_type = observational
    contributor = So
    outcome = Prob

    [assumptions]
    alpha = 0.05
    normality(Prob) = true

    [hypothesis]
    expr = So:1 > So:0
"""
from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import (
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

DTYPES = ("nominal", "ordinal", "interval", "ratio")
STUDY_TYPES = ("observational", "experiment")
RELATIONS = (">", "<", "!=")
SIGNS = ("positive", "negative", "nonzero")
CLAIM_PROPERTIES = ("normality", "equal_variance")
SECTIONS = ("data", "variables", "design", "assumptions", "hypothesis")
# checked in this order when sections are missing; data and assumptions are optional
REQUIRED_SECTIONS = ("variables", "design", "hypothesis")

GROUP_COMPARISON = "group_comparison"
LINEAR_RELATIONSHIP = "linear_relationship"

_NAME = r"[A-Za-z_][A-Za-z0-9_.]*"
_NAME_RE = re.compile(rf"^{_NAME}$")


@dataclass(frozen=True)
class VariableDecl:
    name: str
    dtype: str
    categories: tuple = ()
    range: Optional[tuple] = None

    @property
    def is_continuous(self):
        return self.dtype in ("interval", "ratio")

    @property
    def is_categorical(self):
        return self.dtype in ("nominal", "ordinal")


@dataclass(frozen=True)
class StudyDesignDecl:
    study_type: str
    independent: tuple = ()
    dependent: tuple = ()
    key: Optional[str] = None
    within_subjects: tuple = ()


@dataclass(frozen=True)
class Claim:
    """A user assertion about one property atom.

    ``variables`` is ``(y,)`` for normality of ``y`` overall, ``(y, x)`` for
    normality of ``y`` within every category of ``x`` or for equal variance of
    ``y`` across the categories of ``x``.
    """

    property: str
    variables: tuple
    value: bool = True


@dataclass(frozen=True)
class AssumptionSet:
    alpha: float = 0.05
    claims: tuple = ()


@dataclass(frozen=True)
class HypothesisDecl:
    form: str
    # group_comparison
    dependent: Optional[str] = None
    independent: Optional[str] = None
    left: Optional[str] = None
    right: Optional[str] = None
    relation: Optional[str] = None
    # linear_relationship
    variables: tuple = ()
    sign: Optional[str] = None

    @property
    def sidedness(self):
        """``"greater"``, ``"less"`` or ``"two-sided"``.

        For a comparison the direction is that of ``left`` relative to
        ``right``; for a relationship it is the sign of the association.
        """
        if self.form == GROUP_COMPARISON:
            return {">": "greater", "<": "less", "!=": "two-sided"}[self.relation]
        return {"positive": "greater", "negative": "less", "nonzero": "two-sided"}[self.sign]

    @property
    def one_sided(self):
        return self.sidedness != "two-sided"

    @property
    def names(self):
        if self.form == GROUP_COMPARISON:
            return (self.dependent, self.independent)
        return tuple(self.variables)

    def expr(self):
        if self.form == GROUP_COMPARISON:
            ind = self.independent
            return (f"{ind}:{_quote(self.left)} {self.relation} {ind}:{_quote(self.right)}")
        a, b = self.variables
        mark = {"positive": "+", "negative": "-", "nonzero": ""}[self.sign]
        return f"{a} ~ {mark}{b}"


@dataclass(frozen=True)
class AnalysisSpec:
    data_path: Optional[str]
    variables: tuple
    design: StudyDesignDecl
    assumptions: AssumptionSet
    hypothesis: HypothesisDecl

    def variable(self, name):
        for v in self.variables:
            if v.name == name:
                return v
        raise UnknownVariable(name)


@dataclass(frozen=True)
class ValidatedSpec:
    """An :class:`AnalysisSpec` that passed :func:`validate_spec`.

    ``roles`` maps every declared variable to its role label: ``contributor``
    / ``outcome`` for observational studies, ``independent`` / ``dependent``
    for experiments, ``covariate`` for declared variables the design leaves
    unassigned (these are carried but not analysed).
    """

    spec: AnalysisSpec
    roles: dict = field(default_factory=dict)
    warnings: tuple = ()

    def __getattr__(self, name):
        # spec fields read straight through: vs.design, vs.hypothesis, ...
        if name in ("data_path", "variables", "design", "assumptions", "hypothesis", "variable"):
            return getattr(self.spec, name)
        raise AttributeError(name)

    @property
    def alpha(self):
        return self.spec.assumptions.alpha

    def is_within(self, name):
        return name in self.spec.design.within_subjects


# ---------------------------------------------------------------------------
# hypothesis expressions

_CAT = r'(?:"(?:[^"\\]|\\.)*"|[^\s:<>!=~"]+)'
_CMP_RE = re.compile(
    rf"^\s*(?P<lv>{_NAME})\s*:\s*(?P<lc>{_CAT})\s*(?P<rel>>|<|!=|≠)\s*"
    rf"(?P<rv>{_NAME})\s*:\s*(?P<rc>{_CAT})\s*$"
)
_REL_RE = re.compile(rf"^\s*(?P<a>{_NAME})\s*~\s*(?P<sign>[+-]?)\s*(?P<b>{_NAME})\s*$")


def _unquote(tok):
    if len(tok) >= 2 and tok[0] == tok[-1] == '"':
        return re.sub(r"\\(.)", r"\1", tok[1:-1])
    return tok


def _quote(label):
    if re.fullmatch(r'[^\s:<>!=~",{}\[\]#]+', label):
        return label
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_hypothesis(expr, variables, dependent=None):
    """Parse a hypothesis expression against the declared variables.

    Two forms are understood::

        So:1 > So:0        # group comparison of `dependent` across two categories
        x ~ +y             # linear relationship; sign + / - / none (nonzero)

    ``dependent`` names the outcome being compared; it is required for the
    group-comparison form.
    """
    if not variables:
        raise ValueError("parse_hypothesis needs at least one declared variable")
    decls = {v.name: v for v in variables}

    def lookup(name):
        if name not in decls:
            raise UnknownVariable(name)
        return decls[name]

    m = _CMP_RE.match(expr)
    if m:
        lv, rv = m["lv"], m["rv"]
        if lv != rv:
            raise UnsupportedForm(
                f"a comparison must contrast two categories of one variable, got {lv} and {rv}")
        ind = lookup(lv)
        left, right = _unquote(m["lc"]), _unquote(m["rc"])
        for cat in (left, right):
            if cat not in ind.categories:
                raise UnknownCategory(cat, ind.name)
        if left == right:
            raise UnsupportedForm(f"comparison of category {left!r} with itself")
        if dependent is None:
            raise UnsupportedForm("a group comparison needs a dependent variable")
        lookup(dependent)
        rel = "!=" if m["rel"] == "≠" else m["rel"]
        return HypothesisDecl(GROUP_COMPARISON, dependent=dependent, independent=ind.name,
                              left=left, right=right, relation=rel)

    m = _REL_RE.match(expr)
    if m:
        a, b = m["a"], m["b"]
        lookup(a)
        lookup(b)
        if a == b:
            raise UnsupportedForm(f"relationship of {a} with itself")
        sign = {"+": "positive", "-": "negative", "": "nonzero"}[m["sign"]]
        return HypothesisDecl(LINEAR_RELATIONSHIP, variables=(a, b), sign=sign)

    if expr.count("~") > 1 or len(re.findall(_NAME + r"\s*:", expr)) > 2:
        raise UnsupportedForm(f"only relations between two variables are supported: {expr!r}")
    for name in re.findall(_NAME, expr.split(":")[0]):
        if name not in decls:
            raise UnknownVariable(name)
    raise UnsupportedForm(f"unrecognised hypothesis: {expr!r}")


# ---------------------------------------------------------------------------
# text format

_HEADER_RE = re.compile(r"^\[\s*([A-Za-z_]+)\s*\]$")
_ENTRY_RE = re.compile(r"^([^=]+?)\s*=\s*(.*)$")
_VAR_RE = re.compile(
    r"^(?P<dtype>[A-Za-z]+)\s*(?:\{(?P<cats>.*)\})?\s*(?:\[(?P<range>[^\]]*)\])?\s*$")
_CLAIM_RE = re.compile(
    rf"^(?P<prop>[A-Za-z_]+)\s*\(\s*(?P<y>{_NAME})\s*(?:\|\s*(?P<x>{_NAME})\s*)?\)$")
_NUM_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")

_DESIGN_KEYS = {
    "study_type": "study_type",
    "independent": "independent",
    "contributor": "independent",
    "dependent": "dependent",
    "outcome": "dependent",
    "key": "key",
    "within_subjects": "within_subjects",
}


def _split_list(value, line):
    items = [_unquote(t.strip()) for t in _split_commas(value, line)]
    if any(not t for t in items):
        raise SpecSyntaxError(line, f"empty item in list {value!r}")
    return items


def _split_commas(text, line):
    out, buf, quoted, escaped = [], [], False, False
    for ch in text:
        if escaped:
            buf.append(ch)
            escaped = False
        elif ch == "\\" and quoted:
            buf.append(ch)
            escaped = True
        elif ch == '"':
            buf.append(ch)
            quoted = not quoted
        elif ch == "," and not quoted:
            out.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if quoted:
        raise SpecSyntaxError(line, "unterminated quote")
    out.append("".join(buf))
    if len(out) == 1 and not out[0].strip():
        return []
    return out


def _number(text, line):
    text = text.strip()
    if not _NUM_RE.match(text):
        raise SpecSyntaxError(line, f"expected a number, got {text!r}")
    return float(text)


def _bool(text, line):
    t = text.strip().lower()
    if t in ("true", "yes"):
        return True
    if t in ("false", "no"):
        return False
    raise SpecSyntaxError(line, f"expected true or false, got {text!r}")


def _name(text, line):
    text = text.strip()
    if not _NAME_RE.match(text):
        raise SpecSyntaxError(line, f"not a valid name: {text!r}")
    return text


def _read_sections(text):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER_RE.match(line)
        if m:
            name = m.group(1).lower()
            if name not in SECTIONS:
                raise SpecSyntaxError(lineno, f"unknown section [{name}]")
            if name in sections:
                raise SpecSyntaxError(lineno, f"section [{name}] appears twice")
            current = sections[name] = []
            continue
        if current is None:
            raise SpecSyntaxError(lineno, "entry outside of any section")
        m = _ENTRY_RE.match(line)
        if not m:
            raise SpecSyntaxError(lineno, f"expected 'key = value', got {line!r}")
        current.append((lineno, m.group(1).strip(), m.group(2).strip()))
    return sections


def _text_variables(entries):
    out = []
    seen = set()
    for line, key, value in entries:
        name = _name(key, line)
        if name in seen:
            raise DuplicateVariable(name)
        seen.add(name)
        m = _VAR_RE.match(value)
        if not m:
            raise SpecSyntaxError(line, f"bad variable declaration {value!r}")
        dtype = m["dtype"].lower()
        if dtype not in DTYPES:
            raise SpecSyntaxError(line, f"unknown data type {m['dtype']!r}")
        cats = tuple(_split_list(m["cats"], line)) if m["cats"] is not None else ()
        rng = None
        if m["range"] is not None:
            parts = _split_commas(m["range"], line)
            if len(parts) != 2:
                raise SpecSyntaxError(line, "a range needs exactly two bounds")
            rng = (_number(parts[0], line), _number(parts[1], line))
        out.append(VariableDecl(name, dtype, cats, rng))
    return tuple(out)


def _text_design(entries):
    fields = {}
    for line, key, value in entries:
        k = _DESIGN_KEYS.get(key.lower())
        if k is None:
            raise SpecSyntaxError(line, f"unknown design key {key!r}")
        if k in fields:
            raise SpecSyntaxError(line, f"design key {key!r} given twice")
        if k == "study_type":
            st = value.strip().lower()
            if st not in STUDY_TYPES:
                raise SpecSyntaxError(line, f"study_type must be one of {STUDY_TYPES}")
            fields[k] = st
        elif k == "key":
            fields[k] = _name(value, line)
        else:
            fields[k] = tuple(_name(v, line) for v in _split_list(value, line))
    if "study_type" not in fields:
        raise SpecSyntaxError(entries[0][0] if entries else 0, "design needs study_type")
    return StudyDesignDecl(**fields)


def _text_assumptions(entries):
    alpha = 0.05
    claims = []
    for line, key, value in entries:
        if key == "alpha":
            alpha = _number(value, line)
            continue
        m = _CLAIM_RE.match(key)
        if not m or m["prop"] not in CLAIM_PROPERTIES:
            raise SpecSyntaxError(line, f"unknown assumption {key!r}")
        names = (m["y"],) if m["x"] is None else (m["y"], m["x"])
        claims.append(Claim(m["prop"], names, _bool(value, line)))
    return AssumptionSet(alpha, tuple(claims))


def _text_hypothesis(entries, variables, design):
    expr = dependent = None
    for line, key, value in entries:
        if key == "expr" and expr is None:
            expr = value
        elif key == "dependent" and dependent is None:
            dependent = _name(value, line)
        else:
            raise SpecSyntaxError(line, f"unexpected hypothesis key {key!r}")
    if expr is None:
        raise MissingSection("hypothesis")
    return parse_hypothesis(expr, variables, dependent or _sole_dependent(design))


def _sole_dependent(design):
    if len(design.dependent) == 1:
        return design.dependent[0]
    return None


def parse_spec(text, *, fmt="text"):
    """Parse a spec document (``fmt`` is ``"text"`` or ``"json"``)."""
    if fmt == "json":
        return _parse_json(text)
    if fmt != "text":
        raise ValueError(f"unknown spec format {fmt!r}")
    sections = _read_sections(text)
    for name in REQUIRED_SECTIONS:
        if name not in sections:
            raise MissingSection(name)
    variables = _text_variables(sections["variables"])
    if not variables:
        raise MissingSection("variables")
    design = _text_design(sections["design"])
    assumptions = _text_assumptions(sections.get("assumptions", []))
    hypothesis = _text_hypothesis(sections["hypothesis"], variables, design)
    data_path = None
    for line, key, value in sections.get("data", []):
        if key != "path" or data_path is not None:
            raise SpecSyntaxError(line, f"unexpected data key {key!r}")
        data_path = value
    return AnalysisSpec(data_path, variables, design, assumptions, hypothesis)


# ---------------------------------------------------------------------------
# JSON format

def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SpecSyntaxError(0, f"{where}: expected an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise SpecSyntaxError(0, f"{where}: unknown keys {sorted(extra)}")


def _parse_json(text):
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.lineno, exc.msg) from None
    _check_keys(doc, SECTIONS, "document")
    for name in REQUIRED_SECTIONS:
        if name not in doc:
            raise MissingSection(name)

    raw_vars = doc["variables"]
    if not isinstance(raw_vars, list):
        raise SpecSyntaxError(0, "variables: expected a list")
    if not raw_vars:
        raise MissingSection("variables")
    variables = []
    seen = set()
    for v in raw_vars:
        _check_keys(v, ("name", "dtype", "categories", "range"), "variable")
        name = v.get("name")
        if not isinstance(name, str) or not _NAME_RE.match(name):
            raise SpecSyntaxError(0, f"variable: bad name {name!r}")
        if name in seen:
            raise DuplicateVariable(name)
        seen.add(name)
        if v.get("dtype") not in DTYPES:
            raise SpecSyntaxError(0, f"variable {name}: unknown dtype {v.get('dtype')!r}")
        rng = v.get("range")
        if rng is not None:
            if not (isinstance(rng, list) and len(rng) == 2):
                raise SpecSyntaxError(0, f"variable {name}: range must be [lo, hi]")
            rng = (float(rng[0]), float(rng[1]))
        variables.append(VariableDecl(name, v["dtype"],
                                      tuple(str(c) for c in v.get("categories") or ()), rng))
    variables = tuple(variables)

    d = doc["design"]
    _check_keys(d, ("study_type", "independent", "dependent", "key", "within_subjects"), "design")
    if d.get("study_type") not in STUDY_TYPES:
        raise SpecSyntaxError(0, f"design: study_type must be one of {STUDY_TYPES}")
    design = StudyDesignDecl(
        d["study_type"], tuple(d.get("independent") or ()), tuple(d.get("dependent") or ()),
        d.get("key"), tuple(d.get("within_subjects") or ()))

    a = doc.get("assumptions") or {}
    _check_keys(a, ("alpha", "claims"), "assumptions")
    claims = []
    for c in a.get("claims") or ():
        _check_keys(c, ("property", "variables", "value"), "claim")
        if c.get("property") not in CLAIM_PROPERTIES:
            raise SpecSyntaxError(0, f"claim: unknown property {c.get('property')!r}")
        claims.append(Claim(c["property"], tuple(c.get("variables") or ()),
                            bool(c.get("value", True))))
    alpha = a.get("alpha", 0.05)
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
        raise SpecSyntaxError(0, "assumptions: alpha must be a number")
    assumptions = AssumptionSet(float(alpha), tuple(claims))

    h = doc["hypothesis"]
    _check_keys(h, ("expr", "form", "dependent", "independent", "left", "right",
                    "relation", "variables", "sign"), "hypothesis")
    if "expr" in h:
        hypothesis = parse_hypothesis(h["expr"], variables,
                                      h.get("dependent") or _sole_dependent(design))
    else:
        hypothesis = parse_hypothesis(_structured_expr(h), variables,
                                      h.get("dependent") or _sole_dependent(design))

    data = doc.get("data") or {}
    _check_keys(data, ("data_path",), "data")
    return AnalysisSpec(data.get("data_path"), variables, design, assumptions, hypothesis)


def _structured_expr(h):
    form = h.get("form")
    if form == GROUP_COMPARISON:
        if h.get("relation") not in RELATIONS:
            raise UnsupportedForm(f"unknown relation {h.get('relation')!r}")
        ind = h.get("independent")
        return f"{ind}:{_quote(str(h.get('left')))} {h['relation']} {ind}:{_quote(str(h.get('right')))}"
    if form == LINEAR_RELATIONSHIP:
        names = h.get("variables") or []
        if len(names) != 2:
            raise UnsupportedForm("a relationship needs exactly two variables")
        if h.get("sign") not in SIGNS:
            raise UnsupportedForm(f"unknown sign {h.get('sign')!r}")
        mark = {"positive": "+", "negative": "-", "nonzero": ""}[h["sign"]]
        return f"{names[0]} ~ {mark}{names[1]}"
    raise UnsupportedForm(f"unknown hypothesis form {form!r}")


# ---------------------------------------------------------------------------
# validation

def validate_spec(spec):
    """Cross-check an :class:`AnalysisSpec` and resolve variable roles."""
    notes = []
    decls = {v.name: v for v in spec.variables}

    for v in spec.variables:
        if v.is_categorical:
            if not v.categories:
                raise InvalidDeclaration(f"{v.name}: {v.dtype} variables need categories")
            if len(set(v.categories)) != len(v.categories):
                raise InvalidDeclaration(f"{v.name}: categories must be distinct")
            if v.range is not None:
                raise InvalidDeclaration(f"{v.name}: only interval/ratio variables take a range")
        else:
            if v.categories:
                raise InvalidDeclaration(f"{v.name}: {v.dtype} variables take no categories")
            if v.range is not None and not v.range[0] <= v.range[1]:
                raise InvalidDeclaration(f"{v.name}: range lower bound exceeds upper bound")

    d = spec.design
    for name in (*d.independent, *d.dependent, *d.within_subjects):
        if name not in decls:
            raise UnknownVariable(name)
    both = set(d.independent) & set(d.dependent)
    if both:
        raise RoleConflict(f"variable is both independent and dependent: {sorted(both)[0]}")
    if not d.independent or not d.dependent:
        raise IncompleteDesign("the design needs at least one independent and one dependent variable")
    stray = set(d.within_subjects) - set(d.independent)
    if stray:
        raise RoleConflict(f"within-subjects variable is not independent: {sorted(stray)[0]}")
    if d.within_subjects and not d.key:
        raise WithinWithoutKey("within-subjects variables need a relational key in the design")
    for name in d.within_subjects:
        if not decls[name].is_categorical:
            raise RoleConflict(f"within-subjects variable {name} must be nominal or ordinal")

    alpha = spec.assumptions.alpha
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie strictly between 0 and 1, got {alpha}")

    for c in spec.assumptions.claims:
        for name in c.variables:
            if name not in decls:
                raise UnknownVariable(name)
        if c.property == "normality":
            if len(c.variables) not in (1, 2):
                raise InvalidAssumption("normality takes a variable and an optional grouping variable")
            if not decls[c.variables[0]].is_continuous:
                raise InvalidAssumption(
                    f"only interval/ratio variables can be normal: {c.variables[0]}")
        elif len(c.variables) != 2:
            raise InvalidAssumption("equal_variance takes a variable and a grouping variable")
        if len(c.variables) == 2 and not decls[c.variables[1]].is_categorical:
            raise InvalidAssumption(f"grouping variable must be nominal or ordinal: {c.variables[1]}")

    h = spec.hypothesis
    for name in h.names:
        if name not in decls:
            raise UnknownVariable(name)
    if h.form == GROUP_COMPARISON:
        if h.dependent not in d.dependent:
            raise HypothesisRoleError(f"{h.dependent} is compared but is not a dependent variable")
        if h.independent not in d.independent:
            raise HypothesisRoleError(f"{h.independent} is not an independent variable")
        for cat in (h.left, h.right):
            if cat not in decls[h.independent].categories:
                raise UnknownCategory(cat, h.independent)
    else:
        in_design = set(d.independent) | set(d.dependent)
        for name in h.variables:
            if name not in in_design:
                raise HypothesisRoleError(f"{name} has no role in the design")

    if d.study_type == "observational":
        ind_label, dep_label = "contributor", "outcome"
    else:
        ind_label, dep_label = "independent", "dependent"
    roles = {}
    for v in spec.variables:
        if v.name in d.independent:
            roles[v.name] = ind_label
        elif v.name in d.dependent:
            roles[v.name] = dep_label
        elif v.name == d.key:
            roles[v.name] = "key"
        else:
            roles[v.name] = "covariate"
            msg = f"variable {v.name} has no role in the design and is ignored"
            notes.append(msg)
            warnings.warn(msg, stacklevel=2)
    return ValidatedSpec(spec, roles, tuple(notes))


# ---------------------------------------------------------------------------
# serialization

def _fmt_num(x):
    return repr(float(x))


def dump_spec(spec, *, fmt="text"):
    """Serialize a spec (or validated spec) back to either encoding."""
    if isinstance(spec, ValidatedSpec):
        spec = spec.spec
    if fmt == "json":
        return json.dumps(spec_to_dict(spec), indent=2) + "\n"
    lines = []
    if spec.data_path is not None:
        lines += ["[data]", f"path = {spec.data_path}", ""]
    lines.append("[variables]")
    for v in spec.variables:
        parts = [v.dtype]
        if v.categories:
            parts.append("{" + ", ".join(_quote(c) for c in v.categories) + "}")
        if v.range is not None:
            parts.append(f"[{_fmt_num(v.range[0])}, {_fmt_num(v.range[1])}]")
        lines.append(f"{v.name} = {' '.join(parts)}")
    d = spec.design
    observational = d.study_type == "observational"
    lines += ["", "[design]", f"study_type = {d.study_type}"]
    if d.independent:
        lines.append(f"{'contributor' if observational else 'independent'} = {', '.join(d.independent)}")
    if d.dependent:
        lines.append(f"{'outcome' if observational else 'dependent'} = {', '.join(d.dependent)}")
    if d.key:
        lines.append(f"key = {d.key}")
    if d.within_subjects:
        lines.append(f"within_subjects = {', '.join(d.within_subjects)}")
    a = spec.assumptions
    lines += ["", "[assumptions]", f"alpha = {_fmt_num(a.alpha)}"]
    for c in a.claims:
        lines.append(f"{c.property}({' | '.join(c.variables)}) = {'true' if c.value else 'false'}")
    h = spec.hypothesis
    lines += ["", "[hypothesis]", f"expr = {h.expr()}"]
    if h.form == GROUP_COMPARISON:
        lines.append(f"dependent = {h.dependent}")
    return "\n".join(lines) + "\n"


def spec_to_dict(spec):
    h = spec.hypothesis
    if h.form == GROUP_COMPARISON:
        hyp = {"form": h.form, "dependent": h.dependent, "independent": h.independent,
               "left": h.left, "right": h.right, "relation": h.relation}
    else:
        hyp = {"form": h.form, "variables": list(h.variables), "sign": h.sign}
    return {
        "data": {"data_path": spec.data_path},
        "variables": [
            {"name": v.name, "dtype": v.dtype, "categories": list(v.categories),
             "range": list(v.range) if v.range is not None else None}
            for v in spec.variables
        ],
        "design": {
            "study_type": spec.design.study_type,
            "independent": list(spec.design.independent),
            "dependent": list(spec.design.dependent),
            "key": spec.design.key,
            "within_subjects": list(spec.design.within_subjects),
        },
        "assumptions": {
            "alpha": spec.assumptions.alpha,
            "claims": [{"property": c.property, "variables": list(c.variables), "value": c.value}
                       for c in spec.assumptions.claims],
        },
        "hypothesis": hyp,
    }


def load_spec(path):
    """Read and parse a spec file; ``.json`` selects the JSON encoding."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_spec(text, fmt="json" if path.suffix.lower() == ".json" else "text")
