"""Result tables: Holm correction, power ordering, text and JSON rendering."""
from __future__ import annotations

import json
import math
import textwrap
from dataclasses import dataclass, field

from . import __version__
from .errors import DomainError
from .properties import PropertyId, PropertyValue
from .solver import FAMILIES, build_knowledge_base
from .speclang import spec_to_dict
from .stats.result import TestResult

WIDTH = 100
SCHEMA_VERSION = 1


def holm_adjust(p_values):
    """Holm step-down adjusted p-values, in input order."""
    ps = [float(p) for p in p_values]
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p-values must lie in [0, 1], got {p}")
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    out = [0.0] * m
    running = 0.0
    for j, i in enumerate(order):
        running = max(running, min(1.0, (m - j) * ps[i]))
        out[i] = running
    return out


def _kb_index(kb=None):
    return {r.test: r for r in (kb if kb is not None else build_knowledge_base())}


def rank_by_power(items, kb=None, key=lambda item: item):
    """Stable order: family, then knowledge-base power rank, then test id.

    ``key`` extracts the test identifier (or an object with ``.test``).
    """
    index = _kb_index(kb)

    def sort_key(item):
        test = key(item)
        test = getattr(test, "test", test)
        req = index.get(test)
        family = FAMILIES.index(req.family) if req is not None else len(FAMILIES)
        rank = req.power_rank if req is not None else math.inf
        return (family, rank, test)

    return sorted(items, key=sort_key)


@dataclass(frozen=True)
class Evidence:
    """One atom of a valid test with the value that made it true."""

    atom: str
    code: int | None
    truth: bool
    provenance: str
    checked: bool | None = None
    details: dict | None = None


@dataclass(frozen=True)
class ReportEntry:
    test: str
    name: str
    family: str
    power_rank: int
    result: TestResult | None
    p_adjusted: float | None
    evidence: tuple = ()
    error: str | None = None
    exclusions: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InvalidEntry:
    test: str
    name: str
    failing_atom: str | None
    reason: str


@dataclass(frozen=True)
class AnalysisReport:
    spec: dict
    hypothesis: str
    sidedness: str
    alpha: float
    entries: tuple
    invalid: tuple
    warnings: tuple
    bootstrap_fallback: bool
    seed: int
    resamples: int
    version: str = __version__
    schema: int = SCHEMA_VERSION

    @property
    def valid_tests(self):
        return [e.test for e in self.entries]

    def entry(self, test):
        for e in self.entries:
            if e.test == test:
                return e
        raise KeyError(test)


def _evidence(atom: PropertyId, value: PropertyValue):
    return Evidence(atom.label(), atom.code, value.truth, value.provenance, value.checked,
                    value.evidence)


def build_report(vspec, outcome, executions, kb=None, seed=0, resamples=10_000):
    """Assemble the report from a selection outcome and its executions."""
    kb = kb if kb is not None else build_knowledge_base()
    index = _kb_index(kb)
    by_test = {e.test: e for e in executions}
    p_tests = [e.test for e in executions if e.result is not None and e.result.p_value is not None]
    adjusted = dict(zip(p_tests, holm_adjust([by_test[t].result.p_value for t in p_tests])))

    entries = []
    for valid in outcome.valid:
        req = index[valid.test]
        ex = by_test.get(valid.test)
        entries.append(ReportEntry(
            valid.test, req.name, req.family, req.power_rank,
            ex.result if ex else None, adjusted.get(valid.test),
            tuple(_evidence(a, v) for a, v in zip(valid.atoms, valid.values)),
            ex.error if ex else "not executed", ex.exclusions if ex else {},
        ))
    invalid = [InvalidEntry(i.test, index[i.test].name, i.atom.label() if i.atom else None,
                            i.reason) for i in outcome.invalid]
    return AnalysisReport(
        spec=spec_to_dict(vspec.spec),
        hypothesis=vspec.hypothesis.expr(),
        sidedness=vspec.hypothesis.sidedness,
        alpha=vspec.alpha,
        entries=tuple(rank_by_power(entries, kb)),
        invalid=tuple(rank_by_power(invalid, kb)),
        warnings=tuple(str(w) for w in outcome.warnings),
        bootstrap_fallback=outcome.fallback,
        seed=seed,
        resamples=resamples,
    )


# ---------------------------------------------------------------------------
# JSON

_FLOAT_TAG = "$float"


def _encode(obj):
    """Plain JSON value; non-finite floats become ``{"$float": "inf"}`` etc."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else {_FLOAT_TAG: repr(obj)}
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _encode(obj.item())
    return obj


def _decode_hook(d):
    if len(d) == 1 and _FLOAT_TAG in d:
        return float(d[_FLOAT_TAG])
    return d


def _tuple(v):
    return tuple(v) if v is not None else None


def _result_to_dict(r: TestResult):
    return {
        "test": r.test, "statistic_name": r.statistic_name, "statistic": r.statistic,
        "p_value": r.p_value, "p_two_sided": r.p_two_sided, "sidedness": r.sidedness,
        "dof": r.dof, "effect_size": r.effect_size,
        "confidence_interval": r.confidence_interval, "sample_sizes": r.sample_sizes,
        "details": r.details, "notes": r.notes,
    }


def _result_from_dict(d):
    if d is None:
        return None
    return TestResult(d["test"], d["statistic_name"], d["statistic"], d["p_value"],
                      d["p_two_sided"], d["sidedness"], _tuple(d["dof"]),
                      _tuple(d["effect_size"]), _tuple(d["confidence_interval"]),
                      d["sample_sizes"], d["details"], tuple(d["notes"]))


def report_to_dict(report: AnalysisReport):
    return {
        "schema": report.schema,
        "version": report.version,
        "seed": report.seed,
        "resamples": report.resamples,
        "hypothesis": report.hypothesis,
        "sidedness": report.sidedness,
        "alpha": report.alpha,
        "spec": report.spec,
        "bootstrap_fallback": report.bootstrap_fallback,
        "results": [
            {
                "test": e.test, "name": e.name, "family": e.family, "power_rank": e.power_rank,
                "result": _result_to_dict(e.result) if e.result is not None else None,
                "p_adjusted": e.p_adjusted, "error": e.error, "exclusions": e.exclusions,
                "evidence": [
                    {"atom": v.atom, "code": v.code, "truth": v.truth,
                     "provenance": v.provenance, "checked": v.checked, "details": v.details}
                    for v in e.evidence
                ],
            }
            for e in report.entries
        ],
        "invalid": [
            {"test": i.test, "name": i.name, "failing_atom": i.failing_atom, "reason": i.reason}
            for i in report.invalid
        ],
        "warnings": list(report.warnings),
    }


def report_from_dict(d):
    entries = tuple(
        ReportEntry(
            e["test"], e["name"], e["family"], e["power_rank"], _result_from_dict(e["result"]),
            e["p_adjusted"],
            tuple(Evidence(v["atom"], v["code"], v["truth"], v["provenance"], v["checked"],
                           v["details"]) for v in e["evidence"]),
            e["error"], e["exclusions"],
        )
        for e in d["results"]
    )
    invalid = tuple(InvalidEntry(i["test"], i["name"], i["failing_atom"], i["reason"])
                    for i in d["invalid"])
    return AnalysisReport(d["spec"], d["hypothesis"], d["sidedness"], d["alpha"], entries,
                          invalid, tuple(d["warnings"]), d["bootstrap_fallback"], d["seed"],
                          d["resamples"], d["version"], d["schema"])


def render_json(report):
    return json.dumps(_encode(report_to_dict(report)), indent=2, allow_nan=False) + "\n"


def report_from_json(text):
    return report_from_dict(json.loads(text, object_hook=_decode_hook))


# ---------------------------------------------------------------------------
# text

def _num(x):
    if x is None:
        return "-"
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def _dof(dof):
    if not dof:
        return "-"
    return ", ".join(str(int(d)) if float(d).is_integer() else f"{d:.4g}" for d in dof)


_EFFECT_LABELS = {"cohens_d": "d", "eta_squared": "eta2", "partial_eta_squared": "p.eta2",
                  "epsilon_squared": "eps2", "cramers_v": "V", "kendalls_w": "W",
                  "odds_ratio": "OR"}


def _effect(es):
    if not es:
        return "-"
    return f"{_EFFECT_LABELS.get(es[0], es[0])}={_num(es[1])}"


def _ci(ci):
    if not ci:
        return "-"
    level, lo, hi = ci
    return f"{level:.0%} [{_num(lo)}, {_num(hi)}]"


def _table(header, rows):
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return lines


def _wrap(text, indent=""):
    return textwrap.wrap(text, WIDTH, initial_indent=indent,
                         subsequent_indent=indent + "    ", break_on_hyphens=False)


def render_text(report, evidence=False):
    """Aligned table of results; footnote markers point to property evidence.

    ``evidence=True`` adds the statistics of every data check.
    """
    out = [f"Hypothesis: {report.hypothesis} ({report.sidedness})",
           f"alpha = {report.alpha:g}; Holm-adjusted across {sum(1 for e in report.entries if e.p_adjusted is not None)} test(s)",
           ""]
    if report.bootstrap_fallback:
        out += _wrap("No test had all of its preconditions satisfied; falling back to the "
                     "bootstrap, which reports a confidence interval and no p-value.")
        out.append("")
    header = ("", "Test", "Statistic", "dof", "p", "p 2-sided", "p Holm", "Effect")
    rows, cis = [], {}
    for n, e in enumerate(report.entries, start=1):
        r = e.result
        if r is None:
            rows.append((f"[{n}]", e.name, "error", "-", "-", "-", "-", "-"))
            continue
        rows.append((f"[{n}]", e.name, f"{r.statistic_name}={_num(r.statistic)}", _dof(r.dof),
                     _num(r.p_value), _num(r.p_two_sided), _num(e.p_adjusted),
                     _effect(r.effect_size)))
        if r.confidence_interval:
            cis[n] = f"     CI {_ci(r.confidence_interval)}"
    lines = _table(header, rows)
    out += lines[:2]
    for n, line in enumerate(lines[2:], start=1):
        out.append(line)
        if n in cis:
            out.append(cis[n])
    out.append("Effect: d = Cohen's d, eta2 = eta squared, p.eta2 = partial eta squared, "
               "eps2 = epsilon squared,")
    out.append("        V = Cramer's V, W = Kendall's W, OR = odds ratio, r = correlation")

    notes = []
    for n, e in enumerate(report.entries, start=1):
        if e.error:
            notes += _wrap(f"[{n}] {e.name}: could not run ({e.error})")
        if e.result is not None:
            for note in e.result.notes:
                notes += _wrap(f"[{n}] {e.name}: {note}")
        lost = {k: v for k, v in e.exclusions.items() if v}
        if lost:
            notes += _wrap(f"[{n}] {e.name}: excluded " +
                           ", ".join(f"{v} ({k.replace('_', ' ')})" for k, v in lost.items()))
    if notes:
        out += ["", "Notes:"] + notes

    out += ["", "Evidence (why each test is valid):"]
    for n, e in enumerate(report.entries, start=1):
        if not e.evidence:
            out += _wrap(f"[{n}] {e.name}: no preconditions")
            continue
        out += _wrap(f"[{n}] {e.name}:")
        for v in e.evidence:
            tag = f" (code {v.code})" if v.code is not None else ""
            line = f"{v.atom}{tag}: {v.provenance}"
            if v.provenance == "computed":
                line += _check_summary(v.details)
            elif v.provenance == "assumed" and v.checked is not None:
                line += f"; data check says {str(v.checked).lower()}"
            out += _wrap(line, "      ")
            if evidence and v.details:
                out += _check_lines(v.details)
    if report.invalid:
        out += ["", "Not applicable:"]
        for i in report.invalid:
            why = f"fails {i.failing_atom}" if i.failing_atom else i.reason
            out += _wrap(f"- {i.name}: {why}")
    if report.warnings:
        out += ["", "Warnings:"]
        for w in report.warnings:
            out += _wrap(f"! {w}")
    out += ["", f"statsel {report.version}, seed {report.seed}, {report.resamples} resamples"]
    return "\n".join(out) + "\n"


def _check_summary(details):
    if not details:
        return ""
    if "p_value" in details:
        return f" ({details['test']} p={_num(details['p_value'])})"
    parts = [f"{k}: p={_num(v['p_value'])}" for k, v in details.items()
             if isinstance(v, dict) and "p_value" in v]
    return f" (shapiro_wilk {', '.join(parts)})" if parts else ""


def _check_lines(details):
    checks = details.items() if "p_value" not in details else [("all", details)]
    lines = []
    for label, d in checks:
        if not isinstance(d, dict):
            continue
        stats = ", ".join(f"{k}={_num(v)}" for k, v in d.items()
                          if k != "test" and not isinstance(v, dict))
        lines += _wrap(f"{label}: {d.get('test', 'check')} {stats}", "          ")
    return lines


def render(report, fmt="text", evidence=False):
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report, evidence)
    raise ValueError(f"unknown format {fmt!r}")
