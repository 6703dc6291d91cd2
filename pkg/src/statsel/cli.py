"""Command line: ``statsel analyze | validate | kb``.

Exit status is 0 on success, 1 on spec, data or file errors (reported on
stderr), and 2 in ``--strict`` mode when an assumption contradicts the data.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .engine import analyze
from .errors import StatselError
from .report import render
from .solver import knowledge_base_json
from .speclang import load_spec, validate_spec
from .stats.bootstrap import DEFAULT_RESAMPLES, DEFAULT_SEED

SEED_ENV = "STATSEL_SEED"
EXIT_OK, EXIT_ERROR, EXIT_CONFLICT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: Path | None = None
    data: Path | None = None
    fmt: str = "text"
    output: Path | None = None
    seed: int = DEFAULT_SEED
    resamples: int = DEFAULT_RESAMPLES
    strict: bool = False
    evidence: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser():
    p = _Parser(prog="statsel", description="Select, run and report valid statistical tests.")
    p.add_argument("--version", action="version", version=f"statsel {__version__}")
    p.add_argument("--kb", action="store_true", help="print the test knowledge base and exit")
    sub = p.add_subparsers(dest="command")

    a = sub.add_parser("analyze", help="run an analysis spec against its data")
    a.add_argument("spec", type=Path)
    a.add_argument("--data", type=Path, help="CSV file (overrides the spec's data path)")
    a.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    a.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")
    a.add_argument("--seed", type=int, default=None,
                   help=f"bootstrap seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    a.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    a.add_argument("--strict", action="store_true",
                   help="exit 2 when an assumption contradicts the data")
    a.add_argument("--evidence", action="store_true",
                   help="include per-test property evidence in the text report")

    v = sub.add_parser("validate", help="parse and check a spec without running it")
    v.add_argument("spec", type=Path)

    sub.add_parser("kb", help="print the test knowledge base as JSON")
    return p


def parse_args(argv):
    ns = build_parser().parse_args(argv)
    if ns.kb or ns.command == "kb":
        return RunConfig("kb")
    if ns.command is None:
        raise _UsageError("a command is required: analyze, validate or kb")
    if ns.command == "validate":
        return RunConfig("validate", ns.spec)
    seed = ns.seed if ns.seed is not None else _default_seed()
    return RunConfig("analyze", ns.spec, ns.data, ns.fmt, ns.output, seed, ns.resamples,
                     ns.strict, ns.evidence)


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def execute(cfg: RunConfig):
    if cfg.command == "kb":
        sys.stdout.write(knowledge_base_json())
        return EXIT_OK
    if cfg.command == "validate":
        vspec = validate_spec(load_spec(cfg.spec))
        for w in vspec.warnings:
            print(f"statsel: warning: {w}", file=sys.stderr)
        h = vspec.hypothesis
        print(f"{cfg.spec}: ok ({len(vspec.variables)} variables, {h.expr()}, {h.sidedness})")
        return EXIT_OK
    report = analyze(cfg.spec, seed=cfg.seed, resamples=cfg.resamples, data_path=cfg.data)
    _emit(render(report, cfg.fmt, evidence=cfg.evidence), cfg.output)
    for w in report.warnings:
        print(f"statsel: warning: {w}", file=sys.stderr)
    if cfg.strict and report.warnings:
        return EXIT_CONFLICT
    return EXIT_OK


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        return execute(parse_args(argv))
    except _UsageError as exc:
        print(f"statsel: usage error: {exc}", file=sys.stderr)
    except FileNotFoundError as exc:
        print(f"statsel: file not found: {exc.filename}", file=sys.stderr)
    except OSError as exc:
        print(f"statsel: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
    except StatselError as exc:
        print(f"statsel: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


def run(argv):
    """Programmatic entry point returning the exit status."""
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
