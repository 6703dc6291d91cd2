"""Long-format CSV loading and the sample shapes the tests consume."""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Optional

import numpy as np

from .errors import (
    CategoryViolation,
    DataError,
    DuplicateCell,
    EmptyGroup,
    MissingColumn,
    NoCompleteUnits,
    RangeViolation,
    TypeMismatch,
)

NULL_TOKENS = ("", "NA")
_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_number(cell):
    """Locale-independent decimal parse; returns None when the cell does not match."""
    cell = cell.strip()
    if not _NUMBER_RE.match(cell):
        return None
    return float(cell)


def is_null(cell):
    return cell is None or cell.strip() in NULL_TOKENS


@dataclass(frozen=True)
class Dataset:
    """Immutable column store.

    ``columns`` maps a column name to a tuple of cells: floats for
    interval/ratio variables, category labels (str) for nominal/ordinal ones
    and for the key column.  ``None`` marks a missing cell.
    """

    columns: MappingProxyType
    row_count: int
    key_column: Optional[str] = None
    dtypes: MappingProxyType = MappingProxyType({})
    categories: MappingProxyType = MappingProxyType({})

    @classmethod
    def from_columns(cls, columns, *, dtypes=None, categories=None, key_column=None):
        cols = {k: tuple(v) for k, v in columns.items()}
        lengths = {len(v) for v in cols.values()}
        if len(lengths) > 1:
            raise DataError("all columns must have the same length")
        if key_column is not None and key_column not in cols:
            raise MissingColumn(key_column)
        return cls(MappingProxyType(cols), lengths.pop() if lengths else 0, key_column,
                   MappingProxyType(dict(dtypes or {})),
                   MappingProxyType({k: tuple(v) for k, v in (categories or {}).items()}))

    def __getitem__(self, name):
        try:
            return self.columns[name]
        except KeyError:
            raise MissingColumn(name) from None

    def view(self, name, where=None):
        if name not in self.columns:
            raise MissingColumn(name)
        return ColumnView(name, self.dtypes.get(name, "nominal"),
                          tuple(where) if where is not None else None)


@dataclass(frozen=True)
class ColumnView:
    """A column seen through its declared type and an optional category filter."""

    name: str
    dtype: str
    where: Optional[tuple] = None

    def cells(self, dataset):
        col = dataset[self.name]
        if self.where is None:
            return col
        return tuple(c for c in col if c in self.where)

    def numeric(self, dataset):
        """Numeric coding: the values themselves, or ranks 1..k for ordinal labels."""
        return _numeric_column(dataset, self.name)


def _numeric_column(dataset, name):
    dtype = dataset.dtypes.get(name)
    col = dataset[name]
    if dtype in ("interval", "ratio"):
        return col
    if dtype == "ordinal":
        rank = {c: float(i) for i, c in enumerate(dataset.categories[name], start=1)}
        return tuple(None if c is None else rank[c] for c in col)
    raise DataError(f"column {name} is {dtype}; a numeric outcome is needed")


def load_csv(path, validated_spec):
    """Load a long-format CSV, validating declared variables cell by cell.

    Only the declared variables and the key column are kept.  Without a key
    every row is an independent observation.
    """
    spec = validated_spec.spec if hasattr(validated_spec, "spec") else validated_spec
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, a header row is required") from None
        rows = list(reader)
    header = [h.strip() for h in header]
    index = {}
    for i, h in enumerate(header):
        index.setdefault(h, i)

    wanted = [v.name for v in spec.variables]
    key = spec.design.key
    for name in wanted + ([key] if key else []):
        if name not in index:
            raise MissingColumn(name)

    decls = {v.name: v for v in spec.variables}
    columns = {}
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    for name in wanted + ([key] if key and key not in decls else []):
        j = index[name]
        decl = decls.get(name)
        cells = []
        for rownum, r in enumerate(rows, start=1):
            raw = r[j] if j < len(r) else ""
            if is_null(raw):
                cells.append(None)
                continue
            raw = raw.strip()
            if decl is None:
                cells.append(raw)
            elif decl.is_continuous:
                x = parse_number(raw)
                if x is None:
                    raise TypeMismatch(rownum, name, raw)
                if decl.range is not None and not decl.range[0] <= x <= decl.range[1]:
                    raise RangeViolation(rownum, name, raw)
                cells.append(x)
            else:
                if raw not in decl.categories:
                    raise CategoryViolation(rownum, name, raw)
                cells.append(raw)
        columns[name] = cells
    dtypes = {v.name: v.dtype for v in spec.variables}
    cats = {v.name: v.categories for v in spec.variables if v.is_categorical}
    return Dataset.from_columns(columns, dtypes=dtypes, categories=cats, key_column=key)


@dataclass(frozen=True)
class SampleGroups:
    """Outcome vectors split by the categories of a factor, in the requested order."""

    outcome: str
    factor: str
    categories: tuple
    samples: tuple
    dropped: int = 0
    filtered: int = 0

    def __getitem__(self, category):
        return self.samples[self.categories.index(category)]

    def __len__(self):
        return len(self.categories)

    def __iter__(self):
        return iter(self.samples)

    @property
    def sizes(self):
        return {c: len(s) for c, s in zip(self.categories, self.samples)}

    def as_dict(self):
        return dict(zip(self.categories, self.samples))


def _name(col):
    return col.name if isinstance(col, ColumnView) else col


def group_samples(dataset, outcome, factor, categories=None):
    """Partition the outcome by factor category.

    ``categories`` restricts and orders the groups; by default every declared
    category is used in declared order.  Rows whose outcome or factor cell is
    missing are dropped and counted; rows of other categories are counted as
    ``filtered``.
    """
    outcome, factor = _name(outcome), _name(factor)
    y = _numeric_column(dataset, outcome)
    f = dataset[factor]
    declared = dataset.categories.get(factor)
    if declared is None:
        raise DataError(f"column {factor} is not categorical and cannot define groups")
    cats = tuple(categories) if categories is not None else declared
    buckets = {c: [] for c in cats}
    dropped = filtered = 0
    for yi, fi in zip(y, f):
        if yi is None or fi is None:
            dropped += 1
        elif fi in buckets:
            buckets[fi].append(yi)
        else:
            filtered += 1
    for c in cats:
        if not buckets[c]:
            raise EmptyGroup(c)
    return SampleGroups(outcome, factor, cats,
                        tuple(np.asarray(buckets[c], dtype=float) for c in cats),
                        dropped, filtered)


@dataclass(frozen=True)
class PairedSamples:
    """Complete-case matrix: one row per unit, one column per condition."""

    outcome: str
    condition: str
    units: tuple
    conditions: tuple
    matrix: np.ndarray
    excluded: int = 0

    @property
    def n(self):
        return len(self.units)

    def column(self, condition):
        return self.matrix[:, self.conditions.index(condition)]


def pair_samples(dataset, outcome, condition, key=None, categories=None):
    """Arrange a within-subjects outcome as units x conditions.

    Units lacking a value for any condition are excluded (count reported).
    Units are ordered by key so the result does not depend on row order.
    """
    outcome, condition = _name(outcome), _name(condition)
    key = _name(key) if key is not None else dataset.key_column
    if key is None:
        raise DataError("pairing needs a relational key column")
    y = _numeric_column(dataset, outcome)
    cond = dataset[condition]
    units_col = dataset[key]
    cats = tuple(categories) if categories is not None else dataset.categories[condition]
    cells = {}
    for u, c, v in zip(units_col, cond, y):
        if u is None or c is None or c not in cats:
            continue
        slot = cells.setdefault(u, {})
        if c in slot:
            raise DuplicateCell(u, c)
        if v is not None:
            slot[c] = v
    complete = sorted(u for u, slot in cells.items() if all(c in slot for c in cats))
    excluded = len(cells) - len(complete)
    if not complete:
        raise NoCompleteUnits(f"no unit of {key} has {outcome} under every {condition} condition")
    matrix = np.array([[cells[u][c] for c in cats] for u in complete], dtype=float)
    matrix.setflags(write=False)
    return PairedSamples(outcome, condition, tuple(complete), cats, matrix, excluded)
