import csv

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statsel.dataset import Dataset, group_samples, load_csv, pair_samples, parse_number
from statsel.errors import (
    CategoryViolation,
    DataError,
    DuplicateCell,
    EmptyGroup,
    MissingColumn,
    NoCompleteUnits,
    RangeViolation,
    TypeMismatch,
)
from statsel.speclang import load_spec, validate_spec
from support import DEMO, comparison_spec, grouped_dataset, spec

SPEC = spec("""
[variables]
g = nominal {a, b, c}
y = ratio [0, 100]
lvl = ordinal {low, mid, high}
[design]
study_type = experiment
independent = g, lvl
dependent = y
[hypothesis]
expr = g:a > g:b
""")


def write(tmp_path, rows, name="d.csv"):
    p = tmp_path / name
    with p.open("w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    return p


def test_uscrime_loads():
    v = validate_spec(load_spec(DEMO / "uscrime.analysis"))
    ds = load_csv(DEMO / "uscrime.csv", v)
    assert ds.row_count == 47
    assert set(ds.columns) == {"So", "Prob"}
    g = group_samples(ds, "Prob", "So", ("1", "0"))
    assert g.sizes == {"1": 16, "0": 31}


def test_cells_are_typed_and_nulls_kept(tmp_path):
    p = write(tmp_path, [["g", "y", "lvl", "extra"], ["a", "1.5", "low", "x"],
                         ["b", "NA", "high", "y"], ["c", "", "", "z"], ["", "", "", ""]])
    ds = load_csv(p, SPEC)
    assert ds.row_count == 3  # the blank line is skipped
    assert ds["y"] == (1.5, None, None)
    assert ds["lvl"] == ("low", "high", None)
    assert "extra" not in ds.columns


@pytest.mark.parametrize("rows,error", [
    ([["g", "y", "lvl"], ["a", "abc", "low"]], TypeMismatch),
    ([["g", "y", "lvl"], ["a", "101", "low"]], RangeViolation),
    ([["g", "y", "lvl"], ["z", "1", "low"]], CategoryViolation),
    ([["g", "lvl"], ["a", "low"]], MissingColumn),
])
def test_cell_validation(tmp_path, rows, error):
    with pytest.raises(error):
        load_csv(write(tmp_path, rows), SPEC)


def test_empty_file(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("")
    with pytest.raises(DataError):
        load_csv(p, SPEC)


def test_bom_header(tmp_path):
    p = tmp_path / "bom.csv"
    p.write_text("﻿g,y,lvl\na,2,mid\n", encoding="utf-8")
    assert load_csv(p, SPEC)["g"] == ("a",)


@pytest.mark.parametrize("cell,value", [("1", 1.0), ("-2.5e3", -2500.0), (".5", 0.5),
                                        ("1e", None), ("nan", None), ("inf", None), ("", None)])
def test_parse_number(cell, value):
    assert parse_number(cell) == value


def test_group_samples_counts_and_errors():
    v = comparison_spec(("a", "b", "c"))
    ds = grouped_dataset({"a": [1, 2], "b": [3, 4, 5], "c": [6]}, v)
    g = group_samples(ds, "y", "g", ("b", "a"))
    assert g.categories == ("b", "a")
    assert g.filtered == 1
    assert list(g["a"]) == [1.0, 2.0]
    v2 = comparison_spec(("a", "b", "d"))
    with pytest.raises(EmptyGroup):
        group_samples(grouped_dataset({"a": [1], "b": [2]}, v2), "y", "g")


def test_pair_samples_orders_by_key_and_excludes_incomplete():
    v = comparison_spec(within=True)
    ds = grouped_dataset({"a": [1, 2, 3], "b": [4, 5]}, v, within=True)
    p = pair_samples(ds, "y", "g")
    assert p.units == ("u0000", "u0001")
    assert p.excluded == 1
    assert p.matrix.tolist() == [[1, 4], [2, 5]]


def test_pair_samples_errors():
    v = comparison_spec(within=True)
    cats = {"g": ("a", "b")}
    dup = Dataset.from_columns({"g": ["a", "a"], "y": [1.0, 2.0], "id": ["u", "u"]},
                               dtypes={"g": "nominal", "y": "ratio"}, categories=cats,
                               key_column="id")
    with pytest.raises(DuplicateCell):
        pair_samples(dup, "y", "g")
    lonely = Dataset.from_columns({"g": ["a", "b"], "y": [1.0, 2.0], "id": ["u", "v"]},
                                  dtypes={"g": "nominal", "y": "ratio"}, categories=cats,
                                  key_column="id")
    with pytest.raises(NoCompleteUnits):
        pair_samples(lonely, "y", "g")
    assert v.is_within("g")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(0, 50)), min_size=2, max_size=30),
       st.randoms(use_true_random=False))
def test_grouping_ignores_row_order(rows, rnd):
    def build(rs):
        return Dataset.from_columns({"g": [r[0] for r in rs], "y": [float(r[1]) for r in rs]},
                                    dtypes={"g": "nominal", "y": "ratio"},
                                    categories={"g": ("a", "b")})
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    if {r[0] for r in rows} != {"a", "b"}:
        return
    g1 = group_samples(build(rows), "y", "g")
    g2 = group_samples(build(shuffled), "y", "g")
    for s1, s2 in zip(g1.samples, g2.samples):
        assert sorted(s1) == sorted(s2)


def test_ordinal_outcome_is_rank_coded():
    v = comparison_spec(dtype="ordinal")
    ds = grouped_dataset({"a": ["lo", "hi"], "b": ["mid"]}, v)
    g = group_samples(ds, "y", "g")
    assert list(g["a"]) == [1.0, 3.0] and list(g["b"]) == [2.0]
