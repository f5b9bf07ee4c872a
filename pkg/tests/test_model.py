import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spothull.errors import ParseError, ValidationError
from spothull.model import (
    Spot,
    SpotDataset,
    normalize_proportions,
    parse_dataset,
    serialize_dataset,
    validate_dataset,
)

CSV = "spot_id,x,y,TypeA,TypeB,TypeC\ns1,10,20,0.5,0.3,0.2\ns2,30,40,0.2,0.2,0.6\n"


def test_parse_csv_basic():
    ds = parse_dataset(CSV, "csv")
    assert ds.cell_types == ("TypeA", "TypeB", "TypeC")
    assert len(ds) == 2
    assert ds.spots[0] == Spot("s1", 10.0, 20.0, (0.5, 0.3, 0.2))
    assert ds.positions().shape == (2, 2)
    assert ds.proportion_matrix().shape == (2, 3)


def test_parse_csv_rejects_bad_header():
    with pytest.raises(ParseError, match="header"):
        parse_dataset("id,x,y,A\na,0,0,1\n", "csv")


def test_parse_csv_rejects_missing_types():
    with pytest.raises(ParseError, match="cell-type"):
        parse_dataset("spot_id,x,y\na,0,0\n", "csv")


def test_parse_csv_rejects_ragged_row():
    with pytest.raises(ParseError, match="row 2"):
        parse_dataset("spot_id,x,y,A\na,0,0\n", "csv")


def test_parse_csv_rejects_non_numeric():
    with pytest.raises(ParseError, match="non-numeric"):
        parse_dataset("spot_id,x,y,A\na,0,zero,1\n", "csv")


def test_parse_csv_rejects_duplicate_id():
    with pytest.raises(ParseError, match="duplicate"):
        parse_dataset("spot_id,x,y,A\na,0,0,1\na,1,1,1\n", "csv")


def test_parse_json_with_image():
    text = (
        '{"cell_types":["A","B"],"image":{"path":"he.png","width":640,"height":480},'
        '"spots":[{"id":"s1","x":1,"y":2,"p":[0.4,0.6]}]}'
    )
    ds = parse_dataset(text, "json")
    assert ds.image_ref == "he.png"
    assert ds.image_size == (640, 480)
    assert ds.spots[0].proportions == (0.4, 0.6)


def test_parse_json_rejects_wrong_arity():
    with pytest.raises(ParseError, match="expected 2 proportions"):
        parse_dataset('{"cell_types":["A","B"],"spots":[{"id":"a","x":0,"y":0,"p":[1.0]}]}', "json")


def test_parse_unknown_format():
    with pytest.raises(ParseError):
        parse_dataset(CSV, "tsv")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_serialize_round_trip(fmt):
    ds = parse_dataset(CSV, "csv")
    again = parse_dataset(serialize_dataset(ds, fmt), fmt)
    assert again.cell_types == ds.cell_types
    assert again.spots == ds.spots


def test_normalize_identity_within_noise():
    p, renorm, warn = normalize_proportions((0.5, 0.5))
    assert p == (0.5, 0.5) and not renorm and not warn


def test_normalize_small_drift_no_warning():
    p, renorm, warn = normalize_proportions((0.5, 0.505))
    assert renorm and not warn
    assert math.isclose(sum(p), 1.0, abs_tol=1e-12)


def test_normalize_large_drift_warns():
    p, renorm, warn = normalize_proportions((0.5, 0.6))
    assert renorm and warn


@pytest.mark.parametrize("bad", [(-0.1, 1.1), (float("nan"), 1.0), (float("inf"), 0.0), (0.0, 0.0)])
def test_normalize_hard_errors(bad):
    with pytest.raises(ValidationError):
        normalize_proportions(bad)


@given(
    st.lists(st.floats(min_value=0.0, max_value=1e6, allow_nan=False), min_size=1, max_size=12)
    .filter(lambda v: sum(v) > 1e-9)
)
def test_normalize_always_lands_on_simplex(vals):
    p, _, _ = normalize_proportions(vals)
    assert all(x >= 0 for x in p)
    assert math.isclose(math.fsum(p), 1.0, abs_tol=1e-9)


def test_normalize_idempotent():
    p1, _, _ = normalize_proportions((0.2, 0.3, 0.9))
    p2, renorm, _ = normalize_proportions(p1)
    assert p2 == p1 and not renorm


def test_validate_drops_and_reports():
    ds = SpotDataset(
        (
            Spot("ok", 0, 0, (0.5, 0.5)),
            Spot("neg", 1, 1, (-0.2, 1.2)),
            Spot("drift", 2, 2, (0.7, 0.7)),
            Spot("nanpos", float("nan"), 0, (0.5, 0.5)),
        ),
        ("A", "B"),
    )
    clean, report = validate_dataset(ds)
    assert [s.id for s in clean.spots] == ["ok", "drift"]
    assert {sid for sid, _ in report.errors} == {"neg", "nanpos"}
    assert report.normalized_count == 1
    assert [sid for sid, _ in report.warnings] == ["drift"]
    assert not report.accepted
    d = report.to_dict()
    assert d["normalized_count"] == 1 and len(d["errors"]) == 2


def test_validate_preserves_row_order():
    ds = parse_dataset(CSV, "csv")
    clean, _ = validate_dataset(ds)
    assert [s.id for s in clean.spots] == ["s1", "s2"]
    assert np.array_equal(clean.positions(), ds.positions())


def test_dataset_rejects_duplicate_type_names():
    with pytest.raises(ValidationError):
        SpotDataset((Spot("a", 0, 0, (1.0, 0.0)),), ("A", "A"))


def test_bounding_box():
    ds = parse_dataset(CSV, "csv")
    assert ds.bounding_box() == (10.0, 20.0, 30.0, 40.0)
