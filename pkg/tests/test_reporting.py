import json
import pathlib

import numpy as np
import pytest

from setlaw import reporting

DATA = pathlib.Path(__file__).parent / "data"


def test_fmt_real_17_digits():
    assert reporting.fmt_real(0.1) == "0.10000000000000001"
    assert reporting.fmt_real(1.0) == "1"
    assert reporting.fmt_real(1 / 16) == "0.0625"
    # 17 significant digits round-trip doubles exactly
    rng = np.random.default_rng(0)
    for x in rng.normal(size=200) * 10.0 ** rng.integers(-8, 8, size=200):
        assert float(reporting.fmt_real(x)) == x


def test_dumps_json_parses_and_is_deterministic(tmp_path):
    obj = {
        "name": "run",
        "values": [1, 2.5, None, True, False],
        "nested": {"a": [0.1], "b": "x\ny"},
        "empty": {},
        "none": [],
    }
    text = reporting.dumps(obj)
    assert json.loads(text) == obj
    assert reporting.dumps(obj) == text
    p = tmp_path / "r.json"
    reporting.write_json(p, obj)
    assert json.loads(p.read_text()) == obj


def test_csv_round_trip(tmp_path):
    rows = [("e", 0, 1, 0.5, "exact"), ("e", 1, 4, 1.0 / 3.0, "sampled")]
    p = tmp_path / "t.csv"
    reporting.write_csv(p, rows)
    back = reporting.read_csv(p)
    assert back[0] == ("e", "0", 1, 0.5, "exact")
    assert back[1][3] == pytest.approx(1.0 / 3.0, abs=0)


def test_read_csv_rejects_malformed(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("not,a,real,header\n")
    with pytest.raises(ValueError):
        reporting.read_csv(p)
    q = tmp_path / "short.csv"
    q.write_text(",".join(reporting.CSV_HEADER) + "\ne,0,1\n")
    with pytest.raises(ValueError):
        reporting.read_csv(q)


def test_render_svg_golden():
    rows = reporting.read_csv(DATA / "golden.csv")
    svg = reporting.render_svg(rows)
    assert svg == (DATA / "golden.svg").read_text()


def test_render_svg_single_trajectory():
    rows = [("e", 0, 2**k, 1.0 / 2**k, "exact") for k in range(1, 6)]
    svg = reporting.render_svg(rows)
    assert svg.count("<polyline") == 2  # the trajectory and the median overlay


def test_render_svg_rejects_empty():
    with pytest.raises(ValueError):
        reporting.render_svg([])
    with pytest.raises(ValueError):
        reporting.render_svg([("e", 0, 4, 0.0, "exact")])  # nothing drawable


def test_svg_handles_degenerate_ranges():
    rows = [("e", 0, 16, 0.25, "exact")]
    svg = reporting.render_svg(rows)
    assert "<svg" in svg and "NaN" not in svg
