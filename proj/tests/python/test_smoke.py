import json

import numpy as np
import pytest

import sensorplace as sp

SMALL = {
    "domain": {"upper": [1, 1], "h": 0.05},
    "obstacles": [{"polygon": [[0.45, 0.3], [0.55, 0.3], [0.55, 0.7], [0.45, 0.7]]}],
    "sensors": [
        {"point": [0.25, 0.5], "range": 0.4, "direction": 0.0},
        {"boundary": {"kind": "domain", "s": 0.5}, "range": 0.4, "movable": True},
    ],
    "optimizer": {"iterations": 2},
}


def small():
    return sp.Scenario.parse(json.dumps(SMALL))


def test_presets_listed():
    names = sp.presets()
    assert "fig4" in names and "fig8-3d" in names
    assert sp.Scenario.preset("fig4").sensor_count == 16
    assert json.loads(sp.preset_text("fig5"))


def test_dump_round_trip():
    text = small().dump()
    assert sp.Scenario.parse(text).dump() == text


def test_solve_is_reproducible():
    a = sp.solve(small(), seed=3)
    b = sp.solve(small(), seed=3)
    assert a["final"] >= a["initial"]
    assert a["trace"] == b["trace"]
    assert a["placement"] == b["placement"]
    bests = [t[2] for t in a["trace"]]
    assert bests == sorted(bests)
    again = sp.evaluate(small(), a["placement"])
    assert again["value"] == pytest.approx(a["final"], rel=1e-12)


def test_coverage_array():
    sc = small()
    phi = sp.coverage(sc, sp.initial_placement(sc))
    assert phi.shape == (21, 21)
    assert phi.max() > 0 and phi.min() < 0
    empty = sp.coverage(sc, "")
    assert np.all(empty == -1.0)


def test_heaviside():
    assert sp.heaviside_reg(0.2, 0.1) == 1.0
    assert sp.heaviside_reg(-0.2, 0.1) == 0.0
    assert sp.heaviside_reg(0.05, 0.1) == pytest.approx(0.75)
    assert sp.heaviside_reg(0.0, 0.0) == 0.0


def test_errors_map_to_exceptions():
    bad = dict(SMALL, sensors=[{"point": [0.5, 0.5], "range": 0.3, "failure": 2}])
    with pytest.raises(sp.ConfigError, match=r"sensors\[0\]\.failure"):
        sp.Scenario.parse(json.dumps(bad))
    inside = dict(SMALL, sensors=[{"point": [0.5, 0.5], "range": 0.3}])
    with pytest.raises(sp.InfeasibleError):
        sp.solve(sp.Scenario.parse(json.dumps(inside)))
    with pytest.raises(sp.IoError):
        sp.Scenario.load("/nonexistent/scenario.json")
