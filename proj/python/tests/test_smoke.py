import math
import os

import pytest

import bdmtsp

DATA = os.environ.get("BDMTSP_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def star():
    return bdmtsp.Instance.from_points([(0, 0), (1, 0), (0, 2), (-3, 0), (0, -4), (5, 0)])


def test_star_routes():
    r = bdmtsp.solve(star(), 2, "abs:1", "cvh", closed=False)
    assert r["routes"] == [[0, 1, 4, 5], [0, 2, 3]]
    assert r["total"] == pytest.approx(1 + math.sqrt(17) + math.sqrt(41) + 2 + math.sqrt(13))


def test_customers_visited_once():
    inst = bdmtsp.gen_uniform(60, 3)
    for algo in ("avh", "cvh"):
        r = bdmtsp.solve(inst, 4, "mabs:1.5", algo)
        visited = sorted(c for route in r["routes"] for c in route[1:])
        assert visited == list(range(1, 60))
        assert max(r["counts"]) <= math.ceil(59 / 4)


def test_scope_and_model():
    assert bdmtsp.resolve_scope("rel:5%", 3, 100) == 5
    assert bdmtsp.predict("published_3f", 3, 100, 15) == pytest.approx(18.847091595859208)
    with pytest.raises(ValueError):
        bdmtsp.predict("nope", 1, 1, 1)


def test_infeasible_capacity():
    with pytest.raises(bdmtsp.InfeasibleError):
        bdmtsp.solve(bdmtsp.gen_uniform(11, 1), 2, "abs:2", capacity=4)


def test_sweep_and_tsplib():
    means = bdmtsp.sweep([(2, 30, 5)], reps=2, seed=4)
    assert len(means) == 1 and means[0] > 0
    berlin = bdmtsp.load_tsplib(os.path.join(DATA, "berlin52.tsp"))
    assert len(berlin) == 52
    ok, report = bdmtsp.reproduce("eil51-mabs", DATA)
    assert ok, report
