import math
import os

import pytest

import som3d

SCENARIOS = os.environ.get("SOM3D_SCENARIO_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "scenarios"))


def three_spheres():
    s = som3d.Scene((0, 0, 0), 1000.0)
    s.add_network((0, 0, 0), 700).add_network((0, 1000, 0), 600).add_network((1000, 1000, 0), 800)
    return s


def test_radio_parameter():
    s = three_spheres()
    assert s.network_count == 3
    assert s.radio_parameter_at((0, 0, 0)) == 1
    assert s.radio_parameter_at((500, 500, 900)) == 0
    assert s.detect(1, (700, 0, 0)) == 1


def test_boundary_area_matches_octants():
    value, se = som3d.boundary_surface_area(three_spheres(), 200000, 3)
    exact = math.pi / 2 * (700**2 + 600**2 + 800**2)
    assert abs(value - exact) < 4 * se


def test_plane_cut():
    assert som3d.cut_area(0.2, 0.0, 0.0) == pytest.approx(1.0)
    assert som3d.cut_rpe(0.2, 0.0, 0.0) == pytest.approx(0.2)
    top = som3d.max_offset(0.3, 0.2)
    assert som3d.cut_rpe(top, 0.3, 0.2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        som3d.cut_area(0.1, 2.0, 0.1)


def test_rpe_constant_paths_agree():
    q = som3d.rpe_constant()
    value, se = som3d.rpe_constant_sampled(200000, 5)
    assert abs(q - value) < 4 * se


def test_tours():
    pts = [(3, 0, 0), (1, 0, 0), (2, 0, 0)]
    t = som3d.plan_tour(pts, (0, 0, 0), iterations=20)
    assert t["order"] == [1, 2, 0]
    assert t["length"] == pytest.approx(3.0)
    assert som3d.brute_force_tour(pts)["length"] == pytest.approx(3.0)
    assert som3d.nearest_neighbor_tour(pts)["length"] == pytest.approx(3.0)
    with pytest.raises(som3d.ValidationError):
        som3d.plan_tour([])


def test_adaptive_run():
    s = three_spheres()
    full = som3d.run_som(s, 9, 1, plan_tours=False)
    assert full["measurements"] == 729
    fast = som3d.run_som(s, 9, 4, seed=2)
    assert fast["measurements"] < 729
    assert fast["per_round"][0] == 27
    assert fast["flight_distance"] > 0
    area, _ = som3d.boundary_surface_area(s, 100000, 1)
    assert fast["measurements"] <= som3d.measurement_bound(9, 4, area, 1000.0)[1]
    with pytest.raises(som3d.ValidationError):
        som3d.run_som(s, 9, 3)


def test_scenario_and_sweep():
    path = os.path.join(SCENARIOS, "paper-v.json")
    assert som3d.validate_scenario(path) == "paper-v"
    rows = som3d.rpe_sweep(path)
    assert {r["metric"] for r in rows} == {"rpe", "predicted_rpe"}
    assert all(r["value"] > 0 for r in rows)


def test_scenarios_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    import json

    root = os.path.join(os.path.dirname(__file__), "..", "..")
    with open(os.path.join(root, "docs", "scenario.schema.json")) as f:
        schema = json.load(f)
    for path in [os.path.join(SCENARIOS, "paper-v.json"), os.path.join(root, "tests", "data", "determinism.json")]:
        with open(path) as f:
            jsonschema.validate(json.load(f), schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"id": "x", "colour": 1}, schema)
