import math
import os
from pathlib import Path

import pytest

import ethrisk

SCENARIOS = Path(os.environ.get("ETHRISK_SOURCE_DIR", Path(__file__).resolve().parents[2])) / "scenarios"


def test_reference_path_round_trip():
    path = ethrisk.ReferencePath([(0.0, 0.0), (100.0, 0.0)])
    assert path.length == pytest.approx(100.0)
    assert len(path) == 201
    l, d, l_dot, d_dot = path.to_frenet(30.0, 1.5, 0.0, 10.0)
    assert (l, d) == pytest.approx((30.0, 1.5))
    assert (l_dot, d_dot) == pytest.approx((10.0, 0.0))
    x, y, heading = path.to_cartesian(l, d)
    assert (x, y, heading) == pytest.approx((30.0, 1.5, 0.0))


def test_degenerate_path_raises():
    with pytest.raises(ethrisk.Error):
        ethrisk.ReferencePath([(0.0, 0.0)])


def test_sat_touching_boxes_overlap():
    assert ethrisk.sat_overlap((0, 0), 0.0, 1.0, 1.0, (2.0, 0), 0.0, 1.0, 1.0)
    assert not ethrisk.sat_overlap((0, 0), 0.0, 1.0, 1.0, (2.1, 0), 0.0, 1.0, 1.0)


def test_harm_and_probability():
    assert ethrisk.harm(0.0) == pytest.approx(0.0146, abs=1e-4)
    assert ethrisk.harm(10.0, "side") == pytest.approx(0.0800, abs=1e-4)
    assert ethrisk.harm(10.0, "rear") < ethrisk.harm(10.0, "side")
    assert ethrisk.mahalanobis_probability(1.0) == pytest.approx(math.exp(-0.5))
    assert ethrisk.effective_collision_speed(10.0, 0.0, 1500.0, 75.0, 0.3) == pytest.approx(75.0 / 1575.0 * 10.0)


def test_costs():
    assert ethrisk.bayes_cost([0.1, 0.3]) == pytest.approx(0.2)
    assert ethrisk.equality_cost([0.0, 0.2, 0.4]) == pytest.approx(0.8 / 3.0)
    assert ethrisk.maximin_cost([0.5], 2.0) == pytest.approx(0.25)
    assert ethrisk.ethical_cost([0.0, 0.4], [0.4], gamma=1.0) == pytest.approx(3.33)
    assert ethrisk.selfish_cost([0.1, 0.3]) == pytest.approx(2.0)
    with pytest.raises(ethrisk.EmptyRiskSet):
        ethrisk.bayes_cost([])


def test_planner():
    assert ethrisk.solve_lateral(0.0, 0.0, 0.0, 1.0, 1.0)[3:] == pytest.approx([10.0, -15.0, 6.0])
    assert ethrisk.solve_longitudinal(0.0, 10.0, 0.0, 15.0, 2.0)[3:] == pytest.approx([1.25, -0.3125])
    with pytest.raises(ethrisk.DegenerateHorizon):
        ethrisk.solve_lateral(0.0, 0.0, 0.0, 1.0, 0.0)
    plan = ethrisk.make_plan([0.0, 0.5, 10.0, 0.0, 0.0, 0.0], 2.0, 1.0, 12.0)
    assert plan["tau"][0] == 0.0 and plan["tau"][-1] == pytest.approx(2.0)
    assert plan["d"][0] == pytest.approx(0.5)
    assert plan["d"][-1] == pytest.approx(1.0)
    assert plan["l_dot"][-1] == pytest.approx(12.0)


def test_replay_and_lagrange():
    priority, w_reward, w_cost = ethrisk.dynamic_priority(10.0, 1.0)
    assert w_reward + w_cost == 1.0
    assert priority > 0.0
    assert ethrisk.lagrange_update(0.0, 0.05, 0.6, 0.2) == 0.0
    assert ethrisk.lagrange_update(1.0, 0.1, 0.6, 1.6) == pytest.approx(1.1)


def test_validate_scenario():
    info = ethrisk.validate_scenario(str(SCENARIOS / "cyclist_following.json"))
    assert info["name"] == "cyclist_following"
    assert "aggressive_overtake" in info["policies"]
    with pytest.raises(ethrisk.Error):
        ethrisk.validate_scenario(str(SCENARIOS / "missing.json"))


def test_run_episode():
    log = ethrisk.run_episode(str(SCENARIOS / "empty_road.json"), "lane_keep", seed=1)
    assert log["terminal"] == "success"
    assert log["records"]
    assert all(r["cost"] == 0.0 for r in log["records"])
    again = ethrisk.run_episode(str(SCENARIOS / "empty_road.json"), "lane_keep", seed=1)
    assert again == log
    with pytest.raises(ethrisk.ValidationError):
        ethrisk.run_episode(str(SCENARIOS / "empty_road.json"), "teleport")
