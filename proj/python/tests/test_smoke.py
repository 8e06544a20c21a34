import math

import pytest

import feesh


def test_utilities():
    assert feesh.util_fps(40) == 1.0
    assert feesh.util_fps(29) == 0.0
    assert feesh.util_fps(35) == pytest.approx(0.5)
    assert feesh.util_player_size(400, 800) == 1.0
    assert feesh.util_player_size(600, 800) == pytest.approx(0.5)
    assert feesh.util_player_size(800, 800) == 0.0
    assert feesh.util_const_one() == 1.0
    assert feesh.util_enemy_count(10, 20) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        feesh.util_fps(-1)


def test_mann_whitney():
    r = feesh.mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert r.u == 0
    assert r.p == pytest.approx(0.1)
    assert r.method == feesh.Method.Exact
    approx = feesh.mann_whitney_u([1, 2, 3], [4, 5, 6], feesh.Method.NormalApprox)
    assert approx.method == feesh.Method.NormalApprox
    assert 0.0 < approx.p < 1.0
    with pytest.raises(ValueError):
        feesh.mann_whitney_u([], [1.0])


def test_describe():
    s = feesh.describe([1, 2, 3, 4])
    assert s.median == 2.5
    assert s.n == 4


def test_frame_cost():
    assert feesh.fps_from_cost(feesh.frame_cost_ms(1)) == 60.0
    assert feesh.fps_from_cost(feesh.frame_cost_ms(151)) < 30.0
    assert feesh.fps_from_cost(feesh.frame_cost_ms(150)) >= 30.0
    assert feesh.frame_cost_ms(200, collision=False) < feesh.frame_cost_ms(200)


def test_replicate_is_deterministic():
    cfg = {"tick_limit": 1500}
    a = feesh.run_replicate(3, "normal", cfg)
    b = feesh.run_replicate(3, "normal", cfg)
    assert (a.ticks_survived, a.final_score, a.outcome) == (b.ticks_survived, b.final_score, b.outcome)
    assert a.treatment == "normal"
    assert a.adaptations == 0
    assert 0.0 <= a.mean_util_f <= 1.0


def test_bad_config_raises():
    with pytest.raises(ValueError):
        feesh.run_replicate(1, "mapek", {"game": {"width": "wide"}})


def test_small_experiment():
    report = feesh.run_experiment(replicates=3, config={"tick_limit": 800})
    assert [t["treatment"] for t in report["treatments"]] == ["mapek", "normal"]
    assert {c["metric"] for c in report["comparisons"]} == {"ticks_survived", "mean_util_f"}
    for c in report["comparisons"]:
        assert 0.0 <= c["p"] <= 1.0
        assert not math.isnan(c["u"])
