"""Python bindings for the feesh self-adaptive game engine."""

from ._feesh import (
    Method,
    Summary,
    TestResult,
    ReplicateResult,
    describe,
    fps_from_cost,
    frame_cost_ms,
    mann_whitney_u,
    run_experiment,
    run_replicate,
    util_const_one,
    util_enemy_count,
    util_fps,
    util_player_size,
    util_score,
)

__all__ = [
    "Method",
    "Summary",
    "TestResult",
    "ReplicateResult",
    "describe",
    "fps_from_cost",
    "frame_cost_ms",
    "mann_whitney_u",
    "run_experiment",
    "run_replicate",
    "util_const_one",
    "util_enemy_count",
    "util_fps",
    "util_player_size",
    "util_score",
]
