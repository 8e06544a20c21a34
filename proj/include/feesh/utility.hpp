#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "feesh/metrics.hpp"

namespace feesh::goals {

// Built-in utility functions. Every one returns a value on [0, 1] for inputs
// satisfying its precondition and throws std::invalid_argument otherwise.

/// Frame-rate utility: 1 at or above `full`, 0 below `floor`, linear between.
double util_fps(double fps, double floor = 30.0, double full = 40.0);

/// Player-size utility over the player diameter `ps` and canvas width `w`.
/// 1 up to w/2, 0 from w, and 1 - |ps - w/2| / (w/2) in between.
double util_player_size(double ps, double w);

/// 1 while the score has not dropped below the window's starting score.
double util_score(std::int64_t score, std::int64_t window_start_score);

/// min(1, alive / target).
double util_enemy_count(std::uint64_t alive, double target);

constexpr double util_const_one() { return 1.0; }

enum class UtilityFn { Fps, PlayerSize, Score, EnemyCount, ConstOne };

std::string_view to_string(UtilityFn fn);
/// Accepts the file spelling ("util_fps", ...). Throws on unknown names.
UtilityFn utility_fn_from_string(std::string_view name);

/// A leaf goal's reference to a built-in utility plus its parameters.
///
/// Recognised parameters:
///   util_fps          floor (30), full (40)
///   util_player_size  width (defaults to the snapshot's canvas width)
///   util_enemy_count  target (20)
struct UtilityBinding {
    UtilityFn fn{UtilityFn::ConstOne};
    std::map<std::string, double> params;

    double param_or(const std::string& key, double fallback) const;
    bool operator==(const UtilityBinding&) const = default;
};

/// Evaluates a binding against one snapshot.
double evaluate_binding(const UtilityBinding& binding, const MetricsSnapshot& snapshot);

/// Returns an empty string if the binding's parameters are usable, otherwise
/// a description of the problem.
std::string check_binding(const UtilityBinding& binding);

}  // namespace feesh::goals
