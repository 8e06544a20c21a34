#include "feesh/utility.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace feesh::goals {

double util_fps(double fps, double floor, double full) {
    if (!(fps >= 0.0)) throw std::invalid_argument("util_fps: fps must be non-negative");
    if (!(floor < full)) throw std::invalid_argument("util_fps: floor must be below full");
    if (fps >= full) return 1.0;
    if (fps < floor) return 0.0;
    return (fps - floor) / (full - floor);
}

double util_player_size(double ps, double w) {
    if (!(w > 0.0)) throw std::invalid_argument("util_player_size: width must be positive");
    if (!(ps >= 0.0)) throw std::invalid_argument("util_player_size: size must be non-negative");
    const double half = w / 2.0;
    if (ps <= half) return 1.0;
    if (ps >= w) return 0.0;
    return 1.0 - std::abs(ps - half) / half;
}

double util_score(std::int64_t score, std::int64_t window_start_score) {
    return score >= window_start_score ? 1.0 : 0.0;
}

double util_enemy_count(std::uint64_t alive, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("util_enemy_count: target must be positive");
    return std::min(1.0, static_cast<double>(alive) / target);
}

std::string_view to_string(UtilityFn fn) {
    switch (fn) {
        case UtilityFn::Fps: return "util_fps";
        case UtilityFn::PlayerSize: return "util_player_size";
        case UtilityFn::Score: return "util_score";
        case UtilityFn::EnemyCount: return "util_enemy_count";
        case UtilityFn::ConstOne: return "util_const_one";
    }
    return "unknown";
}

UtilityFn utility_fn_from_string(std::string_view name) {
    for (auto fn : {UtilityFn::Fps, UtilityFn::PlayerSize, UtilityFn::Score,
                    UtilityFn::EnemyCount, UtilityFn::ConstOne}) {
        if (to_string(fn) == name) return fn;
    }
    throw std::invalid_argument("unknown utility function '" + std::string(name) + "'");
}

double UtilityBinding::param_or(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double evaluate_binding(const UtilityBinding& binding, const MetricsSnapshot& s) {
    switch (binding.fn) {
        case UtilityFn::Fps:
            return util_fps(s.fps, binding.param_or("floor", 30.0), binding.param_or("full", 40.0));
        case UtilityFn::PlayerSize:
            return util_player_size(s.player_size, binding.param_or("width", s.canvas_width));
        case UtilityFn::Score:
            return util_score(s.score, s.window_start_score);
        case UtilityFn::EnemyCount:
            return util_enemy_count(s.enemy_count, binding.param_or("target", 20.0));
        case UtilityFn::ConstOne:
            return util_const_one();
    }
    return 0.0;
}

std::string check_binding(const UtilityBinding& binding) {
    static const std::map<UtilityFn, std::set<std::string>> allowed = {
        {UtilityFn::Fps, {"floor", "full"}},
        {UtilityFn::PlayerSize, {"width"}},
        {UtilityFn::Score, {}},
        {UtilityFn::EnemyCount, {"target"}},
        {UtilityFn::ConstOne, {}},
    };
    const auto& keys = allowed.at(binding.fn);
    for (const auto& [key, value] : binding.params) {
        if (!keys.contains(key)) {
            return "unknown parameter '" + key + "' for " + std::string(to_string(binding.fn));
        }
        if (!std::isfinite(value)) return "parameter '" + key + "' is not finite";
    }
    switch (binding.fn) {
        case UtilityFn::Fps:
            if (!(binding.param_or("floor", 30.0) < binding.param_or("full", 40.0)))
                return "util_fps requires floor < full";
            if (binding.param_or("floor", 30.0) < 0.0) return "util_fps floor must be non-negative";
            break;
        case UtilityFn::PlayerSize:
            if (binding.params.contains("width") && !(binding.params.at("width") > 0.0))
                return "util_player_size width must be positive";
            break;
        case UtilityFn::EnemyCount:
            if (!(binding.param_or("target", 20.0) > 0.0)) return "util_enemy_count target must be positive";
            break;
        default:
            break;
    }
    return {};
}

}  // namespace feesh::goals
