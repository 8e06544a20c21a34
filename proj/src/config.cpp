#include "feesh/config.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace feesh {

using nlohmann::json;

namespace {

// Field table: name -> setter that reads the JSON value into the target.
template <typename T>
using Setters = std::map<std::string, std::function<void(T&, const json&)>>;

template <typename T>
void apply(const char* section, T& target, const json& j, const Setters<T>& setters) {
    if (!j.is_object()) throw ConfigError(std::string(section) + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(std::string(section) + ": unknown key '" + key + "'");
        try {
            it->second(target, value);
        } catch (const json::exception& e) {
            throw ConfigError(std::string(section) + "." + key + ": " + e.what());
        }
    }
}

double number(const json& v) {
    if (!v.is_number()) throw ConfigError("expected a number, got " + v.dump());
    return v.get<double>();
}

std::uint64_t count(const json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError("expected a non-negative integer, got " + v.dump());
    }
    return v.get<std::uint64_t>();
}

bool boolean(const json& v) {
    if (!v.is_boolean()) throw ConfigError("expected true or false, got " + v.dump());
    return v.get<bool>();
}

}  // namespace

void apply_json(game::GameConfig& c, const json& j) {
    static const Setters<game::GameConfig> setters = {
        {"width", [](auto& c, const json& v) { c.width = number(v); }},
        {"height", [](auto& c, const json& v) { c.height = number(v); }},
        {"target_enemy_count", [](auto& c, const json& v) { c.target_enemy_count = count(v); }},
        {"enemy_enemy_collision", [](auto& c, const json& v) { c.enemy_enemy_collision = boolean(v); }},
        {"player_speed", [](auto& c, const json& v) { c.player_speed = number(v); }},
        {"player_start_radius", [](auto& c, const json& v) { c.player_start_radius = number(v); }},
        {"enemy_radius_min", [](auto& c, const json& v) { c.enemy_radius_min = number(v); }},
        {"enemy_radius_max", [](auto& c, const json& v) { c.enemy_radius_max = number(v); }},
        {"enemy_speed_min", [](auto& c, const json& v) { c.enemy_speed_min = number(v); }},
        {"enemy_speed_max", [](auto& c, const json& v) { c.enemy_speed_max = number(v); }},
        {"random_event_probability", [](auto& c, const json& v) { c.random_event_probability = number(v); }},
        {"random_event_increment", [](auto& c, const json& v) { c.random_event_increment = count(v); }},
        {"growth_factor", [](auto& c, const json& v) { c.growth_factor = number(v); }},
        {"wobble_vertices", [](auto& c, const json& v) { c.wobble_vertices = static_cast<int>(count(v)); }},
        {"cost",
         [](auto& c, const json& v) {
             static const Setters<game::FrameCostModel> cost = {
                 {"base_ms", [](auto& m, const json& x) { m.base_ms = number(x); }},
                 {"per_entity_ms", [](auto& m, const json& x) { m.per_entity_ms = number(x); }},
                 {"per_vertex_ms", [](auto& m, const json& x) { m.per_vertex_ms = number(x); }},
                 {"per_pair_ms", [](auto& m, const json& x) { m.per_pair_ms = number(x); }},
             };
             apply("game.cost", c.cost, v, cost);
         }},
    };
    apply("game", c, j, setters);
}

void apply_json(mapek::MapeConfig& c, const json& j) {
    static const Setters<mapek::MapeConfig> setters = {
        {"fps_threshold", [](auto& c, const json& v) { c.fps_threshold = number(v); }},
        {"fps_strategies", [](auto& c, const json& v) { c.fps_strategies = boolean(v); }},
        {"playability_strategies", [](auto& c, const json& v) { c.playability_strategies = boolean(v); }},
        {"reduce_enemy_fraction", [](auto& c, const json& v) { c.reduce_enemy_fraction = number(v); }},
        {"shrink_factor", [](auto& c, const json& v) { c.shrink_factor = number(v); }},
        {"grace_window", [](auto& c, const json& v) { c.grace_window = count(v); }},
        {"history", [](auto& c, const json& v) { c.history = count(v); }},
        {"fps_goal", [](auto& c, const json& v) { c.fps_goal = v.get<std::string>(); }},
        {"playability_goal", [](auto& c, const json& v) { c.playability_goal = v.get<std::string>(); }},
    };
    apply("mapek", c, j, setters);
}

void apply_json(bot::BotPolicy& p, const json& j) {
    static const Setters<bot::BotPolicy> setters = {
        {"danger_radius", [](auto& p, const json& v) { p.danger_radius = number(v); }},
        {"size_margin", [](auto& p, const json& v) { p.size_margin = number(v); }},
    };
    apply("bot", p, j, setters);
}

void apply_json(RunConfig& c, const json& j) {
    static const Setters<RunConfig> setters = {
        {"game", [](auto& c, const json& v) { apply_json(c.game, v); }},
        {"mapek", [](auto& c, const json& v) { apply_json(c.mapek, v); }},
        {"bot", [](auto& c, const json& v) { apply_json(c.bot, v); }},
        {"tick_limit", [](auto& c, const json& v) { c.tick_limit = count(v); }},
    };
    apply("config", c, j, setters);
}

json to_json(const game::GameConfig& c) {
    return {
        {"width", c.width},
        {"height", c.height},
        {"target_enemy_count", c.target_enemy_count},
        {"enemy_enemy_collision", c.enemy_enemy_collision},
        {"player_speed", c.player_speed},
        {"player_start_radius", c.player_start_radius},
        {"enemy_radius_min", c.enemy_radius_min},
        {"enemy_radius_max", c.enemy_radius_max},
        {"enemy_speed_min", c.enemy_speed_min},
        {"enemy_speed_max", c.enemy_speed_max},
        {"random_event_probability", c.random_event_probability},
        {"random_event_increment", c.random_event_increment},
        {"growth_factor", c.growth_factor},
        {"wobble_vertices", c.wobble_vertices},
        {"cost",
         {{"base_ms", c.cost.base_ms},
          {"per_entity_ms", c.cost.per_entity_ms},
          {"per_vertex_ms", c.cost.per_vertex_ms},
          {"per_pair_ms", c.cost.per_pair_ms}}},
    };
}

json to_json(const mapek::MapeConfig& c) {
    return {
        {"fps_threshold", c.fps_threshold},
        {"fps_strategies", c.fps_strategies},
        {"playability_strategies", c.playability_strategies},
        {"reduce_enemy_fraction", c.reduce_enemy_fraction},
        {"shrink_factor", c.shrink_factor},
        {"grace_window", c.grace_window},
        {"history", c.history},
        {"fps_goal", c.fps_goal},
        {"playability_goal", c.playability_goal},
    };
}

json to_json(const bot::BotPolicy& p) { return {{"danger_radius", p.danger_radius}, {"size_margin", p.size_margin}}; }

json to_json(const RunConfig& c) {
    return {{"game", to_json(c.game)}, {"mapek", to_json(c.mapek)}, {"bot", to_json(c.bot)}, {"tick_limit", c.tick_limit}};
}

void RunConfig::validate() const {
    try {
        game.validate();
        mapek.validate();
        bot.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (tick_limit == 0) throw ConfigError("tick_limit must be positive");
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    apply_json(c, j);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

}  // namespace feesh
