#include "feesh/service/protocol.hpp"

#include <cmath>

namespace feesh::service {

using nlohmann::json;

namespace {

std::uint64_t tick_of(const json& j) {
    auto it = j.find("tick");
    if (it == j.end()) throw ProtocolError("message lacks a 'tick' field");
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw ProtocolError("'tick' must be a non-negative integer");
    return it->get<std::uint64_t>();
}

std::optional<bool> optional_bool(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (!it->is_boolean()) throw ProtocolError(std::string("'") + key + "' must be a boolean");
    return it->get<bool>();
}

double finite_number(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw ProtocolError(std::string("'") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ProtocolError(std::string("'") + key + "' must be finite");
    return v;
}

}  // namespace

ClientMessage parse_client_message(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("malformed message: ") + e.what());
    }
    if (!j.is_object()) throw ProtocolError("message must be a JSON object");
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) throw ProtocolError("message lacks a string 'type' field");
    const auto type = type_it->get<std::string>();
    const auto tick = tick_of(j);

    if (type == "hello") {
        HelloRequest hello;
        if (auto it = j.find("config"); it != j.end()) {
            if (!it->is_object()) throw ProtocolError("'config' must be an object");
            hello.config = *it;
        }
        if (auto it = j.find("seed"); it != j.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw ProtocolError("'seed' must be a non-negative integer");
            hello.seed = it->get<std::uint64_t>();
        }
        if (auto flag = optional_bool(j, "mapekEnabled")) hello.mapek_enabled = *flag;
        return hello;
    }
    if (type == "input") {
        return InputMessage{tick, {finite_number(j, "dx"), finite_number(j, "dy")}};
    }
    if (type == "toggle") {
        ToggleMessage toggle;
        toggle.tick = tick;
        toggle.mapek_enabled = optional_bool(j, "mapekEnabled");
        toggle.enemy_enemy_collision = optional_bool(j, "enemyEnemyCollision");
        if (auto it = j.find("targetEnemyCount"); it != j.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
                throw ProtocolError("'targetEnemyCount' must be a non-negative integer");
            }
            toggle.target_enemy_count = it->get<std::uint64_t>();
        }
        if (!toggle.mapek_enabled && !toggle.enemy_enemy_collision && !toggle.target_enemy_count) {
            throw ProtocolError("toggle names no parameter");
        }
        return toggle;
    }
    throw ProtocolError("unknown message type '" + type + "'");
}

json error_message(std::uint64_t tick, std::string_view message) {
    return {{"type", "error"}, {"tick", tick}, {"message", message}};
}

json end_message(std::uint64_t tick, std::string_view outcome, std::int64_t score) {
    return {{"type", "end"}, {"tick", tick}, {"outcome", outcome}, {"score", score}};
}

Vec2 clamp_direction(Vec2 v) { return v.length() > 1.0 ? v.normalized() : v; }

}  // namespace feesh::service
