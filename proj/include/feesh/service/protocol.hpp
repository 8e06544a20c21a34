#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "feesh/geometry.hpp"

// Wire protocol for live sessions. Every message is one WebSocket text frame
// holding a JSON object with at least "type" and "tick". See docs/protocol.md.

namespace feesh::service {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Client -> server: open a session. `config` holds partial run-config
/// overrides ({"game": {...}, "mapek": {...}}).
struct HelloRequest {
    nlohmann::json config = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    bool mapek_enabled{true};
};

/// Client -> server: steering direction.
struct InputMessage {
    std::uint64_t tick{0};
    Vec2 direction;
};

/// Client -> server: run-time parameter changes; absent fields are untouched.
struct ToggleMessage {
    std::uint64_t tick{0};
    std::optional<bool> mapek_enabled;
    std::optional<bool> enemy_enemy_collision;
    std::optional<std::uint64_t> target_enemy_count;
};

using ClientMessage = std::variant<HelloRequest, InputMessage, ToggleMessage>;

/// Parses one client message. Throws ProtocolError on malformed JSON, a
/// missing "type"/"tick" field, an unknown type or ill-typed fields.
ClientMessage parse_client_message(std::string_view text);

nlohmann::json error_message(std::uint64_t tick, std::string_view message);
nlohmann::json end_message(std::uint64_t tick, std::string_view outcome, std::int64_t score);

/// Inputs longer than 1 are scaled to unit length; shorter ones are kept.
Vec2 clamp_direction(Vec2 v);

}  // namespace feesh::service
