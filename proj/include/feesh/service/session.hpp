#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "feesh/config.hpp"
#include "feesh/game.hpp"
#include "feesh/mapek.hpp"
#include "feesh/service/protocol.hpp"

namespace feesh::service {

/// One live game: a world, its knowledge and the client's latest input.
/// Pure state machine; the server owns the transport and the clock.
class Session {
public:
    /// Applies the hello's config overrides on top of `base`. Throws
    /// ConfigError for malformed or out-of-range overrides.
    Session(std::string id, const HelloRequest& hello, const RunConfig& base = {}, std::uint64_t default_seed = 1);

    const std::string& id() const { return id_; }
    const RunConfig& config() const { return config_; }
    const game::World& world() const { return world_; }
    const mapek::Knowledge& knowledge() const { return knowledge_; }
    bool mapek_enabled() const { return mapek_enabled_; }
    Vec2 input() const { return input_; }
    bool finished() const { return !world_.running(); }

    /// Input and toggles. Returns an error frame for anything the session
    /// rejects; the session itself is unaffected by rejected messages.
    std::optional<nlohmann::json> handle_text(std::string_view text);
    void handle(const InputMessage& message);
    void handle(const ToggleMessage& message);

    /// Applies queued toggles, steps the world with the buffered input and
    /// runs the feedback loop (or observation only when disabled).
    /// `measured_fps` replaces the cost model for the monitor when given.
    void tick(std::optional<double> measured_fps = std::nullopt);

    /// Builds the state frame for the current tick and drains the pending
    /// adaptations into it. Call only for frames that will be sent.
    nlohmann::json take_frame();
    std::size_t pending_adaptations() const { return pending_.size(); }

    /// Outcome name once terminal ("Won", "GameOver", "Failed").
    std::string outcome() const;
    nlohmann::json end_frame() const;

private:
    void apply_toggles();

    std::string id_;
    RunConfig config_;
    game::World world_;
    mapek::Knowledge knowledge_;
    bool mapek_enabled_{true};
    Vec2 input_;
    std::vector<ToggleMessage> queued_toggles_;
    std::vector<mapek::AppliedAction> pending_;
    goals::GoalEvaluation last_evaluation_;
    double last_fps_{60.0};
};

}  // namespace feesh::service
