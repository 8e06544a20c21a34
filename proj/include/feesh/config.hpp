#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "feesh/bot.hpp"
#include "feesh/game.hpp"
#include "feesh/mapek.hpp"

namespace feesh {

/// Everything a replicate needs besides its seed and treatment.
struct RunConfig {
    game::GameConfig game;
    mapek::MapeConfig mapek;
    bot::BotPolicy bot;
    /// 10 simulated minutes at 60 ticks per second.
    std::uint64_t tick_limit{36000};

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON mapping. Objects may be partial: missing keys keep their current
// values, unknown keys and wrongly-typed values raise ConfigError.
//
//   {"game": {...GameConfig...}, "mapek": {...}, "bot": {...}, "tick_limit": N}

void apply_json(game::GameConfig& config, const nlohmann::json& j);
void apply_json(mapek::MapeConfig& config, const nlohmann::json& j);
void apply_json(bot::BotPolicy& policy, const nlohmann::json& j);
void apply_json(RunConfig& config, const nlohmann::json& j);

nlohmann::json to_json(const game::GameConfig& config);
nlohmann::json to_json(const mapek::MapeConfig& config);
nlohmann::json to_json(const bot::BotPolicy& policy);
nlohmann::json to_json(const RunConfig& config);

/// Defaults overlaid with the file's contents, validated.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace feesh
