#pragma once

#include <span>

#include "feesh/game.hpp"
#include "feesh/geometry.hpp"

namespace feesh::bot {

/// Scripted player used for headless replicates.
struct BotPolicy {
    /// Edge-to-edge distance at which a threat triggers fleeing.
    double danger_radius{60.0};
    /// An enemy is prey iff its radius < size_margin * player radius.
    double size_margin{0.9};

    void validate() const;
    bool operator==(const BotPolicy&) const = default;
};

/// Steering direction with |v| <= 1. Flees the nearest threat (an enemy at
/// least as large as the player within the danger radius), otherwise heads
/// for the nearest prey; zero when there is neither. Ties go to the lowest
/// enemy index.
Vec2 decide(const BotPolicy& policy, const game::Blob& player, std::span<const game::Blob> enemies);

inline Vec2 decide(const BotPolicy& policy, const game::World& world) {
    return decide(policy, world.player(), world.enemies());
}

}  // namespace feesh::bot
