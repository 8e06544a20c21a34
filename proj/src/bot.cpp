#include "feesh/bot.hpp"

#include <limits>
#include <stdexcept>

namespace feesh::bot {

void BotPolicy::validate() const {
    if (!(danger_radius > 0.0)) throw std::invalid_argument("bot: danger_radius must be positive");
    if (!(size_margin > 0.0 && size_margin <= 1.0)) throw std::invalid_argument("bot: size_margin must lie on (0, 1]");
}

Vec2 decide(const BotPolicy& policy, const game::Blob& player, std::span<const game::Blob> enemies) {
    const game::Blob* threat = nullptr;
    double threat_gap = std::numeric_limits<double>::infinity();
    const game::Blob* prey = nullptr;
    double prey_distance = std::numeric_limits<double>::infinity();

    for (const auto& e : enemies) {
        const double d = distance(player.position, e.position);
        if (e.radius >= player.radius) {
            const double gap = d - player.radius - e.radius;
            if (gap < policy.danger_radius && gap < threat_gap) {
                threat = &e;
                threat_gap = gap;
            }
        } else if (e.radius < policy.size_margin * player.radius && d < prey_distance) {
            prey = &e;
            prey_distance = d;
        }
    }

    if (threat != nullptr) {
        const Vec2 away = (player.position - threat->position).normalized();
        // Coincident centres: any direction is as good as another.
        return away == Vec2{} ? Vec2{1.0, 0.0} : away;
    }
    if (prey != nullptr) return (prey->position - player.position).normalized();
    return {};
}

}  // namespace feesh::bot
