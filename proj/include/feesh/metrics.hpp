#pragma once

#include <cstdint>

namespace feesh {

/// One tick of monitored values; the input to goal evaluation and analysis.
struct MetricsSnapshot {
    std::uint64_t tick{0};
    double fps{60.0};
    /// util_player_size of the current player diameter.
    double playability{1.0};
    std::int64_t score{0};
    /// Score at the start of the monitoring window (for the score-growth goal).
    std::int64_t window_start_score{0};
    std::uint64_t enemy_count{0};
    bool collision_enabled{true};
    /// Ticks elapsed since the world was created.
    std::uint64_t execution_time{0};
    bool random_event_fired{false};
    /// Player diameter in canvas units.
    double player_size{0.0};
    double canvas_width{800.0};

    bool operator==(const MetricsSnapshot&) const = default;
};

}  // namespace feesh
