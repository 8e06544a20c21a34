#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "feesh/geometry.hpp"
#include "feesh/rng.hpp"

namespace feesh::game {

/// A circular entity. The outline is a noise loop around `radius`.
struct Blob {
    Vec2 position;
    /// Canvas units per tick.
    Vec2 velocity;
    double radius{1.0};
    std::uint64_t wobble_seed{0};
    int wobble_vertices{16};

    double diameter() const { return 2.0 * radius; }
    bool operator==(const Blob&) const = default;
};

/// Synthetic per-frame cost, in milliseconds. Headless runs derive FPS from
/// this rather than from the wall clock.
struct FrameCostModel {
    double base_ms{4.0};
    double per_entity_ms{0.02};
    double per_vertex_ms{0.002};
    /// Charged per unordered entity pair when enemy-enemy collision is on.
    double per_pair_ms{0.0019};

    bool operator==(const FrameCostModel&) const = default;
};

struct GameConfig {
    double width{800.0};
    double height{600.0};
    std::uint64_t target_enemy_count{20};
    bool enemy_enemy_collision{true};
    double player_speed{3.0};
    double player_start_radius{16.0};
    double enemy_radius_min{4.0};
    double enemy_radius_max{30.0};
    double enemy_speed_min{0.5};
    double enemy_speed_max{2.0};
    double random_event_probability{0.02};
    std::uint64_t random_event_increment{5};
    /// r' = sqrt(r^2 + growth_factor * r_eaten^2)
    double growth_factor{1.0};
    int wobble_vertices{16};
    FrameCostModel cost;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
    bool operator==(const GameConfig&) const = default;
};

enum class Status { Running, GameOver, Won, Failed };
std::string_view to_string(Status status);

enum class EventKind { Ate, Spawned, RandomEventFired, GameOver, Won };

struct StepEvent {
    EventKind kind;
    /// Eaten radius for Ate, spawn count for Spawned, otherwise 0.
    double value{0.0};
    bool operator==(const StepEvent&) const = default;
};

struct StepEvents {
    std::vector<StepEvent> events;

    bool contains(EventKind kind) const;
    std::size_t count(EventKind kind) const;
    bool empty() const { return events.empty(); }
    /// Compact '|'-separated encoding used in trace files, "-" when empty.
    std::string encode() const;
    bool operator==(const StepEvents&) const = default;
};

class NotRunning : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Full game state for one session or replicate.
///
/// The world owns its generator; every random decision (spawns, random
/// events, which enemies an adaptation removes) is drawn from it, so a seed
/// and an input sequence determine the whole trajectory.
class World {
public:
    World(GameConfig config, std::uint64_t seed);

    /// Advances one tick. `input` is the steering direction, |input| <= 1.
    /// Throws NotRunning once the world is terminal and std::invalid_argument
    /// for an oversized input.
    StepEvents step(Vec2 input);

    /// Draws a new enemy on a random canvas edge heading inward. Consumes
    /// generator state but does not add the enemy to the world.
    Blob spawn_enemy();

    const GameConfig& config() const { return config_; }
    double width() const { return config_.width; }
    double height() const { return config_.height; }
    const Blob& player() const { return player_; }
    const std::vector<Blob>& enemies() const { return enemies_; }
    std::int64_t score() const { return score_; }
    std::uint64_t tick() const { return tick_; }
    Status status() const { return status_; }
    bool running() const { return status_ == Status::Running; }
    std::uint64_t seed() const { return seed_; }
    const Rng& rng() const { return rng_; }
    bool random_event_last_step() const { return random_event_last_step_; }

    // Adaptation knobs. These are the only mutations available to the
    // feedback loop; each throws NotRunning on a terminal world.
    void set_player_diameter(double diameter);
    /// Removes `count` enemies picked by the world generator and lowers the
    /// enemy target to what remains. Returns the removed enemies' former indices.
    std::vector<std::size_t> remove_random_enemies(std::size_t count);
    void set_enemy_enemy_collision(bool enabled);
    void set_target_enemy_count(std::uint64_t count);
    /// Terminal failure, e.g. an invariant goal that could not be recovered.
    void fail();

    // Scenario setup, used by tests and tools to stage specific situations.
    void place_player(const Blob& player);
    void set_enemies(std::vector<Blob> enemies);

    /// FNV-1a over the complete state, including the generator.
    std::uint64_t state_hash() const;

private:
    void require_running(const char* what) const;
    void move_enemies();
    void bounce_enemies();
    void resolve_player_contacts(StepEvents& events);

    GameConfig config_;
    std::uint64_t seed_;
    Rng rng_;
    Blob player_;
    std::vector<Blob> enemies_;
    std::int64_t score_{0};
    std::uint64_t tick_{0};
    Status status_{Status::Running};
    bool random_event_last_step_{false};
};

/// Cost for `entities` entities (player included) at `vertices` outline vertices each.
double frame_cost_ms(const FrameCostModel& model, std::uint64_t entities, int vertices, bool enemy_collision);
double frame_cost_ms(const World& world);
/// min(60, 1000 / cost).
double fps_from_cost(double cost_ms);
double modeled_fps(const World& world);

/// Unordered enemy pairs (i < j) whose circles overlap, in lexicographic
/// order. Uses a uniform grid; the result matches the all-pairs scan.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(const std::vector<Blob>& blobs);

/// Closed outline of a blob at a given tick: `wobble_vertices` points whose
/// distance from the centre follows a periodic noise loop around the radius.
std::vector<Vec2> wobble_outline(const Blob& blob, std::uint64_t tick, double amplitude = 0.12);

/// Smooth 3-D value noise on [0, 1).
double value_noise(double x, double y, double z, std::uint64_t seed);

}  // namespace feesh::game
