#include "feesh/game.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace feesh::game {

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Running: return "Running";
        case Status::GameOver: return "GameOver";
        case Status::Won: return "Won";
        case Status::Failed: return "Failed";
    }
    return "?";
}

void GameConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("game config: " + what); };
    if (!(width > 0.0) || !(height > 0.0)) fail("canvas dimensions must be positive");
    if (!(player_speed >= 0.0)) fail("player_speed must be non-negative");
    if (!(player_start_radius > 0.0)) fail("player_start_radius must be positive");
    if (!(enemy_radius_min > 0.0) || !(enemy_radius_max >= enemy_radius_min)) fail("enemy radius range must satisfy 0 < min <= max");
    if (!(enemy_speed_min >= 0.0) || !(enemy_speed_max >= enemy_speed_min)) fail("enemy speed range must satisfy 0 <= min <= max");
    if (!(random_event_probability >= 0.0 && random_event_probability <= 1.0)) fail("random_event_probability must lie on [0, 1]");
    if (!(growth_factor >= 0.0)) fail("growth_factor must be non-negative");
    if (wobble_vertices < 3) fail("wobble_vertices must be at least 3");
    if (!(cost.base_ms > 0.0) || !(cost.per_entity_ms > 0.0) || !(cost.per_vertex_ms > 0.0) || !(cost.per_pair_ms >= 0.0)) {
        fail("frame cost coefficients must be positive");
    }
}

bool StepEvents::contains(EventKind kind) const { return count(kind) > 0; }

std::size_t StepEvents::count(EventKind kind) const {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const auto& e) { return e.kind == kind; }));
}

std::string StepEvents::encode() const {
    if (events.empty()) return "-";
    std::string out;
    char buf[64];
    for (const auto& e : events) {
        if (!out.empty()) out += '|';
        switch (e.kind) {
            case EventKind::Ate:
                std::snprintf(buf, sizeof buf, "ate:%.17g", e.value);
                out += buf;
                break;
            case EventKind::Spawned:
                std::snprintf(buf, sizeof buf, "spawned:%.0f", e.value);
                out += buf;
                break;
            case EventKind::RandomEventFired: out += "random"; break;
            case EventKind::GameOver: out += "gameover"; break;
            case EventKind::Won: out += "won"; break;
        }
    }
    return out;
}

World::World(GameConfig config, std::uint64_t seed) : config_(std::move(config)), seed_(seed), rng_(seed) {
    config_.validate();
    player_.position = {config_.width / 2.0, config_.height / 2.0};
    player_.radius = config_.player_start_radius;
    player_.wobble_seed = rng_.next_u64();
    player_.wobble_vertices = config_.wobble_vertices;
    enemies_.reserve(config_.target_enemy_count);
    while (enemies_.size() < config_.target_enemy_count) enemies_.push_back(spawn_enemy());
}

void World::require_running(const char* what) const {
    if (status_ != Status::Running) {
        throw NotRunning(std::string(what) + ": world is " + std::string(to_string(status_)));
    }
}

Blob World::spawn_enemy() {
    Blob b;
    b.radius = rng_.uniform(config_.enemy_radius_min, config_.enemy_radius_max);
    const auto edge = rng_.below(4);
    const double along = rng_.uniform();
    const double speed = rng_.uniform(config_.enemy_speed_min, config_.enemy_speed_max);
    // Heading within +-60 degrees of the inward normal.
    const double spread = rng_.uniform(-std::numbers::pi / 3.0, std::numbers::pi / 3.0);
    double normal = 0.0;
    switch (edge) {
        case 0:  // left
            b.position = {0.0, along * config_.height};
            normal = 0.0;
            break;
        case 1:  // right
            b.position = {config_.width, along * config_.height};
            normal = std::numbers::pi;
            break;
        case 2:  // top
            b.position = {along * config_.width, 0.0};
            normal = std::numbers::pi / 2.0;
            break;
        default:  // bottom
            b.position = {along * config_.width, config_.height};
            normal = -std::numbers::pi / 2.0;
            break;
    }
    const double heading = normal + spread;
    b.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
    b.wobble_seed = rng_.next_u64();
    b.wobble_vertices = config_.wobble_vertices;
    return b;
}

void World::move_enemies() {
    for (auto& e : enemies_) {
        e.position += e.velocity;
        if (e.position.x < 0.0) {
            e.position.x = -e.position.x;
            e.velocity.x = std::abs(e.velocity.x);
        } else if (e.position.x > config_.width) {
            e.position.x = 2.0 * config_.width - e.position.x;
            e.velocity.x = -std::abs(e.velocity.x);
        }
        if (e.position.y < 0.0) {
            e.position.y = -e.position.y;
            e.velocity.y = std::abs(e.velocity.y);
        } else if (e.position.y > config_.height) {
            e.position.y = 2.0 * config_.height - e.position.y;
            e.velocity.y = -std::abs(e.velocity.y);
        }
        // A single reflection cannot overshoot unless speed exceeds the canvas.
        e.position.x = std::clamp(e.position.x, 0.0, config_.width);
        e.position.y = std::clamp(e.position.y, 0.0, config_.height);
    }
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(const std::vector<Blob>& blobs) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (blobs.size() < 2) return pairs;

    double max_radius = 0.0;
    for (const auto& b : blobs) max_radius = std::max(max_radius, b.radius);
    const double cell = std::max(2.0 * max_radius, 1e-9);

    auto key = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    grid.reserve(blobs.size());
    std::vector<std::pair<std::int64_t, std::int64_t>> cells(blobs.size());
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        const auto cx = static_cast<std::int64_t>(std::floor(blobs[i].position.x / cell));
        const auto cy = static_cast<std::int64_t>(std::floor(blobs[i].position.y / cell));
        cells[i] = {cx, cy};
        grid[key(cx, cy)].push_back(i);
    }

    for (std::size_t i = 0; i < blobs.size(); ++i) {
        const auto [cx, cy] = cells[i];
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(key(cx + dx, cy + dy));
                if (it == grid.end()) continue;
                for (std::size_t j : it->second) {
                    if (j <= i) continue;
                    if (distance(blobs[i].position, blobs[j].position) < blobs[i].radius + blobs[j].radius) {
                        pairs.emplace_back(i, j);
                    }
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

void World::bounce_enemies() {
    // Equal-mass elastic collision: approaching overlapping enemies swap
    // velocities. Pairs are handled in (i, j) order, as an all-pairs scan would.
    for (const auto& [i, j] : overlapping_pairs(enemies_)) {
        auto& a = enemies_[i];
        auto& b = enemies_[j];
        const Vec2 relative_velocity = a.velocity - b.velocity;
        const Vec2 offset = b.position - a.position;
        if (relative_velocity.dot(offset) > 0.0) std::swap(a.velocity, b.velocity);
    }
}

void World::resolve_player_contacts(StepEvents& events) {
    std::vector<bool> eaten(enemies_.size(), false);
    bool any_eaten = false;
    for (std::size_t i = 0; i < enemies_.size(); ++i) {
        const auto& e = enemies_[i];
        if (!(distance(player_.position, e.position) < player_.radius + e.radius)) continue;
        if (player_.radius > e.radius) {
            eaten[i] = true;
            any_eaten = true;
            player_.radius = std::sqrt(player_.radius * player_.radius + config_.growth_factor * e.radius * e.radius);
            score_ += static_cast<std::int64_t>(std::llround(e.radius));
            events.events.push_back({EventKind::Ate, e.radius});
        } else {
            status_ = Status::GameOver;
            events.events.push_back({EventKind::GameOver, 0.0});
            break;
        }
    }
    if (any_eaten) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < enemies_.size(); ++i) {
            if (!eaten[i]) enemies_[out++] = enemies_[i];
        }
        enemies_.resize(out);
    }
}

StepEvents World::step(Vec2 input) {
    require_running("step");
    if (!(input.length() <= 1.0 + 1e-9)) throw std::invalid_argument("step: |input| must not exceed 1");

    StepEvents events;
    ++tick_;
    random_event_last_step_ = false;

    player_.position += input * config_.player_speed;
    player_.position.x = std::clamp(player_.position.x, 0.0, config_.width);
    player_.position.y = std::clamp(player_.position.y, 0.0, config_.height);

    move_enemies();
    if (config_.enemy_enemy_collision) bounce_enemies();
    resolve_player_contacts(events);

    if (status_ == Status::Running && player_.diameter() >= config_.width) {
        status_ = Status::Won;
        events.events.push_back({EventKind::Won, 0.0});
    }
    if (status_ != Status::Running) return events;

    if (rng_.bernoulli(config_.random_event_probability)) {
        config_.target_enemy_count += config_.random_event_increment;
        random_event_last_step_ = true;
        events.events.push_back({EventKind::RandomEventFired, 0.0});
    }

    std::size_t spawned = 0;
    while (enemies_.size() < config_.target_enemy_count) {
        enemies_.push_back(spawn_enemy());
        ++spawned;
    }
    if (spawned > 0) events.events.push_back({EventKind::Spawned, static_cast<double>(spawned)});
    return events;
}

void World::set_player_diameter(double diameter) {
    require_running("set_player_diameter");
    if (!(diameter > 0.0)) throw std::invalid_argument("player diameter must be positive");
    player_.radius = diameter / 2.0;
}

std::vector<std::size_t> World::remove_random_enemies(std::size_t count) {
    require_running("remove_random_enemies");
    count = std::min(count, enemies_.size());
    // Partial Fisher-Yates over indices.
    std::vector<std::size_t> idx(enemies_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_.below(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<std::size_t> removed(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(removed.begin(), removed.end());

    std::vector<bool> drop(enemies_.size(), false);
    for (auto i : removed) drop[i] = true;
    std::size_t out = 0;
    for (std::size_t i = 0; i < enemies_.size(); ++i) {
        if (!drop[i]) enemies_[out++] = enemies_[i];
    }
    enemies_.resize(out);
    config_.target_enemy_count = enemies_.size();
    return removed;
}

void World::set_enemy_enemy_collision(bool enabled) {
    require_running("set_enemy_enemy_collision");
    config_.enemy_enemy_collision = enabled;
}

void World::set_target_enemy_count(std::uint64_t count) {
    require_running("set_target_enemy_count");
    config_.target_enemy_count = count;
    // Lowering the target drops the most recently spawned enemies.
    if (enemies_.size() > count) enemies_.resize(count);
}

void World::fail() {
    require_running("fail");
    status_ = Status::Failed;
}

void World::place_player(const Blob& player) {
    if (!(player.radius > 0.0)) throw std::invalid_argument("player radius must be positive");
    player_ = player;
}

void World::set_enemies(std::vector<Blob> enemies) {
    for (const auto& e : enemies) {
        if (!(e.radius > 0.0)) throw std::invalid_argument("enemy radius must be positive");
    }
    enemies_ = std::move(enemies);
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void blob(const Blob& b) {
        f64(b.position.x);
        f64(b.position.y);
        f64(b.velocity.x);
        f64(b.velocity.y);
        f64(b.radius);
        u64(b.wobble_seed);
        u64(static_cast<std::uint64_t>(b.wobble_vertices));
    }
};

}  // namespace

std::uint64_t World::state_hash() const {
    Fnv1a f;
    f.u64(tick_);
    f.u64(static_cast<std::uint64_t>(status_));
    f.u64(static_cast<std::uint64_t>(score_));
    f.u64(config_.target_enemy_count);
    f.u64(config_.enemy_enemy_collision ? 1 : 0);
    f.blob(player_);
    f.u64(enemies_.size());
    for (const auto& e : enemies_) f.blob(e);
    const auto rng_state = rng_.state();
    f.bytes(rng_state.data(), rng_state.size());
    return f.h;
}

double frame_cost_ms(const FrameCostModel& m, std::uint64_t entities, int vertices, bool enemy_collision) {
    const auto n = static_cast<double>(entities);
    double cost = m.base_ms + m.per_entity_ms * n + m.per_vertex_ms * vertices * n;
    if (enemy_collision) cost += m.per_pair_ms * n * (n - 1.0) / 2.0;
    return cost;
}

double frame_cost_ms(const World& world) {
    return frame_cost_ms(world.config().cost, world.enemies().size() + 1, world.config().wobble_vertices,
                         world.config().enemy_enemy_collision);
}

double fps_from_cost(double cost_ms) { return std::min(60.0, 1000.0 / cost_ms); }

double modeled_fps(const World& world) { return fps_from_cost(frame_cost_ms(world)); }

namespace {

double lattice(std::int64_t x, std::int64_t y, std::int64_t z, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
    for (auto v : {x, y, z}) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
    }
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

double value_noise(double x, double y, double z, std::uint64_t seed) {
    const double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
    const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy), iz = static_cast<std::int64_t>(fz);
    const double tx = smooth(x - fx), ty = smooth(y - fy), tz = smooth(z - fz);
    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    double layer[2];
    for (int dz = 0; dz < 2; ++dz) {
        const double c00 = lattice(ix, iy, iz + dz, seed), c10 = lattice(ix + 1, iy, iz + dz, seed);
        const double c01 = lattice(ix, iy + 1, iz + dz, seed), c11 = lattice(ix + 1, iy + 1, iz + dz, seed);
        layer[dz] = lerp(lerp(c00, c10, tx), lerp(c01, c11, tx), ty);
    }
    return lerp(layer[0], layer[1], tz);
}

std::vector<Vec2> wobble_outline(const Blob& blob, std::uint64_t tick, double amplitude) {
    std::vector<Vec2> outline;
    outline.reserve(static_cast<std::size_t>(blob.wobble_vertices));
    const double time = static_cast<double>(tick) * 0.02;
    for (int k = 0; k < blob.wobble_vertices; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / blob.wobble_vertices;
        // Sampling on a circle in noise space makes the outline periodic in theta.
        const double n = value_noise(1.5 + std::cos(theta), 1.5 + std::sin(theta), time, blob.wobble_seed);
        const double r = blob.radius * (1.0 + amplitude * (2.0 * n - 1.0));
        outline.push_back({blob.position.x + r * std::cos(theta), blob.position.y + r * std::sin(theta)});
    }
    return outline;
}

}  // namespace feesh::game
