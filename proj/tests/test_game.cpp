#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "feesh/game.hpp"

using namespace feesh;
using namespace feesh::game;

namespace {

GameConfig quiet_config() {
    GameConfig c;
    c.target_enemy_count = 0;
    c.random_event_probability = 0.0;
    return c;
}

Blob blob_at(double x, double y, double r, Vec2 v = {}) {
    Blob b;
    b.position = {x, y};
    b.velocity = v;
    b.radius = r;
    return b;
}

std::vector<std::pair<std::size_t, std::size_t>> brute_force_pairs(const std::vector<Blob>& blobs) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        for (std::size_t j = i + 1; j < blobs.size(); ++j) {
            const double dx = blobs[i].position.x - blobs[j].position.x;
            const double dy = blobs[i].position.y - blobs[j].position.y;
            if (std::sqrt(dx * dx + dy * dy) < blobs[i].radius + blobs[j].radius) out.emplace_back(i, j);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("a larger player eats an overlapping smaller enemy") {
    auto cfg = quiet_config();
    cfg.target_enemy_count = 1;
    World w(cfg, 1);
    w.place_player(blob_at(100, 100, 20));
    w.set_enemies({blob_at(105, 100, 10)});
    const auto ev = w.step({0, 0});
    REQUIRE(ev.count(EventKind::Ate) == 1);
    CHECK(ev.events.front().value == 10.0);
    CHECK(w.player().radius == doctest::Approx(std::sqrt(500.0)));
    CHECK(w.player().radius == doctest::Approx(22.36).epsilon(1e-3));
    CHECK(w.score() == 10);
    CHECK(ev.contains(EventKind::Spawned));
    CHECK(w.enemies().size() == 1);
}

TEST_CASE("a larger enemy ends the game") {
    World w(quiet_config(), 1);
    w.place_player(blob_at(100, 100, 20));
    w.set_enemies({blob_at(130, 100, 50)});
    const auto ev = w.step({0, 0});
    CHECK(ev.contains(EventKind::GameOver));
    CHECK_FALSE(ev.contains(EventKind::Won));
    CHECK(w.status() == Status::GameOver);
    CHECK_THROWS_AS(w.step({0, 0}), NotRunning);
    CHECK_THROWS_AS(w.set_player_diameter(10), NotRunning);
}

TEST_CASE("without contacts only positions change") {
    auto cfg = quiet_config();
    cfg.target_enemy_count = 1;
    World w(cfg, 1);
    w.place_player(blob_at(100, 100, 10));
    w.set_enemies({blob_at(500, 400, 10, {1.5, -0.5})});
    const auto ev = w.step({1, 0});
    CHECK(ev.empty());
    CHECK(ev.encode() == "-");
    CHECK(w.player().position == Vec2{103, 100});
    CHECK(w.enemies()[0].position == Vec2{501.5, 399.5});
    CHECK(w.score() == 0);
}

TEST_CASE("player diameter reaching the width wins") {
    World w(quiet_config(), 1);
    w.place_player(blob_at(400, 300, 400));
    const auto ev = w.step({0, 0});
    CHECK(ev.contains(EventKind::Won));
    CHECK_FALSE(ev.contains(EventKind::GameOver));
    CHECK(w.status() == Status::Won);
}

TEST_CASE("oversized input is rejected and movement is clamped") {
    World w(quiet_config(), 1);
    CHECK_THROWS_AS(w.step({1, 1}), std::invalid_argument);
    w.place_player(blob_at(1, 1, 5));
    w.step({-1, 0});
    CHECK(w.player().position.x == 0.0);
}

TEST_CASE("same seed and inputs give identical trajectories") {
    World a(GameConfig{}, 42), b(GameConfig{}, 42), c(GameConfig{}, 43);
    for (int t = 0; t < 500 && a.running(); ++t) {
        const Vec2 in{std::cos(t * 0.1), std::sin(t * 0.1) * 0.5};
        CHECK(a.step(in) == b.step(in));
        if (c.running()) c.step(in);
    }
    CHECK(a.state_hash() == b.state_hash());
    CHECK(a.state_hash() != c.state_hash());
}

TEST_CASE("spawned enemies are deterministic per seed") {
    World a(GameConfig{}, 9), b(GameConfig{}, 9);
    for (int i = 0; i < 20; ++i) CHECK(a.spawn_enemy() == b.spawn_enemy());
}

TEST_CASE("spawn radii are uniform over the configured range") {
    World w(GameConfig{}, 2024);
    const auto& cfg = w.config();
    constexpr int bins = 10, draws = 10000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < draws; ++i) {
        const auto b = w.spawn_enemy();
        REQUIRE(b.radius >= cfg.enemy_radius_min);
        REQUIRE(b.radius <= cfg.enemy_radius_max);
        const double u = (b.radius - cfg.enemy_radius_min) / (cfg.enemy_radius_max - cfg.enemy_radius_min);
        ++counts[std::min(bins - 1, static_cast<int>(u * bins))];
        const bool on_edge = b.position.x == 0.0 || b.position.x == cfg.width || b.position.y == 0.0 ||
                             b.position.y == cfg.height;
        CHECK(on_edge);
        // Velocity points into the canvas.
        if (b.position.x == 0.0) CHECK(b.velocity.x > 0.0);
        if (b.position.x == cfg.width) CHECK(b.velocity.x < 0.0);
        if (b.position.y == 0.0) CHECK(b.velocity.y > 0.0);
        if (b.position.y == cfg.height) CHECK(b.velocity.y < 0.0);
    }
    double chi2 = 0.0;
    const double expected = static_cast<double>(draws) / bins;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 99.9th percentile of chi-square with 9 degrees of freedom.
    CHECK(chi2 < 27.877);
}

TEST_CASE("a collapsed radius range yields that radius") {
    GameConfig cfg;
    cfg.enemy_radius_min = cfg.enemy_radius_max = 10.0;
    World w(cfg, 5);
    for (int i = 0; i < 100; ++i) CHECK(w.spawn_enemy().radius == 10.0);
}

TEST_CASE("enemy count tracks the target and score never decreases") {
    World w(GameConfig{}, 77);
    std::int64_t score = 0;
    double radius = w.player().radius;
    for (int t = 0; t < 2000 && w.running(); ++t) {
        w.step(Vec2{std::sin(t * 0.05), std::cos(t * 0.03)} * 0.7);
        CHECK(w.score() >= score);
        CHECK(w.player().radius >= radius);
        score = w.score();
        radius = w.player().radius;
        if (w.running()) CHECK(w.enemies().size() == w.config().target_enemy_count);
    }
}

TEST_CASE("frame cost") {
    const FrameCostModel m;
    CHECK(fps_from_cost(frame_cost_ms(m, 1, 16, true)) == 60.0);
    for (std::uint64_t n = 1; n < 400; ++n) {
        CHECK(frame_cost_ms(m, n + 1, 16, true) > frame_cost_ms(m, n, 16, true));
        CHECK(frame_cost_ms(m, n, 17, true) > frame_cost_ms(m, n, 16, true));
        CHECK(frame_cost_ms(m, n, 16, false) <= frame_cost_ms(m, n, 16, true));
    }
    // Pair term alone: n(n-1)/2 versus 2n(2n-1)/2.
    auto pair_term = [&](std::uint64_t n) { return frame_cost_ms(m, n, 16, true) - frame_cost_ms(m, n, 16, false); };
    for (std::uint64_t n : {10u, 50u, 100u, 150u}) {
        const double expected = m.per_pair_ms * (2.0 * n) * (2.0 * n - 1.0) / 2.0;
        CHECK(pair_term(2 * n) == doctest::Approx(expected));
        const double ratio = pair_term(2 * n) / pair_term(n);
        CHECK(ratio > 4.0);
        CHECK(ratio == doctest::Approx(4.0).epsilon(4.0 / static_cast<double>(n)));
    }
}

TEST_CASE("defaults cross below 30 fps near 150 entities with collision") {
    const GameConfig cfg;
    std::uint64_t crossing = 0;
    for (std::uint64_t n = 1; n < 1000; ++n) {
        if (fps_from_cost(frame_cost_ms(cfg.cost, n, cfg.wobble_vertices, true)) < 30.0) {
            crossing = n;
            break;
        }
    }
    CHECK(crossing >= 140);
    CHECK(crossing <= 160);
}

TEST_CASE("grid broad phase matches the all-pairs scan") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Blob> blobs;
        const auto n = 2 + rng.below(120);
        for (std::uint64_t i = 0; i < n; ++i) {
            blobs.push_back(blob_at(rng.uniform(-50, 850), rng.uniform(-50, 650), rng.uniform(1, 45)));
        }
        CHECK(overlapping_pairs(blobs) == brute_force_pairs(blobs));
    }
}

TEST_CASE("colliding enemies swap velocities only when collision is on") {
    for (bool collide : {true, false}) {
        auto cfg = quiet_config();
        cfg.target_enemy_count = 2;
        cfg.enemy_enemy_collision = collide;
        World w(cfg, 1);
        w.place_player(blob_at(50, 50, 5));
        w.set_enemies({blob_at(400, 300, 10, {1, 0}), blob_at(415, 300, 10, {-1, 0})});
        w.step({0, 0});
        if (collide) {
            CHECK(w.enemies()[0].velocity == Vec2{-1, 0});
            CHECK(w.enemies()[1].velocity == Vec2{1, 0});
        } else {
            CHECK(w.enemies()[0].velocity == Vec2{1, 0});
        }
    }
}

TEST_CASE("random events raise the target") {
    auto cfg = quiet_config();
    cfg.random_event_probability = 1.0;
    cfg.random_event_increment = 3;
    World w(cfg, 1);
    w.place_player(blob_at(400, 300, 2));
    w.set_enemies({});
    const auto ev = w.step({0, 0});
    CHECK(ev.contains(EventKind::RandomEventFired));
    CHECK(w.random_event_last_step());
    CHECK(w.config().target_enemy_count == 3);
}

TEST_CASE("wobble outline") {
    Blob b = blob_at(100, 100, 20);
    b.wobble_seed = 99;
    const auto outline = wobble_outline(b, 10);
    CHECK(outline.size() == 16);
    for (const auto& p : outline) {
        const double r = distance(p, b.position);
        CHECK(r >= 20 * 0.88 - 1e-9);
        CHECK(r <= 20 * 1.12 + 1e-9);
    }
    CHECK(wobble_outline(b, 10) == outline);
    for (int i = 0; i < 1000; ++i) {
        const double v = value_noise(i * 0.37, i * 0.11, i * 0.05, 4);
        CHECK_UNARY(v >= 0.0 && v < 1.0);
    }
}

TEST_CASE("config validation") {
    GameConfig c;
    c.random_event_probability = 1.5;
    CHECK_THROWS_AS(World(c, 1), std::invalid_argument);
    c = {};
    c.enemy_radius_min = 10;
    c.enemy_radius_max = 5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

}  // TEST_SUITE
