#include <doctest.h>

#include <random>

#include "feesh/bot.hpp"

using namespace feesh;
using namespace feesh::game;

namespace {

Blob blob_at(double x, double y, double r) {
    Blob b;
    b.position = {x, y};
    b.radius = r;
    return b;
}

}  // namespace

TEST_SUITE("bot") {

TEST_CASE("seeks a single prey") {
    const bot::BotPolicy p;
    const auto player = blob_at(100, 100, 20);
    const std::vector<Blob> enemies{blob_at(300, 100, 5)};
    CHECK(bot::decide(p, player, enemies) == Vec2{1, 0});
}

TEST_CASE("flees a larger enemy in range") {
    const bot::BotPolicy p;
    const auto player = blob_at(100, 100, 20);
    const std::vector<Blob> enemies{blob_at(150, 100, 25)};
    CHECK(bot::decide(p, player, enemies) == Vec2{-1, 0});
}

TEST_CASE("idles with no enemies") {
    CHECK(bot::decide(bot::BotPolicy{}, blob_at(1, 1, 5), {}) == Vec2{0, 0});
}

TEST_CASE("ties go to the lowest index") {
    const bot::BotPolicy p;
    const auto player = blob_at(100, 100, 20);
    const std::vector<Blob> enemies{blob_at(100, 200, 5), blob_at(200, 100, 5)};
    CHECK(bot::decide(p, player, enemies) == Vec2{0, 1});
}

TEST_CASE("ignores larger enemies outside the danger radius") {
    const bot::BotPolicy p;
    const auto player = blob_at(100, 100, 20);
    const std::vector<Blob> enemies{blob_at(400, 100, 30), blob_at(100, 300, 3)};
    CHECK(bot::decide(p, player, enemies) == Vec2{0, 1});
}

TEST_CASE("output is bounded, deterministic, and flees away from threats") {
    const bot::BotPolicy p;
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> pos(0, 800), rad(2, 40);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto player = blob_at(pos(gen), pos(gen), rad(gen));
        std::vector<Blob> enemies;
        const int n = static_cast<int>(gen() % 12);
        for (int i = 0; i < n; ++i) enemies.push_back(blob_at(pos(gen), pos(gen), rad(gen)));
        const Vec2 v = bot::decide(p, player, enemies);
        CHECK(v.length() <= 1.0 + 1e-12);
        CHECK(bot::decide(p, player, enemies) == v);
        // Nearest threat by edge gap, if any.
        const Blob* threat = nullptr;
        double best = 0;
        for (const auto& e : enemies) {
            if (e.radius < player.radius) continue;
            const double gap = distance(player.position, e.position) - player.radius - e.radius;
            if (gap < p.danger_radius && (threat == nullptr || gap < best)) {
                threat = &e;
                best = gap;
            }
        }
        if (threat != nullptr && !(threat->position == player.position)) {
            CHECK(v.dot(threat->position - player.position) <= 0.0);
        }
    }
}

TEST_CASE("policy validation") {
    bot::BotPolicy p;
    p.size_margin = 0.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.danger_radius = -1;
    CHECK_THROWS(p.validate());
}

}  // TEST_SUITE
