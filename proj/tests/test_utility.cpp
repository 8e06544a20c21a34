#include <doctest.h>

#include <random>
#include <stdexcept>

#include "feesh/utility.hpp"

using namespace feesh;
using namespace feesh::goals;

TEST_SUITE("utility") {

TEST_CASE("util_fps branch values") {
    CHECK(util_fps(40.0) == 1.0);
    CHECK(util_fps(29.0) == 0.0);
    CHECK(util_fps(35.0) == doctest::Approx(0.5));
    CHECK(util_fps(60.0) == 1.0);
    CHECK(util_fps(30.0) == 0.0);
    CHECK(util_fps(0.0) == 0.0);
    CHECK_THROWS_AS(util_fps(-1.0), std::invalid_argument);
}

TEST_CASE("util_player_size branch values") {
    CHECK(util_player_size(400.0, 800.0) == 1.0);
    CHECK(util_player_size(800.0, 800.0) == 0.0);
    CHECK(util_player_size(600.0, 800.0) == doctest::Approx(0.5));
    CHECK(util_player_size(0.0, 800.0) == 1.0);
    CHECK(util_player_size(1200.0, 800.0) == 0.0);
    CHECK_THROWS_AS(util_player_size(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(util_player_size(10.0, -5.0), std::invalid_argument);
}

TEST_CASE("util_player_size is continuous at both branch boundaries") {
    const double w = 800.0;
    const double eps = 1e-9;
    CHECK(util_player_size(w / 2.0, w) == 1.0);
    CHECK(util_player_size(w / 2.0 + eps, w) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(util_player_size(w, w) == 0.0);
    CHECK(util_player_size(w - eps, w) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("util_fps is continuous at the upper boundary") {
    CHECK(util_fps(40.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(util_fps(30.0 + 1e-9) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("util_const_one") {
    for (int i = 0; i < 5; ++i) CHECK(util_const_one() == 1.0);
}

TEST_CASE("util_score and util_enemy_count") {
    CHECK(util_score(10, 10) == 1.0);
    CHECK(util_score(12, 10) == 1.0);
    CHECK(util_score(9, 10) == 0.0);
    CHECK(util_enemy_count(10, 20.0) == doctest::Approx(0.5));
    CHECK(util_enemy_count(40, 20.0) == 1.0);
    CHECK(util_enemy_count(0, 20.0) == 0.0);
    CHECK_THROWS(util_enemy_count(1, 0.0));
}

TEST_CASE("outputs stay on [0, 1] and are monotone over random inputs") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> fps_dist(0.0, 120.0), w_dist(1.0, 4000.0), frac(0.0, 2.5);
    for (int i = 0; i < 20000; ++i) {
        const double a = fps_dist(gen), b = fps_dist(gen);
        const double ua = util_fps(a), ub = util_fps(b);
        CHECK_UNARY(ua >= 0.0 && ua <= 1.0);
        if (a <= b) CHECK(ua <= ub);

        const double w = w_dist(gen);
        const double p = frac(gen) * w, q = frac(gen) * w;
        const double up = util_player_size(p, w), uq = util_player_size(q, w);
        CHECK_UNARY(up >= 0.0 && up <= 1.0);
        if (p <= q) CHECK(up >= uq);
    }
}

TEST_CASE("bindings evaluate against a snapshot") {
    MetricsSnapshot s;
    s.fps = 35.0;
    s.player_size = 600.0;
    s.canvas_width = 800.0;
    s.enemy_count = 5;
    CHECK(evaluate_binding({UtilityFn::Fps, {}}, s) == doctest::Approx(0.5));
    CHECK(evaluate_binding({UtilityFn::Fps, {{"floor", 20.0}, {"full", 30.0}}}, s) == 1.0);
    CHECK(evaluate_binding({UtilityFn::PlayerSize, {}}, s) == doctest::Approx(0.5));
    CHECK(evaluate_binding({UtilityFn::EnemyCount, {{"target", 10.0}}}, s) == doctest::Approx(0.5));
    CHECK(evaluate_binding({UtilityFn::ConstOne, {}}, s) == 1.0);
    CHECK(check_binding({UtilityFn::Fps, {{"bogus", 1.0}}}) != "");
    CHECK(check_binding({UtilityFn::Fps, {{"floor", 30.0}}}) == "");
    CHECK(utility_fn_from_string("util_score") == UtilityFn::Score);
    CHECK_THROWS(utility_fn_from_string("util_nope"));
}

}  // TEST_SUITE
