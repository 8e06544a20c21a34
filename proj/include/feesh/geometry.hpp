#pragma once

#include <cmath>

namespace feesh {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double length() const { return std::hypot(x, y); }

    /// Unit vector in the same direction; the zero vector maps to itself.
    Vec2 normalized() const {
        const double len = length();
        if (len == 0.0) return {};
        return {x / len, y / len};
    }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).length(); }

}  // namespace feesh
