#pragma once

#include <compare>
#include <optional>
#include <ostream>

#include "gathersim/errors.hpp"
#include "gathersim/rat.hpp"

namespace gathersim {

/// Exact rational point in the plane.
struct Vec2 {
    Rat x;
    Rat y;

    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend Vec2 operator*(const Rat& s, const Vec2& v) { return {s * v.x, s * v.y}; }
    friend Vec2 operator*(const Vec2& v, const Rat& s) { return {s * v.x, s * v.y}; }
    Vec2 operator-() const { return {-x, -y}; }

    friend bool operator==(const Vec2&, const Vec2&) = default;
    friend std::strong_ordering operator<=>(const Vec2& a, const Vec2& b) {
        if (auto c = a.x <=> b.x; c != 0) return c;
        return a.y <=> b.y;
    }
};

inline Rat dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rat cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rat norm2(const Vec2& v) { return dot(v, v); }
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) { return os << '(' << v.x << ", " << v.y << ')'; }

/// Orthogonal projection of p on the line through a and b (a != b).
inline Vec2 project_on_line(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 dir = b - a;
    const Rat len2 = norm2(dir);
    if (len2.is_zero()) throw Error(ErrorCode::DegenerateLine, "line through coincident points");
    return a + (dot(p - a, dir) / len2) * dir;
}

/// Geometry hooks the engine needs from a position type. Positions on the
/// line are plain Rats; planar positions are Vec2.
template <class Point>
struct PointOps;

template <>
struct PointOps<Rat> {
    static Rat dot(const Rat& a, const Rat& b) { return a * b; }
    static bool collinear(const Rat&, const Rat&) { return true; }
    static Rat distance(const Rat& a, const Rat& b) { return (a - b).abs(); }
    static Rat distance2(const Rat& a, const Rat& b) {
        const Rat d = a - b;
        return d * d;
    }
};

template <>
struct PointOps<Vec2> {
    static Rat dot(const Vec2& a, const Vec2& b) { return gathersim::dot(a, b); }
    static bool collinear(const Vec2& a, const Vec2& b) { return cross(a, b).is_zero(); }
    /// Exact Euclidean length; motion in the plane must have rational length.
    static Rat distance(const Vec2& a, const Vec2& b) {
        const Rat d2 = norm2(a - b);
        if (auto r = exact_sqrt(d2)) return *r;
        throw Error(ErrorCode::IrrationalValue, "segment length sqrt(" + d2.str() + ") is irrational");
    }
    static Rat distance2(const Vec2& a, const Vec2& b) { return norm2(a - b); }
};

}  // namespace gathersim
