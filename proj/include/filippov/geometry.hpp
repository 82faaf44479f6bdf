#pragma once

#include <cmath>
#include <limits>

namespace filippov {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Row-major 2x2 matrix [[xx, xy], [yx, yy]].
struct Mat2 {
    double xx = 0.0, xy = 0.0;
    double yx = 0.0, yy = 0.0;

    double det() const { return xx * yy - xy * yx; }
    double trace() const { return xx + yy; }
    Mat2 transpose() const { return {xx, yx, xy, yy}; }
};

inline Vec2 operator*(const Mat2& m, Vec2 v) { return {m.xx * v.x + m.xy * v.y, m.yx * v.x + m.yy * v.y}; }
inline Mat2 operator*(double s, const Mat2& m) { return {s * m.xx, s * m.xy, s * m.yx, s * m.yy}; }
inline Mat2 operator+(const Mat2& a, const Mat2& b) { return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy}; }

/// Axis-aligned working window.
struct Rect {
    double xmin = -std::numeric_limits<double>::infinity();
    double xmax = std::numeric_limits<double>::infinity();
    double ymin = -std::numeric_limits<double>::infinity();
    double ymax = std::numeric_limits<double>::infinity();

    bool contains(Vec2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
    /// Signed distance to the nearest edge, negative outside.
    double margin(Vec2 p) const {
        return std::fmin(std::fmin(p.x - xmin, xmax - p.x), std::fmin(p.y - ymin, ymax - p.y));
    }
};

}  // namespace filippov
