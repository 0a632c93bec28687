#pragma once

// Integer points, sorted point sets, and exact line arithmetic on the lattice.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <vector>

#include "vcdisj/errors.hpp"

namespace vcdisj {

/// Lattice point. Points on the line use y = 0.
struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Point& p) { return os << '(' << p.x << ',' << p.y << ')'; }
};

/// Sorted, duplicate-free point sequence.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }
  PointSet(std::initializer_list<Point> pts) : PointSet(std::vector<Point>(pts)) {}

  static PointSet on_line(std::int64_t lo, std::int64_t hi) {
    std::vector<Point> pts;
    for (std::int64_t x = lo; x <= hi; ++x) pts.push_back({x, 0});
    return PointSet(std::move(pts));
  }

  std::size_t size() const noexcept { return pts_.size(); }
  bool empty() const noexcept { return pts_.empty(); }
  auto begin() const noexcept { return pts_.begin(); }
  auto end() const noexcept { return pts_.end(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<Point>& points() const noexcept { return pts_; }

  bool contains(const Point& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

  bool includes(const PointSet& other) const {
    return std::includes(pts_.begin(), pts_.end(), other.pts_.begin(), other.pts_.end());
  }

  friend PointSet set_union(const PointSet& a, const PointSet& b) {
    std::vector<Point> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  friend PointSet set_intersection(const PointSet& a, const PointSet& b) {
    std::vector<Point> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  static PointSet from_sorted(std::vector<Point> pts) {
    PointSet s;
    s.pts_ = std::move(pts);
    return s;
  }

  std::vector<Point> pts_;
};

/// Exact rational number with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    detail::require(d != 0, "Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
  }

  bool is_integer() const noexcept { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num;
    if (r.den != 1) os << '/' << r.den;
    return os;
  }
};

struct RationalPoint {
  Rational x;
  Rational y;
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
  friend std::ostream& operator<<(std::ostream& os, const RationalPoint& p) {
    return os << '(' << p.x << ',' << p.y << ')';
  }
};

/// Line a*x + b*y = c in canonical form (gcd(a,b,c) = 1, first nonzero of (a,b) positive).
struct Line {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  static Line through(Point p, Point q) {
    detail::require(p != q, "Line::through: points coincide");
    std::int64_t a = q.y - p.y;
    std::int64_t b = p.x - q.x;
    std::int64_t c = a * p.x + b * p.y;
    std::int64_t g = std::gcd(std::gcd(a < 0 ? -a : a, b < 0 ? -b : b), c < 0 ? -c : c);
    a /= g;
    b /= g;
    c /= g;
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
      c = -c;
    }
    return {a, b, c};
  }

  bool contains(Point p) const noexcept { return a * p.x + b * p.y == c; }
  bool vertical() const noexcept { return b == 0; }
  /// Slope -a/b >= 0, or vertical. Canonical form has a >= 0, so b <= 0 or a == 0.
  bool non_negative_slope_or_vertical() const noexcept { return b <= 0 || a == 0; }

  friend auto operator<=>(const Line&, const Line&) = default;
};

enum class LineMeet { none, point, same_line };

struct LineIntersection {
  LineMeet kind = LineMeet::none;
  std::optional<RationalPoint> point;
};

/// Cramer's rule over the integers.
inline LineIntersection intersect_lines(const Line& l1, const Line& l2) {
  std::int64_t det = l1.a * l2.b - l2.a * l1.b;
  if (det == 0) {
    if (l1 == l2) return {LineMeet::same_line, std::nullopt};
    return {LineMeet::none, std::nullopt};
  }
  std::int64_t xn = l1.c * l2.b - l2.c * l1.b;
  std::int64_t yn = l1.a * l2.c - l2.a * l1.c;
  return {LineMeet::point, RationalPoint{Rational::make(xn, det), Rational::make(yn, det)}};
}

/// Closed axis-aligned m x m square of lattice points anchored at `origin`.
struct GridBox {
  Point origin;
  std::int64_t m = 0;

  bool contains(Point p) const noexcept {
    return p.x >= origin.x && p.x <= origin.x + m - 1 && p.y >= origin.y && p.y <= origin.y + m - 1;
  }
  bool contains(const RationalPoint& p) const noexcept {
    auto in = [](const Rational& v, std::int64_t lo, std::int64_t hi) {
      return Rational{lo, 1} <= v && v <= Rational{hi, 1};
    };
    return in(p.x, origin.x, origin.x + m - 1) && in(p.y, origin.y, origin.y + m - 1);
  }
};

}  // namespace vcdisj
