#pragma once

// The two hard instances: anchored intervals on the line and lines through stacked grids.
//
// Interval instance: d blocks J_i = {p_i, ..., p_i + m + 1}, m = n/d - 2 a power of two.
// Grid instance: d grids of m x m lattice points, m = sqrt(n/d), placed so that no two
// non-negative-slope lines through different grids meet inside the ground set.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vcdisj/errors.hpp"
#include "vcdisj/geometry.hpp"

namespace vcdisj {

enum class Geometry { interval, grid };

inline const char* to_string(Geometry g) { return g == Geometry::interval ? "interval" : "grid"; }

/// Identity of an instance; members remember which instance they were generated over.
struct InstanceKey {
  Geometry geometry = Geometry::interval;
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t m = 0;
  std::vector<Point> anchors;

  friend bool operator==(const InstanceKey&, const InstanceKey&) = default;
};

enum class FamilyKind {
  left_anchored,   // R_0: every block interval starts at its block's left end
  right_anchored,  // R_{m+1}: every block interval ends at its block's right end
  anchored,        // R: each block independently left- or right-anchored
  slope_lines,     // T_1: per grid, the line through the anchor with slope (a-1)/a
  vertical_lines,  // T_2: per grid, the column x = p_i + b
};

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::left_anchored: return "R0";
    case FamilyKind::right_anchored: return "Rm1";
    case FamilyKind::anchored: return "R";
    case FamilyKind::slope_lines: return "T1";
    case FamilyKind::vertical_lines: return "T2";
  }
  return "?";
}

enum class Side { left, right };

/// A set of the family together with the per-block generator that produced it.
///
/// Interval members: `sides[i]` and `params[i]` = number of points of block i's interval.
/// T_1 members: `params[i]` = a_i (slope (a_i - 1)/a_i). T_2 members: `params[i]` = column offset b_i.
struct FamilyMember {
  FamilyKind family = FamilyKind::left_anchored;
  std::vector<Side> sides;
  std::vector<std::int64_t> params;
  PointSet points;
  std::shared_ptr<const InstanceKey> instance;

  bool same_instance(const FamilyMember& other) const {
    return instance && other.instance && (instance == other.instance || *instance == *other.instance);
  }
};

using AnchoredIntervalSet = FamilyMember;
using LineFamilySet = FamilyMember;

namespace detail {

inline bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

inline std::int64_t exact_sqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v ? r : -1;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::int64_t exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

}  // namespace detail

inline constexpr std::uint64_t default_enumeration_cap = std::uint64_t{1} << 20;

// ---------------------------------------------------------------------------------------------
// Interval instance

class IntervalInstance {
 public:
  IntervalInstance(std::int64_t m, std::vector<std::int64_t> anchors) : m_(m), anchors_(std::move(anchors)) {
    detail::require(m_ >= 2 && detail::is_power_of_two(m_), "interval instance: m must be a power of two >= 2");
    detail::require(!anchors_.empty(), "interval instance: need at least one block");
    for (std::size_t i = 1; i < anchors_.size(); ++i)
      detail::require(anchors_[i] > anchors_[i - 1] + m_ + 1, "interval instance: blocks must be disjoint and ordered");
    auto key = std::make_shared<InstanceKey>();
    key->geometry = Geometry::interval;
    key->d = d();
    key->m = m_;
    key->n = d() * (m_ + 2);
    for (auto p : anchors_) key->anchors.push_back({p, 0});
    key_ = std::move(key);
  }

  std::int64_t n() const noexcept { return key_->n; }
  std::int64_t d() const noexcept { return static_cast<std::int64_t>(anchors_.size()); }
  std::int64_t m() const noexcept { return m_; }
  const std::vector<std::int64_t>& anchors() const noexcept { return anchors_; }
  std::shared_ptr<const InstanceKey> key() const noexcept { return key_; }

  std::int64_t block_lo(std::size_t i) const { return anchors_.at(i); }
  std::int64_t block_hi(std::size_t i) const { return anchors_.at(i) + m_ + 1; }

  /// J_{p_i}.
  PointSet block(std::size_t i) const { return PointSet::on_line(block_lo(i), block_hi(i)); }

  PointSet ground() const {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < anchors_.size(); ++i)
      for (auto x = block_lo(i); x <= block_hi(i); ++x) pts.push_back({x, 0});
    return PointSet(std::move(pts));
  }

 private:
  std::int64_t m_;
  std::vector<std::int64_t> anchors_;
  std::shared_ptr<const InstanceKey> key_;
};

/// Anchors p_i = (i-1)(m+3): consecutive blocks separated by a one-point gap.
inline IntervalInstance build_interval_instance(std::int64_t n, std::int64_t d) {
  detail::require(n >= 1 && d >= 1 && n % d == 0, "build_interval_instance: d must divide n");
  const std::int64_t m = n / d - 2;
  detail::require(m >= 2 && detail::is_power_of_two(m), "build_interval_instance: n/d - 2 must be a power of two >= 2");
  std::vector<std::int64_t> anchors;
  for (std::int64_t i = 0; i < d; ++i) anchors.push_back(i * (m + 3));
  return IntervalInstance(m, std::move(anchors));
}

/// Closed interval [lo, hi] that block i of an interval member occupies.
inline std::pair<std::int64_t, std::int64_t> block_interval(const IntervalInstance& inst, const FamilyMember& mem,
                                                            std::size_t i) {
  const auto count = mem.params.at(i);
  if (mem.sides.at(i) == Side::left) return {inst.block_lo(i), inst.block_lo(i) + count - 1};
  return {inst.block_hi(i) - count + 1, inst.block_hi(i)};
}

/// Member with explicit per-block sides and point counts (each count in [1, m+2]).
inline FamilyMember anchored_member(const IntervalInstance& inst, std::vector<Side> sides,
                                    std::vector<std::int64_t> counts) {
  const auto d = static_cast<std::size_t>(inst.d());
  detail::require(sides.size() == d && counts.size() == d, "anchored_member: need one generator per block");
  FamilyMember mem;
  bool all_left = true;
  bool all_right = true;
  for (auto s : sides) {
    all_left = all_left && s == Side::left;
    all_right = all_right && s == Side::right;
  }
  mem.family = all_left ? FamilyKind::left_anchored : all_right ? FamilyKind::right_anchored : FamilyKind::anchored;
  mem.sides = std::move(sides);
  mem.params = std::move(counts);
  mem.instance = inst.key();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < d; ++i) {
    const auto c = mem.params[i];
    detail::require(c >= 1 && c <= inst.m() + 2,
                    "anchored_member: block " + std::to_string(i) + " interval length out of range");
    auto [lo, hi] = block_interval(inst, mem, i);
    for (auto x = lo; x <= hi; ++x) pts.push_back({x, 0});
  }
  mem.points = PointSet(std::move(pts));
  return mem;
}

/// R_0 member with block intervals [p_i, p_i + m - a_i], a_i in [0, m-1].
inline AnchoredIntervalSet generate_left(const IntervalInstance& inst, const std::vector<std::int64_t>& a) {
  detail::require(a.size() == static_cast<std::size_t>(inst.d()), "generate_left: need d parameters");
  std::vector<std::int64_t> counts;
  for (auto v : a) {
    detail::require(v >= 0 && v <= inst.m() - 1, "generate_left: parameter out of [0, m-1]");
    counts.push_back(inst.m() - v + 1);
  }
  auto mem = anchored_member(inst, std::vector<Side>(a.size(), Side::left), std::move(counts));
  mem.family = FamilyKind::left_anchored;
  return mem;
}

/// R_{m+1} member with block intervals [p_i + m + 1 - b_i, p_i + m + 1], b_i in [0, m-1].
inline AnchoredIntervalSet generate_right(const IntervalInstance& inst, const std::vector<std::int64_t>& b) {
  detail::require(b.size() == static_cast<std::size_t>(inst.d()), "generate_right: need d parameters");
  std::vector<std::int64_t> counts;
  for (auto v : b) {
    detail::require(v >= 0 && v <= inst.m() - 1, "generate_right: parameter out of [0, m-1]");
    counts.push_back(v + 1);
  }
  auto mem = anchored_member(inst, std::vector<Side>(b.size(), Side::right), std::move(counts));
  mem.family = FamilyKind::right_anchored;
  return mem;
}

// ---------------------------------------------------------------------------------------------
// Grid instance

class GridInstance {
 public:
  GridInstance(std::int64_t m, std::vector<Point> anchors) : m_(m), anchors_(std::move(anchors)) {
    detail::require(m_ >= 2, "grid instance: m must be >= 2");
    detail::require(!anchors_.empty(), "grid instance: need at least one grid");
    for (std::size_t i = 0; i < anchors_.size(); ++i)
      for (std::size_t j = i + 1; j < anchors_.size(); ++j) {
        const bool x_apart = std::llabs(anchors_[i].x - anchors_[j].x) >= m_;
        const bool y_apart = std::llabs(anchors_[i].y - anchors_[j].y) >= m_;
        detail::require(x_apart || y_apart, "grid instance: grids overlap");
      }
    auto key = std::make_shared<InstanceKey>();
    key->geometry = Geometry::grid;
    key->d = d();
    key->m = m_;
    key->n = d() * m_ * m_;
    key->anchors = anchors_;
    key_ = std::move(key);
  }

  std::int64_t n() const noexcept { return key_->n; }
  std::int64_t d() const noexcept { return static_cast<std::int64_t>(anchors_.size()); }
  std::int64_t m() const noexcept { return m_; }
  const std::vector<Point>& anchors() const noexcept { return anchors_; }
  std::shared_ptr<const InstanceKey> key() const noexcept { return key_; }

  GridBox box(std::size_t i) const { return GridBox{anchors_.at(i), m_}; }

  /// G_{(p_i, q_i)}.
  PointSet grid(std::size_t i) const {
    std::vector<Point> pts;
    const auto o = anchors_.at(i);
    for (std::int64_t x = 0; x < m_; ++x)
      for (std::int64_t y = 0; y < m_; ++y) pts.push_back({o.x + x, o.y + y});
    return PointSet(std::move(pts));
  }

  PointSet ground() const {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < anchors_.size(); ++i)
      for (const auto& p : grid(i)) pts.push_back(p);
    return PointSet(std::move(pts));
  }

 private:
  std::int64_t m_;
  std::vector<Point> anchors_;
  std::shared_ptr<const InstanceKey> key_;
};

/// Anchors p_i = (i-1)*2m, q_i = (i-1)*(m + (m-1)(2md + m)).
///
/// Horizontal gap m keeps the grids' columns apart; the vertical step exceeds the largest rise
/// (slope <= m-1) of any grid line across the whole x-extent of the ground set.
inline GridInstance build_grid_instance(std::int64_t n, std::int64_t d) {
  detail::require(n >= 1 && d >= 1 && n % d == 0, "build_grid_instance: d must divide n");
  const std::int64_t m = detail::exact_sqrt(n / d);
  detail::require(m >= 2, "build_grid_instance: n/d must be a perfect square with root >= 2");
  const std::int64_t step_y = m + (m - 1) * (2 * m * d + m);
  std::vector<Point> anchors;
  for (std::int64_t i = 0; i < d; ++i) anchors.push_back({i * 2 * m, i * step_y});
  return GridInstance(m, std::move(anchors));
}

/// T_1 member: in grid i the lattice points of y - q_i = ((a_i - 1)/a_i)(x - p_i), a_i in [1, m-1].
inline LineFamilySet generate_T1(const GridInstance& inst, const std::vector<std::int64_t>& a) {
  detail::require(a.size() == static_cast<std::size_t>(inst.d()), "generate_T1: need d parameters");
  const auto m = inst.m();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ai = a[i];
    detail::require(ai >= 1 && ai <= m - 1, "generate_T1: parameter out of [1, m-1]");
    const auto o = inst.anchors()[i];
    for (std::int64_t x = 0; x < m; ++x) {
      if (((ai - 1) * x) % ai != 0) continue;
      const auto y = (ai - 1) * x / ai;
      if (y <= m - 1) pts.push_back({o.x + x, o.y + y});
    }
  }
  FamilyMember mem;
  mem.family = FamilyKind::slope_lines;
  mem.params = a;
  mem.points = PointSet(std::move(pts));
  mem.instance = inst.key();
  return mem;
}

/// T_2 member: in grid i the column x = p_i + b_i, b_i in [0, m-1].
inline LineFamilySet generate_T2(const GridInstance& inst, const std::vector<std::int64_t>& b) {
  detail::require(b.size() == static_cast<std::size_t>(inst.d()), "generate_T2: need d parameters");
  const auto m = inst.m();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < b.size(); ++i) {
    detail::require(b[i] >= 0 && b[i] <= m - 1, "generate_T2: parameter out of [0, m-1]");
    const auto o = inst.anchors()[i];
    for (std::int64_t y = 0; y < m; ++y) pts.push_back({o.x + b[i], o.y + y});
  }
  FamilyMember mem;
  mem.family = FamilyKind::vertical_lines;
  mem.params = b;
  mem.points = PointSet(std::move(pts));
  mem.instance = inst.key();
  return mem;
}

/// The generating line of a grid member in grid i.
inline Line block_line(const GridInstance& inst, const FamilyMember& mem, std::size_t i) {
  const auto o = inst.anchors().at(i);
  const auto v = mem.params.at(i);
  if (mem.family == FamilyKind::vertical_lines) return Line::through({o.x + v, o.y}, {o.x + v, o.y + 1});
  detail::require(mem.family == FamilyKind::slope_lines, "block_line: not a grid member");
  return Line::through(o, {o.x + v, o.y + v - 1});
}

// ---------------------------------------------------------------------------------------------
// Shared operations

inline PointSet intersect(const FamilyMember& a, const FamilyMember& b) {
  if (!a.same_instance(b)) throw InstanceMismatch("intersect: members come from different instances");
  return set_intersection(a.points, b.points);
}

namespace detail {

// Odometer over d digits with `radix` values each; calls fn(digits).
inline void for_each_tuple(std::size_t d, std::int64_t lo, std::int64_t hi,
                           const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> digits(d, lo);
  if (hi < lo) return;
  for (;;) {
    fn(digits);
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (digits[pos] < hi) {
        ++digits[pos];
        break;
      }
      digits[pos] = lo;
      if (pos == 0) return;
    }
    if (d == 0) return;
  }
}

inline void check_cap(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap)
    throw CapExceeded(std::string(what) + ": parameter space " + std::to_string(count) + " exceeds cap " +
                      std::to_string(cap));
}

}  // namespace detail

/// Every member of an interval family, one per parameter tuple.
///
/// R_0 / R_{m+1}: m+2 nonempty anchored intervals per block. R: additionally a free side per block.
inline std::vector<FamilyMember> enumerate_family(const IntervalInstance& inst, FamilyKind which,
                                                  std::uint64_t cap = default_enumeration_cap) {
  const auto d = static_cast<std::size_t>(inst.d());
  const auto per_block = static_cast<std::uint64_t>(inst.m() + 2);
  std::vector<FamilyMember> out;
  switch (which) {
    case FamilyKind::left_anchored:
    case FamilyKind::right_anchored: {
      detail::check_cap(detail::checked_pow(per_block, inst.d(), cap), cap, "enumerate_family");
      const Side side = which == FamilyKind::left_anchored ? Side::left : Side::right;
      detail::for_each_tuple(d, 1, inst.m() + 2, [&](const std::vector<std::int64_t>& counts) {
        auto mem = anchored_member(inst, std::vector<Side>(d, side), counts);
        mem.family = which;
        out.push_back(std::move(mem));
      });
      break;
    }
    case FamilyKind::anchored: {
      detail::check_cap(detail::checked_pow(2 * per_block, inst.d(), cap), cap, "enumerate_family");
      // digit in [0, 2(m+2)): low half left-anchored, high half right-anchored
      detail::for_each_tuple(d, 0, 2 * inst.m() + 3, [&](const std::vector<std::int64_t>& code) {
        std::vector<Side> sides;
        std::vector<std::int64_t> counts;
        for (auto c : code) {
          const bool right = c >= inst.m() + 2;
          sides.push_back(right ? Side::right : Side::left);
          counts.push_back(right ? c - (inst.m() + 2) + 1 : c + 1);
        }
        out.push_back(anchored_member(inst, std::move(sides), std::move(counts)));
      });
      break;
    }
    default:
      throw InvalidParameters(std::string("enumerate_family: family ") + to_string(which) +
                              " is not defined on an interval instance");
  }
  return out;
}

/// T_1: a_i in [1, m-1] per grid. T_2: b_i in [0, m-1] per grid.
inline std::vector<FamilyMember> enumerate_family(const GridInstance& inst, FamilyKind which,
                                                  std::uint64_t cap = default_enumeration_cap) {
  const auto d = static_cast<std::size_t>(inst.d());
  std::vector<FamilyMember> out;
  switch (which) {
    case FamilyKind::slope_lines:
      detail::check_cap(detail::checked_pow(static_cast<std::uint64_t>(inst.m() - 1), inst.d(), cap), cap,
                        "enumerate_family");
      detail::for_each_tuple(d, 1, inst.m() - 1,
                             [&](const std::vector<std::int64_t>& a) { out.push_back(generate_T1(inst, a)); });
      break;
    case FamilyKind::vertical_lines:
      detail::check_cap(detail::checked_pow(static_cast<std::uint64_t>(inst.m()), inst.d(), cap), cap,
                        "enumerate_family");
      detail::for_each_tuple(d, 0, inst.m() - 1,
                             [&](const std::vector<std::int64_t>& b) { out.push_back(generate_T2(inst, b)); });
      break;
    default:
      throw InvalidParameters(std::string("enumerate_family: family ") + to_string(which) +
                              " is not defined on a grid instance");
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// PROPERTY: non-negative-slope lines through two points of different grids never meet inside
// any grid's closed square.

struct PropertyResult {
  bool holds = true;
  std::size_t line_pairs_checked = 0;
  std::optional<RationalPoint> witness;
  std::optional<std::pair<Line, Line>> witness_lines;
  std::size_t witness_grids[2] = {0, 0};
};

/// Distinct lines of non-negative slope (or vertical) through at least two points of grid i.
inline std::vector<Line> grid_lines(const GridInstance& inst, std::size_t i) {
  const auto pts = inst.grid(i);
  std::set<Line> lines;
  for (std::size_t u = 0; u < pts.size(); ++u)
    for (std::size_t v = u + 1; v < pts.size(); ++v) {
      auto l = Line::through(pts[u], pts[v]);
      if (l.non_negative_slope_or_vertical()) lines.insert(l);
    }
  return {lines.begin(), lines.end()};
}

inline PropertyResult verify_property(const GridInstance& inst, std::uint64_t cap = 100000) {
  const auto m4 = static_cast<std::uint64_t>(inst.m()) * static_cast<std::uint64_t>(inst.m()) *
                  static_cast<std::uint64_t>(inst.m()) * static_cast<std::uint64_t>(inst.m());
  detail::check_cap(static_cast<std::uint64_t>(inst.d()) * m4, cap, "verify_property");
  const auto d = static_cast<std::size_t>(inst.d());
  std::vector<std::vector<Line>> lines(d);
  for (std::size_t i = 0; i < d; ++i) lines[i] = grid_lines(inst, i);

  PropertyResult res;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (const auto& l1 : lines[i])
        for (const auto& l2 : lines[j]) {
          ++res.line_pairs_checked;
          const auto meet = intersect_lines(l1, l2);
          std::optional<RationalPoint> bad;
          if (meet.kind == LineMeet::same_line) {
            // a coincident line contains two lattice points of grid i
            for (const auto& p : inst.grid(i))
              if (l1.contains(p)) {
                bad = RationalPoint{{p.x, 1}, {p.y, 1}};
                break;
              }
          } else if (meet.kind == LineMeet::point) {
            for (std::size_t g = 0; g < d; ++g)
              if (inst.box(g).contains(*meet.point)) {
                bad = meet.point;
                break;
              }
          }
          if (bad) {
            res.holds = false;
            res.witness = bad;
            res.witness_lines = std::make_pair(l1, l2);
            res.witness_grids[0] = i;
            res.witness_grids[1] = j;
            return res;
          }
        }
  return res;
}

}  // namespace vcdisj
