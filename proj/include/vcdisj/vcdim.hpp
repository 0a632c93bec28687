#pragma once

// Exact VC dimension by shattering search, the Sauer-Shelah bound, and log-rank floors of
// communication matrices.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vcdisj/encoding.hpp"
#include "vcdisj/errors.hpp"
#include "vcdisj/geometry.hpp"
#include "vcdisj/setsystems.hpp"

namespace vcdisj {

using Mask = std::uint64_t;

/// Subsets of an ordered ground set of at most 64 points, as bitmasks over ground positions.
struct Family {
  PointSet ground;
  std::vector<Mask> members;

  std::size_t ground_size() const noexcept { return ground.size(); }

  Mask mask_of(const PointSet& pts) const {
    Mask mask = 0;
    for (const auto& p : pts) {
      auto it = std::lower_bound(ground.begin(), ground.end(), p);
      detail::require(it != ground.end() && *it == p, "Family: point outside the ground set");
      mask |= Mask{1} << static_cast<unsigned>(it - ground.begin());
    }
    return mask;
  }

  PointSet points_of(Mask mask) const {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < ground.size(); ++i)
      if ((mask >> i) & 1U) pts.push_back(ground[i]);
    return PointSet(std::move(pts));
  }

  std::vector<Mask> distinct_members() const {
    auto out = members;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

inline Family make_family(PointSet ground, const std::vector<PointSet>& sets) {
  if (ground.size() > 64) throw CapExceeded("make_family: ground set larger than 64 points");
  Family fam{std::move(ground), {}};
  fam.members.reserve(sets.size());
  for (const auto& s : sets) fam.members.push_back(fam.mask_of(s));
  return fam;
}

inline Family make_family(PointSet ground, const std::vector<FamilyMember>& members) {
  std::vector<PointSet> sets;
  sets.reserve(members.size());
  for (const auto& m : members) sets.push_back(m.points);
  return make_family(std::move(ground), sets);
}

/// Power set of the first s points of the ground; used as a reference family.
inline Family power_set_family(PointSet ground) {
  detail::require(ground.size() <= 20, "power_set_family: ground too large");
  Family fam{std::move(ground), {}};
  for (Mask m = 0; m < (Mask{1} << fam.ground.size()); ++m) fam.members.push_back(m);
  return fam;
}

inline constexpr unsigned max_trace_size = 25;

/// |{ y & member }| == 2^|y|.
inline bool shattered(const Family& fam, Mask y) {
  const auto size = static_cast<unsigned>(std::popcount(y));
  if (size > max_trace_size) throw CapExceeded("shattered: candidate set larger than 25 points");
  const std::uint64_t needed = std::uint64_t{1} << size;
  if (fam.members.size() < needed) return false;
  std::vector<Mask> traces;
  traces.reserve(fam.members.size());
  for (auto mem : fam.members) traces.push_back(mem & y);
  std::sort(traces.begin(), traces.end());
  return static_cast<std::uint64_t>(std::unique(traces.begin(), traces.end()) - traces.begin()) == needed;
}

inline bool shattered(const Family& fam, const PointSet& y) { return shattered(fam, fam.mask_of(y)); }

struct VcResult {
  std::size_t dimension = 0;
  Mask witness = 0;
  PointSet witness_points;
  /// Number of shattered sets found at each size 0..dimension.
  std::vector<std::size_t> shattered_per_size;
};

/// Level-wise search: a set is a candidate only if all its one-smaller subsets are shattered
/// (shattering is hereditary). The number of shattered sets never exceeds the number of
/// distinct members, which bounds the work per level by |F| * N.
inline VcResult vc_dimension(const Family& fam, std::uint64_t cap = std::uint64_t{1} << 24) {
  detail::require(!fam.members.empty(), "vc_dimension: empty family");
  const auto n = fam.ground_size();
  if (n > 64) throw CapExceeded("vc_dimension: ground set larger than 64 points");
  const Family distinct{fam.ground, fam.distinct_members()};

  VcResult res;
  res.shattered_per_size.push_back(1);
  std::vector<Mask> level{0};
  std::uint64_t work = 0;
  for (std::size_t size = 1; size <= n; ++size) {
    if ((std::uint64_t{1} << std::min<std::size_t>(size, 63)) > distinct.members.size()) break;
    std::unordered_set<Mask> prev(level.begin(), level.end());
    std::vector<Mask> next;
    for (auto base : level) {
      const unsigned top = base == 0 ? 0U : 64U - static_cast<unsigned>(std::countl_zero(base));
      for (unsigned e = top; e < n; ++e) {
        const Mask cand = base | (Mask{1} << e);
        bool all_sub = true;
        for (Mask rest = cand; rest != 0 && all_sub; rest &= rest - 1) {
          const Mask bit = rest & (~rest + 1);
          if (bit != (Mask{1} << e)) all_sub = prev.count(cand ^ bit) != 0;
        }
        if (!all_sub) continue;
        if (++work > cap) throw CapExceeded("vc_dimension: search exceeds cap");
        if (shattered(distinct, cand)) next.push_back(cand);
      }
    }
    if (next.empty()) break;
    res.dimension = size;
    res.witness = next.front();
    res.shattered_per_size.push_back(next.size());
    level = std::move(next);
  }
  res.witness_points = fam.points_of(res.witness);
  return res;
}

struct SauerShelahReport {
  std::size_t distinct_members = 0;
  std::size_t ground_size = 0;
  std::size_t vc = 0;
  double bound = 0;                 // (e N / v)^v, or 1 when v = 0
  std::uint64_t binomial_bound = 0; // sum_{i <= v} C(N, i)
  bool holds = false;
  double slack() const { return bound - static_cast<double>(distinct_members); }
};

inline SauerShelahReport sauer_shelah_check(const Family& fam) {
  SauerShelahReport rep;
  rep.distinct_members = fam.distinct_members().size();
  rep.ground_size = fam.ground_size();
  rep.vc = vc_dimension(fam).dimension;
  const auto n = static_cast<double>(rep.ground_size);
  const auto v = static_cast<double>(rep.vc);
  rep.bound = rep.vc == 0 ? 1.0 : std::pow(std::exp(1.0) * n / v, v);
  std::uint64_t sum = 0;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i <= rep.vc; ++i) {
    sum += c;
    c = c * (rep.ground_size - i) / (i + 1);
  }
  rep.binomial_bound = sum;
  rep.holds = static_cast<double>(rep.distinct_members) <= rep.bound && rep.distinct_members <= rep.binomial_bound;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Communication matrices

class ZeroOneMatrix {
 public:
  ZeroOneMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static ZeroOneMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    ZeroOneMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require(rows[i].size() == m.cols_, "ZeroOneMatrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) {
        detail::require(rows[i][j] == 0 || rows[i][j] == 1, "ZeroOneMatrix: entries must be 0/1");
        m.set(i, j, rows[i][j] == 1);
      }
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool at(std::size_t i, std::size_t j) const { return data_.at(i * cols_ + j) != 0; }
  void set(std::size_t i, std::size_t j, bool v) { data_.at(i * cols_ + j) = v ? 1 : 0; }

  friend bool operator==(const ZeroOneMatrix&, const ZeroOneMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> data_;
};

struct CommPredicate {
  enum class Kind { disjoint, intersection_size } kind = Kind::disjoint;
  std::size_t size = 0;

  static CommPredicate disjointness() { return {Kind::disjoint, 0}; }
  /// Entry is 1 iff |A & B| == t.
  static CommPredicate intersection_equals(std::size_t t) { return {Kind::intersection_size, t}; }

  bool operator()(Mask a, Mask b) const {
    if (kind == Kind::disjoint) return (a & b) == 0;
    return static_cast<std::size_t>(std::popcount(a & b)) == size;
  }
};

inline ZeroOneMatrix comm_matrix(const Family& rows, const Family& cols, CommPredicate pred,
                                 std::size_t cap = std::size_t{1} << 22) {
  detail::require(rows.ground == cols.ground, "comm_matrix: families over different ground sets");
  if (rows.members.size() * cols.members.size() > cap) throw CapExceeded("comm_matrix: matrix exceeds cap");
  ZeroOneMatrix m(rows.members.size(), cols.members.size());
  for (std::size_t i = 0; i < rows.members.size(); ++i)
    for (std::size_t j = 0; j < cols.members.size(); ++j) m.set(i, j, pred(rows.members[i], cols.members[j]));
  return m;
}

/// Rank over the rationals by Bareiss fraction-free elimination.
inline std::size_t rational_rank(const ZeroOneMatrix& mat) {
  using boost::multiprecision::cpp_int;
  const auto r = mat.rows();
  const auto c = mat.cols();
  std::vector<std::vector<cpp_int>> a(r, std::vector<cpp_int>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a[i][j] = mat.at(i, j) ? 1 : 0;

  std::size_t rank = 0;
  cpp_int prev = 1;
  for (std::size_t col = 0; col < c && rank < r; ++col) {
    std::size_t piv = rank;
    while (piv < r && a[piv][col] == 0) ++piv;
    if (piv == r) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < r; ++i) {
      for (std::size_t j = col + 1; j < c; ++j) a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

/// ceil(log2(rank + 1)): a floor on deterministic communication for the matrix's function.
inline unsigned log_rank_bound(const ZeroOneMatrix& mat) {
  return ceil_log2(static_cast<std::uint64_t>(rational_rank(mat)) + 1);
}

}  // namespace vcdisj
