#pragma once

// Input transformations from Augmented Indexing to interval disjointness, from Or-Disjointness to
// grid-line disjointness, and the Learn-by-intersection reconstruction.

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vcdisj/encoding.hpp"
#include "vcdisj/errors.hpp"
#include "vcdisj/protocols.hpp"
#include "vcdisj/runtime.hpp"
#include "vcdisj/setsystems.hpp"

namespace vcdisj {

// ---------------------------------------------------------------------------------------------
// Augmented Indexing

/// log2(m) for an interval instance; m is a power of two.
inline std::size_t block_bits(const IntervalInstance& inst) {
  return static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(inst.m())) - 1);
}

/// Bob's side of Augmented Indexing: index j (1-based) and the bits before it.
struct AugIndexQuery {
  std::size_t j = 1;
  BitString prefix;
};

inline std::vector<std::int64_t> block_values(const std::vector<BitString>& blocks) {
  std::vector<std::int64_t> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(static_cast<std::int64_t>(val(b)));
  return out;
}

/// a_i = val of block i of x; block-i interval [p_i, p_i + m - a_i].
inline AnchoredIntervalSet augindex_encode_alice(const BitString& x, const IntervalInstance& inst) {
  const auto len = static_cast<std::size_t>(inst.d()) * block_bits(inst);
  detail::require(x.size() == len, "augindex_encode_alice: |x| = " + std::to_string(x.size()) + ", expected d log m = " +
                                       std::to_string(len));
  return generate_left(inst, block_values(partition_blocks(x, static_cast<std::size_t>(inst.d()))));
}

/// y = prefix, 1, 0...0; b_i = val of block i of y; block-i interval [p_i + m + 1 - b_i, p_i + m + 1].
inline AnchoredIntervalSet augindex_encode_bob(const AugIndexQuery& q, const IntervalInstance& inst) {
  const auto len = static_cast<std::size_t>(inst.d()) * block_bits(inst);
  detail::require(q.j >= 1 && q.j <= len, "augindex_encode_bob: index j out of [1, d log m]");
  detail::require(q.prefix.size() == q.j - 1, "augindex_encode_bob: prefix length must be j - 1");
  BitString y = q.prefix;
  y.push_back(true);
  y.append(BitString::zeros(len - q.j));
  return generate_right(inst, block_values(partition_blocks(y, static_cast<std::size_t>(inst.d()))));
}

inline AnchoredIntervalSet augindex_encode_bob(std::size_t j, const BitString& prefix, const IntervalInstance& inst) {
  return augindex_encode_bob(AugIndexQuery{j, prefix}, inst);
}

/// Disjoint encodings mean x_j = 1, intersecting ones x_j = 0.
constexpr bool augindex_decode(bool disjoint) noexcept { return disjoint; }

using AugIndexProtocol = Protocol<BitString, AugIndexQuery, std::monostate, bool>;

/// Augmented Indexing on top of any one-way disjointness protocol for R_0 x R_{m+1}; same cost.
inline AugIndexProtocol augindex_protocol(const IntervalInstance& inst, DisjointnessProtocol disj) {
  auto base = std::make_shared<const DisjointnessProtocol>(std::move(disj));
  AugIndexProtocol p;
  p.name = "augindex/" + base->name;
  p.alice = [inst, base](const BitString& x, Endpoint& ep, SharedRandomness& rng) {
    return base->alice(augindex_encode_alice(x, inst), ep, rng);
  };
  p.bob = [inst, base](const AugIndexQuery& q, Endpoint& ep, SharedRandomness& rng) {
    return augindex_decode(base->bob(augindex_encode_bob(q, inst), ep, rng));
  };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Or-Disjointness

/// Grid instance and prime table for Or-Disj on d blocks of k bits: m = p_1 ... p_k + 1, so the
/// product bound m - 1 selects exactly the first k primes and every phi value is a valid
/// slope parameter and column offset.
struct OrDisjSetup {
  GridInstance instance;
  PrimeTable primes;
};

inline OrDisjSetup ordisj_setup(std::int64_t d, std::size_t k) {
  detail::require(d >= 1 && k >= 1, "ordisj_setup: d and k must be positive");
  const auto m = static_cast<std::int64_t>(first_k_primes(k).product()) + 1;
  auto inst = build_grid_instance(d * m * m, d);
  auto pt = first_primes_with_product_bound(static_cast<std::uint64_t>(m - 1));
  return {std::move(inst), std::move(pt)};
}

namespace detail {

inline void check_ordisj_blocks(const std::vector<BitString>& blocks, const GridInstance& inst, const PrimeTable& pt,
                                const char* who) {
  require(blocks.size() == static_cast<std::size_t>(inst.d()), std::string(who) + ": need one string per grid");
  for (const auto& b : blocks) {
    require(b.size() == pt.k(), std::string(who) + ": block length must equal the prime table size");
    require(b.popcount() > 0, std::string(who) + ": all-zero block is excluded from S_k");
  }
}

}  // namespace detail

/// a_i = phi(x_i) >= 2; line y - q_i = ((a_i - 1)/a_i)(x - p_i).
inline LineFamilySet ordisj_encode_alice(const std::vector<BitString>& xs, const GridInstance& inst,
                                         const PrimeTable& pt) {
  detail::check_ordisj_blocks(xs, inst, pt, "ordisj_encode_alice");
  std::vector<std::int64_t> a;
  for (const auto& x : xs) {
    const auto v = static_cast<std::int64_t>(phi(x, pt));
    detail::require(v <= inst.m() - 1, "ordisj_encode_alice: phi value exceeds grid range m - 1");
    a.push_back(v);
  }
  return generate_T1(inst, a);
}

/// b_i = phi(complement(y_i)); column x - p_i = b_i.
inline LineFamilySet ordisj_encode_bob(const std::vector<BitString>& ys, const GridInstance& inst,
                                       const PrimeTable& pt) {
  detail::check_ordisj_blocks(ys, inst, pt, "ordisj_encode_bob");
  std::vector<std::int64_t> b;
  for (const auto& y : ys) {
    const auto v = static_cast<std::int64_t>(phi(y.complement(), pt));
    detail::require(v <= inst.m() - 1, "ordisj_encode_bob: phi value exceeds grid range m - 1");
    b.push_back(v);
  }
  return generate_T2(inst, b);
}

/// OR of the per-block disjointness bits is 1 iff the encoded sets intersect.
constexpr bool ordisj_decode(bool disjoint) noexcept { return !disjoint; }

using OrDisjProtocol = Protocol<std::vector<BitString>, std::vector<BitString>, std::monostate, bool>;

/// Or-Disj on top of any disjointness protocol for T_1 x T_2 (Bob reports).
template <typename OutA>
Protocol<std::vector<BitString>, std::vector<BitString>, std::monostate, bool> ordisj_protocol(
    const OrDisjSetup& setup, Protocol<FamilyMember, FamilyMember, OutA, bool> disj) {
  auto base = std::make_shared<const Protocol<FamilyMember, FamilyMember, OutA, bool>>(std::move(disj));
  OrDisjProtocol p;
  p.name = "ordisj/" + base->name;
  p.alice = [setup, base](const std::vector<BitString>& xs, Endpoint& ep, SharedRandomness& rng) {
    base->alice(ordisj_encode_alice(xs, setup.instance, setup.primes), ep, rng);
    return std::monostate{};
  };
  p.bob = [setup, base](const std::vector<BitString>& ys, Endpoint& ep, SharedRandomness& rng) {
    return ordisj_decode(base->bob(ordisj_encode_bob(ys, setup.instance, setup.primes), ep, rng));
  };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Learn via intersection

namespace detail {

/// Splits meet into one point per grid, offset from that grid's anchor.
inline std::vector<Point> meet_offsets(const PointSet& meet, const GridInstance& inst) {
  const auto d = static_cast<std::size_t>(inst.d());
  if (meet.size() != d)
    throw PromiseViolated("reconstruct: |A & B| = " + std::to_string(meet.size()) + ", promised d = " +
                          std::to_string(d));
  std::vector<Point> offsets(d);
  std::vector<bool> seen(d, false);
  for (const auto& pt : meet) {
    bool placed = false;
    for (std::size_t i = 0; i < d && !placed; ++i)
      if (inst.box(i).contains(pt)) {
        if (seen[i]) throw PromiseViolated("reconstruct: two meet points in grid " + std::to_string(i));
        seen[i] = true;
        offsets[i] = {pt.x - inst.anchors()[i].x, pt.y - inst.anchors()[i].y};
        placed = true;
      }
    if (!placed) throw PromiseViolated("reconstruct: meet point outside the ground set");
  }
  return offsets;
}

}  // namespace detail

/// Recovers the other party's T_1 / T_2 set from one's own set and the intersection.
///
/// From a column b_i and meet point (v, w) (offsets, v = b_i >= 1): the T_1 line through the
/// anchor and (v, w) has slope w/v = (a-1)/a, so a = v / (v - w). From a T_1 line: b_i = v.
/// A meet point on the anchor column (v = 0) cannot identify the line and is rejected.
inline FamilyMember reconstruct_from_intersection(const FamilyMember& known, const PointSet& meet,
                                                  const GridInstance& inst) {
  if (!known.instance || *known.instance != *inst.key())
    throw InstanceMismatch("reconstruct: known set is over another instance");
  const auto offsets = detail::meet_offsets(meet, inst);
  if (!meet.empty() && !known.points.includes(meet))
    throw PromiseViolated("reconstruct: meet is not contained in the known set");
  std::vector<std::int64_t> params;
  if (known.family == FamilyKind::vertical_lines) {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      const auto [v, w] = offsets[i];
      if (v == 0) throw PromiseViolated("reconstruct: meet at the anchor column leaves the line undetermined");
      if (w >= v || v % (v - w) != 0)
        throw PromiseViolated("reconstruct: no slope-(a-1)/a line through the meet point in grid " + std::to_string(i));
      const auto a = v / (v - w);
      if (a > inst.m() - 1) throw PromiseViolated("reconstruct: recovered slope parameter out of range");
      params.push_back(a);
    }
    return generate_T1(inst, params);
  }
  detail::require(known.family == FamilyKind::slope_lines, "reconstruct: known set must be in T1 or T2");
  for (const auto& off : offsets) params.push_back(off.x);
  return generate_T2(inst, params);
}

/// The Learn promise in checkable form: every grid contributes exactly one intersection point,
/// and that point is off the anchor column.
inline bool satisfies_learn_promise(const FamilyMember& a, const FamilyMember& b, const GridInstance& inst) {
  const auto meet = intersect(a, b);
  if (meet.size() != static_cast<std::size_t>(inst.d())) return false;
  try {
    for (const auto& off : detail::meet_offsets(meet, inst))
      if (off.x == 0) return false;
  } catch (const PromiseViolated&) {
    return false;
  }
  return true;
}

using LearnProtocol = Protocol<FamilyMember, FamilyMember, FamilyMember, FamilyMember>;

/// Runs the intersection protocol, then each party reconstructs the other's set locally.
/// Alice outputs B, Bob outputs A; no bits beyond the intersection protocol's.
inline LearnProtocol learn_protocol(const GridInstance& inst, IntersectionProtocol intersection) {
  auto base = std::make_shared<const IntersectionProtocol>(std::move(intersection));
  LearnProtocol p;
  p.name = "learn/" + base->name;
  p.alice = [inst, base](const FamilyMember& a, Endpoint& ep, SharedRandomness& rng) {
    return reconstruct_from_intersection(a, base->alice(a, ep, rng), inst);
  };
  p.bob = [inst, base](const FamilyMember& b, Endpoint& ep, SharedRandomness& rng) {
    return reconstruct_from_intersection(b, base->bob(b, ep, rng), inst);
  };
  return p;
}

inline IntersectionProtocol default_intersection_protocol(const GridInstance& inst) {
  return full_disclosure_intersection(enumerate_family(inst, FamilyKind::slope_lines),
                                      enumerate_family(inst, FamilyKind::vertical_lines));
}

struct LearnOutcome {
  FamilyMember a_learned_by_bob;
  FamilyMember b_learned_by_alice;
  Transcript transcript;
};

inline LearnOutcome learn_via_intersection(const IntersectionProtocol& intersection, const FamilyMember& a,
                                           const FamilyMember& b, const GridInstance& inst, std::uint64_t seed = 0) {
  if (intersect(a, b).size() != static_cast<std::size_t>(inst.d()))
    throw PromiseViolated("learn_via_intersection: |A & B| != d");
  auto out = run(learn_protocol(inst, intersection), a, b, seed);
  if (out.bob_output.points != a.points || out.alice_output.points != b.points)
    throw ProtocolError("learn_via_intersection: reconstruction does not match the inputs");
  return {std::move(out.bob_output), std::move(out.alice_output), std::move(out.transcript)};
}

}  // namespace vcdisj
