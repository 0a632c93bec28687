#pragma once

// Executable protocols: full disclosure, fingerprint sparse set intersection, gcd via prime
// supports, per-grid line disjointness and majority amplification.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "vcdisj/encoding.hpp"
#include "vcdisj/errors.hpp"
#include "vcdisj/runtime.hpp"
#include "vcdisj/setsystems.hpp"

namespace vcdisj {

using ElementSet = std::vector<std::uint64_t>;  // sorted, duplicate-free

// ---------------------------------------------------------------------------------------------
// Full disclosure

namespace detail {

inline std::size_t member_index(const std::vector<FamilyMember>& family, const FamilyMember& mem) {
  for (std::size_t i = 0; i < family.size(); ++i)
    if (family[i].points == mem.points && family[i].same_instance(mem)) return i;
  throw InvalidParameters("full disclosure: input is not a member of the public family");
}

inline void send_index(Endpoint& ep, std::size_t index, std::size_t family_size) {
  const auto width = ceil_log2(family_size);
  if (width > 0) ep.send_uint(index, width);
}

inline std::size_t receive_index(Endpoint& ep, std::size_t family_size) {
  const auto width = ceil_log2(family_size);
  if (width == 0) return 0;
  const auto idx = ep.receive_uint(width);
  if (idx >= family_size) throw ProtocolError("full disclosure: index out of range");
  return static_cast<std::size_t>(idx);
}

}  // namespace detail

using DisjointnessProtocol = Protocol<FamilyMember, FamilyMember, std::monostate, bool>;

/// One-way: Alice sends the index of her set in the public family, Bob evaluates Disj locally.
/// Cost is exactly ceil(log2 |family|) bits.
inline DisjointnessProtocol full_disclosure_disj(std::vector<FamilyMember> alice_family) {
  detail::require(!alice_family.empty(), "full_disclosure_disj: empty family");
  auto fam = std::make_shared<const std::vector<FamilyMember>>(std::move(alice_family));
  DisjointnessProtocol p;
  p.name = "full-disclosure";
  p.alice = [fam](const FamilyMember& a, Endpoint& ep, SharedRandomness&) {
    detail::send_index(ep, detail::member_index(*fam, a), fam->size());
    return std::monostate{};
  };
  p.bob = [fam](const FamilyMember& b, Endpoint& ep, SharedRandomness&) {
    const auto& a = (*fam)[detail::receive_index(ep, fam->size())];
    return intersect(a, b).empty();
  };
  return p;
}

inline DisjointnessProtocol full_disclosure_disj(const IntervalInstance& inst, FamilyKind alice_family) {
  return full_disclosure_disj(enumerate_family(inst, alice_family));
}

inline DisjointnessProtocol full_disclosure_disj(const GridInstance& inst, FamilyKind alice_family) {
  return full_disclosure_disj(enumerate_family(inst, alice_family));
}

using IntersectionProtocol = Protocol<FamilyMember, FamilyMember, PointSet, PointSet>;

/// Alice sends her index, Bob replies with his; both compute A & B.
inline IntersectionProtocol full_disclosure_intersection(std::vector<FamilyMember> alice_family,
                                                         std::vector<FamilyMember> bob_family) {
  detail::require(!alice_family.empty() && !bob_family.empty(), "full_disclosure_intersection: empty family");
  auto fa = std::make_shared<const std::vector<FamilyMember>>(std::move(alice_family));
  auto fb = std::make_shared<const std::vector<FamilyMember>>(std::move(bob_family));
  IntersectionProtocol p;
  p.name = "full-disclosure-intersection";
  p.alice = [fa, fb](const FamilyMember& a, Endpoint& ep, SharedRandomness&) {
    detail::send_index(ep, detail::member_index(*fa, a), fa->size());
    const auto& b = (*fb)[detail::receive_index(ep, fb->size())];
    return intersect(a, b);
  };
  p.bob = [fa, fb](const FamilyMember& b, Endpoint& ep, SharedRandomness&) {
    const auto& a = (*fa)[detail::receive_index(ep, fa->size())];
    detail::send_index(ep, detail::member_index(*fb, b), fb->size());
    return intersect(a, b);
  };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Sparse set intersection by shared-randomness fingerprints

struct SparseIntersectionParams {
  std::uint64_t universe = 0;  // elements lie in [0, universe)
  std::size_t max_size = 0;    // public bound on either party's set size
  double delta = 0.1;          // bound on the probability of any extra element
};

/// ceil(log2(|S_A| * max_size / delta)), at least 1.
inline unsigned fingerprint_width(std::size_t alice_size, std::size_t max_size, double delta) {
  const double ratio = static_cast<double>(std::max<std::size_t>(alice_size, 1)) *
                       static_cast<double>(std::max<std::size_t>(max_size, 1)) / delta;
  auto w = static_cast<unsigned>(std::ceil(std::log2(ratio) - 1e-12));
  return std::clamp(w, 1U, 64U);
}

namespace detail {

inline void validate_elements(const ElementSet& s, const SparseIntersectionParams& params, const char* who) {
  require(std::is_sorted(s.begin(), s.end()) && std::adjacent_find(s.begin(), s.end()) == s.end(),
          std::string(who) + ": element set must be sorted and duplicate-free");
  require(s.size() <= params.max_size, std::string(who) + ": set larger than the public size bound");
  for (auto e : s) require(e < params.universe, std::string(who) + ": element outside the universe");
  require(params.delta > 0 && params.delta < 1, std::string(who) + ": delta must lie in (0, 1)");
}

inline std::uint64_t fingerprint(std::uint64_t key, std::uint64_t element, unsigned width) {
  const auto h = SharedRandomness::mix(key, element);
  return width >= 64 ? h : h >> (64U - width);
}

}  // namespace detail

/// Alice's side. Message 1: |S_A| in bits_for(max_size) bits, then one w-bit fingerprint per element.
/// Message 2 (from Bob): count header, then ceil(log2 U) bits per returned element.
inline ElementSet sparse_intersection_alice(const ElementSet& s_a, const SparseIntersectionParams& params,
                                            Endpoint& ep, SharedRandomness& rng) {
  detail::validate_elements(s_a, params, "sparse_intersection");
  const auto key = rng.next();
  const auto w = fingerprint_width(s_a.size(), params.max_size, params.delta);
  BitString msg = BitString::from_uint(s_a.size(), bits_for(params.max_size));
  for (auto e : s_a) msg.append_uint(detail::fingerprint(key, e, w), w);
  ep.send(std::move(msg));

  const auto reply = ep.receive();
  BitReader rd(reply);
  const auto count = rd.uint(bits_for(params.max_size));
  ElementSet out;
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(rd.uint(ceil_log2(params.universe)));
  if (!rd.done()) throw ProtocolError("sparse_intersection: trailing bits in reply");
  return out;
}

/// Bob's side: returns his elements whose fingerprint matches one of Alice's.
inline ElementSet sparse_intersection_bob(const ElementSet& s_b, const SparseIntersectionParams& params, Endpoint& ep,
                                          SharedRandomness& rng) {
  detail::validate_elements(s_b, params, "sparse_intersection");
  const auto key = rng.next();
  const auto msg = ep.receive();
  BitReader rd(msg);
  const auto count = static_cast<std::size_t>(rd.uint(bits_for(params.max_size)));
  const auto w = fingerprint_width(count, params.max_size, params.delta);
  std::vector<std::uint64_t> prints;
  for (std::size_t i = 0; i < count; ++i) prints.push_back(rd.uint(w));
  if (!rd.done()) throw ProtocolError("sparse_intersection: trailing bits in fingerprint message");
  std::sort(prints.begin(), prints.end());

  ElementSet out;
  for (auto e : s_b)
    if (std::binary_search(prints.begin(), prints.end(), detail::fingerprint(key, e, w))) out.push_back(e);
  BitString reply = BitString::from_uint(out.size(), bits_for(params.max_size));
  for (auto e : out) reply.append_uint(e, ceil_log2(params.universe));
  ep.send(std::move(reply));
  return out;
}

using SparseIntersectionProtocol = Protocol<ElementSet, ElementSet, ElementSet, ElementSet>;

/// Returned set always contains S_A & S_B; any extra element appears with probability <= delta.
inline SparseIntersectionProtocol sparse_intersection_protocol(SparseIntersectionParams params) {
  SparseIntersectionProtocol p;
  p.name = "sparse-intersection";
  p.alice = [params](const ElementSet& s, Endpoint& ep, SharedRandomness& rng) {
    return sparse_intersection_alice(s, params, ep, rng);
  };
  p.bob = [params](const ElementSet& s, Endpoint& ep, SharedRandomness& rng) {
    return sparse_intersection_bob(s, params, ep, rng);
  };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Exponent coding: unary length prefix, then the value's bits below its leading one.
// 0 -> "0"; alpha >= 1 with bit length L -> L ones, a zero, L-1 bits. Cost 2L bits.

inline void append_exponent(BitString& out, std::uint64_t alpha) {
  const auto len = static_cast<unsigned>(std::bit_width(alpha));
  for (unsigned i = 0; i < len; ++i) out.push_back(true);
  out.push_back(false);
  if (len > 1) out.append_uint(alpha & ((std::uint64_t{1} << (len - 1)) - 1), len - 1);
}

inline std::uint64_t read_exponent(BitReader& rd) {
  unsigned len = 0;
  while (rd.bit()) {
    ++len;
    if (len > 64) throw ProtocolError("read_exponent: length prefix too long");
  }
  if (len == 0) return 0;
  return (std::uint64_t{1} << (len - 1)) | rd.uint(len - 1);
}

// ---------------------------------------------------------------------------------------------
// GCD

/// Public data both parties derive from k alone.
struct GcdContext {
  std::uint64_t k = 1;
  double delta = 1.0 / 3.0;
  PrimeTable primes;       // every prime <= k
  std::size_t max_support; // most distinct primes any number in [1, k] can have

  GcdContext(std::uint64_t k_, double delta_) : k(k_), delta(delta_), primes(primes_up_to(k_)) {
    detail::require(k >= 1, "gcd_protocol: k must be >= 1");
    detail::require(delta > 0 && delta < 1, "gcd_protocol: delta must lie in (0, 1)");
    max_support = k >= 2 ? first_primes_with_product_bound(k).k() : 0;
  }

  SparseIntersectionParams sparse_params() const {
    return {static_cast<std::uint64_t>(primes.k()), max_support, delta};
  }

  ElementSet support_indices(const FactorSupport& fs) const {
    ElementSet out;
    for (const auto& [p, e] : fs.entries) out.push_back(primes.index_of(p));
    return out;
  }
};

namespace detail {

inline std::uint64_t gcd_from_exponents(const GcdContext& ctx, const ElementSet& shared,
                                        const std::vector<std::uint64_t>& mine,
                                        const std::vector<std::uint64_t>& theirs) {
  std::uint64_t g = 1;
  for (std::size_t i = 0; i < shared.size(); ++i) {
    const auto p = ctx.primes.primes[shared[i]];
    for (std::uint64_t e = 0; e < std::min(mine[i], theirs[i]); ++e) g *= p;
  }
  return g;
}

inline std::vector<std::uint64_t> exponents_for(const GcdContext& ctx, const FactorSupport& fs,
                                                const ElementSet& shared) {
  std::vector<std::uint64_t> out;
  for (auto idx : shared) out.push_back(fs.exponent(ctx.primes.primes[idx]));
  return out;
}

inline std::vector<std::uint64_t> read_exponents(const BitString& msg, std::size_t count) {
  BitReader rd(msg);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(read_exponent(rd));
  if (!rd.done()) throw ProtocolError("gcd: trailing bits in exponent message");
  return out;
}

inline BitString write_exponents(const std::vector<std::uint64_t>& exps) {
  BitString msg;
  for (auto e : exps) append_exponent(msg, e);
  return msg;
}

}  // namespace detail

/// Alice: factor a, intersect prime supports, send her exponents, receive Bob's, output gcd.
inline std::uint64_t gcd_alice(std::uint64_t a, const GcdContext& ctx, Endpoint& ep, SharedRandomness& rng) {
  detail::require(a >= 1 && a <= ctx.k, "gcd_protocol: input outside [1, k]");
  const auto fs = factor_support(a, ctx.primes);
  const auto shared = sparse_intersection_alice(ctx.support_indices(fs), ctx.sparse_params(), ep, rng);
  if (shared.empty()) return 1;
  const auto mine = detail::exponents_for(ctx, fs, shared);
  ep.send(detail::write_exponents(mine));
  const auto theirs = detail::read_exponents(ep.receive(), shared.size());
  return detail::gcd_from_exponents(ctx, shared, mine, theirs);
}

inline std::uint64_t gcd_bob(std::uint64_t b, const GcdContext& ctx, Endpoint& ep, SharedRandomness& rng) {
  detail::require(b >= 1 && b <= ctx.k, "gcd_protocol: input outside [1, k]");
  const auto fs = factor_support(b, ctx.primes);
  const auto shared = sparse_intersection_bob(ctx.support_indices(fs), ctx.sparse_params(), ep, rng);
  if (shared.empty()) return 1;
  const auto theirs = detail::read_exponents(ep.receive(), shared.size());
  const auto mine = detail::exponents_for(ctx, fs, shared);
  ep.send(detail::write_exponents(mine));
  return detail::gcd_from_exponents(ctx, shared, mine, theirs);
}

using GcdProtocol = Protocol<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

/// Both parties output gcd(a, b). Extra elements from the intersection step carry exponent 0 on
/// one side and contribute p^0, so the output is exact for every seed.
inline GcdProtocol gcd_protocol(std::uint64_t k, double delta) {
  auto ctx = std::make_shared<const GcdContext>(k, delta);
  GcdProtocol p;
  p.name = "gcd";
  p.alice = [ctx](const std::uint64_t& a, Endpoint& ep, SharedRandomness& rng) { return gcd_alice(a, *ctx, ep, rng); };
  p.bob = [ctx](const std::uint64_t& b, Endpoint& ep, SharedRandomness& rng) { return gcd_bob(b, *ctx, ep, rng); };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Line disjointness on one grid: Alice holds a line through the anchor, Bob a column offset.

/// Alice's line through the grid anchor in offset coordinates.
struct AnchorLine {
  enum class Kind { sloped, horizontal, vertical } kind = Kind::sloped;
  std::int64_t rise = 0;  // sloped: y = (rise / run) x with gcd(rise, run) = 1, rise >= 1
  std::int64_t run = 1;

  static AnchorLine from_slope_parameter(std::int64_t a) {
    detail::require(a >= 1, "AnchorLine: slope parameter must be >= 1");
    if (a == 1) return {Kind::horizontal, 0, 1};
    return {Kind::sloped, a - 1, a};
  }
};

struct GridDecisionParams {
  std::int64_t m = 2;  // grid coordinates 0..m-1
  double delta = 1.0 / 3.0;
};

namespace detail {

inline constexpr unsigned tag_sloped = 0;
inline constexpr unsigned tag_horizontal = 1;
inline constexpr unsigned tag_vertical = 2;

}  // namespace detail

/// Alice's side of the one-grid decision. Returns true iff the line meets the column at a grid point.
///
/// Messages: 2-bit tag; Bob's bit [r == 0]; for sloped lines then gcd(run, r) over [1, m-1],
/// Alice's bit [gcd == run], and the range check y = rise*r/run <= m-1: one bit when rise <= run
/// (range holds automatically), otherwise Alice sends floor((m-1) run / rise) and Bob replies.
inline bool grid_line_alice(const AnchorLine& line, const GridDecisionParams& params, Endpoint& ep,
                            SharedRandomness& rng) {
  const auto m = params.m;
  switch (line.kind) {
    case AnchorLine::Kind::horizontal:
      ep.send_uint(detail::tag_horizontal, 2);
      return true;
    case AnchorLine::Kind::vertical:
      ep.send_uint(detail::tag_vertical, 2);
      return ep.receive_bit();
    case AnchorLine::Kind::sloped: break;
  }
  detail::require(line.rise >= 1 && line.run >= 1 && line.run <= m - 1 && line.rise <= m - 1,
                  "grid_line: sloped line must pass through a second grid point");
  ep.send_uint(detail::tag_sloped, 2);
  if (ep.receive_bit()) return true;  // r == 0: both lines pass through the anchor

  GcdContext ctx(static_cast<std::uint64_t>(m - 1), params.delta);
  auto sub = rng.derive(1);
  const auto g = gcd_alice(static_cast<std::uint64_t>(line.run), ctx, ep, sub);
  const bool divides = g == static_cast<std::uint64_t>(line.run);
  ep.send_bit(divides);
  if (!divides) return false;
  const bool gentle = line.rise <= line.run;
  ep.send_bit(gentle);
  if (gentle) return true;
  ep.send_uint(static_cast<std::uint64_t>((m - 1) * line.run / line.rise), bits_for(static_cast<std::uint64_t>(m - 1)));
  return ep.receive_bit();
}

inline bool grid_line_bob(std::int64_t r, const GridDecisionParams& params, Endpoint& ep, SharedRandomness& rng) {
  const auto m = params.m;
  detail::require(r >= 0 && r <= m - 1, "grid_line: column offset outside [0, m-1]");
  const auto tag = ep.receive_uint(2);
  if (tag == detail::tag_horizontal) return true;
  ep.send_bit(r == 0);
  if (tag == detail::tag_vertical || r == 0) return r == 0;
  if (tag != detail::tag_sloped) throw ProtocolError("grid_line: unknown line tag");

  GcdContext ctx(static_cast<std::uint64_t>(m - 1), params.delta);
  auto sub = rng.derive(1);
  gcd_bob(static_cast<std::uint64_t>(r), ctx, ep, sub);
  if (!ep.receive_bit()) return false;
  if (ep.receive_bit()) return true;
  const auto threshold = ep.receive_uint(bits_for(static_cast<std::uint64_t>(m - 1)));
  const bool in_range = static_cast<std::uint64_t>(r) <= threshold;
  ep.send_bit(in_range);
  return in_range;
}

using GridLineProtocol = Protocol<AnchorLine, std::int64_t, bool, bool>;

/// Both parties output whether the lines meet inside the grid.
inline GridLineProtocol grid_line_protocol(GridDecisionParams params) {
  GridLineProtocol p;
  p.name = "grid-line";
  p.alice = [params](const AnchorLine& l, Endpoint& ep, SharedRandomness& rng) {
    return grid_line_alice(l, params, ep, rng);
  };
  p.bob = [params](const std::int64_t& r, Endpoint& ep, SharedRandomness& rng) {
    return grid_line_bob(r, params, ep, rng);
  };
  return p;
}

using LineDisjProtocol = Protocol<FamilyMember, FamilyMember, bool, bool>;

/// Disj on T_1 x T_2: one grid decision per grid with budget delta/d each; output 1 iff no grid meets.
inline LineDisjProtocol line_disj_protocol(const GridInstance& inst, double delta) {
  auto key = inst.key();
  const GridDecisionParams params{inst.m(), delta / static_cast<double>(inst.d())};
  const auto d = static_cast<std::size_t>(inst.d());
  LineDisjProtocol p;
  p.name = "line-disj";
  p.alice = [key, params, d](const FamilyMember& a, Endpoint& ep, SharedRandomness& rng) {
    if (!a.instance || *a.instance != *key) throw InstanceMismatch("line_disj: Alice's set is over another instance");
    detail::require(a.family == FamilyKind::slope_lines, "line_disj: Alice's set must be in T1");
    bool disjoint = true;
    for (std::size_t i = 0; i < d; ++i) {
      auto sub = rng.derive(i);
      if (grid_line_alice(AnchorLine::from_slope_parameter(a.params[i]), params, ep, sub)) disjoint = false;
    }
    return disjoint;
  };
  p.bob = [key, params, d](const FamilyMember& b, Endpoint& ep, SharedRandomness& rng) {
    if (!b.instance || *b.instance != *key) throw InstanceMismatch("line_disj: Bob's set is over another instance");
    detail::require(b.family == FamilyKind::vertical_lines, "line_disj: Bob's set must be in T2");
    bool disjoint = true;
    for (std::size_t i = 0; i < d; ++i) {
      auto sub = rng.derive(i);
      if (grid_line_bob(b.params[i], params, ep, sub)) disjoint = false;
    }
    return disjoint;
  };
  return p;
}

// ---------------------------------------------------------------------------------------------
// Majority amplification

/// Smallest odd r >= 18 ln(1/delta); 1 when delta already meets the base error bound.
inline std::size_t amplification_repetitions(double delta, double base_error = 1.0 / 3.0) {
  detail::require(delta > 0 && delta < 1, "amplify_majority: delta must lie in (0, 1)");
  if (delta >= base_error) return 1;
  auto r = static_cast<std::size_t>(std::ceil(18.0 * std::log(1.0 / delta) - 1e-9));
  if (r % 2 == 0) ++r;
  return r;
}

namespace detail {

template <typename T>
T majority(const std::vector<T>& values) {
  std::map<T, std::size_t> counts;
  for (const auto& v : values) ++counts[v];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

}  // namespace detail

/// Runs the base protocol r times on independent shared-randomness segments; each party outputs
/// the most frequent of its outcomes (ties to the smallest value).
template <typename InA, typename InB, typename OutA, typename OutB>
Protocol<InA, InB, OutA, OutB> amplify_majority(Protocol<InA, InB, OutA, OutB> base, double delta,
                                                double base_error = 1.0 / 3.0) {
  const auto reps = amplification_repetitions(delta, base_error);
  auto shared_base = std::make_shared<const Protocol<InA, InB, OutA, OutB>>(std::move(base));
  Protocol<InA, InB, OutA, OutB> p;
  p.name = shared_base->name + "-majority" + std::to_string(reps);
  p.alice = [shared_base, reps](const InA& in, Endpoint& ep, SharedRandomness& rng) {
    std::vector<OutA> outs;
    for (std::size_t i = 0; i < reps; ++i) {
      auto sub = rng.derive(0x100000 + i);
      outs.push_back(shared_base->alice(in, ep, sub));
    }
    return detail::majority(outs);
  };
  p.bob = [shared_base, reps](const InB& in, Endpoint& ep, SharedRandomness& rng) {
    std::vector<OutB> outs;
    for (std::size_t i = 0; i < reps; ++i) {
      auto sub = rng.derive(0x100000 + i);
      outs.push_back(shared_base->bob(in, ep, sub));
    }
    return detail::majority(outs);
  };
  return p;
}

}  // namespace vcdisj
