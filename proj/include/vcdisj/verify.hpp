#pragma once

// Brute-force oracles for the structural claims. Every check evaluates explicit point sets or
// direct integer arithmetic and compares against what the constructions assert.

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vcdisj/encoding.hpp"
#include "vcdisj/protocols.hpp"
#include "vcdisj/reductions.hpp"
#include "vcdisj/setsystems.hpp"
#include "vcdisj/vcdim.hpp"

namespace vcdisj {

struct ClaimReport {
  std::string claim;
  std::string params;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string counterexample;  // first failing case; empty iff failures == 0
  std::string note;            // measured quantities worth reporting (rates, dimensions)
  double seconds = 0;

  bool passed() const noexcept { return failures == 0 && cases > 0; }
};

namespace detail {

class ReportBuilder {
 public:
  ReportBuilder(std::string claim, std::string params) : start_(std::chrono::steady_clock::now()) {
    rep_.claim = std::move(claim);
    rep_.params = std::move(params);
  }

  void pass() { ++rep_.cases; }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++rep_.cases;
    if (ok) return;
    if (rep_.failures++ == 0) rep_.counterexample = describe();
  }

  void note(std::string text) { rep_.note = std::move(text); }

  ClaimReport finish() {
    rep_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return rep_;
  }

 private:
  ClaimReport rep_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string join(const std::vector<std::int64_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

inline std::string describe(const FamilyMember& mem) {
  std::ostringstream os;
  os << to_string(mem.family) << '[' << join(mem.params) << ']';
  return os.str();
}

inline std::string dm(std::int64_t d, std::int64_t m) { return "d=" + std::to_string(d) + ",m=" + std::to_string(m); }

/// Lattice point where T_1 line i of `a` meets T_2 column i of `b` inside grid i, by exact
/// line intersection.
inline std::optional<Point> block_meet(const GridInstance& inst, const FamilyMember& a, const FamilyMember& b,
                                       std::size_t i) {
  const auto meet = intersect_lines(block_line(inst, a, i), block_line(inst, b, i));
  if (meet.kind != LineMeet::point) return std::nullopt;
  const auto& p = *meet.point;
  if (!p.x.is_integer() || !p.y.is_integer()) return std::nullopt;
  const Point lattice{p.x.num, p.y.num};
  if (!inst.box(i).contains(lattice)) return std::nullopt;
  return lattice;
}

inline std::vector<BitString> all_strings(std::size_t len) {
  std::vector<BitString> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) out.push_back(BitString::from_uint(v, len));
  return out;
}

// every d-tuple over `choices`
inline std::vector<std::vector<BitString>> all_tuples(const std::vector<BitString>& choices, std::size_t d) {
  std::vector<std::vector<BitString>> out{{}};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::vector<BitString>> next;
    for (const auto& t : out)
      for (const auto& c : choices) {
        auto u = t;
        u.push_back(c);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// A & B nonempty iff some block's intervals overlap inside J_{p_i}, over R_0 x R_{m+1}.
inline ClaimReport check_interval_claim(const IntervalInstance& inst) {
  detail::ReportBuilder rb("interval-claim", detail::dm(inst.d(), inst.m()));
  const auto lefts = enumerate_family(inst, FamilyKind::left_anchored);
  const auto rights = enumerate_family(inst, FamilyKind::right_anchored);
  for (const auto& a : lefts)
    for (const auto& b : rights) {
      const bool meet = !intersect(a, b).empty();
      bool some_block = false;
      for (std::size_t i = 0; i < static_cast<std::size_t>(inst.d()); ++i) {
        const auto [alo, ahi] = block_interval(inst, a, i);
        const auto [blo, bhi] = block_interval(inst, b, i);
        const auto lo = std::max(alo, blo);
        const auto hi = std::min(ahi, bhi);
        if (lo <= hi && lo >= inst.block_lo(i) && hi <= inst.block_hi(i)) some_block = true;
      }
      rb.check(meet == some_block, [&] { return detail::describe(a) + " x " + detail::describe(b); });
    }
  return rb.finish();
}

/// Per-block structure of the Augmented Indexing encoding, for every (x, j):
/// blocks other than i* are disjoint; block i* is disjoint iff val(b) <= val(a) iff x_j = 1.
inline ClaimReport check_observation_blocks(std::int64_t d, std::int64_t m) {
  const auto inst = build_interval_instance(d * (m + 2), d);
  detail::ReportBuilder rb("observation-blocks", detail::dm(d, m));
  const auto bits = block_bits(inst);
  const auto len = static_cast<std::size_t>(d) * bits;
  for (const auto& x : detail::all_strings(len))
    for (std::size_t j = 1; j <= len; ++j) {
      const auto a = augindex_encode_alice(x, inst);
      const auto b = augindex_encode_bob(j, x.slice(0, j - 1), inst);
      const std::size_t star = (j - 1) / bits;
      bool ok = true;
      for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
        const auto block = inst.block(i);
        const bool disjoint = set_intersection(set_intersection(a.points, block), b.points).empty();
        if (i != star) {
          ok = ok && disjoint;
          continue;
        }
        const auto va = val(x.slice(i * bits, bits));
        BitString y = x.slice(0, j - 1);
        y.push_back(true);
        y.append(BitString::zeros(len - j));
        const auto vb = val(y.slice(i * bits, bits));
        ok = ok && (disjoint == (vb <= va)) && ((vb <= va) == x[j - 1]);
      }
      rb.check(ok, [&] { return "x=" + x.to_string() + " j=" + std::to_string(j); });
    }
  return rb.finish();
}

/// Over T_1 x T_2: intersection iff some grid's lines meet at a grid point; the meet condition
/// equals a | b with the point inside the grid; under |A & B| = d each grid gives one point and
/// reconstruction from either side recovers the other set.
inline ClaimReport check_grid_claims(const GridInstance& inst) {
  detail::ReportBuilder rb("grid-claims", detail::dm(inst.d(), inst.m()));
  const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
  const auto d = static_cast<std::size_t>(inst.d());
  const auto m = inst.m();
  std::uint64_t promise_cases = 0;
  for (const auto& a : t1)
    for (const auto& b : t2) {
      const auto meet = intersect(a, b);
      bool ok = true;
      bool any_block = false;
      std::size_t blocks_meeting = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const auto pt = detail::block_meet(inst, a, b, i);
        const auto ai = a.params[i];
        const auto bi = b.params[i];
        const bool lattice_rule = bi % ai == 0 && bi - bi / ai <= m - 1 && bi <= m - 1;
        ok = ok && (pt.has_value() == lattice_rule);
        if (pt) {
          any_block = true;
          ++blocks_meeting;
          ok = ok && meet.contains(*pt);
        }
      }
      ok = ok && (!meet.empty() == any_block);
      if (meet.size() == d) {
        ok = ok && blocks_meeting == d;
        if (satisfies_learn_promise(a, b, inst)) {
          ++promise_cases;
          ok = ok && reconstruct_from_intersection(b, meet, inst).points == a.points &&
               reconstruct_from_intersection(a, meet, inst).points == b.points;
        }
      }
      rb.check(ok, [&] { return detail::describe(a) + " x " + detail::describe(b); });
    }
  rb.note("promise_pairs=" + std::to_string(promise_cases));
  return rb.finish();
}

/// x subset of y iff phi(x) divides phi(y), over {0,1}^k x {0,1}^k.
inline ClaimReport check_subset_divides(std::size_t k) {
  detail::require(k <= 12, "check_subset_divides: k above cap 12");
  detail::ReportBuilder rb("subset-divides", "k=" + std::to_string(k));
  const auto pt = first_k_primes(k);
  const auto strings = detail::all_strings(k);
  std::vector<std::uint64_t> phis;
  for (const auto& s : strings) phis.push_back(phi(s, pt));
  for (std::uint64_t x = 0; x < strings.size(); ++x)
    for (std::uint64_t y = 0; y < strings.size(); ++y) {
      const bool subset = (x & ~y) == 0;
      const bool divides = phis[y] % phis[x] == 0;
      rb.check(subset == divides, [&] { return "x=" + strings[x].to_string() + " y=" + strings[y].to_string(); });
    }
  return rb.finish();
}

/// Decoded bit equals x_j for every x and j, with disjointness evaluated on explicit sets.
inline ClaimReport check_reduction_augindex(std::int64_t d, std::int64_t m) {
  const auto inst = build_interval_instance(d * (m + 2), d);
  detail::ReportBuilder rb("reduction-augindex", detail::dm(d, m));
  const auto len = static_cast<std::size_t>(d) * block_bits(inst);
  for (const auto& x : detail::all_strings(len))
    for (std::size_t j = 1; j <= len; ++j) {
      const auto a = augindex_encode_alice(x, inst);
      const auto b = augindex_encode_bob(j, x.slice(0, j - 1), inst);
      const bool decoded = augindex_decode(intersect(a, b).empty());
      rb.check(decoded == x[j - 1], [&] { return "x=" + x.to_string() + " j=" + std::to_string(j); });
    }
  return rb.finish();
}

/// Decoded OR equals OR_i [x_i & y_i = 0] for every input pair in S_k^d x S_k^d.
inline ClaimReport check_reduction_ordisj(std::int64_t d, std::size_t k) {
  const auto setup = ordisj_setup(d, k);
  detail::ReportBuilder rb("reduction-ordisj", "d=" + std::to_string(d) + ",k=" + std::to_string(k) +
                                                   ",m=" + std::to_string(setup.instance.m()));
  std::vector<BitString> sk;
  for (auto& s : detail::all_strings(k))
    if (s.popcount() > 0) sk.push_back(std::move(s));
  const auto tuples = detail::all_tuples(sk, static_cast<std::size_t>(d));
  for (const auto& xs : tuples) {
    const auto a = ordisj_encode_alice(xs, setup.instance, setup.primes);
    for (const auto& ys : tuples) {
      const auto b = ordisj_encode_bob(ys, setup.instance, setup.primes);
      bool direct = false;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        bool disjoint = true;
        for (std::size_t t = 0; t < k; ++t) disjoint = disjoint && !(xs[i][t] && ys[i][t]);
        direct = direct || disjoint;
      }
      rb.check(ordisj_decode(intersect(a, b).empty()) == direct, [&] {
        std::string s = "x=";
        for (const auto& x : xs) s += x.to_string() + ' ';
        s += "y=";
        for (const auto& y : ys) s += y.to_string() + ' ';
        return s;
      });
    }
  }
  return rb.finish();
}

/// Both parties' outputs equal Euclid's gcd for every (a, b) in [1, k]^2 and `trials` seeds each.
inline ClaimReport check_gcd_protocol(std::uint64_t k, std::size_t trials, double delta, std::uint64_t seed) {
  detail::require(k * k * trials <= 10'000'000, "check_gcd_protocol: case count above cap");
  detail::ReportBuilder rb("gcd-protocol", "k=" + std::to_string(k) + ",trials=" + std::to_string(trials) +
                                               ",delta=" + std::to_string(delta));
  const auto proto = gcd_protocol(k, delta);
  std::uint64_t run_id = 0;
  std::uint64_t bits = 0;
  for (std::uint64_t a = 1; a <= k; ++a)
    for (std::uint64_t b = 1; b <= k; ++b)
      for (std::size_t t = 0; t < trials; ++t) {
        const auto s = derive_seed(seed, run_id++);
        const auto out = run(proto, a, b, s);
        const auto expect = gcd(a, b);
        bits += out.transcript.total_bits();
        rb.check(out.alice_output == expect && out.bob_output == expect, [&] {
          return "a=" + std::to_string(a) + " b=" + std::to_string(b) + " seed=" + std::to_string(s) +
                 " got=" + std::to_string(out.bob_output);
        });
      }
  rb.note("mean_bits=" + std::to_string(static_cast<double>(bits) / static_cast<double>(run_id)));
  return rb.finish();
}

/// Returned set contains the true intersection on every run; extras rate at most `max_rate`.
inline ClaimReport check_sparse_extras(const ElementSet& s_a, const ElementSet& s_b,
                                       const SparseIntersectionParams& params, std::size_t runs, double max_rate,
                                       std::uint64_t seed) {
  detail::ReportBuilder rb("sparse-intersection", "delta=" + std::to_string(params.delta) + ",runs=" +
                                                      std::to_string(runs));
  ElementSet truth;
  std::set_intersection(s_a.begin(), s_a.end(), s_b.begin(), s_b.end(), std::back_inserter(truth));
  const auto proto = sparse_intersection_protocol(params);
  std::size_t with_extras = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto out = run(proto, s_a, s_b, derive_seed(seed, r));
    const bool superset = std::includes(out.bob_output.begin(), out.bob_output.end(), truth.begin(), truth.end());
    if (out.bob_output.size() > truth.size()) ++with_extras;
    rb.check(superset && out.alice_output == out.bob_output, [&] { return "run=" + std::to_string(r); });
  }
  const double rate = static_cast<double>(with_extras) / static_cast<double>(runs);
  rb.check(rate <= max_rate, [&] { return "extras rate " + std::to_string(rate) + " > " + std::to_string(max_rate); });
  rb.note("extras_rate=" + std::to_string(rate));
  return rb.finish();
}

/// No two cross-grid lines meet inside the ground set.
inline ClaimReport check_property(const GridInstance& inst) {
  detail::ReportBuilder rb("property", detail::dm(inst.d(), inst.m()));
  const auto res = verify_property(inst);
  rb.check(res.holds, [&] {
    std::ostringstream os;
    os << "grids " << res.witness_grids[0] << "," << res.witness_grids[1] << " meet at " << *res.witness;
    return os.str();
  });
  rb.note("line_pairs=" + std::to_string(res.line_pairs_checked));
  return rb.finish();
}

/// The line-disjointness protocol agrees with explicit intersection on all of T_1 x T_2.
inline ClaimReport check_line_disj(const GridInstance& inst, double delta, std::size_t seeds, std::uint64_t seed) {
  detail::ReportBuilder rb("line-disj-protocol", detail::dm(inst.d(), inst.m()) + ",seeds=" + std::to_string(seeds));
  const auto proto = line_disj_protocol(inst, delta);
  const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
  std::uint64_t run_id = 0;
  std::uint64_t bits = 0;
  for (const auto& a : t1)
    for (const auto& b : t2) {
      const bool truth = intersect(a, b).empty();
      for (std::size_t s = 0; s < seeds; ++s) {
        const auto out = run(proto, a, b, derive_seed(seed, run_id++));
        bits += out.transcript.total_bits();
        rb.check(out.bob_output == truth && out.alice_output == truth,
                 [&] { return detail::describe(a) + " x " + detail::describe(b); });
      }
    }
  rb.note("mean_bits=" + std::to_string(static_cast<double>(bits) / static_cast<double>(run_id)));
  return rb.finish();
}

/// Learn recovers both sets for every promise pair, at exactly the intersection protocol's cost.
inline ClaimReport check_learn(const GridInstance& inst) {
  detail::ReportBuilder rb("learn-reduction", detail::dm(inst.d(), inst.m()));
  const auto intersection = default_intersection_protocol(inst);
  const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
  std::uint64_t seed = 0;
  for (const auto& a : t1)
    for (const auto& b : t2) {
      if (!satisfies_learn_promise(a, b, inst)) continue;
      const auto learned = learn_via_intersection(intersection, a, b, inst, seed);
      const auto plain = run(intersection, a, b, seed);
      ++seed;
      rb.check(learned.a_learned_by_bob.points == a.points && learned.b_learned_by_alice.points == b.points &&
                   learned.transcript.total_bits() == plain.transcript.total_bits(),
               [&] { return detail::describe(a) + " x " + detail::describe(b); });
    }
  return rb.finish();
}

/// VC dimension of an interval family compared with an expected value.
inline ClaimReport check_vc_dimension(const IntervalInstance& inst, FamilyKind which, std::size_t expected) {
  detail::ReportBuilder rb(std::string("vc-dimension-") + to_string(which), detail::dm(inst.d(), inst.m()));
  const auto fam = make_family(inst.ground(), enumerate_family(inst, which));
  const auto res = vc_dimension(fam);
  rb.check(res.dimension == expected, [&] {
    return "vc=" + std::to_string(res.dimension) + " expected " + std::to_string(expected);
  });
  rb.note("vc=" + std::to_string(res.dimension));
  return rb.finish();
}

inline ClaimReport check_sauer_shelah(const Family& fam, const std::string& label) {
  detail::ReportBuilder rb("sauer-shelah", label);
  const auto rep = sauer_shelah_check(fam);
  rb.check(rep.holds, [&] {
    return std::to_string(rep.distinct_members) + " members > bound " + std::to_string(rep.bound);
  });
  rb.note("members=" + std::to_string(rep.distinct_members) + ",N=" + std::to_string(rep.ground_size) +
          ",vc=" + std::to_string(rep.vc) + ",bound=" + std::to_string(rep.bound));
  return rb.finish();
}

/// Every family the suite enumerates, labelled.
inline std::vector<std::pair<std::string, Family>> suite_families() {
  std::vector<std::pair<std::string, Family>> out;
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {1, 4}, {2, 4}, {1, 8}}) {
    const auto inst = build_interval_instance(d * (m + 2), d);
    auto add = [&](const std::string& name, std::vector<FamilyMember> mems) {
      out.emplace_back("interval " + detail::dm(d, m) + " " + name, make_family(inst.ground(), mems));
    };
    auto r0 = enumerate_family(inst, FamilyKind::left_anchored);
    auto rm = enumerate_family(inst, FamilyKind::right_anchored);
    add("R0", r0);
    add("Rm1", rm);
    auto both = r0;
    both.insert(both.end(), rm.begin(), rm.end());
    add("R0+Rm1", both);
    add("R", enumerate_family(inst, FamilyKind::anchored));
  }
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}}) {
    const auto inst = build_grid_instance(d * m * m, d);
    auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
    auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
    out.emplace_back("grid " + detail::dm(d, m) + " T1", make_family(inst.ground(), t1));
    out.emplace_back("grid " + detail::dm(d, m) + " T2", make_family(inst.ground(), t2));
    auto both = t1;
    both.insert(both.end(), t2.begin(), t2.end());
    out.emplace_back("grid " + detail::dm(d, m) + " T1+T2", make_family(inst.ground(), both));
  }
  return out;
}

/// The full exhaustive suite at its fixed parameter caps.
inline std::vector<ClaimReport> run_all_claims(std::uint64_t seed = 1) {
  std::vector<ClaimReport> out;
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}}) {
    out.push_back(check_interval_claim(build_interval_instance(d * (m + 2), d)));
    out.push_back(check_observation_blocks(d, m));
    out.push_back(check_reduction_augindex(d, m));
  }
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}}) {
    const auto inst = build_interval_instance(d * (m + 2), d);
    out.push_back(check_vc_dimension(inst, FamilyKind::anchored, static_cast<std::size_t>(2 * d)));
  }
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}}) {
    const auto inst = build_grid_instance(d * m * m, d);
    out.push_back(check_grid_claims(inst));
  }
  for (std::int64_t d = 1; d <= 3; ++d)
    for (std::int64_t m = 2; m <= 4; ++m) out.push_back(check_property(build_grid_instance(d * m * m, d)));
  for (auto [d, k] : {std::pair<std::int64_t, std::size_t>{1, 2}, {2, 2}, {1, 3}})
    out.push_back(check_reduction_ordisj(d, k));
  for (std::size_t k = 1; k <= 8; ++k) out.push_back(check_subset_divides(k));
  for (auto d : {1, 2}) out.push_back(check_learn(build_grid_instance(d * 16, d)));
  for (const auto& [label, fam] : suite_families()) out.push_back(check_sauer_shelah(fam, label));
  out.push_back(check_gcd_protocol(60, 10, 0.1, seed));
  out.push_back(check_sparse_extras({2, 3}, {5, 7}, {16, 2, 0.1}, 10000, 0.12, seed));
  return out;
}

inline void write_reports_csv(std::ostream& os, const std::vector<ClaimReport>& reports) {
  os << "claim,params,cases,failures,status,note,counterexample\n";
  for (const auto& r : reports)
    os << r.claim << ",\"" << r.params << "\"," << r.cases << ',' << r.failures << ','
       << (r.passed() ? "pass" : "FAIL") << ",\"" << r.note << "\",\"" << r.counterexample
       << "\"\n";
}

inline void write_reports_pretty(std::ostream& os, const std::vector<ClaimReport>& reports) {
  for (const auto& r : reports) {
    os << (r.passed() ? "[pass] " : "[FAIL] ") << r.claim << " (" << r.params << ") cases=" << r.cases
       << " failures=" << r.failures;
    if (!r.note.empty()) os << " " << r.note;
    os << '\n';
    if (!r.counterexample.empty()) os << "       counterexample: " << r.counterexample << '\n';
  }
}

}  // namespace vcdisj
