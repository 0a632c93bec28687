// Acceptance criteria 1-11. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "vcdisj.hpp"

using namespace vcdisj;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(t0);
  if (limit_s > 0 && secs >= limit_s) {
    out.ok = false;
    out.detail += " (time limit " + std::to_string(limit_s) + " s exceeded)";
  }
  if (!out.ok) ++failures;
  std::printf("[%s] criterion %d: %s | %s | %.3f s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(), out.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fixed(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

int main() {
  report(1, "VC dimension of the interval family equals 2d", 0, [] {
    Outcome o;
    for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}}) {
      const auto t0 = Clock::now();
      const auto inst = build_interval_instance(d * (m + 2), d);
      const auto fam = make_family(inst.ground(), enumerate_family(inst, FamilyKind::anchored));
      const auto res = vc_dimension(fam);
      const double secs = seconds_since(t0);
      // the witness must be shattered by direct trace enumeration
      std::set<Mask> traces;
      for (auto mem : fam.members) traces.insert(mem & res.witness);
      const bool witness_ok = traces.size() == (std::size_t{1} << std::popcount(res.witness));
      const bool ok = res.dimension == static_cast<std::size_t>(2 * d) && witness_ok && secs < 10.0;
      o.ok = o.ok && ok;
      o.detail += "(d=" + std::to_string(d) + ",m=" + std::to_string(m) + ") vc=" + std::to_string(res.dimension) +
                  " expected " + std::to_string(2 * d) + " in " + fixed(secs) + "s; ";
    }
    return o;
  });

  report(2, "Sauer-Shelah holds for every enumerated family", 0, [] {
    Outcome o;
    std::size_t families = 0;
    std::size_t violations = 0;
    for (const auto& [label, fam] : suite_families()) {
      ++families;
      const auto rep = sauer_shelah_check(fam);
      const std::set<Mask> distinct(fam.members.begin(), fam.members.end());
      const double v = static_cast<double>(rep.vc);
      const double bound = rep.vc == 0 ? 1.0 : std::pow(std::exp(1.0) * static_cast<double>(fam.ground_size()) / v, v);
      if (!rep.holds || static_cast<double>(distinct.size()) > bound || distinct.size() != rep.distinct_members) {
        ++violations;
        o.detail += "violation at " + label + "; ";
      }
    }
    o.ok = violations == 0 && families > 0;
    o.detail += std::to_string(families) + " families, " + std::to_string(violations) + " violations";
    return o;
  });

  report(3, "Augmented-Indexing reduction exhaustive", 0, [] {
    Outcome o;
    for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}}) {
      const auto t0 = Clock::now();
      const auto rep = check_reduction_augindex(d, m);
      const double secs = seconds_since(t0);
      const std::size_t len = static_cast<std::size_t>(d) * static_cast<std::size_t>(std::log2(m));
      const std::uint64_t expected = (std::uint64_t{1} << len) * len;
      o.ok = o.ok && rep.passed() && rep.cases == expected && secs < 1.0;
      o.detail += "(d=" + std::to_string(d) + ",m=" + std::to_string(m) + ") " + std::to_string(rep.cases) + "/" +
                  std::to_string(expected) + " cases, " + std::to_string(rep.failures) + " failures, " + fixed(secs) +
                  "s; ";
    }
    return o;
  });

  report(4, "Or-Disjointness reduction exhaustive", 0, [] {
    Outcome o;
    for (auto [d, k] : {std::pair<std::int64_t, std::size_t>{1, 2}, {2, 2}, {1, 3}}) {
      const auto t0 = Clock::now();
      const auto rep = check_reduction_ordisj(d, k);
      const double secs = seconds_since(t0);
      const auto sk = static_cast<std::uint64_t>((1U << k) - 1);
      std::uint64_t expected = 1;
      for (std::int64_t i = 0; i < 2 * d; ++i) expected *= sk;
      o.ok = o.ok && rep.passed() && rep.cases == expected && secs < 10.0;
      o.detail += "(d=" + std::to_string(d) + ",k=" + std::to_string(k) + ") " + std::to_string(rep.cases) + "/" +
                  std::to_string(expected) + " cases, " + std::to_string(rep.failures) + " failures; ";
    }
    return o;
  });

  report(5, "subset iff divisibility for k <= 8", 5.0, [] {
    Outcome o;
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= 8; ++k) {
      const auto rep = check_subset_divides(k);
      o.ok = o.ok && rep.passed() && rep.cases == (std::uint64_t{1} << (2 * k));
      total += rep.cases;
      if (!rep.passed()) o.detail += "k=" + std::to_string(k) + " fails at " + rep.counterexample + "; ";
    }
    o.detail += std::to_string(total) + " pairs checked";
    return o;
  });

  report(6, "grid claims with reconstruction round-trip", 30.0, [] {
    Outcome o;
    for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}}) {
      const auto rep = check_grid_claims(build_grid_instance(d * m * m, d));
      const auto expected = static_cast<std::uint64_t>(std::pow(m - 1, d) * std::pow(m, d));
      o.ok = o.ok && rep.passed() && rep.cases == expected;
      o.detail += "(d=" + std::to_string(d) + ",m=" + std::to_string(m) + ") " + std::to_string(rep.cases) +
                  " pairs, " + rep.note + ", " + std::to_string(rep.failures) + " failures; ";
    }
    return o;
  });

  report(7, "PROPERTY for every built grid instance with d <= 3, m <= 4", 0, [] {
    Outcome o;
    std::size_t instances = 0;
    for (std::int64_t d = 1; d <= 3; ++d)
      for (std::int64_t m = 2; m <= 4; ++m) {
        ++instances;
        const auto inst = build_grid_instance(d * m * m, d);
        const auto res = verify_property(inst);
        // lattice-level cross-check: no ground point on two lines from different grids
        bool lattice_ok = true;
        const auto ground = inst.ground();
        for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i)
          for (std::size_t j = i + 1; j < static_cast<std::size_t>(d); ++j)
            for (const auto& l1 : grid_lines(inst, i))
              for (const auto& l2 : grid_lines(inst, j))
                for (const auto& p : ground) lattice_ok = lattice_ok && !(l1.contains(p) && l2.contains(p));
        if (!res.holds || !lattice_ok) {
          o.ok = false;
          o.detail += "fails at d=" + std::to_string(d) + ",m=" + std::to_string(m) + "; ";
        }
      }
    o.detail += std::to_string(instances) + " instances";
    return o;
  });

  report(8, "GCD protocol exact on [1,60]^2 x 10 seeds; sparse extras rate <= 0.12", 0, [] {
    Outcome o;
    const auto proto = gcd_protocol(60, 0.1);
    std::uint64_t runs = 0;
    std::uint64_t wrong = 0;
    for (std::uint64_t a = 1; a <= 60; ++a)
      for (std::uint64_t b = 1; b <= 60; ++b)
        for (std::uint64_t s = 0; s < 10; ++s) {
          const auto out = run(proto, a, b, derive_seed(1, runs++));
          if (out.bob_output != std::gcd(a, b) || out.alice_output != std::gcd(a, b)) ++wrong;
        }
    const auto sparse = sparse_intersection_protocol({16, 2, 0.1});
    const std::size_t sparse_runs = 10000;
    std::size_t extras = 0;
    std::size_t missing = 0;
    for (std::size_t r = 0; r < sparse_runs; ++r) {
      const auto out = run(sparse, ElementSet{2, 3}, ElementSet{3, 7}, derive_seed(2, r));
      const std::set<std::uint64_t> got(out.bob_output.begin(), out.bob_output.end());
      if (!got.count(3)) ++missing;
      if (got.size() > 1) ++extras;
    }
    const double rate = static_cast<double>(extras) / sparse_runs;
    o.ok = runs == 36000 && wrong == 0 && missing == 0 && rate <= 0.12;
    o.detail = std::to_string(runs) + " gcd runs, " + std::to_string(wrong) + " wrong; sparse extras rate " +
               fixed(rate) + " over " + std::to_string(sparse_runs) + " runs, " + std::to_string(missing) +
               " missed true elements";
    return o;
  });

  report(9, "gcd cost scaling over k in {2^8,2^12,2^16,2^20}", 60.0, [] {
    Outcome o;
    std::vector<double> means;
    std::vector<double> ratios;
    std::uint64_t run_id = 0;
    for (unsigned e : {8U, 12U, 16U, 20U}) {
      const std::uint64_t k = std::uint64_t{1} << e;
      const auto proto = gcd_protocol(k, 0.1);
      const std::size_t pairs = 200;
      double bits = 0;
      for (std::size_t t = 0; t < pairs; ++t, ++run_id) {
        const auto seed = derive_seed(9, run_id);
        const std::uint64_t a = 1 + derive_seed(seed, 1) % k;
        const std::uint64_t b = 1 + derive_seed(seed, 2) % k;
        const auto out = run(proto, a, b, seed);
        if (out.bob_output != std::gcd(a, b)) o.ok = false;
        bits += static_cast<double>(out.transcript.total_bits());
      }
      means.push_back(bits / pairs);
      ratios.push_back(means.back() / e);
      o.detail += "k=2^" + std::to_string(e) + " mean " + fixed(means.back(), 2) + " bits (" +
                  fixed(ratios.back(), 3) + "/log2k); ";
    }
    for (std::size_t i = 1; i < means.size(); ++i)
      o.ok = o.ok && means[i] >= means[i - 1] && ratios[i] <= ratios[i - 1];
    return o;
  });

  report(10, "rank floor <= full-disclosure ceiling at d=1, m=2", 0, [] {
    Outcome o;
    const auto inst = build_interval_instance(4, 1);
    const auto rows = enumerate_family(inst, FamilyKind::left_anchored);
    const auto cols = enumerate_family(inst, FamilyKind::right_anchored);
    const auto mat = comm_matrix(make_family(inst.ground(), rows), make_family(inst.ground(), cols),
                                 CommPredicate::disjointness());
    const auto floor_bits = log_rank_bound(mat);
    const auto proto = full_disclosure_disj(inst, FamilyKind::left_anchored);
    std::size_t max_bits = 0;
    std::size_t min_bits = ~std::size_t{0};
    bool answers_ok = true;
    for (const auto& a : rows)
      for (const auto& b : cols) {
        const auto out = run(proto, a, b, 0);
        max_bits = std::max(max_bits, out.transcript.total_bits());
        min_bits = std::min(min_bits, out.transcript.total_bits());
        answers_ok = answers_ok && out.answer() == intersect(a, b).empty();
      }
    o.ok = floor_bits == 2 && max_bits == 2 && min_bits == 2 && answers_ok && floor_bits <= max_bits;
    o.detail = "rank " + std::to_string(rational_rank(mat)) + ", log-rank bound " + std::to_string(floor_bits) +
               ", full disclosure " + std::to_string(max_bits) + " bits";
    return o;
  });

  report(11, "learn reduction recovers both sets at d <= 2, m = 4", 0, [] {
    Outcome o;
    std::size_t pairs = 0;
    for (std::int64_t d : {1, 2}) {
      const auto inst = build_grid_instance(d * 16, d);
      const auto ip = default_intersection_protocol(inst);
      for (const auto& a : enumerate_family(inst, FamilyKind::slope_lines))
        for (const auto& b : enumerate_family(inst, FamilyKind::vertical_lines)) {
          if (intersect(a, b).size() != static_cast<std::size_t>(d)) continue;
          if (!satisfies_learn_promise(a, b, inst)) continue;
          ++pairs;
          const auto learned = learn_via_intersection(ip, a, b, inst, pairs);
          const auto plain = run(ip, a, b, pairs);
          const bool ok = learned.a_learned_by_bob.points == a.points &&
                          learned.b_learned_by_alice.points == b.points &&
                          learned.transcript.total_bits() == plain.transcript.total_bits();
          if (!ok) {
            o.ok = false;
            o.detail += "mismatch at a=" + std::to_string(a.params[0]) + "; ";
          }
        }
    }
    o.ok = o.ok && pairs > 0;
    o.detail += std::to_string(pairs) + " promise pairs";
    return o;
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
