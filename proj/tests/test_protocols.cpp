#include <gtest/gtest.h>

#include <numeric>

#include "vcdisj/protocols.hpp"

using namespace vcdisj;

namespace {

std::uint64_t euclid(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Direct lattice test for a T_1 parameter a and column offset r inside an m x m grid.
bool oracle_meets(std::int64_t a, std::int64_t r, std::int64_t m) {
  for (std::int64_t y = 0; y < m; ++y)
    if (a * y == (a - 1) * r) return true;
  return false;
}

}  // namespace

TEST(FullDisclosure, ElevenMembersCostFourBits) {
  const auto inst = build_interval_instance(6, 1);
  auto fam = enumerate_family(inst, FamilyKind::left_anchored);
  const auto right = enumerate_family(inst, FamilyKind::right_anchored);
  fam.insert(fam.end(), right.begin(), right.end() - 1);  // 11 members
  ASSERT_EQ(fam.size(), 11U);
  const auto p = full_disclosure_disj(fam);
  for (const auto& a : fam)
    for (const auto& b : right)
      for (std::uint64_t seed : {0ULL, 17ULL}) {
        const auto out = run(p, a, b, seed);
        ASSERT_EQ(out.transcript.messages().size(), 1U);
        EXPECT_EQ(out.transcript.total_bits(), 4U);
        EXPECT_TRUE(out.transcript.one_way());
        EXPECT_EQ(out.answer(), intersect(a, b).empty());
      }
}

TEST(FullDisclosure, CostExamples) {
  const auto i1 = build_interval_instance(6, 1);
  const auto r0 = enumerate_family(i1, FamilyKind::left_anchored);
  const auto rm = enumerate_family(i1, FamilyKind::right_anchored);
  EXPECT_EQ(run(full_disclosure_disj(i1, FamilyKind::left_anchored), r0[2], rm[1], 0).transcript.total_bits(), 3U);

  const auto single = full_disclosure_disj(std::vector<FamilyMember>{r0[0]});
  EXPECT_EQ(run(single, r0[0], rm[0], 0).transcript.total_bits(), 0U);

  const auto g2 = build_grid_instance(32, 2);
  const auto t1 = enumerate_family(g2, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(g2, FamilyKind::vertical_lines);
  EXPECT_EQ(run(full_disclosure_disj(g2, FamilyKind::slope_lines), t1[4], t2[5], 0).transcript.total_bits(), 4U);
}

TEST(FullDisclosure, RejectsForeignMember) {
  const auto i1 = build_interval_instance(6, 1);
  const auto p = full_disclosure_disj(i1, FamilyKind::left_anchored);
  const auto rm = enumerate_family(i1, FamilyKind::right_anchored);
  EXPECT_ANY_THROW(run(p, rm[0], rm[0], 0));
}

TEST(FullDisclosureIntersection, ComputesIntersection) {
  const auto g = build_grid_instance(32, 2);
  const auto t1 = enumerate_family(g, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(g, FamilyKind::vertical_lines);
  const auto p = full_disclosure_intersection(t1, t2);
  for (const auto& a : t1)
    for (const auto& b : t2) {
      const auto out = run(p, a, b, 0);
      EXPECT_EQ(out.alice_output, intersect(a, b));
      EXPECT_EQ(out.bob_output, intersect(a, b));
      EXPECT_EQ(out.transcript.total_bits(), 4U + 4U);
    }
}

TEST(SparseIntersection, Examples) {
  const SparseIntersectionParams params{16, 2, 0.1};
  const auto p = sparse_intersection_protocol(params);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto out = run(p, ElementSet{2, 3}, ElementSet{2, 3}, seed);
    EXPECT_EQ(out.bob_output, (ElementSet{2, 3}));
    EXPECT_EQ(out.alice_output, out.bob_output);
    EXPECT_EQ(out.transcript.rounds(), 2U);
  }
  const auto empty = run(p, ElementSet{}, ElementSet{5, 7}, 3);
  EXPECT_TRUE(empty.bob_output.empty());
  EXPECT_EQ(empty.transcript.messages()[0].bits(), bits_for(2));
}

TEST(SparseIntersection, TinyDeltaAlmostNeverReportsExtras) {
  const SparseIntersectionParams params{16, 2, std::ldexp(1.0, -20)};
  const auto p = sparse_intersection_protocol(params);
  std::size_t clean = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed)
    if (run(p, ElementSet{2, 3}, ElementSet{5, 7}, derive_seed(99, seed)).bob_output.empty()) ++clean;
  EXPECT_GE(clean, 9999U);
}

TEST(SparseIntersection, SupersetAndExtrasRate) {
  const SparseIntersectionParams params{64, 6, 0.1};
  const auto p = sparse_intersection_protocol(params);
  std::size_t extras = 0;
  const std::size_t runs = 10000;
  for (std::size_t r = 0; r < runs; ++r) {
    SharedRandomness pick(r);
    ElementSet a;
    ElementSet b;
    for (std::uint64_t e = 0; e < 64; ++e) {
      const auto v = pick.next() % 16;
      if (v == 0 && a.size() < 6) a.push_back(e);
      if (v == 1 && b.size() < 6) b.push_back(e);
      if (v == 2 && a.size() < 6 && b.size() < 6) {
        a.push_back(e);
        b.push_back(e);
      }
    }
    ElementSet truth;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(truth));
    const auto out = run(p, a, b, derive_seed(5, r));
    ASSERT_TRUE(std::includes(out.bob_output.begin(), out.bob_output.end(), truth.begin(), truth.end()));
    if (out.bob_output.size() > truth.size()) ++extras;
  }
  EXPECT_LE(static_cast<double>(extras) / runs, 0.12);
}

TEST(SparseIntersection, CostFormula) {
  const SparseIntersectionParams params{100, 8, 0.05};
  const ElementSet a{1, 2, 3, 50};
  const ElementSet b{2, 3, 99};
  const auto out = run(sparse_intersection_protocol(params), a, b, 1);
  const auto w = fingerprint_width(a.size(), params.max_size, params.delta);
  EXPECT_EQ(w, static_cast<unsigned>(std::ceil(std::log2(4.0 * 8 / 0.05))));
  EXPECT_EQ(out.transcript.messages()[0].bits(), bits_for(8) + a.size() * w);
  EXPECT_EQ(out.transcript.messages()[1].bits(), bits_for(8) + out.bob_output.size() * ceil_log2(100));
}

TEST(SparseIntersection, ValidatesInputs) {
  const auto p = sparse_intersection_protocol({16, 2, 0.1});
  EXPECT_THROW(run(p, ElementSet{3, 2}, ElementSet{}, 0), InvalidParameters);
  EXPECT_THROW(run(p, ElementSet{1, 2, 3}, ElementSet{}, 0), InvalidParameters);
  EXPECT_THROW(run(p, ElementSet{16}, ElementSet{}, 0), InvalidParameters);
}

TEST(ExponentCoding, RoundTripAndCost) {
  for (std::uint64_t alpha = 0; alpha < 300; ++alpha) {
    BitString s;
    append_exponent(s, alpha);
    EXPECT_EQ(s.size(), alpha == 0 ? 1U : 2U * std::bit_width(alpha));
    BitReader rd(s);
    EXPECT_EQ(read_exponent(rd), alpha);
    EXPECT_TRUE(rd.done());
  }
}

TEST(Gcd, Examples) {
  const auto p = gcd_protocol(60, 0.1);
  EXPECT_EQ(run(p, std::uint64_t{12}, std::uint64_t{18}, 0).answer(), 6U);
  EXPECT_EQ(run(p, std::uint64_t{7}, std::uint64_t{7}, 0).answer(), 7U);
  EXPECT_EQ(run(p, std::uint64_t{1}, std::uint64_t{1}, 0).answer(), 1U);
  const auto one = run(p, std::uint64_t{1}, std::uint64_t{60}, 0);
  EXPECT_EQ(one.answer(), 1U);
  // empty support: only the size header travels, and nothing comes back but a count
  EXPECT_EQ(one.transcript.messages().size(), 2U);
  EXPECT_THROW(run(p, std::uint64_t{0}, std::uint64_t{5}, 0), InvalidParameters);
  EXPECT_THROW(run(p, std::uint64_t{61}, std::uint64_t{5}, 0), InvalidParameters);
}

TEST(Gcd, ExhaustiveWithManySeeds) {
  const auto p = gcd_protocol(60, 0.1);
  std::uint64_t id = 0;
  for (std::uint64_t a = 1; a <= 60; ++a)
    for (std::uint64_t b = 1; b <= 60; ++b)
      for (int s = 0; s < 100; ++s) {
        const auto out = run(p, a, b, derive_seed(2024, id++));
        ASSERT_EQ(out.bob_output, euclid(a, b)) << a << "," << b;
        ASSERT_EQ(out.alice_output, euclid(a, b));
      }
}

TEST(Gcd, Deterministic) {
  const auto p = gcd_protocol(1000, 0.2);
  for (std::uint64_t s = 0; s < 20; ++s)
    EXPECT_EQ(run(p, std::uint64_t{840}, std::uint64_t{990}, s).transcript,
              run(p, std::uint64_t{840}, std::uint64_t{990}, s).transcript);
}

TEST(GridLine, Examples) {
  const GridDecisionParams m8{8, 0.1};
  const auto p = grid_line_protocol(m8);
  EXPECT_TRUE(run(p, AnchorLine::from_slope_parameter(4), std::int64_t{4}, 0).answer());   // meets at (4,3)
  EXPECT_FALSE(run(p, AnchorLine::from_slope_parameter(2), std::int64_t{3}, 0).answer());  // 2 does not divide 3
  EXPECT_TRUE(run(p, AnchorLine::from_slope_parameter(2), std::int64_t{0}, 0).answer());   // anchor column
  EXPECT_TRUE(run(p, AnchorLine::from_slope_parameter(1), std::int64_t{5}, 0).answer());   // horizontal
}

TEST(GridLine, GeneralLinesIncludingSteep) {
  for (std::int64_t m : {3, 5, 8, 13}) {
    const auto p = grid_line_protocol({m, 0.1});
    for (std::int64_t rise = 1; rise < m; ++rise)
      for (std::int64_t runv = 1; runv < m; ++runv) {
        if (std::gcd(rise, runv) != 1) continue;
        for (std::int64_t r = 0; r < m; ++r) {
          bool truth = false;
          for (std::int64_t y = 0; y < m; ++y) truth = truth || runv * y == rise * r;
          const AnchorLine line{AnchorLine::Kind::sloped, rise, runv};
          const auto out = run(p, line, r, derive_seed(m, static_cast<std::uint64_t>(rise * 100 + runv * 10 + r)));
          ASSERT_EQ(out.bob_output, truth) << "m=" << m << " " << rise << "/" << runv << " r=" << r;
          ASSERT_EQ(out.alice_output, truth);
        }
      }
    const AnchorLine vertical{AnchorLine::Kind::vertical, 1, 0};
    for (std::int64_t r = 0; r < m; ++r) EXPECT_EQ(run(p, vertical, r, 0).answer(), r == 0);
  }
}

TEST(LineDisj, AgreesWithExplicitIntersection) {
  for (std::int64_t d : {1, 2}) {
    const auto inst = build_grid_instance(d * 64, d);
    const auto p = line_disj_protocol(inst, 0.1);
    const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
    const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
    std::uint64_t id = 0;
    for (const auto& a : t1)
      for (const auto& b : t2) {
        const bool truth = intersect(a, b).empty();
        for (int s = 0; s < 30; ++s) {
          const auto out = run(p, a, b, derive_seed(d, id++));
          ASSERT_EQ(out.bob_output, truth);
          ASSERT_EQ(out.alice_output, truth);
        }
      }
  }
}

TEST(LineDisj, PerGridOracle) {
  const auto inst = build_grid_instance(64, 1);
  const auto p = line_disj_protocol(inst, 0.1);
  for (std::int64_t a = 1; a < 8; ++a)
    for (std::int64_t r = 0; r < 8; ++r)
      EXPECT_EQ(run(p, generate_T1(inst, {a}), generate_T2(inst, {r}), 0).answer(), !oracle_meets(a, r, 8));
}

TEST(LineDisj, RejectsMismatchedInstance) {
  const auto g1 = build_grid_instance(16, 1);
  const auto g2 = build_grid_instance(64, 1);
  const auto p = line_disj_protocol(g1, 0.1);
  EXPECT_THROW(run(p, generate_T1(g2, {2}), generate_T2(g1, {2}), 0), InstanceMismatch);
}

TEST(Amplify, Repetitions) {
  EXPECT_EQ(amplification_repetitions(1.0 / 3.0), 1U);
  EXPECT_EQ(amplification_repetitions(0.5), 1U);
  EXPECT_EQ(amplification_repetitions(0.01), 83U);
  EXPECT_EQ(amplification_repetitions(0.1) % 2, 1U);
  EXPECT_GE(static_cast<double>(amplification_repetitions(0.1)), 18.0 * std::log(10.0));
  EXPECT_THROW(amplification_repetitions(0.0), InvalidParameters);
}

TEST(Amplify, DeterministicBaseUnchanged) {
  const auto base = gcd_protocol(60, 0.1);
  const auto amp = amplify_majority(base, 0.01);
  for (std::uint64_t a : {12ULL, 35ULL, 60ULL}) {
    const auto out = run(amp, a, std::uint64_t{42}, 3);
    EXPECT_EQ(out.answer(), euclid(a, 42));
    EXPECT_GE(out.transcript.messages().size(), 83U);
  }
}

TEST(Amplify, MajorityCorrectsNoisyBase) {
  // Base protocol answers correctly unless its shared coin lands in the lowest quarter.
  using Noisy = Protocol<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;
  Noisy noisy;
  noisy.alice = [](const std::uint64_t& a, Endpoint& ep, SharedRandomness&) {
    ep.send_uint(a, 8);
    return std::uint64_t{0};
  };
  noisy.bob = [](const std::uint64_t&, Endpoint& ep, SharedRandomness& rng) {
    const auto v = ep.receive_uint(8);
    return rng.next() < (~std::uint64_t{0} / 4) ? v + 1 : v;
  };
  const auto amp = amplify_majority(noisy, 0.001, 0.25);
  std::size_t wrong = 0;
  for (std::uint64_t s = 0; s < 500; ++s)
    if (run(amp, std::uint64_t{9}, std::uint64_t{0}, s).bob_output != 9) ++wrong;
  EXPECT_LE(wrong, 2U);
}
