#include <gtest/gtest.h>

#include "vcdisj/reductions.hpp"

using namespace vcdisj;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

PointSet xs(std::int64_t lo, std::int64_t hi) { return PointSet::on_line(lo, hi); }

}  // namespace

TEST(AugIndexEncode, AliceExamples) {
  const auto i1 = build_interval_instance(6, 1);
  EXPECT_EQ(augindex_encode_alice(bs("10"), i1).points, xs(0, 2));
  EXPECT_EQ(augindex_encode_alice(bs("00"), i1).points, xs(0, 4));
  const auto i2 = build_interval_instance(12, 2);
  const auto a = augindex_encode_alice(bs("1001"), i2);
  EXPECT_EQ(a.params, (std::vector<std::int64_t>{4 - 2 + 1, 4 - 1 + 1}));
  EXPECT_EQ(a.points, set_union(xs(0, 2), xs(7, 10)));
  EXPECT_THROW(augindex_encode_alice(bs("101"), i2), InvalidParameters);
}

TEST(AugIndexEncode, BobExamples) {
  const auto i1 = build_interval_instance(6, 1);
  EXPECT_EQ(augindex_encode_bob(2, bs("1"), i1).points, xs(2, 5));
  EXPECT_EQ(augindex_encode_bob(1, bs(""), i1).points, xs(3, 5));
  const auto i2 = build_interval_instance(12, 2);
  EXPECT_EQ(augindex_encode_bob(3, bs("10"), i2).points, generate_right(i2, {2, 2}).points);
  EXPECT_THROW(augindex_encode_bob(3, bs("1"), i2), InvalidParameters);
  EXPECT_THROW(augindex_encode_bob(5, bs("1010"), i2), InvalidParameters);
  EXPECT_THROW(augindex_encode_bob(0, bs(""), i2), InvalidParameters);
}

TEST(AugIndexDecode, Examples) {
  EXPECT_FALSE(augindex_decode(false));
  EXPECT_TRUE(augindex_decode(true));
  const auto i1 = build_interval_instance(6, 1);
  const bool disj = intersect(augindex_encode_alice(bs("10"), i1), augindex_encode_bob(2, bs("1"), i1)).empty();
  EXPECT_FALSE(disj);
  EXPECT_EQ(augindex_decode(disj), false);
}

TEST(AugIndex, EndToEndExhaustive) {
  for (auto [d, m] : {std::pair<std::int64_t, std::int64_t>{1, 4}, {2, 4}, {1, 8}, {3, 4}}) {
    const auto inst = build_interval_instance(d * (m + 2), d);
    const auto len = static_cast<std::size_t>(d) * block_bits(inst);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const auto x = BitString::from_uint(v, len);
      for (std::size_t j = 1; j <= len; ++j) {
        const auto a = augindex_encode_alice(x, inst);
        const auto b = augindex_encode_bob(j, x.slice(0, j - 1), inst);
        ASSERT_EQ(augindex_decode(intersect(a, b).empty()), x[j - 1]) << x.to_string() << " j=" << j;
      }
    }
  }
}

TEST(AugIndex, ProtocolIsOneWayAtDisjointnessCost) {
  const auto inst = build_interval_instance(12, 2);
  const auto p = augindex_protocol(inst, full_disclosure_disj(inst, FamilyKind::left_anchored));
  for (std::uint64_t v = 0; v < 16; ++v) {
    const auto x = BitString::from_uint(v, 4);
    for (std::size_t j = 1; j <= 4; ++j) {
      const auto out = run(p, x, AugIndexQuery{j, x.slice(0, j - 1)}, v);
      EXPECT_EQ(out.answer(), x[j - 1]);
      EXPECT_TRUE(out.transcript.one_way());
      EXPECT_EQ(out.transcript.total_bits(), ceil_log2(36));
    }
  }
}

TEST(OrDisjEncode, AliceExamples) {
  const auto setup = ordisj_setup(1, 2);
  EXPECT_EQ(setup.instance.m(), 7);
  EXPECT_EQ(setup.primes.primes, (std::vector<std::uint64_t>{2, 3}));
  const auto a = ordisj_encode_alice({bs("10")}, setup.instance, setup.primes);
  EXPECT_EQ(a.params, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(a.points, generate_T1(setup.instance, {2}).points);
  EXPECT_EQ(ordisj_encode_alice({bs("11")}, setup.instance, setup.primes).params, (std::vector<std::int64_t>{6}));
  EXPECT_THROW(ordisj_encode_alice({bs("00")}, setup.instance, setup.primes), InvalidParameters);
}

TEST(OrDisjEncode, PhiOutOfRangeRejected) {
  const auto small = build_grid_instance(16, 1);  // m = 4, phi(11) = 6 > 3
  EXPECT_THROW(ordisj_encode_alice({bs("11")}, small, first_k_primes(2)), InvalidParameters);
}

TEST(OrDisjEncode, BobExamples) {
  const auto s1 = ordisj_setup(1, 2);
  EXPECT_EQ(ordisj_encode_bob({bs("01")}, s1.instance, s1.primes).params, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(ordisj_encode_bob({bs("11")}, s1.instance, s1.primes).params, (std::vector<std::int64_t>{1}));
  const auto s2 = ordisj_setup(2, 2);
  EXPECT_EQ(ordisj_encode_bob({bs("10"), bs("01")}, s2.instance, s2.primes).params, (std::vector<std::int64_t>{3, 2}));
}

TEST(OrDisjDecode, Examples) {
  const auto s = ordisj_setup(1, 2);
  auto decode = [&](const char* x, const char* y) {
    const auto a = ordisj_encode_alice({bs(x)}, s.instance, s.primes);
    const auto b = ordisj_encode_bob({bs(y)}, s.instance, s.primes);
    return ordisj_decode(intersect(a, b).empty());
  };
  EXPECT_TRUE(decode("10", "01"));
  EXPECT_FALSE(decode("10", "10"));
  EXPECT_FALSE(ordisj_decode(true));
  EXPECT_TRUE(ordisj_decode(false));
}

TEST(OrDisj, ProtocolOverLineDisj) {
  const auto setup = ordisj_setup(2, 2);
  const auto p = ordisj_protocol(setup, line_disj_protocol(setup.instance, 0.1));
  const std::vector<BitString> sk{bs("01"), bs("10"), bs("11")};
  std::uint64_t seed = 0;
  for (const auto& x1 : sk)
    for (const auto& x2 : sk)
      for (const auto& y1 : sk)
        for (const auto& y2 : sk) {
          auto disjoint = [](const BitString& u, const BitString& v) {
            for (std::size_t t = 0; t < u.size(); ++t)
              if (u[t] && v[t]) return false;
            return true;
          };
          const bool direct = disjoint(x1, y1) || disjoint(x2, y2);
          EXPECT_EQ(run(p, std::vector<BitString>{x1, x2}, std::vector<BitString>{y1, y2}, seed++).answer(), direct);
        }
}

TEST(Reconstruct, Examples) {
  const auto g = build_grid_instance(16, 1);
  const auto col = generate_T2(g, {2});
  const auto line = generate_T1(g, {2});
  const PointSet meet{{2, 1}};
  EXPECT_EQ(reconstruct_from_intersection(col, meet, g).params, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(reconstruct_from_intersection(col, meet, g).points, line.points);
  EXPECT_EQ(reconstruct_from_intersection(line, meet, g).points, col.points);
  EXPECT_THROW(reconstruct_from_intersection(col, PointSet{}, g), PromiseViolated);
  // anchor-column meet: slope undetermined
  EXPECT_THROW(reconstruct_from_intersection(generate_T2(g, {0}), PointSet{{0, 0}}, g), PromiseViolated);
}

TEST(Reconstruct, RoundTripUnderPromise) {
  for (std::int64_t d : {1, 2}) {
    const auto g = build_grid_instance(d * 16, d);
    std::size_t count = 0;
    for (const auto& a : enumerate_family(g, FamilyKind::slope_lines))
      for (const auto& b : enumerate_family(g, FamilyKind::vertical_lines)) {
        if (!satisfies_learn_promise(a, b, g)) continue;
        ++count;
        const auto meet = intersect(a, b);
        EXPECT_EQ(reconstruct_from_intersection(b, meet, g).points, a.points);
        EXPECT_EQ(reconstruct_from_intersection(a, meet, g).points, b.points);
      }
    EXPECT_GT(count, 0U);
  }
}

TEST(Learn, Examples) {
  const auto g1 = build_grid_instance(16, 1);
  const auto out = learn_via_intersection(default_intersection_protocol(g1), generate_T1(g1, {2}), generate_T2(g1, {2}), g1);
  EXPECT_EQ(out.a_learned_by_bob.params, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(out.b_learned_by_alice.params, (std::vector<std::int64_t>{2}));

  const auto g2 = build_grid_instance(32, 2);
  const auto a = generate_T1(g2, {2, 3});
  const auto b = generate_T2(g2, {2, 3});
  const auto out2 = learn_via_intersection(default_intersection_protocol(g2), a, b, g2);
  EXPECT_EQ(out2.a_learned_by_bob.points, a.points);
  EXPECT_EQ(out2.b_learned_by_alice.points, b.points);

  EXPECT_THROW(learn_via_intersection(default_intersection_protocol(g2), a, generate_T2(g2, {2, 1}), g2),
               PromiseViolated);
}

TEST(Learn, CostEqualsIntersectionProtocol) {
  const auto g = build_grid_instance(32, 2);
  const auto ip = default_intersection_protocol(g);
  for (const auto& a : enumerate_family(g, FamilyKind::slope_lines))
    for (const auto& b : enumerate_family(g, FamilyKind::vertical_lines)) {
      if (!satisfies_learn_promise(a, b, g)) continue;
      const auto learned = learn_via_intersection(ip, a, b, g, 4);
      EXPECT_EQ(learned.transcript, run(ip, a, b, 4).transcript);
    }
}
