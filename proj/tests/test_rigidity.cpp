#include "oracles.hpp"

#include "profrig/error.hpp"
#include "profrig/orbits.hpp"
#include "profrig/rigidity.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace profrig;
using Kind = RigidityVerdict::Kind;
using Reason = RigidityVerdict::RigidReason;

namespace {

struct Row {
  OrbifoldSignature sig;
  std::size_t n;
  Kind kind;
  std::optional<Reason> reason;
  std::int64_t d;  // d_{m-(n-1)}, 0 when n > m
  std::int64_t certificate;  // 0 when none
};

// Worked out by hand from the prime-wise description of d_j.
const std::vector<Row>& table() {
  static const std::vector<Row> rows{
      {{2, {}}, 2, Kind::Rigid, Reason::NGreaterThanM, 0, 0},
      {{1, {}}, 2, Kind::Rigid, Reason::NGreaterThanM, 0, 0},
      {{1, {5, 5}}, 2, Kind::NonRigid, std::nullopt, 5, 5},
      {{0, {5, 5, 5, 5}}, 2, Kind::NonRigid, std::nullopt, 5, 5},
      {{1, {12, 12}}, 2, Kind::Unresolved12, std::nullopt, 12, 0},
      {{1, {2, 2}}, 2, Kind::Rigid, Reason::SmallUnitGroup, 2, 0},
      {{0, {2, 3, 7}}, 2, Kind::Rigid, Reason::SmallUnitGroup, 1, 0},
      {{0, {2, 3, 7}}, 3, Kind::Rigid, Reason::SmallUnitGroup, 1, 0},
      {{0, {2, 3, 7}}, 4, Kind::Rigid, Reason::NGreaterThanM, 0, 0},
      {{1, {7, 7}}, 2, Kind::NonRigid, std::nullopt, 7, 7},
      {{1, {7, 7}}, 3, Kind::Rigid, Reason::NGreaterThanM, 0, 0},
      {{0, {6, 6, 6}}, 2, Kind::Rigid, Reason::SmallUnitGroup, 6, 0},
      {{0, {6, 6, 6}}, 3, Kind::Rigid, Reason::SmallUnitGroup, 6, 0},
      {{0, {8, 8, 8}}, 2, Kind::NonRigid, std::nullopt, 8, 8},
      {{0, {10, 10, 10}}, 3, Kind::NonRigid, std::nullopt, 10, 5},
      {{0, {4, 4, 4, 4}}, 2, Kind::Rigid, Reason::SmallUnitGroup, 4, 0},
      {{1, {3, 9}}, 2, Kind::Rigid, Reason::SmallUnitGroup, 3, 0},
      {{0, {9, 9, 3}}, 2, Kind::NonRigid, std::nullopt, 9, 9},
      {{0, {12, 12, 12}}, 2, Kind::Unresolved12, std::nullopt, 12, 0},
      {{0, {24, 24, 12}}, 2, Kind::NonRigid, std::nullopt, 24, 8},
      {{0, {30, 30, 30}}, 2, Kind::NonRigid, std::nullopt, 30, 5},
  };
  return rows;
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

}  // namespace

TEST(Classify, HandComputedTable) {
  for (const auto& row : table()) {
    auto v = classify_rigidity(row.sig, row.n);
    SCOPED_TRACE(row.sig.genus);
    EXPECT_EQ(v.kind, row.kind);
    EXPECT_EQ(v.reason, row.reason);
    if (row.d == 0) {
      EXPECT_FALSE(v.d_value);
    } else {
      ASSERT_TRUE(v.d_value);
      EXPECT_EQ(*v.d_value, row.d);
    }
    if (row.certificate == 0) {
      EXPECT_FALSE(v.certificate);
    } else {
      ASSERT_TRUE(v.certificate);
      EXPECT_EQ(v.certificate->value, row.certificate);
      EXPECT_EQ(*v.d_value % v.certificate->value, 0);
    }
  }
}

TEST(Classify, Errors) {
  EXPECT_EQ(error_of([] { classify_rigidity({1, {5, 5}}, 1); }), ErrorCode::Unsupported);
  EXPECT_EQ(error_of([] { classify_rigidity({0, {15, 15}}, 2); }), ErrorCode::FiniteOrbifold);
}

TEST(Classify, InvariantUnderConeReordering) {
  std::mt19937_64 rng(31);
  for (const auto& row : table()) {
    auto p = row.sig.cone_orders;
    for (int t = 0; t < 5; ++t) {
      std::shuffle(p.begin(), p.end(), rng);
      auto v = classify_rigidity({row.sig.genus, p}, row.n);
      EXPECT_EQ(v.kind, row.kind);
      EXPECT_EQ(v.d_sequence, classify_rigidity(row.sig, row.n).d_sequence);
    }
  }
}

TEST(PrimePowers, SmallestLargeFactor) {
  EXPECT_EQ(smallest_large_prime_power(5)->value, 5);
  EXPECT_EQ(smallest_large_prime_power(8)->value, 8);
  EXPECT_EQ(smallest_large_prime_power(24)->value, 8);
  EXPECT_EQ(smallest_large_prime_power(9)->value, 9);
  EXPECT_EQ(smallest_large_prime_power(70)->value, 5);
  EXPECT_FALSE(smallest_large_prime_power(12));
  EXPECT_FALSE(smallest_large_prime_power(6));
}

TEST(NonRigid, BatteryEntriesWithSmallModulus) {
  int built = 0;
  for (const auto& row : table()) {
    if (row.kind != Kind::NonRigid || row.n != 2) continue;
    if (elementary_divisors(row.sig).torsion_exponent > 10) continue;
    auto pair = construct_nonrigid_pair(row.sig, row.n);
    EXPECT_TRUE(verify_witness(pair.witness, pair.a, pair.b));
    EXPECT_FALSE(decide_integral_iso(pair.a, pair.b));
    auto w = decide_profinite_iso(pair.a, pair.b);
    ASSERT_TRUE(w);
    const auto modulus = w->modulus();
    EXPECT_NE(w->det_class, 1);
    EXPECT_NE(w->det_class, modulus - 1);
    ++built;
  }
  EXPECT_GE(built, 5);
}

TEST(NonRigid, FivesExample) {
  auto pair = construct_nonrigid_pair({1, {5, 5}}, 2);
  EXPECT_EQ(pair.a.rep, (IntMatrix{{0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(pair.witness.det_class, 2);
  EXPECT_TRUE(pair.witness.sigma.is_identity());
  EXPECT_EQ(decompose(pair.a).free, decompose(pair.b).free);
  // det of the torsion quotient moves by 2, which no integral map can do.
  EXPECT_EQ(mod(oracle::torsion_det_mod(pair.b, 5) * 1, BigInt(5)),
            mod(oracle::torsion_det_mod(pair.a, 5) * 2, BigInt(5)));
}

TEST(NonRigid, HigherRank) {
  auto pair = construct_nonrigid_pair({0, {10, 10, 10}}, 3);
  EXPECT_FALSE(decide_integral_iso(pair.a, pair.b));
  EXPECT_TRUE(decide_profinite_iso(pair.a, pair.b));
}

TEST(NonRigid, RejectsOtherRegimes) {
  EXPECT_EQ(error_of([] { construct_nonrigid_pair({2, {}}, 2); }), ErrorCode::NotNonRigid);
  EXPECT_EQ(error_of([] { construct_nonrigid_pair({1, {12, 12}}, 2); }), ErrorCode::NotNonRigid);
  EXPECT_EQ(error_of([] { construct_nonrigid_pair({1, {2, 2}}, 2); }), ErrorCode::NotNonRigid);
}

TEST(Stabilize, Examples) {
  const OrbifoldSignature k23{1, {2, 3}};
  auto z = stabilize(zero_class(k23, 2));
  EXPECT_EQ(z.n, 3u);
  EXPECT_TRUE(class_equal(z, zero_class(k23, 3)));
  auto a = make_class(k23, 2, IntMatrix{{0, 4, 0}, {0, -1, 0}});
  EXPECT_EQ(euler_map(stabilize(a)), (std::vector<BigInt>{12, -3, 0}));
  auto b = make_class(k23, 2, a.rep + relation_matrix(k23, 1, {1, 1}));
  EXPECT_TRUE(class_equal(stabilize(a), stabilize(b)));
  auto dec = decompose(stabilize(a));
  EXPECT_EQ(dec.free.back(), 0);
  for (const auto& t : dec.torsion) EXPECT_EQ(t.back(), 0);
}

TEST(Stabilize, WitnessForNonRigidPairs) {
  for (const auto& sig : {OrbifoldSignature{1, {5, 5}}, OrbifoldSignature{0, {5, 5, 5, 5}},
                          OrbifoldSignature{0, {8, 8, 8}}}) {
    auto pair = construct_nonrigid_pair(sig, 2);
    auto w = stabilized_integral_witness(pair.a, pair.b, pair.witness);
    EXPECT_EQ(w.phi.rows(), 3u);
    EXPECT_EQ(abs(determinant(w.phi)), 1);
    EXPECT_TRUE(verify_witness(w, stabilize(pair.a), stabilize(pair.b)));
    EXPECT_TRUE(decide_integral_iso(stabilize(pair.a), stabilize(pair.b)));
  }
}

TEST(Stabilize, IdentityWitnessExtendsToIdentity) {
  auto a = make_class({1, {5, 5}}, 2, IntMatrix{{0, 1, 0}, {0, 0, 1}});
  auto w = *decide_profinite_iso(a, a);
  auto s = stabilized_integral_witness(a, a, w);
  EXPECT_EQ(s.phi, IntMatrix::identity(3));
}

TEST(Stabilize, TamperedWitnessRejected) {
  auto pair = construct_nonrigid_pair({1, {5, 5}}, 2);
  auto bad = pair.witness;
  bad.r.set(1, 1, 3);
  bad.det_class = 3;
  EXPECT_EQ(error_of([&] { stabilized_integral_witness(pair.a, pair.b, bad); }), ErrorCode::WitnessInvalid);
}

TEST(Stabilize, EveryProfinitePairBecomesIntegral) {
  std::mt19937_64 rng(32);
  const OrbifoldSignature sig{0, {5, 5, 5, 5}};
  std::uniform_int_distribution<std::int64_t> small(0, 4);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    IntMatrix ra(2, 5), rb(2, 5);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 1; j < 5; ++j) {
        ra(i, j) = small(rng) % 2;
        rb(i, j) = small(rng) % 2;
      }
    auto a = make_class(sig, 2, ra), b = make_class(sig, 2, rb);
    auto w = decide_profinite_iso(a, b);
    if (!w) continue;
    auto s = stabilized_integral_witness(a, b, *w);
    ASSERT_TRUE(verify_witness(s, stabilize(a), stabilize(b)));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
