#include "oracles.hpp"

#include "profrig/coclass.hpp"
#include "profrig/error.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace profrig;

namespace {

const OrbifoldSignature k55{1, {5, 5}};
const OrbifoldSignature k23{1, {2, 3}};

ExtensionClass cls(const OrbifoldSignature& sig, IntMatrix rep) { return make_class(sig, rep.rows(), std::move(rep)); }

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

std::vector<OrbifoldSignature> battery() {
  return {{1, {5, 5}},       {0, {5, 5, 5, 5}}, {1, {2, 2}},    {0, {2, 3, 7}},   {2, {}},
          {0, {4, 6, 10, 3}}, {1, {12, 12}},     {0, {3, 3, 9, 9}}, {2, {7}},      {0, {2, 2, 2, 2, 2}}};
}

/// Random lattice element: sum of k random relation generators.
IntMatrix random_relation(std::mt19937_64& rng, const OrbifoldSignature& sig, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> coeff(-5, 5);
  std::uniform_int_distribution<std::size_t> col(1, sig.cone_orders.size());
  IntMatrix total(n, sig.cone_orders.size() + 1);
  for (int k = 0; k < 4; ++k) {
    std::vector<BigInt> v(n);
    for (auto& x : v) x = coeff(rng);
    total = total + relation_matrix(sig, col(rng), v);
  }
  return total;
}

Permutation random_sigma(std::mt19937_64& rng, const OrbifoldSignature& sig) {
  auto elems = SymmetryGroup(sig).elements();
  return elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)];
}

}  // namespace

TEST(Divisors, Examples) {
  EXPECT_EQ(elementary_divisors({0, {2, 3, 7}}).d, (std::vector<BigInt>{1, 1, 42}));
  EXPECT_EQ(elementary_divisors(k55).d, (std::vector<BigInt>{5, 5}));
  EXPECT_EQ(elementary_divisors({2, {9}}).d, (std::vector<BigInt>{9}));
  EXPECT_EQ(elementary_divisors({2, {}}).d, std::vector<BigInt>{});
  EXPECT_EQ(elementary_divisors({2, {9}}).torsion_exponent, 1);
  EXPECT_EQ(elementary_divisors({0, {4, 6, 10}}).torsion_exponent, 2);
}

TEST(Divisors, MatchPrimewiseOracleAndProductAndLcm) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> len(0, 6);
  std::uniform_int_distribution<std::int64_t> order(2, 30);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> p(len(rng));
    for (auto& x : p) x = order(rng);
    auto d = elementary_divisors({0, p}).d;
    ASSERT_EQ(d, oracle::diag_divisors_by_primes(p));
    BigInt prod_d = 1, prod_p = 1, l = 1;
    for (auto& x : d) prod_d *= x;
    for (auto x : p) {
      prod_p *= x;
      l = lcm(l, BigInt(x));
    }
    ASSERT_EQ(prod_d, prod_p);
    if (!p.empty()) {
      ASSERT_EQ(d.back(), l);
    }
  }
}

TEST(Divisors, InvariantUnderReordering) {
  EXPECT_EQ(elementary_divisors({0, {10, 4, 6}}).d, elementary_divisors({0, {4, 6, 10}}).d);
}

TEST(Class, RejectsBadInputs) {
  EXPECT_EQ(error_of([] { zero_class(k55, 1); }), ErrorCode::Unsupported);
  EXPECT_EQ(error_of([] { zero_class({0, {2, 3, 5}}, 2); }), ErrorCode::FiniteOrbifold);
  EXPECT_EQ(error_of([] { make_class(k55, 2, IntMatrix(2, 2)); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_of([] { class_equal(zero_class(k55, 2), zero_class(k23, 2)); }), ErrorCode::SignatureMismatch);
}

TEST(ClassEqual, Examples) {
  auto a = cls(k55, IntMatrix{{3, 1, -2}, {0, 4, 7}});
  EXPECT_TRUE(class_equal(a, a));
  std::vector<BigInt> v{2, -3};
  EXPECT_TRUE(class_equal(a, cls(k55, a.rep + relation_matrix(k55, 1, v))));
  IntMatrix bump(2, 3);
  bump(0, 1) = 1;
  EXPECT_FALSE(class_equal(a, cls(k55, a.rep + bump)));
  bump(0, 1) = 5;  // 5 e_1 in column 1 alone is not a relation either
  EXPECT_FALSE(class_equal(a, cls(k55, a.rep + bump)));
}

TEST(ClassEqual, RandomRelationsAreZero) {
  std::mt19937_64 rng(2);
  for (const auto& sig : battery()) {
    if (sig.cone_orders.empty()) continue;
    for (int t = 0; t < 20; ++t) {
      IntMatrix r = random_relation(rng, sig, 3);
      ASSERT_TRUE(class_equal(cls(sig, r), zero_class(sig, 3)));
    }
  }
}

TEST(TorsionQuotient, Examples) {
  auto rel = cls(k55, relation_matrix(k55, 1, {3, 4}));
  for (const auto& col : torsion_quotient(rel))
    for (const auto& x : col) EXPECT_EQ(x, 0);
  auto a = cls(k55, IntMatrix{{0, 1, 0}, {0, 0, 1}});
  auto q = torsion_quotient(a);
  EXPECT_EQ(q[0], (std::vector<BigInt>{1, 0}));
  EXPECT_EQ(q[1], (std::vector<BigInt>{0, 1}));
}

TEST(TorsionQuotient, EquivariantAndKillsExactlyTheKernel) {
  std::mt19937_64 rng(3);
  const OrbifoldSignature sig{0, {3, 3, 6, 6}};
  for (int t = 0; t < 50; ++t) {
    auto a = cls(sig, oracle::random_matrix(rng, 2, 5, 20));
    IntMatrix phi = oracle::random_unimodular(rng, 2);
    Permutation sigma = random_sigma(rng, sig);
    auto q = torsion_quotient(a), qa = torsion_quotient(act(phi, sigma, a));
    for (std::size_t i = 0; i < 4; ++i) {
      auto expected = phi * q[i];
      for (auto& x : expected) x = mod(x, BigInt(sig.cone_orders[i]));
      ASSERT_EQ(qa[sigma(i)], expected);
    }
    // Column 0 alone is the kernel of q.
    IntMatrix only0(2, 5);
    only0.set_col(0, a.rep.col(0));
    for (const auto& col : torsion_quotient(cls(sig, only0 + random_relation(rng, sig, 2))))
      for (const auto& x : col) ASSERT_EQ(x, 0);
  }
}

TEST(Euler, Examples) {
  auto a = cls(k23, IntMatrix{{0, 2, 0}, {0, -1, 0}});
  EXPECT_EQ(euler_map(a), (std::vector<BigInt>{6, -3}));
  EXPECT_EQ(euler_map(cls(k23, IntMatrix{{0, 2, -2}, {0, -1, 1}})), (std::vector<BigInt>{2, -1}));
  EXPECT_EQ(euler_map(cls(k23, relation_matrix(k23, 2, {4, 1}))), (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(euler_map(cls({2, {}}, IntMatrix{{3}, {-4}})), (std::vector<BigInt>{3, -4}));
}

TEST(Euler, VanishesOnRelationsAndIsEquivariant) {
  std::mt19937_64 rng(4);
  for (const auto& sig : battery()) {
    if (sig.cone_orders.empty()) continue;
    for (int t = 0; t < 20; ++t) {
      ASSERT_EQ(euler_map(cls(sig, random_relation(rng, sig, 2))), (std::vector<BigInt>{0, 0}));
      auto a = cls(sig, oracle::random_matrix(rng, 3, sig.cone_orders.size() + 1, 15));
      IntMatrix phi = oracle::random_unimodular(rng, 3);
      ASSERT_EQ(euler_map(act(phi, random_sigma(rng, sig), a)), phi * euler_map(a));
    }
  }
}

TEST(Decompose, Examples) {
  auto zero = decompose(zero_class(k55, 2));
  EXPECT_EQ(zero.free, (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(zero.torsion, (std::vector<std::vector<BigInt>>{{0, 0}}));
  auto rel = decompose(cls(k55, relation_matrix(k55, 2, {7, -1})));
  EXPECT_EQ(rel, zero);
  auto seed = decompose(cls(k55, IntMatrix{{0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(content(seed.free), 1);
  EXPECT_EQ(seed.free, euler_map(cls(k55, IntMatrix{{0, 1, 0}, {0, 0, 1}})));
  EXPECT_FALSE(seed.torsion[0][0] == 0 && seed.torsion[0][1] == 0);
}

TEST(Decompose, FreePartIsEulerMapAndSigmaInvariant) {
  std::mt19937_64 rng(5);
  for (const auto& sig : battery()) {
    for (int t = 0; t < 20; ++t) {
      auto a = cls(sig, oracle::random_matrix(rng, 2, sig.cone_orders.size() + 1, 30));
      ASSERT_EQ(decompose(a).free, euler_map(a));
      ASSERT_EQ(decompose(permute(random_sigma(rng, sig), a)).free, decompose(a).free);
    }
  }
}

TEST(Decompose, ClassFunctionAndSeparatesClasses) {
  std::mt19937_64 rng(6);
  for (const auto& sig : battery()) {
    for (int t = 0; t < 20; ++t) {
      auto a = cls(sig, oracle::random_matrix(rng, 2, sig.cone_orders.size() + 1, 30));
      if (!sig.cone_orders.empty()) {
        ASSERT_EQ(decompose(a), decompose(cls(sig, a.rep + random_relation(rng, sig, 2))));
      }
      auto b = cls(sig, oracle::random_matrix(rng, 2, sig.cone_orders.size() + 1, 3));
      ASSERT_EQ(decompose(a) == decompose(b), class_equal(a, b));
    }
  }
}

TEST(Recombine, RoundTripOnDecompositions) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> free(-10, 10), tors(0, 4);
  for (int t = 0; t < 500; ++t) {
    Decomposition dec;
    dec.free = {free(rng), free(rng)};
    dec.torsion = {{tors(rng), tors(rng)}};
    ASSERT_EQ(decompose(recombine(dec, k55, 2)), dec);
  }
  Decomposition zero{{0, 0}, {{0, 0}}, nullptr};
  EXPECT_TRUE(class_equal(recombine(zero, k55, 2), zero_class(k55, 2)));
}

TEST(Recombine, RoundTripOnClasses) {
  std::mt19937_64 rng(8);
  for (const auto& sig : battery()) {
    for (int t = 0; t < 10; ++t) {
      auto a = cls(sig, oracle::random_matrix(rng, 3, sig.cone_orders.size() + 1, 40));
      ASSERT_TRUE(class_equal(recombine(decompose(a), sig, 3), a));
    }
  }
}

TEST(Recombine, Errors) {
  Decomposition bad{{0, 0}, {{5, 0}}, nullptr};
  EXPECT_EQ(error_of([&] { recombine(bad, k55, 2); }), ErrorCode::ModulusMismatch);
  Decomposition shape{{0, 0}, {}, nullptr};
  EXPECT_EQ(error_of([&] { recombine(shape, k55, 2); }), ErrorCode::ModulusMismatch);
}

TEST(Act, Examples) {
  auto a = cls(k55, IntMatrix{{0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(class_equal(act(IntMatrix::identity(2), Permutation::identity(2), a), a));
  EXPECT_EQ(permute(Permutation{{1, 0}}, a).rep, (IntMatrix{{0, 0, 1}, {0, 1, 0}}));
  auto rel = cls(k55, relation_matrix(k55, 1, {1, 2}));
  EXPECT_TRUE(class_equal(act(IntMatrix{{2, 1}, {1, 1}}, Permutation{{1, 0}}, rel), zero_class(k55, 2)));
  EXPECT_EQ(error_of([&] { act(IntMatrix{{2, 0}, {0, 1}}, Permutation::identity(2), a); }), ErrorCode::NotUnimodular);
  EXPECT_EQ(error_of([&] { act(IntMatrix::identity(2), Permutation{{1, 0}}, cls(k23, a.rep)); }),
            ErrorCode::PermutationNotInSigma);
}

TEST(BasisCert, ConcurrentLookupsShareOneBasis) {
  const OrbifoldSignature sig{0, {6, 10, 15, 14}};
  std::vector<std::shared_ptr<const BasisCert>> got(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < got.size(); ++i) threads.emplace_back([&, i] { got[i] = basis_cert(sig); });
  for (auto& t : threads) t.join();
  for (const auto& g : got) EXPECT_EQ(g, got[0]);
  EXPECT_EQ(got[0]->U * got[0]->U_inv, IntMatrix::identity(5));
}
