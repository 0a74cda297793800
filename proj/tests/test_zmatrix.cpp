#include "oracles.hpp"

#include "profrig/bigint.hpp"
#include "profrig/zmatrix.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace profrig;

namespace {

void expect_valid_snf(const IntMatrix& m, const SnfResult& s) {
  ASSERT_EQ(s.U * m * s.V, s.D);
  ASSERT_EQ(abs(determinant(s.U)), 1);
  ASSERT_EQ(abs(determinant(s.V)), 1);
  ASSERT_EQ(s.U * s.U_inv, IntMatrix::identity(m.rows()));
  ASSERT_EQ(s.V * s.V_inv, IntMatrix::identity(m.cols()));
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) {
        ASSERT_EQ(s.D(i, j), 0);
      }
  auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    ASSERT_GE(d[i], 0);
    if (i + 1 < d.size()) {
      if (d[i] == 0) {
        ASSERT_EQ(d[i + 1], 0);
      } else {
        ASSERT_EQ(d[i + 1] % d[i], 0);
      }
    }
  }
}

bool upper_triangular(const IntMatrix& t) {
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < std::min(i, t.cols()); ++j)
      if (t(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST(Snf, Examples) {
  auto s = smith_normal_form(IntMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 7}});
  EXPECT_EQ(s.diagonal(), (std::vector<BigInt>{1, 1, 42}));
  auto z = smith_normal_form(IntMatrix(2, 3));
  EXPECT_EQ(z.diagonal(), (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(z.U, IntMatrix::identity(2));
  EXPECT_EQ(z.V, IntMatrix::identity(3));
  EXPECT_EQ(smith_normal_form(IntMatrix{{2, 0, 0}, {0, 4, 0}, {0, 0, 4}}).diagonal(),
            (std::vector<BigInt>{2, 4, 4}));
  EXPECT_EQ(oracle::invariant_factors(IntMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 7}}),
            (std::vector<BigInt>{1, 1, 42}));
}

TEST(Snf, ThousandRandomMatrices) {
  std::mt19937_64 rng(20261018);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMatrix m = oracle::random_matrix(rng, dim(rng), dim(rng), 50);
    if (trial % 7 == 0 && m.rows() > 1) m.add_row(0, 1, 3);
    if (trial % 11 == 0)
      for (std::size_t j = 0; j < m.cols(); ++j) m(m.rows() - 1, j) = 0;
    expect_valid_snf(m, smith_normal_form(m));
  }
}

TEST(Snf, MatchesMinorOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix m = oracle::random_matrix(rng, 3, 3, trial < 100 ? 6 : 50);
    if (trial % 5 == 0) m.set_col(2, m.col(0));
    EXPECT_EQ(smith_normal_form(m).diagonal(), oracle::invariant_factors(m));
  }
}

TEST(Snf, IsDeterministic) {
  IntMatrix m{{12, -18, 7}, {4, 6, 0}, {30, 2, -9}};
  auto a = smith_normal_form(m), b = smith_normal_form(m);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(Snf, LargeEntriesExceedMachineWords) {
  BigInt big = BigInt(1) << 80;
  IntMatrix m(2, 2);
  m(0, 0) = big * 6;
  m(1, 1) = big * 4;
  auto s = smith_normal_form(m);
  expect_valid_snf(m, s);
  EXPECT_EQ(s.diagonal(), (std::vector<BigInt>{big * 2, big * 12}));
}

TEST(Hermite, Examples) {
  auto h = hermite_left_reduce(IntMatrix{{4}, {6}});
  EXPECT_EQ(h.T, (IntMatrix{{2}, {0}}));
  EXPECT_EQ(h.U * (IntMatrix{{4}, {6}}), h.T);
  auto z = hermite_left_reduce(IntMatrix{{0}, {0}});
  EXPECT_EQ(z.T, (IntMatrix{{0}, {0}}));
  EXPECT_EQ(z.U, IntMatrix::identity(2));
  auto t = hermite_left_reduce(IntMatrix{{3, 1}, {0, 5}});
  EXPECT_EQ(t.T, (IntMatrix{{3, 1}, {0, 5}}));
  EXPECT_EQ(t.U, IntMatrix::identity(2));
}

TEST(Hermite, RandomPropertiesAndIdempotence) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    IntMatrix m = oracle::random_matrix(rng, dim(rng), dim(rng), 30);
    auto h = hermite_left_reduce(m);
    ASSERT_EQ(h.U * m, h.T);
    ASSERT_EQ(abs(determinant(h.U)), 1);
    ASSERT_EQ(h.U * h.U_inv, IntMatrix::identity(m.rows()));
    ASSERT_TRUE(upper_triangular(h.T));
    for (std::size_t j = 0; j < std::min(m.rows(), m.cols()); ++j) ASSERT_GE(h.T(j, j), 0);
    auto again = hermite_left_reduce(h.T);
    ASSERT_EQ(again.T, h.T);
  }
}

TEST(Hermite, ColumnReducesToContent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix v = oracle::random_matrix(rng, 4, 1, 100);
    auto h = hermite_left_reduce(v);
    EXPECT_EQ(h.T(0, 0), content(v.col(0)));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(h.T(i, 0), 0);
  }
}

TEST(Content, Examples) {
  EXPECT_EQ(content({6, 10, 15}), 1);
  EXPECT_EQ(content({0, 0}), 0);
  EXPECT_EQ(content({-4, 6}), 2);
}

TEST(Determinant, MatchesLaplace) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix m = oracle::random_matrix(rng, 4, 4, 9);
    std::vector<std::vector<BigInt>> rows(4, std::vector<BigInt>(4));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) rows[i][j] = m(i, j);
    EXPECT_EQ(determinant(m), oracle::det(rows));
  }
}

TEST(Unimodular, Inverse) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix u = oracle::random_unimodular(rng, 4, 12);
    EXPECT_TRUE(is_unimodular(u));
    EXPECT_EQ(u * inverse_unimodular(u), IntMatrix::identity(4));
  }
  EXPECT_FALSE(is_unimodular(IntMatrix{{2, 0}, {0, 1}}));
}
