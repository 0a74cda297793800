#pragma once

#include "profrig/bigint.hpp"
#include "profrig/error.hpp"
#include "profrig/zmatrix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace profrig {

/// Square matrix over Z/D with entries kept in [0, D). The modulus is a
/// machine integer: every search over GL_n(Z/D) is exhaustive, so a modulus
/// that does not fit is far beyond any feasible budget anyway.
class ModMatrix {
 public:
  ModMatrix() = default;
  ModMatrix(std::size_t n, std::int64_t modulus) : n_(n), modulus_(modulus), data_(n * n, 0) {
    if (modulus < 1) throw Error(ErrorCode::InvalidArgument, "modulus must be at least 1");
  }

  static ModMatrix identity(std::size_t n, std::int64_t modulus) {
    ModMatrix m(n, modulus);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static ModMatrix reduce(const IntMatrix& a, std::int64_t modulus) {
    if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "ModMatrix must be square");
    ModMatrix m(a.rows(), modulus);
    BigInt big_mod = modulus;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        m.data_[i * m.n_ + j] = static_cast<std::int64_t>(profrig::mod(a(i, j), big_mod));
    return m;
  }

  std::size_t size() const { return n_; }
  std::int64_t modulus() const { return modulus_; }

  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t v) { data_[i * n_ + j] = profrig::mod(v, modulus_); }

  const std::vector<std::int64_t>& entries() const { return data_; }

  IntMatrix to_int() const {
    IntMatrix a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
    return a;
  }

  ModMatrix operator*(const ModMatrix& rhs) const {
    if (n_ != rhs.n_ || modulus_ != rhs.modulus_)
      throw Error(ErrorCode::ModulusMismatch, "ModMatrix product over different rings");
    ModMatrix out(n_, modulus_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < n_; ++k)
          acc = (acc + static_cast<__int128>((*this)(i, k)) * rhs(k, j)) % modulus_;
        out.data_[i * n_ + j] = static_cast<std::int64_t>(acc);
      }
    return out;
  }

  /// M * v mod D for a vector of residues.
  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> out(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < n_; ++k) acc = (acc + static_cast<__int128>((*this)(i, k)) * v[k]) % modulus_;
      out[i] = static_cast<std::int64_t>(acc);
    }
    return out;
  }

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::int64_t modulus_ = 1;
  std::vector<std::int64_t> data_;
};

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(profrig::mod(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m), m));
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Inverse of a mod m, if a is a unit.
inline std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  BigInt s, t;
  BigInt g = ext_gcd(BigInt(profrig::mod(a, m)), BigInt(m), s, t);
  if (g != 1) return std::nullopt;
  return static_cast<std::int64_t>(profrig::mod(s, BigInt(m)));
}

inline bool is_unit_mod(std::int64_t a, std::int64_t m) { return gcd64(profrig::mod(a, m), m) == 1; }

/// Determinant over Z/D by Euclidean row elimination on residues; every
/// step is a unimodular row operation, so this is valid for composite D.
inline std::int64_t determinant_mod(const ModMatrix& m) {
  const std::size_t n = m.size();
  const std::int64_t d = m.modulus();
  if (d == 1) return 0;
  std::vector<std::int64_t> a = m.entries();
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * n + j]; };
  std::int64_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = c + 1; i < n; ++i) {
      while (at(i, c) != 0) {
        std::int64_t q = at(c, c) / at(i, c);
        for (std::size_t j = c; j < n; ++j) at(c, j) = profrig::mod(at(c, j) - mul_mod(q, at(i, j), d), d);
        for (std::size_t j = c; j < n; ++j) std::swap(at(c, j), at(i, j));
        det = d - det;  // row swap flips the sign
        if (det == d) det = 0;
      }
    }
    det = mul_mod(det, at(c, c), d);
    if (det == 0) return 0;
  }
  return det;
}

namespace detail {

/// Integer X with X = diag(a, b) mod d and det X = 1, given ab = 1 mod d:
/// X = [[a + s d, d], [t d, b]] where s b - t d = -(ab - 1)/d.
inline IntMatrix lift_unit_pair(const BigInt& a, const BigInt& b, const BigInt& d) {
  BigInt k = (a * b - 1) / d;
  BigInt s, t;
  BigInt g = ext_gcd(b, d, s, t);  // s b + t d = 1
  if (g != 1) throw Error(ErrorCode::NotInvertible, "diagonal entry is not a unit");
  s *= -k;
  t *= -k;  // s b + t d = -k, so use -t for the lower-left entry
  IntMatrix x(2, 2);
  x(0, 0) = a + s * d;
  x(0, 1) = d;
  x(1, 0) = -t * d;
  x(1, 1) = b;
  return x;
}

/// Lift S in SL_n(Z/D) (det S = 1 mod D) to SL_n(Z).
///
/// Write U S V = diag(s) over Z. Every s_i is a unit mod D. The diagonal is
/// realised as a product of 2x2 unit-pair blocks that push the determinant
/// into the last entry, which is then exactly det(U) det(V) = +-1.
inline IntMatrix lift_special(const ModMatrix& s_mod) {
  const std::size_t n = s_mod.size();
  const std::int64_t d64 = s_mod.modulus();
  if (d64 == 1 || n == 0) return IntMatrix::identity(n);
  const BigInt d = d64;
  SnfResult snf = smith_normal_form(s_mod.to_int());
  const BigInt u = determinant(snf.U) * determinant(snf.V);  // +-1

  IntMatrix x = IntMatrix::identity(n);
  BigInt carry = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    carry = profrig::mod(carry * snf.D(i, i), d);
    BigInt carry_inv, unused;
    ext_gcd(carry, d, carry_inv, unused);
    carry_inv = profrig::mod(carry_inv, d);
    IntMatrix block = lift_unit_pair(carry, carry_inv, d);
    IntMatrix embed = IntMatrix::identity(n);
    embed(i, i) = block(0, 0);
    embed(i, i + 1) = block(0, 1);
    embed(i + 1, i) = block(1, 0);
    embed(i + 1, i + 1) = block(1, 1);
    x = x * embed;
  }
  IntMatrix last = IntMatrix::identity(n);
  last(n - 1, n - 1) = u;
  x = x * last;
  return snf.U_inv * x * snf.V_inv;
}

/// Lift R with det R = +-1 mod D to GL_n(Z) with the same determinant sign.
inline IntMatrix lift_plus_minus(const ModMatrix& r) {
  const std::size_t n = r.size();
  const std::int64_t d = r.modulus();
  // A representative with entries in [0, D) or (-D/2, D/2] may already be unimodular.
  IntMatrix rep = r.to_int(), centred = rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (2 * centred(i, j) > d) centred(i, j) -= d;
  for (const IntMatrix* m : {&rep, &centred})
    if (profrig::abs(determinant(*m)) == 1) return *m;
  std::int64_t det = determinant_mod(r);
  if (d == 1 || det == profrig::mod(std::int64_t{1}, d)) return lift_special(r);
  // det = -1: flip the sign of the last column, lift, flip back.
  ModMatrix flipped = r;
  for (std::size_t i = 0; i < n; ++i) flipped.set(i, n - 1, -r(i, n - 1));
  IntMatrix phi = lift_special(flipped);
  phi.negate_col(n - 1);
  return phi;
}

}  // namespace detail

/// Lift R in GL_n(Z/D) to an integer matrix Phi in GL_n(Z).
///
/// With det_pm_one, det R must be +-1 mod D and Phi = R mod D exactly. Without
/// it, det R may be any unit: the last column is first rescaled by
/// kappa = (det R)^{-1} so that Phi = R mod D on every column except the last,
/// whose reduction is kappa times R's last column.
///
/// With pin_first_column (R's first column = e_1 mod D), Phi's first column is
/// exactly e_1: Phi = [[1, v], [0, Phi']] with Phi' a lift of the lower block.
inline IntMatrix lift_modular_matrix(const ModMatrix& r, bool det_pm_one, bool pin_first_column) {
  const std::size_t n = r.size();
  const std::int64_t d = r.modulus();
  const std::int64_t det = determinant_mod(r);
  if (d > 1 && !is_unit_mod(det, d))
    throw Error(ErrorCode::NotInvertible, "matrix is singular mod " + std::to_string(d));
  if (n == 0) return IntMatrix(0, 0);

  ModMatrix target = r;
  if (det_pm_one) {
    if (d > 1 && det != 1 && det != d - 1)
      throw Error(ErrorCode::NotLiftable,
                  "det = " + std::to_string(det) + " is not +-1 mod " + std::to_string(d));
  } else if (d > 1) {
    std::int64_t kappa = *inverse_mod(det, d);
    for (std::size_t i = 0; i < n; ++i) target.set(i, n - 1, mul_mod(r(i, n - 1), kappa, d));
  }

  if (!pin_first_column) return detail::lift_plus_minus(target);

  for (std::size_t i = 0; i < n; ++i)
    if (target(i, 0) != profrig::mod(static_cast<std::int64_t>(i == 0), d))
      throw Error(ErrorCode::InvalidArgument, "first column is not e_1 mod " + std::to_string(d));
  if (n == 1) return IntMatrix::identity(1);
  ModMatrix lower(n - 1, d);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) lower.set(i - 1, j - 1, target(i, j));
  IntMatrix lower_lift = detail::lift_plus_minus(lower);
  IntMatrix phi(n, n);
  phi(0, 0) = 1;
  for (std::size_t j = 1; j < n; ++j) phi(0, j) = target(0, j);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) phi(i, j) = lower_lift(i - 1, j - 1);
  return phi;
}

/// Visit every invertible n x n matrix mod D satisfying `predicate`, in
/// lexicographic order of the row-major entry tuple, until `visit` returns
/// false. For D = 1 the single (zero) matrix is visited. Returns the number of
/// matrices visited.
inline std::uint64_t enumerate_units_matrices(
    std::size_t n, std::int64_t modulus, const std::function<bool(const ModMatrix&)>& predicate,
    const std::function<bool(const ModMatrix&)>& visit) {
  if (modulus < 1) throw Error(ErrorCode::InvalidArgument, "modulus must be at least 1");
  ModMatrix m(n, modulus);
  std::vector<std::int64_t> digits(n * n, 0);
  std::uint64_t visited = 0;
  while (true) {
    for (std::size_t k = 0; k < digits.size(); ++k) m.set(k / n, k % n, digits[k]);
    bool unit = modulus == 1 || is_unit_mod(determinant_mod(m), modulus);
    if (unit && predicate(m)) {
      ++visited;
      if (!visit(m)) return visited;
    }
    std::size_t k = digits.size();
    while (k > 0) {
      --k;
      if (++digits[k] < modulus) break;
      digits[k] = 0;
      if (k == 0) return visited;
    }
    if (digits.empty()) return visited;
  }
}

}  // namespace profrig
