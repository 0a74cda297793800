#pragma once

#include "profrig/bigint.hpp"
#include "profrig/error.hpp"
#include "profrig/orbifold.hpp"
#include "profrig/zmatrix.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace profrig {

/// d_1 | d_2 | ... | d_m: the Smith form of diag(p_1, ..., p_m).
struct ElementaryDivisors {
  std::vector<BigInt> d;
  /// Torsion exponent d_{m-1}; 1 when m <= 1.
  BigInt torsion_exponent = 1;
  /// d_m = lcm(p_i); 1 when m = 0 (no slot).
  BigInt top = 1;

  /// 1-based access matching the usual d_j notation.
  const BigInt& operator[](std::size_t j) const { return d.at(j - 1); }
};

/// d_j = g_j / g_{j-1}, where g_j is the gcd of all products of j distinct
/// cone orders (g_0 = 1).
inline ElementaryDivisors elementary_divisors(const OrbifoldSignature& sig) {
  const auto& p = sig.cone_orders;
  const std::size_t m = p.size();
  ElementaryDivisors out;
  BigInt prev_gcd = 1;
  std::vector<std::size_t> idx;
  for (std::size_t j = 1; j <= m; ++j) {
    // Walk all j-subsets in lexicographic order.
    idx.resize(j);
    for (std::size_t k = 0; k < j; ++k) idx[k] = k;
    BigInt g = 0;
    while (true) {
      BigInt prod = 1;
      for (auto i : idx) prod *= p[i];
      g = gcd(g, prod);
      std::size_t k = j;
      while (k > 0 && idx[k - 1] == m - j + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t t = k; t < j; ++t) idx[t] = idx[t - 1] + 1;
    }
    out.d.push_back(g / prev_gcd);
    prev_gcd = g;
  }
  if (m >= 2) out.torsion_exponent = out.d[m - 2];
  if (m >= 1) out.top = out.d[m - 1];
  return out;
}

/// An element of A^(n): an n x (m+1) integer matrix modulo the column
/// relations v*r_0 + p_i*v*r_i. Column 0 holds x_0, column i holds x_i.
/// The raw representative is kept as given.
struct ExtensionClass {
  OrbifoldSignature sig;
  std::size_t n = 0;
  IntMatrix rep;

  std::size_t m() const { return sig.cone_orders.size(); }
};

inline void require_rank(std::size_t n) {
  if (n == 1)
    throw Error(ErrorCode::Unsupported,
                "n = 1 is excluded: the case of n=1 has already been covered in the literature");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
}

inline void require_infinite(const OrbifoldSignature& sig) {
  if (classify_signature(sig) == SignatureKind::Finite)
    throw Error(ErrorCode::FiniteOrbifold, "orbifold group is finite (chi > 0)");
}

inline ExtensionClass make_class(const OrbifoldSignature& sig, std::size_t n, IntMatrix rep) {
  validate_signature(sig.genus, sig.cone_orders);
  require_rank(n);
  require_infinite(sig);
  if (rep.rows() != n || rep.cols() != sig.cone_orders.size() + 1)
    throw Error(ErrorCode::InvalidArgument,
                "class matrix must be " + std::to_string(n) + " x " +
                    std::to_string(sig.cone_orders.size() + 1));
  return ExtensionClass{sig, n, std::move(rep)};
}

inline ExtensionClass zero_class(const OrbifoldSignature& sig, std::size_t n) {
  return make_class(sig, n, IntMatrix(n, sig.cone_orders.size() + 1));
}

/// v placed in column 0 and p_i * v in column i (1-based): a generator of
/// the relation lattice.
inline IntMatrix relation_matrix(const OrbifoldSignature& sig, std::size_t i,
                                 const std::vector<BigInt>& v) {
  IntMatrix r(v.size(), sig.cone_orders.size() + 1);
  for (std::size_t k = 0; k < v.size(); ++k) {
    r(k, 0) = v[k];
    r(k, i) = sig.cone_orders.at(i - 1) * v[k];
  }
  return r;
}

inline void require_compatible(const ExtensionClass& a, const ExtensionClass& b) {
  if (!(a.sig == b.sig) || a.n != b.n)
    throw Error(ErrorCode::SignatureMismatch, "classes live over different (signature, n)");
}

/// Membership of every row of `diff` in the relation lattice. The relation
/// matrix (rows: 1...1 over diag(p)) is already triangular, so the system
/// solves by back-substitution: p_i | x_i and x_0 = sum x_i / p_i.
inline bool in_relation_lattice(const OrbifoldSignature& sig, const IntMatrix& diff) {
  const auto& p = sig.cone_orders;
  for (std::size_t r = 0; r < diff.rows(); ++r) {
    BigInt total = 0;
    for (std::size_t i = 1; i <= p.size(); ++i) {
      if (diff(r, i) % p[i - 1] != 0) return false;
      total += diff(r, i) / p[i - 1];
    }
    if (diff(r, 0) != total) return false;
  }
  return true;
}

inline bool class_equal(const ExtensionClass& a, const ExtensionClass& b) {
  require_compatible(a, b);
  return in_relation_lattice(a.sig, a.rep - b.rep);
}

/// Columns 1..m reduced mod p_i; column 0 dropped. parts[i-1] lies in (Z/p_i)^n.
inline std::vector<std::vector<BigInt>> torsion_quotient(const ExtensionClass& a) {
  std::vector<std::vector<BigInt>> parts;
  for (std::size_t i = 1; i <= a.m(); ++i) {
    auto col = a.rep.col(i);
    for (auto& x : col) x = mod(x, BigInt(a.sig.cone_orders[i - 1]));
    parts.push_back(std::move(col));
  }
  return parts;
}

/// E(A) = -d_m x_0 + sum (d_m / p_i) x_i; E = x_0 when m = 0.
inline std::vector<BigInt> euler_map(const ExtensionClass& a) {
  if (a.m() == 0) return a.rep.col(0);
  const BigInt dm = elementary_divisors(a.sig).top;
  std::vector<BigInt> e(a.n);
  for (std::size_t k = 0; k < a.n; ++k) {
    e[k] = -dm * a.rep(k, 0);
    for (std::size_t i = 1; i <= a.m(); ++i) e[k] += dm / a.sig.cone_orders[i - 1] * a.rep(k, i);
  }
  return e;
}

/// Fixed column basis realising A^(n) = Z^n + sum_j (Z/d_j)^n.
///
/// `U` is a unimodular (m+1) x (m+1) transform of the coefficient space with
/// U * P * V = diag(1, d_1, ..., d_{m-1}) stacked over a zero row, where P is
/// the relation matrix (first row all ones, then diag(p)). Coordinate 0 is
/// always trivial, coordinates 1..m-1 are the torsion parts and coordinate m
/// is the free part. The free row of U is oriented to equal the Euler
/// functional, so the free part of a class is exactly E(A).
struct BasisCert {
  std::vector<std::int64_t> cone_orders;
  IntMatrix U, U_inv;
  ElementaryDivisors divisors;

  std::size_t m() const { return cone_orders.size(); }
  std::size_t free_index() const { return m(); }
  const BigInt& torsion_modulus(std::size_t j) const { return divisors[j]; }
};

namespace detail {

inline std::shared_ptr<const BasisCert> build_basis_cert(const OrbifoldSignature& sig) {
  auto cert = std::make_shared<BasisCert>();
  cert->cone_orders = sig.cone_orders;
  cert->divisors = elementary_divisors(sig);
  const std::size_t m = sig.cone_orders.size();
  if (m == 0) {
    cert->U = IntMatrix::identity(1);
    cert->U_inv = IntMatrix::identity(1);
    return cert;
  }
  IntMatrix relations(m + 1, m);
  for (std::size_t i = 0; i < m; ++i) {
    relations(0, i) = 1;
    relations(i + 1, i) = sig.cone_orders[i];
  }
  SnfResult snf = smith_normal_form(relations);
  auto diag = snf.diagonal();
  if (diag[0] != 1)
    throw Error(ErrorCode::InternalVerificationFailed, "relation matrix SNF does not start with 1");
  for (std::size_t j = 1; j < m; ++j)
    if (diag[j] != cert->divisors[j])
      throw Error(ErrorCode::InternalVerificationFailed,
                  "relation matrix SNF disagrees with the elementary divisors at j = " +
                      std::to_string(j));

  // Orient the free coordinate along the Euler functional. Both are primitive
  // functionals vanishing on the relations, so they agree up to sign.
  std::vector<BigInt> euler(m + 1);
  euler[0] = -cert->divisors.top;
  for (std::size_t i = 1; i <= m; ++i) euler[i] = cert->divisors.top / sig.cone_orders[i - 1];
  bool same = true, opposite = true;
  for (std::size_t k = 0; k <= m; ++k) {
    same = same && snf.U(m, k) == euler[k];
    opposite = opposite && snf.U(m, k) == -euler[k];
  }
  if (opposite) {
    snf.U.negate_row(m);
    snf.U_inv.negate_col(m);
  } else if (!same) {
    throw Error(ErrorCode::InternalVerificationFailed, "free coordinate is not +-E");
  }
  cert->U = std::move(snf.U);
  cert->U_inv = std::move(snf.U_inv);
  return cert;
}

}  // namespace detail

/// One basis per cone-order list, computed once and shared across threads.
inline std::shared_ptr<const BasisCert> basis_cert(const OrbifoldSignature& sig) {
  static std::shared_mutex mutex;
  static std::map<std::vector<std::int64_t>, std::shared_ptr<const BasisCert>> cache;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(sig.cone_orders);
    if (it != cache.end()) return it->second;
  }
  auto cert = detail::build_basis_cert(sig);
  std::unique_lock lock(mutex);
  return cache.try_emplace(sig.cone_orders, std::move(cert)).first->second;
}

/// Free part in Z^n and torsion parts torsion[j-1] in (Z/d_j)^n, j = 1..m-1,
/// all in the fixed basis of `basis`.
struct Decomposition {
  std::vector<BigInt> free;
  std::vector<std::vector<BigInt>> torsion;
  std::shared_ptr<const BasisCert> basis;

  friend bool operator==(const Decomposition& a, const Decomposition& b) {
    return a.free == b.free && a.torsion == b.torsion;
  }
};

inline Decomposition decompose(const ExtensionClass& a) {
  auto cert = basis_cert(a.sig);
  const std::size_t m = a.m();
  // Coordinates: row k of rep maps to U * rep_k, i.e. rep * U^T.
  IntMatrix coords = a.rep * cert->U.transpose();
  Decomposition dec;
  dec.basis = cert;
  dec.free = coords.col(cert->free_index());
  for (std::size_t j = 1; j + 1 <= m; ++j) {
    auto part = coords.col(j);
    for (auto& x : part) x = mod(x, cert->torsion_modulus(j));
    dec.torsion.push_back(std::move(part));
  }
  return dec;
}

inline ExtensionClass recombine(const Decomposition& dec, const OrbifoldSignature& sig,
                                std::size_t n) {
  auto cert = basis_cert(sig);
  const std::size_t m = sig.cone_orders.size();
  const std::size_t torsion_count = m >= 1 ? m - 1 : 0;
  if (dec.free.size() != n || dec.torsion.size() != torsion_count)
    throw Error(ErrorCode::ModulusMismatch, "decomposition shape does not match (signature, n)");
  IntMatrix coords(n, m + 1);
  coords.set_col(cert->free_index(), dec.free);
  for (std::size_t j = 1; j <= torsion_count; ++j) {
    const auto& part = dec.torsion[j - 1];
    if (part.size() != n) throw Error(ErrorCode::ModulusMismatch, "torsion part has wrong length");
    for (const auto& x : part)
      if (x < 0 || x >= cert->torsion_modulus(j))
        throw Error(ErrorCode::ModulusMismatch,
                    "torsion part " + std::to_string(j) + " is not reduced mod d_j");
    coords.set_col(j, part);
  }
  return make_class(sig, n, coords * cert->U_inv.transpose());
}

/// (Phi, sigma) . A: column i moves to column sigma(i) (column 0 fixed), then
/// Phi multiplies from the left. Sigma is 0-based over the cone columns.
inline ExtensionClass act(const IntMatrix& phi, const Permutation& sigma, const ExtensionClass& a) {
  if (phi.rows() != a.n || !is_unimodular(phi))
    throw Error(ErrorCode::NotUnimodular, "Phi must lie in GL_n(Z)");
  if (!SymmetryGroup(a.sig).contains(sigma))
    throw Error(ErrorCode::PermutationNotInSigma, "sigma does not preserve cone orders");
  IntMatrix permuted(a.n, a.m() + 1);
  permuted.set_col(0, a.rep.col(0));
  for (std::size_t i = 0; i < a.m(); ++i) permuted.set_col(1 + sigma(i), a.rep.col(1 + i));
  return ExtensionClass{a.sig, a.n, phi * permuted};
}

inline ExtensionClass permute(const Permutation& sigma, const ExtensionClass& a) {
  return act(IntMatrix::identity(a.n), sigma, a);
}

}  // namespace profrig
