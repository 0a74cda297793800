#pragma once

#include "profrig/bigint.hpp"
#include "profrig/coclass.hpp"
#include "profrig/error.hpp"
#include "profrig/modmatrix.hpp"
#include "profrig/orbifold.hpp"
#include "profrig/zmatrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace profrig {

/// A class in normalised coordinates: the free part is moved to (c, 0, ..., 0)
/// by a unimodular U, and the torsion parts are carried along by U.
struct NormalizedClass {
  IntMatrix U, U_inv;
  BigInt content;
  std::vector<BigInt> free;
  std::vector<std::vector<BigInt>> torsion;
};

inline NormalizedClass canonical_normalize(const ExtensionClass& a) {
  require_rank(a.n);
  Decomposition dec = decompose(a);
  HermiteResult h = hermite_left_reduce(IntMatrix::column(dec.free));
  NormalizedClass out;
  out.U = std::move(h.U);
  out.U_inv = std::move(h.U_inv);
  out.free = h.T.col(0);
  out.content = out.free[0];
  for (std::size_t j = 1; j <= dec.torsion.size(); ++j) {
    auto part = out.U * dec.torsion[j - 1];
    for (auto& x : part) x = mod(x, dec.basis->torsion_modulus(j));
    out.torsion.push_back(std::move(part));
  }
  return out;
}

struct IntegralWitness {
  IntMatrix phi;
  Permutation sigma;
  /// The congruence solution the witness was lifted from (normalised coordinates).
  ModMatrix r;
};

struct ProfiniteWitness {
  Permutation sigma;
  ModMatrix r;
  std::int64_t det_class = 0;

  std::int64_t modulus() const { return r.modulus(); }
};

struct SearchOptions {
  /// Upper bound on candidate rows plus candidate matrices examined.
  std::uint64_t budget = 200'000'000;
};

namespace detail {

inline std::int64_t search_modulus(const OrbifoldSignature& sig) {
  BigInt d = elementary_divisors(sig).torsion_exponent;
  if (d > BigInt(3'000'000'000LL))
    throw Error(ErrorCode::BudgetExceeded, "torsion exponent " + d.str() + " is too large to search");
  return static_cast<std::int64_t>(d);
}

enum class DetRule { PlusMinusOne, AnyUnit };

/// Find the lexicographically least R in GL_n(Z/D) (row-major) such that
/// R x_j = y_j mod d_j for every torsion part, the first column is e_1 when
/// `pin` is set, and det R obeys `rule`. Rows are constrained independently,
/// so each row is drawn from a pre-filtered candidate list.
inline std::optional<ModMatrix> congruence_search(const NormalizedClass& a, const NormalizedClass& b,
                                                  const std::vector<std::int64_t>& moduli,
                                                  std::int64_t modulus, bool pin, DetRule rule,
                                                  std::uint64_t& spent, std::uint64_t budget) {
  const std::size_t n = a.free.size();
  auto charge = [&](std::uint64_t cost) {
    spent += cost;
    if (spent > budget)
      throw Error(ErrorCode::BudgetExceeded, "search exceeded budget of " + std::to_string(budget));
  };

  std::vector<std::vector<std::int64_t>> xs, ys;
  std::vector<std::int64_t> mods;
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    if (moduli[j] == 1) continue;
    std::vector<std::int64_t> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = static_cast<std::int64_t>(a.torsion[j][k]);
      y[k] = static_cast<std::int64_t>(b.torsion[j][k]);
    }
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
    mods.push_back(moduli[j]);
  }

  std::vector<std::vector<std::vector<std::int64_t>>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> row(n, 0);
    if (pin) row[0] = mod(static_cast<std::int64_t>(i == 0), modulus);
    const std::size_t first_free = pin ? 1 : 0;
    while (true) {
      charge(1);
      bool ok = true;
      for (std::size_t j = 0; j < mods.size() && ok; ++j) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += static_cast<__int128>(row[k]) * xs[j][k];
        ok = static_cast<std::int64_t>(((acc % mods[j]) + mods[j]) % mods[j]) == ys[j][i];
      }
      if (ok) candidates[i].push_back(row);
      std::size_t k = n;
      bool wrapped = true;
      while (k > first_free) {
        --k;
        if (++row[k] < modulus) {
          wrapped = false;
          break;
        }
        row[k] = 0;
      }
      if (wrapped) break;
    }
    if (candidates[i].empty()) return std::nullopt;
  }

  std::vector<std::size_t> choice(n, 0);
  ModMatrix r(n, modulus);
  while (true) {
    charge(1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) r.set(i, k, candidates[i][choice[i]][k]);
    std::int64_t det = determinant_mod(r);
    bool accept = false;
    if (modulus == 1) {
      accept = true;
    } else if (rule == DetRule::PlusMinusOne) {
      accept = det == 1 || det == modulus - 1;
    } else {
      accept = is_unit_mod(det, modulus);
    }
    if (accept) return r;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++choice[i] < candidates[i].size()) break;
      choice[i] = 0;
      if (i == 0) return std::nullopt;
    }
  }
}

inline std::vector<std::int64_t> torsion_moduli(const OrbifoldSignature& sig) {
  auto divisors = elementary_divisors(sig);
  std::vector<std::int64_t> out;
  for (std::size_t j = 1; j + 1 <= sig.cone_orders.size(); ++j)
    out.push_back(static_cast<std::int64_t>(divisors[j]));
  return out;
}

struct Hit {
  Permutation sigma;
  ModMatrix r;
  NormalizedClass a, b;
};

/// Shared driver of both decisions: sigma in Sigma order, R lexicographic.
inline std::optional<Hit> find_orbit_hit(const ExtensionClass& a, const ExtensionClass& b, DetRule rule,
                                         const SearchOptions& opts) {
  require_compatible(a, b);
  require_rank(a.n);
  const std::int64_t modulus = search_modulus(a.sig);
  const auto moduli = torsion_moduli(a.sig);
  NormalizedClass na = canonical_normalize(a);
  // Content is Sigma-invariant, so one comparison settles every sigma.
  if (na.content != canonical_normalize(b).content) return std::nullopt;
  const bool pin = na.content != 0;

  std::optional<Hit> hit;
  std::uint64_t spent = 0;
  SymmetryGroup(a.sig).for_each([&](const Permutation& sigma) {
    NormalizedClass nb = canonical_normalize(permute(sigma.inverse(), b));
    auto r = congruence_search(na, nb, moduli, modulus, pin, rule, spent, opts.budget);
    if (!r) return true;
    hit = Hit{sigma, *r, na, std::move(nb)};
    return false;
  });
  return hit;
}

}  // namespace detail

inline bool verify_witness(const IntegralWitness& w, const ExtensionClass& a, const ExtensionClass& b) {
  try {
    require_compatible(a, b);
    return class_equal(act(w.phi, w.sigma, a), b);
  } catch (const Error&) {
    return false;
  }
}

/// Re-derives the normalised coordinates of A and sigma^{-1} B and checks
/// content equality, the first-column pin and every torsion congruence.
inline bool verify_witness(const ProfiniteWitness& w, const ExtensionClass& a, const ExtensionClass& b) {
  try {
    require_compatible(a, b);
    if (!SymmetryGroup(a.sig).contains(w.sigma)) return false;
    const std::int64_t modulus = detail::search_modulus(a.sig);
    if (w.r.modulus() != modulus || w.r.size() != a.n) return false;
    const std::int64_t det = determinant_mod(w.r);
    if (modulus > 1 && (!is_unit_mod(det, modulus) || det != w.det_class)) return false;
    NormalizedClass na = canonical_normalize(a);
    NormalizedClass nb = canonical_normalize(permute(w.sigma.inverse(), b));
    if (na.content != nb.content) return false;
    if (na.content != 0)
      for (std::size_t i = 0; i < a.n; ++i)
        if (w.r(i, 0) != mod(static_cast<std::int64_t>(i == 0), modulus)) return false;
    const auto moduli = detail::torsion_moduli(a.sig);
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      std::vector<std::int64_t> x(a.n);
      for (std::size_t k = 0; k < a.n; ++k) x[k] = static_cast<std::int64_t>(na.torsion[j][k]);
      auto rx = w.r.apply(x);
      for (std::size_t k = 0; k < a.n; ++k)
        if (mod(rx[k], moduli[j]) != static_cast<std::int64_t>(nb.torsion[j][k])) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// Integral isomorphism: an orbit of GL_n(Z) x Sigma. The search covers the
/// full image of the stabiliser of (c, 0, ..., 0) in GL_n(Z/D), so an empty
/// search certifies non-isomorphism.
inline std::optional<IntegralWitness> decide_integral_iso(const ExtensionClass& a, const ExtensionClass& b,
                                                          const SearchOptions& opts = {}) {
  auto hit = detail::find_orbit_hit(a, b, detail::DetRule::PlusMinusOne, opts);
  if (!hit) return std::nullopt;
  IntMatrix lifted = lift_modular_matrix(hit->r, true, hit->a.content != 0);
  IntegralWitness w{hit->b.U_inv * lifted * hit->a.U, hit->sigma, hit->r};
  if (!verify_witness(w, a, b))
    throw Error(ErrorCode::InternalVerificationFailed, "integral witness failed verification");
  return w;
}

/// Profinite isomorphism: an orbit of GL_n(Zhat) x Sigma. Any unit
/// determinant is allowed; the first column stays pinned to e_1 when the
/// common content is nonzero.
inline std::optional<ProfiniteWitness> decide_profinite_iso(const ExtensionClass& a, const ExtensionClass& b,
                                                            const SearchOptions& opts = {}) {
  auto hit = detail::find_orbit_hit(a, b, detail::DetRule::AnyUnit, opts);
  if (!hit) return std::nullopt;
  ProfiniteWitness w{hit->sigma, hit->r, determinant_mod(hit->r)};
  if (!verify_witness(w, a, b))
    throw Error(ErrorCode::InternalVerificationFailed, "profinite witness failed verification");
  return w;
}

}  // namespace profrig
