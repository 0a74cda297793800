#pragma once

#include "profrig/bigint.hpp"
#include "profrig/coclass.hpp"
#include "profrig/error.hpp"
#include "profrig/modmatrix.hpp"
#include "profrig/orbifold.hpp"
#include "profrig/orbits.hpp"

#include <optional>
#include <string>
#include <vector>

namespace profrig {

/// Prime power p^alpha.
struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;
  BigInt value;
};

struct RigidityVerdict {
  enum class Kind { Rigid, NonRigid, Unresolved12 };
  enum class RigidReason { NGreaterThanM, SmallUnitGroup };

  Kind kind = Kind::Rigid;
  std::optional<RigidReason> reason;
  /// d_{m-(n-1)} when n <= m.
  std::optional<BigInt> d_value;
  std::optional<PrimePower> certificate;
  std::vector<BigInt> d_sequence;
};

inline std::string_view to_string(RigidityVerdict::Kind k) {
  switch (k) {
    case RigidityVerdict::Kind::Rigid: return "rigid";
    case RigidityVerdict::Kind::NonRigid: return "nonrigid";
    case RigidityVerdict::Kind::Unresolved12: return "unresolved12";
  }
  return "unknown";
}

inline std::string_view to_string(RigidityVerdict::RigidReason r) {
  return r == RigidityVerdict::RigidReason::NGreaterThanM ? "n_greater_than_m" : "small_unit_group";
}

/// 1, 2, 3, 4, 6: exactly the t with at most two units mod t.
inline bool has_small_unit_group(const BigInt& t) {
  return t == 1 || t == 2 || t == 3 || t == 4 || t == 6;
}

/// Smallest prime power dividing d that is not 2, 3 or 4.
inline std::optional<PrimePower> smallest_large_prime_power(BigInt d) {
  std::optional<PrimePower> best;
  auto consider = [&](const BigInt& p, unsigned multiplicity) {
    BigInt value = 1;
    for (unsigned e = 1; e <= multiplicity; ++e) {
      value *= p;
      if (value == 2 || value == 3 || value == 4) continue;
      if (!best || value < best->value) best = PrimePower{p, e, value};
      return;
    }
  };
  for (BigInt p = 2; p * p <= d; ++p) {
    unsigned multiplicity = 0;
    while (d % p == 0) {
      d /= p;
      ++multiplicity;
    }
    if (multiplicity > 0) consider(p, multiplicity);
  }
  if (d > 1) consider(d, 1);
  return best;
}

inline RigidityVerdict classify_rigidity(const OrbifoldSignature& sig, std::size_t n) {
  validate_signature(sig.genus, sig.cone_orders);
  require_rank(n);
  require_infinite(sig);
  RigidityVerdict v;
  v.d_sequence = elementary_divisors(sig).d;
  const std::size_t m = sig.cone_orders.size();
  if (n > m) {
    v.kind = RigidityVerdict::Kind::Rigid;
    v.reason = RigidityVerdict::RigidReason::NGreaterThanM;
    return v;
  }
  const BigInt d = v.d_sequence[m - (n - 1) - 1];
  v.d_value = d;
  if (has_small_unit_group(d)) {
    v.kind = RigidityVerdict::Kind::Rigid;
    v.reason = RigidityVerdict::RigidReason::SmallUnitGroup;
  } else if (d == 12) {
    v.kind = RigidityVerdict::Kind::Unresolved12;
  } else {
    v.kind = RigidityVerdict::Kind::NonRigid;
    v.certificate = smallest_large_prime_power(d);
  }
  return v;
}

struct NonRigidPair {
  ExtensionClass a, b;
  ProfiniteWitness witness;
};

namespace detail {

/// Unit x mod `modulus` with x = a mod p^{v_p(modulus)} and x = 1 on the
/// prime-to-p part.
inline std::int64_t extend_unit(std::int64_t a, std::int64_t p, std::int64_t modulus) {
  std::int64_t p_part = 1;
  std::int64_t rest = modulus;
  while (rest % p == 0) {
    rest /= p;
    p_part *= p;
  }
  if (rest == 1) return mod(a, modulus);
  std::int64_t inv = *inverse_mod(p_part, rest);
  std::int64_t t = mul_mod(mod(1 - a, rest), inv, rest);
  return mod(a + static_cast<std::int64_t>(static_cast<__int128>(p_part) * t % modulus), modulus);
}

}  // namespace detail

/// Builds A with identity columns at n cone positions divisible by the
/// certificate q, and B = Phi_hat . A where, in A's normalised coordinates,
/// Phi_hat = diag(1, ..., 1, a) with a a unit mod q that is not +-1. The pair
/// is returned only after both decisions confirm it.
inline NonRigidPair construct_nonrigid_pair(const OrbifoldSignature& sig, std::size_t n,
                                            const SearchOptions& opts = {}) {
  RigidityVerdict verdict = classify_rigidity(sig, n);
  if (verdict.kind != RigidityVerdict::Kind::NonRigid || !verdict.certificate)
    throw Error(ErrorCode::NotNonRigid, "(signature, n) is not in the non-rigid regime");
  const BigInt q = verdict.certificate->value;

  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < sig.cone_orders.size() && positions.size() < n; ++i)
    if (sig.cone_orders[i] % q == 0) positions.push_back(i);
  if (positions.size() < n)
    throw Error(ErrorCode::InternalVerificationFailed, "fewer than n cone orders divisible by " + q.str());

  IntMatrix rep(n, sig.cone_orders.size() + 1);
  for (std::size_t k = 0; k < n; ++k) rep(k, positions[k] + 1) = 1;
  ExtensionClass a = make_class(sig, n, rep);

  const std::int64_t q64 = static_cast<std::int64_t>(q);
  std::int64_t a_unit = 2;
  while (!is_unit_mod(a_unit, q64) || mod(a_unit, q64) == 1 || mod(a_unit, q64) == q64 - 1) ++a_unit;
  const std::int64_t modulus = detail::search_modulus(sig);
  const std::int64_t a_mod_d =
      detail::extend_unit(a_unit, static_cast<std::int64_t>(verdict.certificate->prime), modulus);

  ModMatrix r = ModMatrix::identity(n, modulus);
  r.set(n - 1, n - 1, a_mod_d);

  NormalizedClass na = canonical_normalize(a);
  Decomposition dec = decompose(a);
  for (std::size_t j = 1; j <= dec.torsion.size(); ++j) {
    const BigInt& dj = dec.basis->torsion_modulus(j);
    std::vector<BigInt> image(n);
    for (std::size_t i = 0; i < n; ++i) {
      image[i] = na.torsion[j - 1][i];
      if (i == n - 1) image[i] *= a_mod_d;
    }
    auto back = na.U_inv * image;
    for (auto& x : back) x = mod(x, dj);
    dec.torsion[j - 1] = std::move(back);
  }
  ExtensionClass b = recombine(dec, sig, n);

  ProfiniteWitness w{Permutation::identity(sig.cone_orders.size()), r, determinant_mod(r)};
  if (!verify_witness(w, a, b))
    throw Error(ErrorCode::InternalVerificationFailed, "constructed profinite witness does not verify");
  if (decide_integral_iso(a, b, opts))
    throw Error(ErrorCode::InternalVerificationFailed, "constructed pair is integrally isomorphic");
  if (!decide_profinite_iso(a, b, opts))
    throw Error(ErrorCode::InternalVerificationFailed, "profinite search found no witness");
  return NonRigidPair{std::move(a), std::move(b), std::move(w)};
}

/// Appends a zero row: the class of G x Z.
inline ExtensionClass stabilize(const ExtensionClass& a) {
  IntMatrix rep(a.n + 1, a.m() + 1);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j <= a.m(); ++j) rep(i, j) = a.rep(i, j);
  return make_class(a.sig, a.n + 1, std::move(rep));
}

inline IntMatrix block_diag_one(const IntMatrix& m) {
  IntMatrix out(m.rows() + 1, m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  out(m.rows(), m.cols()) = 1;
  return out;
}

/// From a profinite witness for (A, B), an integral witness for the
/// stabilised pair: blockdiag(R, det(R)^{-1}) has determinant 1 mod D and
/// lifts to GL_{n+1}(Z).
inline IntegralWitness stabilized_integral_witness(const ExtensionClass& a, const ExtensionClass& b,
                                                   const ProfiniteWitness& w) {
  if (!verify_witness(w, a, b)) throw Error(ErrorCode::WitnessInvalid, "profinite witness does not verify");
  const std::int64_t modulus = w.r.modulus();
  const std::size_t n = a.n;
  NormalizedClass na = canonical_normalize(a);
  NormalizedClass nb = canonical_normalize(permute(w.sigma.inverse(), b));

  ModMatrix block(n + 1, modulus);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) block.set(i, j, w.r(i, j));
  block.set(n, n, modulus == 1 ? 0 : *inverse_mod(determinant_mod(w.r), modulus));

  IntMatrix lifted = lift_modular_matrix(block, true, na.content != 0);
  IntegralWitness out{block_diag_one(nb.U_inv) * lifted * block_diag_one(na.U), w.sigma, block};
  if (!verify_witness(out, stabilize(a), stabilize(b)))
    throw Error(ErrorCode::InternalVerificationFailed, "stabilised witness does not verify");
  return out;
}

}  // namespace profrig
