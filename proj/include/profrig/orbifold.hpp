#pragma once

#include "profrig/bigint.hpp"
#include "profrig/error.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace profrig {

/// Closed orientable 2-orbifold: genus of the underlying surface plus the
/// orders of its cone points. Cone orders keep their input order because
/// they index the columns of extension-class matrices.
struct OrbifoldSignature {
  std::int64_t genus = 0;
  std::vector<std::int64_t> cone_orders;

  std::size_t cone_count() const { return cone_orders.size(); }

  friend bool operator==(const OrbifoldSignature&, const OrbifoldSignature&) = default;
};

enum class SignatureKind { Finite, EuclideanTorus, Nice };

inline std::string_view to_string(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::Finite: return "finite";
    case SignatureKind::EuclideanTorus: return "euclidean_torus";
    case SignatureKind::Nice: return "nice";
  }
  return "unknown";
}

inline OrbifoldSignature validate_signature(std::int64_t genus,
                                            std::vector<std::int64_t> cone_orders) {
  if (genus < 0) throw Error(ErrorCode::NegativeGenus, "genus " + std::to_string(genus));
  for (std::size_t i = 0; i < cone_orders.size(); ++i) {
    if (cone_orders[i] <= 1) {
      throw Error(ErrorCode::NonPositiveOrder,
                  "cone order p_" + std::to_string(i + 1) + " = " +
                      std::to_string(cone_orders[i]) + " must be at least 2");
    }
  }
  return OrbifoldSignature{genus, std::move(cone_orders)};
}

/// chi = 2 - 2g - sum (1 - 1/p_i), exact.
inline Rational euler_characteristic(const OrbifoldSignature& sig) {
  Rational chi = 2 - 2 * BigInt(sig.genus);
  for (auto p : sig.cone_orders) chi -= Rational(1) - Rational(BigInt(1), BigInt(p));
  return chi;
}

inline SignatureKind classify_signature(const OrbifoldSignature& sig) {
  if (euler_characteristic(sig) > 0) return SignatureKind::Finite;
  if (sig.genus == 1 && sig.cone_orders.empty()) return SignatureKind::EuclideanTorus;
  return SignatureKind::Nice;
}

/// Permutation of {0..m-1}; image[i] is where position i goes.
struct Permutation {
  std::vector<int> image;

  static Permutation identity(std::size_t m) {
    Permutation p;
    p.image.resize(m);
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
  }

  std::size_t size() const { return image.size(); }
  int operator()(std::size_t i) const { return image[i]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < image.size(); ++i)
      if (image[i] != static_cast<int>(i)) return false;
    return true;
  }

  bool is_valid() const {
    std::vector<bool> seen(image.size(), false);
    for (int v : image) {
      if (v < 0 || static_cast<std::size_t>(v) >= image.size() || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  Permutation inverse() const {
    Permutation inv;
    inv.image.resize(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) inv.image[image[i]] = static_cast<int>(i);
    return inv;
  }

  /// (this * other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const {
    Permutation out;
    out.image.resize(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) out.image[i] = image[other.image[i]];
    return out;
  }

  int sign() const {
    int s = 1;
    std::vector<bool> seen(image.size(), false);
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = image[j]) {
        seen[j] = true;
        ++len;
      }
      if (len % 2 == 0) s = -s;
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

/// The column permutations sigma with p_{sigma(i)} = p_i: the direct product
/// of the symmetric groups on blocks of equal cone order.
///
/// Elements are enumerated lazily. The order is an odometer over blocks
/// (blocks sorted by first position, the last block varying fastest), each
/// block running through its arrangements in lexicographic order. The identity
/// comes first.
class SymmetryGroup {
 public:
  explicit SymmetryGroup(const OrbifoldSignature& sig) : m_(sig.cone_orders.size()) {
    std::map<std::int64_t, std::size_t> block_of;
    for (std::size_t i = 0; i < m_; ++i) {
      auto [it, inserted] = block_of.try_emplace(sig.cone_orders[i], blocks_.size());
      if (inserted) blocks_.emplace_back();
      blocks_[it->second].push_back(static_cast<int>(i));
    }
    block_index_.resize(m_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (int pos : blocks_[b]) block_index_[pos] = b;
  }

  std::size_t degree() const { return m_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  BigInt order() const {
    BigInt total = 1;
    for (const auto& block : blocks_)
      for (std::size_t k = 2; k <= block.size(); ++k) total *= k;
    return total;
  }

  bool contains(const Permutation& sigma) const {
    if (sigma.size() != m_ || !sigma.is_valid()) return false;
    for (std::size_t i = 0; i < m_; ++i)
      if (block_index_[sigma(i)] != block_index_[i]) return false;
    return true;
  }

  /// A transposition and a full cycle per block of size at least 2.
  std::vector<Permutation> generators() const {
    std::vector<Permutation> gens;
    for (const auto& block : blocks_) {
      if (block.size() < 2) continue;
      auto swap = Permutation::identity(m_);
      std::swap(swap.image[block[0]], swap.image[block[1]]);
      gens.push_back(swap);
      if (block.size() > 2) {
        auto cycle = Permutation::identity(m_);
        for (std::size_t k = 0; k < block.size(); ++k)
          cycle.image[block[k]] = block[(k + 1) % block.size()];
        gens.push_back(cycle);
      }
    }
    return gens;
  }

  /// Visit elements in the documented order until the visitor returns false.
  /// Returns false iff the visitor stopped the enumeration.
  bool for_each(const std::function<bool(const Permutation&)>& visit) const {
    std::vector<std::vector<int>> arrangement = blocks_;
    while (true) {
      Permutation sigma = Permutation::identity(m_);
      for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (std::size_t k = 0; k < blocks_[b].size(); ++k)
          sigma.image[blocks_[b][k]] = arrangement[b][k];
      if (!visit(sigma)) return false;
      std::size_t b = blocks_.size();
      while (b > 0) {
        --b;
        if (std::next_permutation(arrangement[b].begin(), arrangement[b].end())) break;
        // next_permutation wrapped around to sorted order; carry into block b-1.
        if (b == 0) return true;
      }
      if (blocks_.empty()) return true;
    }
  }

  std::vector<Permutation> elements() const {
    std::vector<Permutation> out;
    for_each([&](const Permutation& s) {
      out.push_back(s);
      return true;
    });
    return out;
  }

 private:
  std::size_t m_;
  std::vector<std::vector<int>> blocks_;
  std::vector<std::size_t> block_index_;
};

inline SymmetryGroup symmetry_group(const OrbifoldSignature& sig) { return SymmetryGroup(sig); }

}  // namespace profrig
