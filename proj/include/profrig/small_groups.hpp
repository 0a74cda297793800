#pragma once

#include "profrig/groups.hpp"

#include <string>
#include <vector>

namespace profrig {

namespace detail {

/// Permutation on `degree` points from disjoint cycles.
inline std::vector<int> cycles(std::size_t degree, const std::vector<std::vector<int>>& cs) {
  std::vector<int> p(degree);
  for (std::size_t i = 0; i < degree; ++i) p[i] = static_cast<int>(i);
  for (const auto& c : cs)
    for (std::size_t k = 0; k < c.size(); ++k) p[c[k]] = c[(k + 1) % c.size()];
  return p;
}

inline std::vector<int> cycle_on(std::size_t degree, int start, int length) {
  std::vector<int> c;
  for (int i = 0; i < length; ++i) c.push_back(start + i);
  return cycles(degree, {c});
}

/// Abelian group as a product of cyclic factors acting on disjoint blocks.
inline FiniteGroup abelian(const std::string& name, const std::vector<int>& factors) {
  std::size_t degree = 0;
  for (int f : factors) degree += static_cast<std::size_t>(f);
  std::vector<std::vector<int>> gens;
  int start = 0;
  for (int f : factors) {
    gens.push_back(cycle_on(degree, start, f));
    start += f;
  }
  return FiniteGroup::from_permutations(name, gens);
}

/// Dihedral group of order 2k acting on the k-gon.
inline FiniteGroup dihedral(const std::string& name, int k) {
  std::vector<int> reflection(k);
  for (int i = 0; i < k; ++i) reflection[i] = (k - i) % k;
  return FiniteGroup::from_permutations(name, {cycle_on(k, 0, k), reflection});
}

}  // namespace detail

/// Every group of order at most `max_order` (up to 12), one per isomorphism
/// class, in order of size.
inline std::vector<FiniteGroup> small_groups(std::size_t max_order = 12) {
  using detail::abelian;
  using detail::cycles;
  std::vector<FiniteGroup> out;
  auto add = [&](FiniteGroup g) {
    if (g.order() <= max_order) out.push_back(std::move(g));
  };
  add(FiniteGroup::from_permutations("C1", {{0}}));
  add(abelian("C2", {2}));
  add(abelian("C3", {3}));
  add(abelian("C4", {4}));
  add(abelian("C2xC2", {2, 2}));
  add(abelian("C5", {5}));
  add(abelian("C6", {6}));
  add(detail::dihedral("S3", 3));
  add(abelian("C7", {7}));
  add(abelian("C8", {8}));
  add(abelian("C4xC2", {4, 2}));
  add(abelian("C2xC2xC2", {2, 2, 2}));
  add(detail::dihedral("D8", 4));
  // i = (0 1 2 3)(4 5 6 7), j = (0 4 2 6)(1 7 3 5): the regular quaternion action.
  add(FiniteGroup::from_permutations("Q8", {cycles(8, {{0, 1, 2, 3}, {4, 5, 6, 7}}),
                                            cycles(8, {{0, 4, 2, 6}, {1, 7, 3, 5}})}));
  add(abelian("C9", {9}));
  add(abelian("C3xC3", {3, 3}));
  add(abelian("C10", {10}));
  add(detail::dihedral("D10", 5));
  add(abelian("C11", {11}));
  add(abelian("C12", {12}));
  add(abelian("C6xC2", {6, 2}));
  add(FiniteGroup::from_permutations("A4", {cycles(4, {{0, 1, 2}}), cycles(4, {{0, 1}, {2, 3}})}));
  add(detail::dihedral("D12", 6));
  // x = (0 1 2) inverted by y = (1 2)(3 4 5 6): y has order 4, y^2 is central.
  add(FiniteGroup::from_permutations("Dic12", {cycles(7, {{0, 1, 2}}), cycles(7, {{1, 2}, {3, 4, 5, 6}})}));
  return out;
}

}  // namespace profrig
