#pragma once

#include "profrig/bigint.hpp"
#include "profrig/coclass.hpp"
#include "profrig/error.hpp"
#include "profrig/orbifold.hpp"
#include "profrig/zmatrix.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace profrig {

/// A word as a sequence of (generator index, exponent) syllables.
struct Word {
  std::vector<std::pair<std::size_t, BigInt>> syllables;

  Word& append(std::size_t gen, const BigInt& exponent) {
    if (exponent != 0) syllables.emplace_back(gen, exponent);
    return *this;
  }

  friend bool operator==(const Word&, const Word&) = default;
};

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  std::size_t generator_index(const std::string& name) const {
    auto it = std::find(generators.begin(), generators.end(), name);
    if (it == generators.end()) throw Error(ErrorCode::ParseError, "unknown generator '" + name + "'");
    return static_cast<std::size_t>(it - generators.begin());
  }

  /// First line: generator names. Then one relator per line, e.g.
  /// "a1^5 z1^-2 z2^1". An empty relator line stands for the trivial word.
  std::string to_text() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < generators.size(); ++i) out << (i ? " " : "") << generators[i];
    out << '\n';
    for (const auto& rel : relators) {
      for (std::size_t k = 0; k < rel.syllables.size(); ++k)
        out << (k ? " " : "") << generators[rel.syllables[k].first] << '^' << rel.syllables[k].second;
      out << '\n';
    }
    return out.str();
  }

  static Presentation parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Presentation p;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty presentation");
    {
      std::istringstream names(line);
      std::string name;
      while (names >> name) p.generators.push_back(name);
    }
    while (std::getline(in, line)) {
      std::istringstream tokens(line);
      std::string token;
      Word w;
      while (tokens >> token) {
        auto caret = token.find('^');
        std::string name = token.substr(0, caret);
        BigInt exponent = 1;
        if (caret != std::string::npos) {
          try {
            exponent = BigInt(token.substr(caret + 1));
          } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad exponent in '" + token + "'");
          }
        }
        w.append(p.generator_index(name), exponent);
      }
      p.relators.push_back(std::move(w));
    }
    return p;
  }
};

inline Word commutator(std::size_t a, std::size_t b) {
  Word w;
  w.append(a, 1).append(b, 1).append(a, -1).append(b, -1);
  return w;
}

/// Presentation of the extension group of A:
///   prod [x_i, y_i] * a_1 ... a_m * z^{-x_0},
///   a_i^{p_i} * z^{-x_i},
///   [z_k, g] for every other generator g.
/// Replacing a_i by a_i z^w shifts A by w r_0 + p_i w r_i, which is exactly
/// one relation, so class-equal matrices give isomorphic presentations.
inline Presentation emit_presentation(const ExtensionClass& a) {
  Presentation p;
  const std::size_t g = static_cast<std::size_t>(a.sig.genus), m = a.m(), n = a.n;
  for (std::size_t i = 1; i <= g; ++i) p.generators.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= g; ++i) p.generators.push_back("y" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) p.generators.push_back("a" + std::to_string(i));
  for (std::size_t k = 1; k <= n; ++k) p.generators.push_back("z" + std::to_string(k));
  auto x = [&](std::size_t i) { return i; };
  auto y = [&](std::size_t i) { return g + i; };
  auto cone = [&](std::size_t i) { return 2 * g + i; };
  auto z = [&](std::size_t k) { return 2 * g + m + k; };

  Word surface;
  for (std::size_t i = 0; i < g; ++i) {
    const Word c = commutator(x(i), y(i));
    surface.syllables.insert(surface.syllables.end(), c.syllables.begin(), c.syllables.end());
  }
  for (std::size_t i = 0; i < m; ++i) surface.append(cone(i), 1);
  for (std::size_t k = 0; k < n; ++k) surface.append(z(k), -a.rep(k, 0));
  p.relators.push_back(std::move(surface));

  for (std::size_t i = 0; i < m; ++i) {
    Word w;
    w.append(cone(i), a.sig.cone_orders[i]);
    for (std::size_t k = 0; k < n; ++k) w.append(z(k), -a.rep(k, i + 1));
    p.relators.push_back(std::move(w));
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t gen = 0; gen < p.generators.size(); ++gen) {
      if (gen == z(k)) continue;
      if (gen >= z(0) && gen < z(k)) continue;  // [z_l, z_k] already listed
      p.relators.push_back(commutator(z(k), gen));
    }
  return p;
}

/// Z^free_rank + Z/t_1 + ... with t_1 | t_2 | ... and every t_i >= 2.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;

  std::string to_string() const {
    std::ostringstream out;
    out << "Z^" << free_rank;
    for (const auto& t : torsion) out << " + Z/" << t;
    return out.str();
  }
};

inline AbelianInvariants invariants_from_relations(const IntMatrix& relations, std::size_t extra_free) {
  AbelianInvariants out;
  std::size_t rank = 0;
  for (const auto& d : smith_normal_form(relations).diagonal()) {
    if (d == 0) continue;
    ++rank;
    if (d > 1) out.torsion.push_back(d);
  }
  out.free_rank = extra_free + relations.cols() - rank;
  return out;
}

/// Abelianisation of an arbitrary presentation via its exponent-sum matrix.
inline AbelianInvariants abelianize(const Presentation& p) {
  IntMatrix relations(p.relators.size(), p.generators.size());
  for (std::size_t r = 0; r < p.relators.size(); ++r)
    for (const auto& [gen, e] : p.relators[r].syllables) relations(r, gen) += e;
  return invariants_from_relations(relations, 0);
}

/// Abelianisation of the extension group: the x, y generators contribute
/// Z^{2g}; the rest is the SNF of the relator matrix over (a_1..a_m, z_1..z_n)
/// with rows (1 ... 1 | -x_0) and (p_i e_i | -x_i).
inline AbelianInvariants abelianization(const ExtensionClass& a) {
  const std::size_t m = a.m(), n = a.n;
  IntMatrix relations(m + 1, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    relations(0, i) = 1;
    relations(i + 1, i) = a.sig.cone_orders[i];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= m; ++i) relations(i, m + k) = -a.rep(k, i);
  return invariants_from_relations(relations, 2 * static_cast<std::size_t>(a.sig.genus));
}

/// H_k x Z^{copies}.
struct HkForm {
  BigInt k;
  std::size_t copies = 0;
};

inline HkForm hk_form(const ExtensionClass& a) {
  if (a.sig.genus != 1 || a.m() != 0)
    throw Error(ErrorCode::WrongSignature, "H_k form needs the torus signature (g = 1, no cone points)");
  return HkForm{content(a.rep.col(0)), a.n - 1};
}

/// A finite group given by its Cayley table: mul(a, b) = table[a * order + b].
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Validates closure, identity, inverses and associativity.
  static FiniteGroup from_table(std::string name, std::size_t order, std::vector<std::uint32_t> table) {
    if (order == 0 || table.size() != order * order)
      throw Error(ErrorCode::InvalidArgument, "table of " + name + " has the wrong size");
    FiniteGroup g;
    g.name_ = std::move(name);
    g.order_ = order;
    g.table_ = std::move(table);
    for (auto v : g.table_)
      if (v >= order) throw Error(ErrorCode::InvalidArgument, "table entry out of range");
    bool found = false;
    for (std::size_t e = 0; e < order && !found; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < order && ok; ++x) ok = g.mul(e, x) == x && g.mul(x, e) == x;
      if (ok) {
        g.identity_ = e;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InvalidArgument, g.name_ + " has no identity");
    g.inverse_.assign(order, order);
    for (std::size_t x = 0; x < order; ++x)
      for (std::size_t y = 0; y < order; ++y)
        if (g.mul(x, y) == g.identity_) g.inverse_[x] = y;
    for (auto v : g.inverse_)
      if (v == order) throw Error(ErrorCode::InvalidArgument, g.name_ + " lacks inverses");
    for (std::size_t x = 0; x < order; ++x)
      for (std::size_t y = 0; y < order; ++y)
        for (std::size_t z = 0; z < order; ++z)
          if (g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z)))
            throw Error(ErrorCode::InvalidArgument, g.name_ + " is not associative");
    return g;
  }

  /// Closure of permutation generators; element 0 is the identity.
  static FiniteGroup from_permutations(std::string name, const std::vector<std::vector<int>>& gens) {
    const std::size_t degree = gens.empty() ? 0 : gens.front().size();
    std::vector<int> id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<int>(i);
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, std::size_t> index{{id, 0}};
    auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
      std::vector<int> c(degree);
      for (std::size_t i = 0; i < degree; ++i) c[i] = a[b[i]];
      return c;
    };
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& s : gens) {
        auto c = compose(elems[i], s);
        if (index.try_emplace(c, elems.size()).second) elems.push_back(c);
      }
    const std::size_t order = elems.size();
    std::vector<std::uint32_t> table(order * order);
    for (std::size_t a = 0; a < order; ++a)
      for (std::size_t b = 0; b < order; ++b)
        table[a * order + b] = static_cast<std::uint32_t>(index.at(compose(elems[a], elems[b])));
    return from_table(std::move(name), order, std::move(table));
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * order_ + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  std::size_t element_order(std::size_t a) const {
    std::size_t k = 1;
    for (std::size_t x = a; x != identity_; x = mul(x, a)) ++k;
    return k;
  }

  std::vector<std::size_t> center() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < order_; ++a) {
      bool central = true;
      for (std::size_t b = 0; b < order_ && central; ++b) central = mul(a, b) == mul(b, a);
      if (central) out.push_back(a);
    }
    return out;
  }

  bool is_abelian() const { return center().size() == order_; }

 private:
  std::string name_;
  std::size_t order_ = 0;
  std::size_t identity_ = 0;
  std::vector<std::uint32_t> table_;
  std::vector<std::size_t> inverse_;
};

struct HomCountOptions {
  std::size_t max_order = 16;
  std::size_t max_generators = 15;
  std::uint64_t node_budget = 500'000'000;
  unsigned jobs = 1;
};

namespace detail {

/// Generators forced central by commutator relators with every other generator.
inline std::vector<bool> forced_central(const Presentation& p) {
  std::set<std::pair<std::size_t, std::size_t>> commuting;
  for (const auto& r : p.relators) {
    const auto& s = r.syllables;
    if (s.size() != 4) continue;
    const std::size_t u = s[0].first, v = s[1].first;
    if (u == v || s[2].first != u || s[3].first != v) continue;
    if (s[0].second == 1 && s[1].second == 1 && s[2].second == -1 && s[3].second == -1) {
      commuting.emplace(u, v);
      commuting.emplace(v, u);
    }
  }
  std::vector<bool> central(p.generators.size(), false);
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    bool all = true;
    for (std::size_t h = 0; h < p.generators.size() && all; ++h) all = h == g || commuting.count({g, h});
    central[g] = all;
  }
  return central;
}

}  // namespace detail

/// Number of homomorphisms from the presented group to `target`, by
/// backtracking over generator images. Generators forced central are assigned
/// first; each relator is checked as soon as its last generator is assigned,
/// so the commutator relators confine every later generator to the
/// centraliser of the central images. (A central generator need not land in
/// Z(target) unless the hom is onto.)
inline std::uint64_t count_homs(const Presentation& p, const FiniteGroup& target,
                                const HomCountOptions& opts = {}) {
  const std::size_t k = p.generators.size();
  const std::size_t order = target.order();
  if (order > opts.max_order)
    throw Error(ErrorCode::BudgetExceeded, "target order " + std::to_string(order) + " exceeds bound");
  if (k > opts.max_generators)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(k) + " generators exceed bound");

  const auto central = detail::forced_central(p);
  std::vector<std::size_t> assign_order;
  for (std::size_t g = 0; g < k; ++g)
    if (central[g]) assign_order.push_back(g);
  for (std::size_t g = 0; g < k; ++g)
    if (!central[g]) assign_order.push_back(g);
  std::vector<std::size_t> depth_of(k);
  for (std::size_t d = 0; d < k; ++d) depth_of[assign_order[d]] = d;

  std::vector<std::size_t> all(order);
  for (std::size_t i = 0; i < order; ++i) all[i] = i;

  // Syllables with exponents reduced mod |T|; relators bucketed by check depth.
  struct Reduced {
    std::vector<std::pair<std::size_t, std::size_t>> syllables;
  };
  std::vector<std::vector<Reduced>> checks(k + 1);
  const BigInt big_order = order;
  for (const auto& r : p.relators) {
    Reduced red;
    std::size_t depth = 0;
    for (const auto& [gen, e] : r.syllables) {
      red.syllables.emplace_back(gen, static_cast<std::size_t>(mod(e, big_order)));
      depth = std::max(depth, depth_of[gen] + 1);
    }
    checks[depth].push_back(std::move(red));
  }
  checks[0].clear();  // generator-free relators hold trivially

  // power[x][e] = x^e for e < |T|.
  std::vector<std::vector<std::size_t>> power(order, std::vector<std::size_t>(order));
  for (std::size_t x = 0; x < order; ++x) {
    power[x][0] = target.identity();
    for (std::size_t e = 1; e < order; ++e) power[x][e] = target.mul(power[x][e - 1], x);
  }

  std::atomic<std::uint64_t> nodes{0};
  auto holds = [&](const Reduced& r, const std::vector<std::size_t>& image) {
    std::size_t acc = target.identity();
    for (const auto& [gen, e] : r.syllables) acc = target.mul(acc, power[image[gen]][e]);
    return acc == target.identity();
  };

  // Depth-first count below a fixed image of the first assigned generator.
  auto count_from = [&](std::size_t first_image) -> std::uint64_t {
    std::vector<std::size_t> image(k, 0);
    std::uint64_t total = 0;
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      if (nodes.fetch_add(1, std::memory_order_relaxed) >= opts.node_budget)
        throw Error(ErrorCode::BudgetExceeded, "hom count exceeded node budget");
      for (const auto& r : checks[depth])
        if (!holds(r, image)) return;
      if (depth == k) {
        ++total;
        return;
      }
      const std::size_t gen = assign_order[depth];
      for (std::size_t x : all) {
        image[gen] = x;
        self(self, depth + 1);
      }
    };
    image[assign_order[0]] = first_image;
    recurse(recurse, 1);
    return total;
  };

  if (k == 0) return 1;  // only relator-free words remain
  const auto& first_images = all;
  const unsigned jobs = std::max(1u, opts.jobs);
  std::vector<std::uint64_t> partial(first_images.size(), 0);
  if (jobs == 1) {
    for (std::size_t i = 0; i < first_images.size(); ++i) partial[i] = count_from(first_images[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < first_images.size();)
            partial[i] = count_from(first_images[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

}  // namespace profrig
