#pragma once

#include "profrig/bigint.hpp"
#include "profrig/coclass.hpp"
#include "profrig/error.hpp"
#include "profrig/groups.hpp"
#include "profrig/modmatrix.hpp"
#include "profrig/orbifold.hpp"
#include "profrig/orbits.hpp"
#include "profrig/rigidity.hpp"
#include "profrig/zmatrix.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace profrig::json_io {

using json = nlohmann::ordered_json;

namespace detail {

inline const BigInt& safe_limit() {
  static const BigInt limit = (BigInt(1) << 53) - 1;
  return limit;
}

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::int64_t to_int64(const json& j, const char* what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  fail(std::string(what) + " must be an integer");
}

}  // namespace detail

/// Integers beyond the 53-bit safe range go out as decimal strings.
inline json integer_to_json(const BigInt& x) {
  if (abs(x) <= detail::safe_limit()) return static_cast<std::int64_t>(x);
  return x.str();
}

inline BigInt integer_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
    return BigInt(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) detail::fail("empty integer string");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') detail::fail("not a decimal integer: " + s);
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  }
  detail::fail("expected an integer");
}

inline json vector_to_json(const std::vector<BigInt>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(integer_to_json(x));
  return out;
}

inline json rows_to_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(integer_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json matrix_to_json(const IntMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows_to_json(m)}};
}

/// Accepts {"rows", "cols", "entries"} or a bare array of rows.
inline IntMatrix matrix_from_json(const json& j) {
  const json& entries = j.is_object() ? detail::field(j, "entries") : j;
  if (!entries.is_array()) detail::fail("matrix entries must be an array of rows");
  const std::size_t rows = entries.size();
  const std::size_t cols = rows == 0 ? 0 : entries[0].size();
  if (j.is_object()) {
    if (detail::to_int64(detail::field(j, "rows"), "rows") != static_cast<std::int64_t>(rows) ||
        (rows > 0 && detail::to_int64(detail::field(j, "cols"), "cols") != static_cast<std::int64_t>(cols)))
      detail::fail("matrix shape does not match its entries");
  }
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!entries[i].is_array() || entries[i].size() != cols) detail::fail("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(entries[i][k]);
  }
  return m;
}

inline json signature_to_json(const OrbifoldSignature& sig) {
  return json{{"genus", sig.genus}, {"cone_orders", sig.cone_orders}};
}

inline OrbifoldSignature signature_from_json(const json& j) {
  const std::int64_t genus = detail::to_int64(detail::field(j, "genus"), "genus");
  const json& orders = detail::field(j, "cone_orders");
  if (!orders.is_array()) detail::fail("cone_orders must be an array");
  std::vector<std::int64_t> p;
  for (const auto& x : orders) p.push_back(detail::to_int64(x, "cone order"));
  return validate_signature(genus, p);
}

inline json class_to_json(const ExtensionClass& a) {
  return json{{"signature", signature_to_json(a.sig)}, {"n", a.n}, {"matrix", rows_to_json(a.rep)}};
}

inline ExtensionClass class_from_json(const json& j) {
  OrbifoldSignature sig = signature_from_json(detail::field(j, "signature"));
  const std::int64_t n = detail::to_int64(detail::field(j, "n"), "n");
  if (n < 0) detail::fail("n must be non-negative");
  return make_class(sig, static_cast<std::size_t>(n), matrix_from_json(detail::field(j, "matrix")));
}

/// Permutations go out 1-based.
inline json permutation_to_json(const Permutation& sigma) {
  json out = json::array();
  for (int x : sigma.image) out.push_back(x + 1);
  return out;
}

inline Permutation permutation_from_json(const json& j) {
  if (!j.is_array()) detail::fail("sigma must be an array");
  Permutation sigma;
  for (const auto& x : j) sigma.image.push_back(static_cast<int>(detail::to_int64(x, "sigma entry") - 1));
  if (!sigma.is_valid()) detail::fail("sigma is not a permutation of 1..m");
  return sigma;
}

inline json modmatrix_to_json(const ModMatrix& r) { return matrix_to_json(r.to_int()); }

inline ModMatrix modmatrix_from_json(const json& j, std::int64_t modulus) {
  IntMatrix m = matrix_from_json(j);
  if (m.rows() != m.cols()) detail::fail("R_modD must be square");
  return ModMatrix::reduce(m, modulus);
}

inline json witness_to_json(const IntegralWitness& w) {
  return json{{"kind", "integral"},
              {"sigma", permutation_to_json(w.sigma)},
              {"phi", matrix_to_json(w.phi)},
              {"R_modD", modmatrix_to_json(w.r)},
              {"modulus", w.r.modulus()},
              {"det_class", determinant_mod(w.r)}};
}

inline json witness_to_json(const ProfiniteWitness& w) {
  return json{{"kind", "profinite"},
              {"sigma", permutation_to_json(w.sigma)},
              {"phi", nullptr},
              {"R_modD", modmatrix_to_json(w.r)},
              {"modulus", w.modulus()},
              {"det_class", w.det_class}};
}

inline bool is_integral_witness(const json& j) {
  const json& kind = detail::field(j, "kind");
  if (kind == "integral") return true;
  if (kind == "profinite") return false;
  detail::fail("witness kind must be \"integral\" or \"profinite\"");
}

inline IntegralWitness integral_witness_from_json(const json& j) {
  if (!is_integral_witness(j)) detail::fail("expected an integral witness");
  const std::int64_t modulus = detail::to_int64(detail::field(j, "modulus"), "modulus");
  if (modulus < 1) detail::fail("modulus must be positive");
  return IntegralWitness{matrix_from_json(detail::field(j, "phi")), permutation_from_json(detail::field(j, "sigma")),
                         modmatrix_from_json(detail::field(j, "R_modD"), modulus)};
}

inline ProfiniteWitness profinite_witness_from_json(const json& j) {
  if (is_integral_witness(j)) detail::fail("expected a profinite witness");
  const std::int64_t modulus = detail::to_int64(detail::field(j, "modulus"), "modulus");
  if (modulus < 1) detail::fail("modulus must be positive");
  return ProfiniteWitness{permutation_from_json(detail::field(j, "sigma")),
                          modmatrix_from_json(detail::field(j, "R_modD"), modulus),
                          detail::to_int64(detail::field(j, "det_class"), "det_class")};
}

inline json verdict_to_json(const RigidityVerdict& v) {
  json out{{"verdict", std::string(to_string(v.kind))}, {"d_sequence", vector_to_json(v.d_sequence)}};
  if (v.reason) out["reason"] = std::string(to_string(*v.reason));
  if (v.d_value) out["d"] = integer_to_json(*v.d_value);
  if (v.certificate)
    out["certificate"] = json{{"prime", integer_to_json(v.certificate->prime)},
                              {"exponent", v.certificate->exponent},
                              {"prime_power", integer_to_json(v.certificate->value)}};
  else
    out["certificate"] = nullptr;
  return out;
}

inline json invariants_to_json(const AbelianInvariants& inv) {
  return json{{"free_rank", inv.free_rank}, {"torsion", vector_to_json(inv.torsion)}, {"text", inv.to_string()}};
}

inline json group_to_json(const FiniteGroup& g) {
  json table = json::array();
  for (std::size_t a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    table.push_back(std::move(row));
  }
  return json{{"name", g.name()}, {"order", g.order()}, {"table", std::move(table)}};
}

inline FiniteGroup group_from_json(const json& j) {
  const json& table = detail::field(j, "table");
  if (!table.is_array()) detail::fail("group table must be an array of rows");
  const std::size_t order = table.size();
  std::vector<std::uint32_t> flat;
  for (const auto& row : table) {
    if (!row.is_array() || row.size() != order) detail::fail("group table must be square");
    for (const auto& x : row) {
      const std::int64_t v = detail::to_int64(x, "table entry");
      if (v < 0 || static_cast<std::size_t>(v) >= order) detail::fail("table entry out of range");
      flat.push_back(static_cast<std::uint32_t>(v));
    }
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "G";
  return FiniteGroup::from_table(std::move(name), order, std::move(flat));
}

}  // namespace profrig::json_io
