#pragma once

#include "profrig/coclass.hpp"
#include "profrig/error.hpp"
#include "profrig/groups.hpp"
#include "profrig/json_io.hpp"
#include "profrig/orbits.hpp"
#include "profrig/rigidity.hpp"
#include "profrig/small_groups.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace profrig::cli {

using json_io::json;

enum ExitCode : int { Ok = 0, InternalFailure = 1, InputError = 2, BudgetExhausted = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExceeded: return BudgetExhausted;
    case ErrorCode::InternalVerificationFailed: return InternalFailure;
    default: return InputError;
  }
}

namespace detail {

/// A path, "-" for stdin, or an inline document starting with '{' or '['.
inline std::string slurp(const std::string& source, std::istream& in) {
  if (source == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) return source;
  std::ifstream file(source);
  if (!file) throw Error(ErrorCode::ParseError, "cannot open " + source);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

inline json load(const std::string& source, std::istream& in) {
  try {
    return json::parse(slurp(source, in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + e.what());
  }
}

inline json decision_json(bool found, json witness) {
  return json{{"isomorphic", found}, {"witness", found ? std::move(witness) : json(nullptr)}};
}

/// Classes from --a/--b or from a --pair document {"a": ..., "b": ...}.
struct PairInput {
  std::string a, b, pair;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--a", a, "first class (path, '-' or inline JSON)");
    cmd->add_option("--b", b, "second class");
    cmd->add_option("--pair", pair, "document with fields \"a\" and \"b\"");
  }

  std::pair<ExtensionClass, ExtensionClass> read(std::istream& in) const {
    if (!pair.empty()) {
      json doc = load(pair, in);
      if (!doc.contains("a") || !doc.contains("b"))
        throw Error(ErrorCode::ParseError, "pair document needs fields \"a\" and \"b\"");
      return {json_io::class_from_json(doc["a"]), json_io::class_from_json(doc["b"])};
    }
    if (a.empty() || b.empty()) throw Error(ErrorCode::ParseError, "give --a and --b, or --pair");
    return {json_io::class_from_json(load(a, in)), json_io::class_from_json(load(b, in))};
  }
};

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"Central extensions of Z^n by 2-orbifold groups: isomorphism, profinite isomorphism, rigidity"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t budget = SearchOptions{}.budget;
  unsigned jobs = 1;
  bool pretty = false;
  app.add_option("--budget", budget, "node budget for searches")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for hom counting")->check(CLI::PositiveNumber);
  app.add_flag("--pretty", pretty, "indent JSON output");

  std::string sig_src, class_src, witness_src, groups_src;
  std::int64_t n = 2;
  detail::PairInput pair;

  auto* classify = app.add_subcommand("classify", "rigidity verdict for (signature, n)");
  classify->add_option("--sig", sig_src, "signature JSON")->required();
  classify->add_option("--n", n, "rank of the central subgroup")->required();

  auto* divisors = app.add_subcommand("divisors", "elementary divisors d_1 | ... | d_m");
  divisors->add_option("--sig", sig_src, "signature JSON")->required();

  auto* decide = app.add_subcommand("decide-iso", "integral isomorphism with witness");
  pair.add_to(decide);
  auto* decide_prof = app.add_subcommand("decide-profinite-iso", "profinite isomorphism with witness");
  pair.add_to(decide_prof);

  auto* nonrigid = app.add_subcommand("make-nonrigid", "explicit non-isomorphic, profinitely isomorphic pair");
  nonrigid->add_option("--sig", sig_src, "signature JSON")->required();
  nonrigid->add_option("--n", n, "rank")->required();

  auto* stab = app.add_subcommand("stabilize", "class of G x Z");
  stab->add_option("--class", class_src, "class JSON")->required();

  auto* stab_w = app.add_subcommand("stabilize-witness", "integral witness for the stabilised pair");
  pair.add_to(stab_w);
  stab_w->add_option("--witness", witness_src, "profinite witness JSON")->required();

  auto* verify = app.add_subcommand("verify", "check a witness against a pair");
  pair.add_to(verify);
  verify->add_option("--witness", witness_src, "witness JSON")->required();

  bool raw_text = false;
  auto* present = app.add_subcommand("emit-presentation", "finite presentation of the extension group");
  present->add_option("--class", class_src, "class JSON")->required();
  present->add_flag("--text", raw_text, "print the plain-text presentation instead of JSON");

  std::string presentation_src;
  auto* abel = app.add_subcommand("abelianize", "abelian invariants");
  abel->add_option("--class", class_src, "class JSON");
  abel->add_option("--presentation", presentation_src, "plain-text presentation file");

  std::size_t max_order = 12;
  auto* homs = app.add_subcommand("count-homs", "hom counts to every bundled group up to an order bound");
  homs->add_option("--class", class_src, "class JSON")->required();
  homs->add_option("--max-order", max_order, "largest target order")->capture_default_str();
  homs->add_option("--groups", groups_src, "JSON array of group tables replacing the bundled library");

  auto* groups = app.add_subcommand("small-groups", "bundled multiplication tables");
  groups->add_option("--max-order", max_order, "largest order")->capture_default_str();

  std::uint64_t seed = 0;
  std::int64_t bound = 10;
  auto* gen = app.add_subcommand("gen-random-class", "random class with entries in [-bound, bound]");
  gen->add_option("--sig", sig_src, "signature JSON")->required();
  gen->add_option("--n", n, "rank")->required();
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--bound", bound, "entry bound")->capture_default_str()->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << json{{"error", "ParseError"}, {"detail", e.what()}}.dump() << "\n";
    return InputError;
  }

  auto emit = [&](const json& j) { out << (pretty ? j.dump(2) : j.dump()) << "\n"; };
  const SearchOptions search{budget};
  auto rank = [&] {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be non-negative");
    return static_cast<std::size_t>(n);
  };

  try {
    if (*classify) {
      emit(json_io::verdict_to_json(classify_rigidity(json_io::signature_from_json(detail::load(sig_src, in)), rank())));
    } else if (*divisors) {
      auto sig = json_io::signature_from_json(detail::load(sig_src, in));
      emit(json{{"d_sequence", json_io::vector_to_json(elementary_divisors(sig).d)}});
    } else if (*decide) {
      auto [a, b] = pair.read(in);
      auto w = decide_integral_iso(a, b, search);
      emit(detail::decision_json(w.has_value(), w ? json_io::witness_to_json(*w) : json()));
    } else if (*decide_prof) {
      auto [a, b] = pair.read(in);
      auto w = decide_profinite_iso(a, b, search);
      emit(detail::decision_json(w.has_value(), w ? json_io::witness_to_json(*w) : json()));
    } else if (*nonrigid) {
      auto sig = json_io::signature_from_json(detail::load(sig_src, in));
      NonRigidPair p = construct_nonrigid_pair(sig, rank(), search);
      emit(json{{"a", json_io::class_to_json(p.a)},
                {"b", json_io::class_to_json(p.b)},
                {"witness", json_io::witness_to_json(p.witness)}});
    } else if (*stab) {
      emit(json_io::class_to_json(stabilize(json_io::class_from_json(detail::load(class_src, in)))));
    } else if (*stab_w) {
      auto [a, b] = pair.read(in);
      auto w = json_io::profinite_witness_from_json(detail::load(witness_src, in));
      auto out_w = stabilized_integral_witness(a, b, w);
      emit(json{{"a", json_io::class_to_json(stabilize(a))},
                {"b", json_io::class_to_json(stabilize(b))},
                {"witness", json_io::witness_to_json(out_w)}});
    } else if (*verify) {
      auto [a, b] = pair.read(in);
      json doc = detail::load(witness_src, in);
      const bool integral = json_io::is_integral_witness(doc);
      const bool ok = integral ? verify_witness(json_io::integral_witness_from_json(doc), a, b)
                               : verify_witness(json_io::profinite_witness_from_json(doc), a, b);
      emit(json{{"kind", integral ? "integral" : "profinite"}, {"valid", ok}});
    } else if (*present) {
      Presentation p = emit_presentation(json_io::class_from_json(detail::load(class_src, in)));
      if (raw_text) {
        out << p.to_text();
      } else {
        std::vector<std::string> relators;
        std::istringstream lines(p.to_text());
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) relators.push_back(line);
        emit(json{{"generators", p.generators}, {"relators", relators}});
      }
    } else if (*abel) {
      if (class_src.empty() == presentation_src.empty())
        throw Error(ErrorCode::ParseError, "give exactly one of --class and --presentation");
      AbelianInvariants inv = class_src.empty()
                                  ? abelianize(Presentation::parse(detail::slurp(presentation_src, in)))
                                  : abelianization(json_io::class_from_json(detail::load(class_src, in)));
      emit(json_io::invariants_to_json(inv));
    } else if (*homs) {
      Presentation p = emit_presentation(json_io::class_from_json(detail::load(class_src, in)));
      std::vector<FiniteGroup> targets;
      if (groups_src.empty()) {
        targets = small_groups(max_order);
      } else {
        json doc = detail::load(groups_src, in);
        if (!doc.is_array()) throw Error(ErrorCode::ParseError, "--groups must be a JSON array");
        for (const auto& g : doc) {
          FiniteGroup t = json_io::group_from_json(g);
          if (t.order() <= max_order) targets.push_back(std::move(t));
        }
      }
      HomCountOptions hopts;
      hopts.max_order = std::max<std::size_t>(hopts.max_order, max_order);
      hopts.node_budget = budget;
      hopts.jobs = jobs;
      json counts = json::array();
      for (const auto& t : targets)
        counts.push_back(json{{"group", t.name()}, {"order", t.order()}, {"homs", count_homs(p, t, hopts)}});
      emit(json{{"counts", counts}});
    } else if (*groups) {
      json arr = json::array();
      for (const auto& g : small_groups(max_order)) arr.push_back(json_io::group_to_json(g));
      emit(arr);
    } else if (*gen) {
      auto sig = json_io::signature_from_json(detail::load(sig_src, in));
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
      IntMatrix rep(rank(), sig.cone_orders.size() + 1);
      for (std::size_t i = 0; i < rep.rows(); ++i)
        for (std::size_t j = 0; j < rep.cols(); ++j) rep(i, j) = dist(rng);
      emit(json_io::class_to_json(make_class(sig, rank(), std::move(rep))));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    emit(json{{"error", std::string(to_string(e.code()))}, {"detail", e.detail()}});
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    emit(json{{"error", "ParseError"}, {"detail", e.what()}});
    return InputError;
  }
  return Ok;
}

}  // namespace profrig::cli
