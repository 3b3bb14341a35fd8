// SPDX-License-Identifier: Apache-2.0
//
// opm: validate, compose, check, query and diagnose `.opm` models.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "opm/dsl.hpp"
#include "opm/error.hpp"
#include "report_json.hpp"

namespace {

using namespace opm;
using opm::cli::json;

enum Exit { pass = 0, check_failed = 1, usage = 2 };

struct Options {
  std::string file;
  std::string format = "text";
  std::vector<std::string> functors;
  std::string tolerance;
  std::string term;
  std::vector<std::string> terms;
  std::string leaf;
  std::string mode;
  std::string leaf_mode;
  std::string compare;
};

bool json_out(const Options& o) { return o.format == "json"; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Probability tolerance(const Options& o) {
  std::string text = o.tolerance;
  if (text.empty()) {
    const char* env = std::getenv("OPM_TOLERANCE");
    text = env ? env : "0";
  }
  try {
    return Probability::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ModelError("bad tolerance '" + text + "': " + e.what());
  }
}

std::string factors_text(const std::vector<Factor>& fs) {
  std::string names, values;
  for (const Factor& f : fs) {
    names += (names.empty() ? "" : "·") + f.generator + "(" + f.slot + ")";
    values += (values.empty() ? "" : "·") + to_string(f.value);
  }
  return names + " = " + values;
}

std::string with_percent(const Rational& r) { return to_string(r) + " (" + to_percent(r) + ")"; }

int run_validate(const Options& o) {
  Model m = load_model(o.file);
  CompileReport r = compile(m.presentation);
  if (json_out(o)) {
    emit(cli::to_json(r));
  } else {
    for (const CheckFailure& f : r.failures) {
      for (const std::string& msg : f.messages) std::cout << "FAIL " << f.location << ": " << msg << "\n";
    }
    std::cout << (r.ok() ? "ok" : "invalid") << ": " << r.boundaries << " boundaries, "
              << r.generators << " generators, " << r.equations << " equations, " << r.checks
              << " checks\n";
  }
  return r.ok() ? pass : check_failed;
}

int run_compose(const Options& o) {
  Model m = load_model(o.file);
  Term t = parse_term(o.term);
  Architecture arch = canonicalize(elaborate(m.presentation, t));
  if (json_out(o)) {
    json j = cli::to_json(arch);
    j["term"] = to_string(t);
    emit(j);
  } else {
    std::cout << "# " << to_string(t) << "\n" << render_architecture("composite", arch);
  }
  return pass;
}

void print_prob(const ProbCheckReport& r) {
  std::cout << "prob " << r.functor << " (tolerance " << to_string(r.tolerance) << ")\n";
  for (const ProbRow& row : r.rows) {
    std::cout << "  " << (row.passed ? "PASS" : "FAIL") << "  " << row.lhs_leaf << " ~ "
              << row.rhs_leaf << " : " << row.boundary << "\n"
              << "        " << factors_text(row.lhs_factors) << " = " << with_percent(row.lhs)
              << "\n"
              << "        " << factors_text(row.rhs_factors) << " = " << with_percent(row.rhs)
              << "\n";
  }
  std::cout << "  " << r.rows.size() - r.failures() << "/" << r.rows.size() << " rows pass\n";
}

void print_modes(const ModeCheckReport& r) {
  std::cout << "modes " << r.functor << "\n";
  for (const ModeEquationResult& e : r.equations) {
    std::cout << "  " << (e.passed ? "PASS" : "FAIL") << "  " << e.lhs << " = " << e.rhs << "\n";
    for (const std::string& s : e.only_lhs) std::cout << "        only lhs: " << s << "\n";
    for (const std::string& s : e.only_rhs) std::cout << "        only rhs: " << s << "\n";
  }
}

void print_lifting(const LiftingReport& r) {
  std::cout << "lifting " << r.stoch << " over " << r.prob << ", " << r.modes << "\n";
  for (const std::string& p : r.problems) std::cout << "  FAIL  " << p << "\n";
  for (const GeneratorLifting& g : r.generators) {
    std::cout << "  " << (g.passed() ? "PASS" : "FAIL") << "  " << g.generator
              << ": pt " << (g.pt.holds ? "ok" : "violated") << ", aggr "
              << (g.aggr_ok ? "ok" : "mismatch") << " " << g.aggr_value << ", supp "
              << (g.supp_ok ? "ok" : "mismatch") << "\n";
    for (const PtResidual& v : g.pt.violations) {
      std::cout << "        pt residual at " << v.slot << "." << v.mode << ": "
                << to_string(v.weighted) << " vs " << to_string(v.expected) << "\n";
    }
    for (const std::string& s : g.pt.empty_slots) std::cout << "        empty slot " << s << "\n";
    for (const std::string& s : g.only_kernel) std::cout << "        only kernel: " << s << "\n";
    for (const std::string& s : g.only_relation) std::cout << "        only relation: " << s << "\n";
    for (const std::string& s : g.problems) std::cout << "        " << s << "\n";
  }
  for (const EquationLifting& e : r.equations) {
    std::cout << "  " << (e.passed() ? "PASS" : "FAIL") << "  " << e.lhs << " = " << e.rhs
              << " (max difference " << to_string(e.max_difference) << ")\n";
    for (const std::string& d : e.differences) std::cout << "        " << d << "\n";
  }
}

int run_check(const Options& o) {
  Model m = load_model(o.file);
  Probability tol = tolerance(o);

  std::vector<const ProbFunctor*> probs;
  std::vector<const ModeFunctor*> modes;
  std::vector<const StochFunctor*> stochs;
  if (o.functors.empty()) {
    for (const auto& F : m.prob) probs.push_back(&F);
    for (const auto& M : m.modes) modes.push_back(&M);
    for (const auto& S : m.stoch) stochs.push_back(&S);
  }
  for (const std::string& name : o.functors) {
    if (auto* F = m.find_prob(name)) {
      probs.push_back(F);
    } else if (auto* M = m.find_modes(name)) {
      modes.push_back(M);
    } else if (auto* S = m.find_stoch(name)) {
      stochs.push_back(S);
    } else {
      throw ModelError("unknown functor " + name);
    }
  }
  if (!stochs.empty() && (probs.size() != 1 || modes.size() != 1)) {
    throw ModelError("checking a stoch functor needs exactly one prob and one modes functor");
  }

  bool ok = true;
  json reports = json::array();
  CompileReport compiled = compile(m.presentation);
  ok = ok && compiled.ok();
  if (json_out(o)) {
    reports.push_back(cli::to_json(compiled));
  } else {
    std::cout << "equations\n";
    for (const EquationReport& e : compiled.equation_reports) {
      std::cout << "  " << (e.passed ? "PASS" : "FAIL") << "  " << e.lhs << " = " << e.rhs << "\n";
      if (!e.error.empty()) std::cout << "        " << e.error << "\n";
      for (const std::string& p : e.comparison.problems) std::cout << "        " << p << "\n";
      for (const Wire& w : e.comparison.only_lhs) std::cout << "        only lhs: " << to_string(w) << "\n";
      for (const Wire& w : e.comparison.only_rhs) std::cout << "        only rhs: " << to_string(w) << "\n";
    }
    for (const CheckFailure& f : compiled.failures) {
      if (f.location.rfind("equation", 0) == 0) continue;
      for (const std::string& msg : f.messages) std::cout << "  FAIL  " << f.location << ": " << msg << "\n";
    }
  }

  for (const ProbFunctor* F : probs) {
    ProbCheckReport r = check_prob_functor(m.presentation, *F, tol);
    ok = ok && r.passed();
    if (json_out(o)) {
      reports.push_back(cli::to_json(r));
    } else {
      print_prob(r);
    }
  }
  for (const ModeFunctor* M : modes) {
    ModeCheckReport r = check_mode_functor(m.presentation, *M);
    ok = ok && r.passed();
    if (json_out(o)) {
      reports.push_back(cli::to_json(r));
    } else {
      print_modes(r);
    }
  }
  for (const StochFunctor* S : stochs) {
    LiftingReport r = check_lifting(m.presentation, *S, *probs.front(), *modes.front(), tol.value());
    ok = ok && r.passed();
    if (json_out(o)) {
      reports.push_back(cli::to_json(r));
    } else {
      print_lifting(r);
    }
  }

  if (json_out(o)) {
    emit({{"passed", ok}, {"reports", reports}});
  } else {
    std::cout << "result: " << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? pass : check_failed;
}

int run_query(const Options& o) {
  Model m = load_model(o.file);
  if (o.functors.size() != 1) throw ModelError("query takes exactly one --functor");
  const std::string& name = o.functors.front();
  Term t = parse_term(o.term);
  if (const ProbFunctor* F = m.find_prob(name)) {
    Leaf leaf = find_leaf(m.presentation, t, o.leaf);
    Probability p = leaf_probability(m.presentation, *F, t, o.leaf);
    if (json_out(o)) {
      json j = cli::rational_json(p.value());
      j["functor"] = name;
      j["term"] = to_string(t);
      j["leaf"] = leaf.path;
      emit(j);
    } else {
      std::cout << with_percent(p.value()) << "\n";
    }
    return pass;
  }
  if (const ModeFunctor* M = m.find_modes(name)) {
    if (o.leaf_mode.empty() || o.mode.empty()) {
      throw ModelError("a modes query needs --leaf-mode and --mode");
    }
    bool yes = can_cause(m.presentation, *M, t, o.leaf, o.leaf_mode, o.mode);
    if (json_out(o)) {
      emit({{"functor", name},
            {"term", to_string(t)},
            {"leaf", o.leaf},
            {"leaf_mode", o.leaf_mode},
            {"mode", o.mode},
            {"can_cause", yes}});
    } else {
      std::cout << (yes ? "yes" : "no") << "\n";
    }
    return pass;
  }
  throw ModelError("query needs a prob or modes functor, not " + name);
}

int run_diagnose(const Options& o) {
  Model m = load_model(o.file);
  if (o.functors.size() != 1) throw ModelError("diagnose takes exactly one --functor");
  const StochFunctor* S = m.find_stoch(o.functors.front());
  if (!S) throw ModelError("unknown stoch functor " + o.functors.front());
  Term t = parse_term(o.term);
  Distribution d = diagnose(m.presentation, *S, t, o.mode);
  if (json_out(o)) {
    emit({{"functor", S->name()},
          {"term", to_string(t)},
          {"observed", o.mode},
          {"posterior", cli::to_json(d)}});
  } else {
    std::cout << "chain-rule posterior given " << o.mode << " along " << to_string(t) << "\n";
    for (const auto& [label, p] : d.entries()) {
      std::cout << "  " << label << "  " << with_percent(p.value()) << "\n";
    }
  }
  return pass;
}

int run_pipeline(const Options& o) {
  Model m = load_model(o.file);
  std::vector<Term> terms;
  for (const std::string& s : o.terms) terms.push_back(parse_term(s));
  ProbFunctor derived = pipeline_check(m.presentation, terms, m.histories, "rates");
  const ProbFunctor* against = nullptr;
  if (!o.compare.empty()) {
    against = m.find_prob(o.compare);
    if (!against) throw ModelError("unknown prob functor " + o.compare);
  }
  bool ok = true;
  json rows = json::array();
  for (const auto& [gen, d] : derived.values()) {
    std::optional<bool> match;
    if (against) {
      auto it = against->values().find(gen);
      match = it != against->values().end() && it->second == d;
      ok = ok && *match;
    }
    if (json_out(o)) {
      json row = {{"generator", gen}, {"distribution", cli::to_json(d)}};
      if (match) row["matches"] = *match;
      rows.push_back(row);
    } else {
      std::cout << "  " << gen << " = " << to_string(d);
      if (match) std::cout << "  " << (*match ? "matches " : "differs from ") << o.compare;
      std::cout << "\n";
    }
  }
  if (json_out(o)) emit({{"passed", ok}, {"generators", rows}});
  return ok ? pass : check_failed;
}

int run_format(const Options& o) {
  std::cout << serialize(load_model(o.file));
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional failure models over typed port-graphs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("model", o.file, "model file (.opm)")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* validate = app.add_subcommand("validate", "compile the presentation");
  common(validate);

  auto* compose = app.add_subcommand("compose", "print the canonical composite of a term");
  common(compose);
  compose->add_option("--term", o.term, "term, e.g. tau(ba->beta)")->required();

  auto* check = app.add_subcommand("check", "check equations, functors and the lifting");
  common(check);
  check->add_option("--functor", o.functors, "functor to check (repeatable)");
  check->add_option("--tolerance", o.tolerance, "absolute tolerance (default $OPM_TOLERANCE or 0)");

  auto* query = app.add_subcommand("query", "leaf probability, or can-cause for a modes functor");
  common(query);
  query->add_option("--functor", o.functors)->required();
  query->add_option("--term", o.term)->required();
  query->add_option("--leaf", o.leaf, "leaf path or unique suffix");
  query->add_option("--leaf-mode", o.leaf_mode);
  query->add_option("--mode", o.mode, "root mode");

  auto* diag = app.add_subcommand("diagnose", "posterior over leaf modes given a root mode");
  common(diag);
  diag->add_option("--functor", o.functors)->required();
  diag->add_option("--term", o.term)->required();
  diag->add_option("--mode", o.mode)->required();

  auto* pipe = app.add_subcommand("pipeline", "derive a prob functor from failure histories");
  common(pipe);
  pipe->add_option("--term", o.terms, "decomposition term (repeatable)")->required();
  pipe->add_option("--compare", o.compare, "prob functor to compare against");

  auto* fmt = app.add_subcommand("format", "print the model in canonical form");
  common(fmt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*validate) return run_validate(o);
    if (*compose) return run_compose(o);
    if (*check) return run_check(o);
    if (*query) return run_query(o);
    if (*diag) return run_diagnose(o);
    if (*pipe) return run_pipeline(o);
    if (*fmt) return run_format(o);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
