#include "pam/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "pam/acceptance.hpp"
#include "pam/chaos_bounds.hpp"
#include "pam/errors.hpp"
#include "pam/initial_data.hpp"
#include "pam/mc_verifier.hpp"
#include "pam/path_combinatorics.hpp"
#include "pam/simplex_integrals.hpp"

namespace pam {

using Json = nlohmann::ordered_json;

nlohmann::ordered_json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["params"] = params;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "command" && key != "params") throw ValidationError("config: unknown key '" + key + "'");
  }
  RunConfig c;
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw ValidationError("config: 'command' must be a string");
    c.command = j["command"].get<std::string>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ValidationError("config: 'params' must be an object");
    c.params = j["params"];
  }
  return c;
}

namespace {

/// Bad flags, config keys or values. Always exits 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by a subcommand whose check did not hold; output is still written.
struct VerificationFailure {};

enum class Kind { Int, Double, String, DoubleList, Flag };

struct OptionSpec {
  std::string key;
  Kind kind;
  Json fallback;  // null: optional without default
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  std::function<void(const Json& params, std::ostream& out, std::ostream& err)> body;
};

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> split_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError("invalid value for --" + key + ": '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("invalid value for --" + key + ": empty list");
  return out;
}

Json from_flag_text(const OptionSpec& spec, const std::string& text) {
  const auto bad = [&] { return UsageError("invalid value for --" + spec.key + ": '" + text + "'"); };
  switch (spec.kind) {
    case Kind::Int: {
      char* end = nullptr;
      const long v = std::strtol(text.c_str(), &end, 10);
      if (text.empty() || *end != '\0') throw bad();
      return v;
    }
    case Kind::Double: {
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || *end != '\0') throw bad();
      return v;
    }
    case Kind::DoubleList:
      return split_doubles(spec.key, text);
    case Kind::String:
      return text;
    case Kind::Flag:
      return true;
  }
  throw bad();
}

void check_config_value(const OptionSpec& spec, const Json& v) {
  bool ok = false;
  switch (spec.kind) {
    case Kind::Int: ok = v.is_number_integer(); break;
    case Kind::Double: ok = v.is_number(); break;
    case Kind::String: ok = v.is_string(); break;
    case Kind::Flag: ok = v.is_boolean(); break;
    case Kind::DoubleList:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
      break;
  }
  if (!ok && !(v.is_null() && spec.fallback.is_null())) {
    throw UsageError("config: bad type for key '" + spec.key + "'");
  }
}

std::vector<OptionSpec> measure_options(const std::string& fallback) {
  return {{"measure", Kind::String, fallback, "dirac | lebesgue | gaussian | x2"},
          {"x0", Kind::Double, 0.0, "Dirac location"},
          {"c", Kind::Double, 1.0, "Lebesgue density"},
          {"mean", Kind::Double, 0.0, "Gaussian mean"},
          {"variance", Kind::Double, 1.0, "Gaussian variance"}};
}

InitialMeasure measure_from(const Json& p) {
  const auto name = p["measure"].get<std::string>();
  InitialMeasure m;
  if (name == "dirac") {
    m = DiracAt{p["x0"].get<double>()};
  } else if (name == "lebesgue") {
    m = LebesgueConstant{p["c"].get<double>()};
  } else if (name == "gaussian") {
    m = GaussianDensity{p["mean"].get<double>(), p["variance"].get<double>()};
  } else if (name == "x2") {
    m = PolynomialDensity{};
  } else {
    throw UsageError("invalid value for --measure: '" + name + "'");
  }
  validate(m);
  return m;
}

FractionalParams params_from(const Json& p) {
  return FractionalParams(p["H0"].get<double>(), p["H"].get<double>(),
                          p.contains("b") ? p["b"].get<double>() : 1.0);
}

std::vector<double> list(const Json& p, const char* key) { return p[key].get<std::vector<double>>(); }

Json estimator_json(const EstimatorResult& r) {
  return Json{{"mean", r.mean}, {"stderr", r.stderr}, {"samples", r.samples}, {"seed", r.seed},
              {"flagged", r.flagged}};
}

// --- subcommands ---------------------------------------------------------

void cmd_paths(const Json& p, std::ostream& out, std::ostream&) {
  const int n = p["n"].get<int>();
  if (n < 1 || n > 20) throw SizeError("paths: n must be in [1, 20]");
  for (const auto& a : enumerate_exponent_vectors(n)) {
    Json line{{"n", n}, {"a", a.digits()}, {"exponents", a.values()},
              {"path_heights", path_of(a).heights()}, {"touch_points", diagonal_touch_points(a)}};
    out << line.dump() << '\n';
  }
}

Rational parse_rational(const std::string& text) {
  try {
    Rational r(text);
    if (r <= 0) throw UsageError("identity: --x entries must be positive");
    return r;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("invalid value for --x: '" + text + "'");
  }
}

void cmd_identity(const Json& p, std::ostream& out, std::ostream&) {
  const int n = p["n"].get<int>();
  const long trials = p["trials"].get<long>();
  const auto x_text = p["x"].get<std::string>();
  std::vector<std::vector<Rational>> inputs;
  if (!x_text.empty()) {
    std::vector<Rational> xs;
    std::stringstream ss(x_text);
    std::string item;
    while (std::getline(ss, item, ',')) xs.push_back(parse_rational(item));
    inputs.push_back(std::move(xs));
  } else {
    if (trials < 1) throw UsageError("invalid value for --trials: must be >= 1");
    std::mt19937_64 rng(p["seed"].get<std::uint64_t>());
    std::uniform_int_distribution<int> num(1, 1000);
    for (long k = 0; k < trials; ++k) {
      std::vector<Rational> xs;
      for (int i = 0; i < n; ++i) xs.emplace_back(num(rng), num(rng));
      inputs.push_back(std::move(xs));
    }
  }
  long held = 0;
  Json failures = Json::array();
  Json first;
  for (const auto& xs : inputs) {
    const auto sides = expand_and_verify_identity(xs);
    held += sides.holds();
    Json entry{{"x", Json::array()}, {"lhs", sides.lhs.str()}, {"rhs", sides.rhs.str()}};
    for (const auto& x : xs) entry["x"].push_back(x.str());
    if (first.is_null()) first = entry;
    if (!sides.holds()) failures.push_back(entry);
  }
  Json report{{"n", static_cast<int>(inputs.front().size())},
              {"checked", inputs.size()},
              {"holds", held == static_cast<long>(inputs.size())},
              {"example", first},
              {"failures", failures}};
  out << report.dump(2) << '\n';
  if (!report["holds"].get<bool>()) throw VerificationFailure{};
}

void cmd_gamma_scan(const Json& p, std::ostream& out, std::ostream&) {
  const int n_max = p["n-max"].get<int>();
  if (n_max < 1 || n_max > 20) throw SizeError("gamma-scan: n-max must be in [1, 20]");
  std::vector<FractionalParams> grid;
  if (p["H0"].is_null() != p["H"].is_null()) throw UsageError("gamma-scan: give both --H0 and --H or neither");
  if (p["H0"].is_null()) {
    grid = admissible_grid();
  } else {
    for (double h0 : list(p, "H0")) {
      for (double h : list(p, "H")) grid.emplace_back(h0, h);
    }
  }
  const bool json = p["format"].get<std::string>() == "json";
  if (!json) out << "H0,H,n,a,gamma_n\n";
  for (const auto& fp : grid) {
    for (int n = 1; n <= n_max; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        const double g = gamma_n(a, fp);
        if (json) {
          out << Json{{"H0", fp.H0()}, {"H", fp.H()}, {"n", n}, {"a", a.digits()}, {"gamma_n", g}}.dump()
              << '\n';
        } else {
          out << g17(fp.H0()) << ',' << g17(fp.H()) << ',' << n << ',' << a.digits() << ',' << g17(g)
              << '\n';
        }
      }
    }
  }
}

void cmd_dirichlet(const Json& p, std::ostream& out, std::ostream&) {
  const auto alphas = list(p, "alpha");
  const auto betas = list(p, "beta");
  if (alphas.size() != betas.size()) throw UsageError("dirichlet: --alpha and --beta lengths differ");
  SimplexIntegralSpec spec{p["t"].get<double>(),
                           Eigen::Map<const Eigen::VectorXd>(alphas.data(), alphas.size()),
                           Eigen::Map<const Eigen::VectorXd>(betas.data(), betas.size())};
  if (const auto v = check_conditions(spec)) throw ValidationError("dirichlet: " + v->clause);
  Json report{{"t", spec.t}, {"alpha", alphas}, {"beta", betas}};
  report["log_closed_form"] = log_closed_form(spec);
  report["closed_form"] = closed_form(spec);
  bool ok = true;
  if (p["oracle"].get<bool>()) {
    OracleBudget budget;
    const auto o = brute_force(spec, OracleMethod::NestedQuadrature, budget);
    const double rel = std::abs(o.estimate - report["closed_form"].get<double>()) /
                       std::abs(report["closed_form"].get<double>());
    ok = o.converged && rel <= p["rtol"].get<double>();
    report["oracle"] = Json{{"method", "nested-quadrature"}, {"estimate", o.estimate},
                            {"error_bound", o.error_bound}, {"converged", o.converged},
                            {"rel_diff", rel}, {"agrees", ok}};
  }
  out << report.dump(2) << '\n';
  if (!ok) throw VerificationFailure{};
}

void cmd_j0(const Json& p, std::ostream& out, std::ostream&) {
  const auto mu = measure_from(p);
  const double t = p["t"].get<double>();
  const double x = p["x"].get<double>();
  const auto v = j0_detailed(t, x, mu);
  const auto grid = list(p, "a-grid");
  const auto violation = check_cond_mu0(mu, grid);
  Json cond{{"a_grid", grid}, {"holds", !violation.has_value()}};
  if (violation) cond["violation"] = Json{{"a", violation->a}, {"value", violation->value}};
  Json report{{"measure", measure_name(mu)}, {"t", t}, {"x", x}, {"j0", v.value},
              {"closed_form", v.closed_form}, {"error_estimate", v.error_estimate},
              {"cond_mu0", cond}};
  out << report.dump(2) << '\n';
  if (violation) throw VerificationFailure{};
}

void cmd_bound_table(const Json& p, std::ostream& out, std::ostream&) {
  const auto fp = params_from(p);
  const auto mu = measure_from(p);
  const auto ts = list(p, "t");
  const auto ps = list(p, "p");
  const double C = p["C"].is_null() ? witness_constant(fp) : p["C"].get<double>();
  const auto fit = fit_envelope(fp, C, ts, ps);
  const bool json = p["format"].get<std::string>() == "json";
  if (!json) {
    out << "t,p,series_value,envelope_value,log_series_value,log_envelope_value,C,C1,C2,"
           "truncation_index\n";
  }
  for (double t : ts) {
    for (double pp : ps) {
      const auto m = moment_bound(pp, t, p["x"].get<double>(), fp, mu, C, fit);
      if (json) {
        out << Json{{"t", t}, {"p", pp}, {"series_value", m.series_value},
                    {"envelope_value", m.envelope_value}, {"log_series_value", m.log_series_value},
                    {"log_envelope_value", m.log_envelope_value}, {"C", C}, {"C1", fit.C1},
                    {"C2", fit.C2}, {"truncation_index", m.truncation_index}}
                   .dump()
            << '\n';
      } else {
        out << g17(t) << ',' << g17(pp) << ',' << g17(m.series_value) << ',' << g17(m.envelope_value)
            << ',' << g17(m.log_series_value) << ',' << g17(m.log_envelope_value) << ',' << g17(C)
            << ',' << g17(fit.C1) << ',' << g17(fit.C2) << ',' << m.truncation_index << '\n';
      }
    }
  }
}

void cmd_mc_verify(const Json& p, std::ostream& out, std::ostream&) {
  auto fp = params_from(p);
  if (p["sharp-b"].get<bool>()) fp = fp.with_b(sharp_lhs_constant(fp.H0()));
  const auto mu = measure_from(p);
  const int n = p["n"].get<int>();
  const double t = p["t"].get<double>();
  const double x = p["x"].get<double>();
  const auto seed = p["seed"].get<std::uint64_t>();
  McBudget budget;
  budget.samples = p["samples"].get<long>();
  budget.workers = p["workers"].get<int>();
  if (budget.samples < 1 || budget.workers < 1) throw UsageError("mc-verify: samples and workers must be >= 1");

  const auto check = verify_term_bound(n, t, x, fp, mu, budget, seed);
  Json report{{"n", n}, {"t", t}, {"x", x}, {"H0", fp.H0()}, {"H", fp.H()},
              {"measure", measure_name(mu)}, {"workers", budget.workers}};
  report["estimate"] = estimator_json(check.estimate);
  report["bound"] = check.bound;
  report["b_H0"] = check.b_H0;
  report["b_min"] = check.b_min;
  report["pass"] = check.pass;
  bool ok = check.pass;

  const long tuples = p["lemma-tuples"].get<long>();
  if (tuples > 0) {
    McBudget lemma_budget = budget;
    lemma_budget.samples = p["lemma-samples"].get<long>();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(0.0, t);
    Json rows = Json::array();
    for (long k = 0; k < tuples; ++k) {
      std::vector<double> times(n);
      do {
        for (auto& s : times) s = u(rng);
        std::sort(times.begin(), times.end());
      } while (!(times.front() > 0) || std::adjacent_find(times.begin(), times.end()) != times.end());
      const auto l = verify_lemma32(n, times, t, x, fp, mu, lemma_budget, seed + 1 + k);
      ok = ok && l.pass;
      rows.push_back(Json{{"times", times}, {"lhs", estimator_json(l.lhs)},
                          {"rhs", estimator_json(l.rhs)}, {"diff_stderr", l.diff_stderr},
                          {"pass", l.pass}});
    }
    report["lemma32"] = rows;
  }
  out << report.dump(2) << '\n';
  if (!ok) throw VerificationFailure{};
}

void cmd_selfcheck(const Json& p, std::ostream& out, std::ostream&) {
  AcceptanceOptions o;
  o.seed = p["seed"].get<std::uint64_t>();
  o.mc_samples = p["samples"].get<long>();
  o.lemma_samples = p["lemma-samples"].get<long>();
  o.workers = p["workers"].get<int>();
  const auto results =
      run_acceptance(o, [&](const CriterionResult& r) { out << format_line(r) << std::endl; });
  if (acceptance_exit_code(results, p["strict"].get<bool>()) != 0) throw VerificationFailure{};
}

std::vector<Command> commands() {
  const OptionSpec H0{"H0", Kind::Double, 0.75, "temporal Hurst index in (1/2, 1)"};
  const OptionSpec H{"H", Kind::Double, 0.3, "spatial Hurst index in (0, 1/2)"};
  const OptionSpec b{"b", Kind::Double, 1.0, "Hardy-Littlewood-Sobolev constant b_H0"};
  const OptionSpec format{"format", Kind::String, "csv", "csv | json"};

  std::vector<Command> cs;
  cs.push_back({"paths", "enumerate A_n with lattice-path heights (JSON lines)",
                {{"n", Kind::Int, 4, "path length"}}, cmd_paths});
  cs.push_back({"identity", "check the product-expansion identity in exact rationals",
                {{"n", Kind::Int, 4, "number of variables"},
                 {"trials", Kind::Int, 200, "random inputs when --x is absent"},
                 {"seed", Kind::Int, 1, "RNG seed"},
                 {"x", Kind::String, "", "comma-separated rationals p/q (overrides random)"}},
                cmd_identity});
  cs.push_back({"gamma-scan", "gamma_n over A_n for each (H0, H)",
                {{"H0", Kind::DoubleList, nullptr, "H0 values (default: admissible grid)"},
                 {"H", Kind::DoubleList, nullptr, "H values"},
                 {"n-max", Kind::Int, 8, "largest n"},
                 format},
                cmd_gamma_scan});
  cs.push_back({"dirichlet", "closed-form simplex integral, optional quadrature oracle",
                {{"t", Kind::Double, 1.0, "simplex size"},
                 {"alpha", Kind::DoubleList, std::vector<double>{1.0}, "exponents on t_{k}-t_{k-1}"},
                 {"beta", Kind::DoubleList, std::vector<double>{1.0}, "exponents on t_k"},
                 {"oracle", Kind::Flag, false, "also run nested quadrature"},
                 {"rtol", Kind::Double, 1e-6, "oracle agreement tolerance"}},
                cmd_dirichlet});
  auto j0_opts = measure_options("dirac");
  j0_opts.insert(j0_opts.begin(), {{"t", Kind::Double, 1.0, "time"},
                                   {"x", Kind::Double, 0.0, "position"},
                                   {"a-grid", Kind::DoubleList, std::vector<double>{0.1, 0.5, 1, 2, 5},
                                    "Gaussian-integrability check points"}});
  cs.push_back({"j0", "initial-data evolution J_0 and the integrability check", j0_opts, cmd_j0});
  auto bt_opts = measure_options("dirac");
  bt_opts.insert(bt_opts.begin(),
                 {H0, H, b,
                  {"t", Kind::DoubleList, std::vector<double>{1, 2, 4, 8}, "times"},
                  {"p", Kind::DoubleList, std::vector<double>{2}, "moment orders >= 2"},
                  {"x", Kind::Double, 0.0, "position"},
                  {"C", Kind::Double, nullptr, "asymptotic constant (default: witness)"},
                  format});
  cs.push_back({"bound-table", "moment-bound series and fitted envelope (CSV)", bt_opts, cmd_bound_table});
  auto mc_opts = measure_options("dirac");
  mc_opts.insert(mc_opts.begin(),
                 {{"n", Kind::Int, 1, "chaos order (1 or 2)"},
                  {"t", Kind::Double, 1.0, "time"},
                  {"x", Kind::Double, 0.0, "position"},
                  H0, H, b,
                  {"sharp-b", Kind::Flag, false, "use the sharp b_H0 instead of --b"},
                  {"samples", Kind::Int, 200000, "Monte Carlo samples"},
                  {"seed", Kind::Int, 20190517, "RNG seed"},
                  {"workers", Kind::Int, 1, "worker threads (results do not depend on it)"},
                  {"lemma-tuples", Kind::Int, 0, "random ordered time tuples for the psi comparison"},
                  {"lemma-samples", Kind::Int, 20000, "samples per tuple"}});
  cs.push_back({"mc-verify", "Monte Carlo chaos norm vs the exact-constants bound", mc_opts, cmd_mc_verify});
  cs.push_back({"selfcheck", "run the acceptance suite",
                {{"seed", Kind::Int, 20190517, "RNG seed"},
                 {"samples", Kind::Int, 200000, "Monte Carlo samples per bound check"},
                 {"lemma-samples", Kind::Int, 20000, "samples per psi comparison"},
                 {"workers", Kind::Int, 1, "worker threads"},
                 {"strict", Kind::Flag, false, "treat documented failures as failures"}},
                cmd_selfcheck});
  return cs;
}

Json resolve(const Command& cmd, const std::string& config_path,
             const std::map<std::string, std::string>& flag_text,
             const std::map<std::string, bool>& flag_set) {
  Json params = Json::object();
  for (const auto& o : cmd.options) params[o.key] = o.fallback;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot read config file '" + config_path + "'");
    RunConfig file;
    try {
      file = RunConfig::from_json(Json::parse(in));
    } catch (const Json::exception& e) {
      throw UsageError("config: " + std::string(e.what()));
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
    if (!file.command.empty() && file.command != cmd.name) {
      throw UsageError("config: command '" + file.command + "' does not match '" + cmd.name + "'");
    }
    for (const auto& [key, value] : file.params.items()) {
      const auto it = std::find_if(cmd.options.begin(), cmd.options.end(),
                                   [&](const OptionSpec& o) { return o.key == key; });
      if (it == cmd.options.end()) throw UsageError("config: unknown key '" + key + "' for " + cmd.name);
      check_config_value(*it, value);
      params[key] = value;
    }
  }
  for (const auto& o : cmd.options) {
    if (o.kind == Kind::Flag) {
      if (flag_set.at(o.key)) params[o.key] = true;
    } else if (const auto it = flag_text.find(o.key); it != flag_text.end()) {
      params[o.key] = from_flag_text(o, it->second);
    }
  }
  return params;
}

std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path path(requested);
  if (const char* dir = std::getenv("PAMBOUND_OUTPUT_DIR"); dir && *dir && path.is_relative()) {
    path = std::filesystem::path(dir) / path;
  }
  return path;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto cmds = commands();
  CLI::App app{"Moment bounds for the parabolic Anderson model with rough noise", "pambound"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::map<std::string, std::map<std::string, std::string>> texts;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> handles;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON config {\"command\", \"params\"}; flags override it");
    sub->add_option("--output", output, "output file (relative paths go under $PAMBOUND_OUTPUT_DIR)");
    for (const auto& o : c.options) {
      if (o.kind == Kind::Flag) {
        flags[c.name][o.key] = false;
        sub->add_flag("--" + o.key, flags[c.name][o.key], o.help);
      } else {
        auto* opt = sub->add_option("--" + o.key, texts[c.name][o.key], o.help);
        handles[c.name].emplace_back(o.key, opt);
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pambound: " << e.what() << '\n';
    if (const auto* used = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "try: pambound " << used->get_name() << " --help\n";
    }
    return kExitUsage;
  }

  const auto* used = app.get_subcommands().front();
  const auto& cmd = *std::find_if(cmds.begin(), cmds.end(),
                                  [&](const Command& c) { return c.name == used->get_name(); });
  std::map<std::string, std::string> given;
  for (const auto& [key, opt] : handles[cmd.name]) {
    if (opt->count() > 0) given[key] = texts[cmd.name][key];
  }

  try {
    RunConfig config{cmd.name, resolve(cmd, config_path, given, flags[cmd.name])};
    err << "pambound: config " << config.to_json().dump() << '\n';

    std::ofstream file;
    std::ostream* dest = &out;
    if (!output.empty()) {
      const auto path = output_path(output);
      file.open(path, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + path.string() + "'");
      dest = &file;
    }
    try {
      cmd.body(config.params, *dest, err);
    } catch (const VerificationFailure&) {
      err << "pambound: " << cmd.name << ": verification failed\n";
      return kExitVerificationFailure;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "pambound: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "pambound: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "pambound: " << e.what() << '\n';
  } catch (const SizeError& e) {
    err << "pambound: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "pambound: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "pambound: bad parameter: " << e.what() << '\n';
  } catch (const NumericalError& e) {
    err << "pambound: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pam
