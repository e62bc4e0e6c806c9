#include "twosided_cli/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twosided/dp_oracle.hpp"
#include "twosided/errors.hpp"
#include "twosided/exceedance.hpp"
#include "twosided/payoff.hpp"
#include "twosided/simulator.hpp"
#include "twosided_cli/scenario.hpp"

namespace twosided::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

// NaN/inf are not JSON numbers; failed cells serialize as null.
ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> tol;
  std::optional<std::string> alpha_grid;
  std::optional<std::string> m_grid;
  std::optional<std::string> engine;
  std::optional<unsigned> workers;
  std::optional<std::string> args;
};

void apply_flags(const Options& o, Scenario& s) {
  if (o.seed) s.run.seed = *o.seed;
  if (o.reps) {
    if (*o.reps < 2) throw ConfigError("--reps must be at least 2");
    s.run.reps = *o.reps;
  }
  if (o.out) s.run.out = *o.out;
  if (o.format) s.run.format = *o.format;
  if (o.tol) s.run.tol = *o.tol;
  if (o.alpha_grid) s.run.alpha_grid = parse_alpha_grid(*o.alpha_grid);
  if (o.m_grid) s.run.m_grid = parse_m_grid(*o.m_grid);
  if (o.engine) s.run.engine = parse_engine(*o.engine);
  if (o.workers) s.run.workers = *o.workers;
}

FunctionalArgs parse_args(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(part, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != part.size()) throw ConfigError("bad --args entry '" + part + "'");
    v.push_back(x);
  }
  if (v.size() != 5) throw ConfigError("--args needs five values xi,z0,z1,g0,g1");
  FunctionalArgs a{v[0], v[1], v[2], v[3], v[4]};
  try {
    a.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--args: ") + e.what());
  }
  return a;
}

std::string format_or(const Scenario& s, const std::string& fallback,
                      std::initializer_list<const char*> allowed, const char* mode) {
  const std::string f = s.run.format.value_or(fallback);
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw ConfigError(std::string("format '") + f + "' is not available for " + mode);
}

void emit(const Scenario& s, const std::string& text, std::ostream& out) {
  if (!s.run.out) {
    out << text;
    return;
  }
  std::ofstream f(*s.run.out, std::ios::binary);
  if (!f) throw ConfigError(*s.run.out + ": cannot open for writing");
  f << text;
  if (!f) throw ConfigError(*s.run.out + ": write failed");
}

PayoffEngine make_engine(const Scenario& s) {
  switch (s.run.engine) {
    case EngineKind::MonteCarlo: return MonteCarloEngine{s.run.reps, s.run.seed, s.run.workers};
    case EngineKind::DpOracle: return DpOracleEngine{};
    case EngineKind::Open: return OpenPlatformEngine{};
  }
  return DpOracleEngine{};
}

SimOptions sim_options(const Scenario& s) {
  SimOptions o;
  o.workers = s.run.workers;
  return o;
}

int cmd_analyze(const Scenario& s, const FunctionalArgs& args, std::ostream& out) {
  const auto& c = s.model;
  const int M = c.capacity;
  const double phi = phi_functional(c, args, M);
  const double p_first = phi_functional(c, FunctionalArgs::ones(), M);
  const PgfArray pmf = supplier_pmf(c, M);
  const CappedMean mean = mean_customers_capped(c, M);

  if (format_or(s, "text", {"text", "json"}, "analyze") == "json") {
    ordered_json j;
    j["capacity"] = M;
    j["args"] = {args.xi, args.z0, args.z1, args.g0, args.g1};
    j["phi"] = phi;
    j["p_mu_first"] = p_first;
    j["supplier_pmf"] = std::vector<double>(pmf.mass().begin(), pmf.mass().end());
    j["mean_customers_given_mu_first"] = mean.conditional_mean;
    j["mean_customers_on_mu_first"] = mean.traced_mean;
    emit(s, j.dump(2) + "\n", out);
    return kExitOk;
  }
  std::ostringstream os;
  os << "capacity M                 " << M << "\n"
     << "coupling                   " << to_string(c.coupling) << "\n"
     << "delay                      " << to_string(c.delta.kind()) << "\n"
     << pad("Phi_M(" + short_num(args.xi) + "," + short_num(args.z0) + "," + short_num(args.z1) +
                "," + short_num(args.g0) + "," + short_num(args.g1) + ")",
            26)
     << " " << num(phi) << "\n"
     << "P{mu<nu}                   " << num(p_first) << "\n"
     << "E[A_mu | mu<nu]            " << num(mean.conditional_mean) << "\n"
     << "E[A_mu ; mu<nu]            " << num(mean.traced_mean) << "\n"
     << "supplier pmf P{mu<nu, B_{mu-1}=k}\n";
  for (std::size_t k = 0; k < pmf.size(); ++k) os << "  " << pad(std::to_string(k), 4) << num(pmf[k]) << "\n";
  emit(s, os.str(), out);
  return kExitOk;
}

int cmd_simulate(const Scenario& s, std::ostream& out) {
  const auto& c = s.model;
  const int M = c.capacity;
  const auto records = simulate_batch(c, s.run.reps, RunSeed{s.run.seed}, sim_options(s));
  const SimEstimate p_first =
      estimate(records, [](const ExitRecord& r) { return r.flag_mu_first ? 1.0 : 0.0; });
  const SimEstimate cond = estimate_conditional(
      records, [](const ExitRecord& r) { return static_cast<double>(r.a_exit); },
      [](const ExitRecord& r) { return r.flag_mu_first; });
  const SimEstimate mean_a =
      estimate(records, [](const ExitRecord& r) { return static_cast<double>(r.a_exit); });
  const SimEstimate pay = estimate(
      records, [&](const ExitRecord& r) { return payoff_of_record(r, M, s.pay); });
  const PgfArray pmf = empirical_pmf(records, ExitVariable::SupplierBeforeCustomerExit, M - 1);

  auto jest = [](const SimEstimate& e) {
    ordered_json j;
    j["mean"] = jnum(e.mean);
    j["std_error"] = jnum(e.std_error);
    j["ci_halfwidth"] = jnum(e.ci_halfwidth);
    j["n"] = e.n;
    return j;
  };
  if (format_or(s, "text", {"text", "json"}, "simulate") == "json") {
    ordered_json j;
    j["capacity"] = M;
    j["reps"] = s.run.reps;
    j["seed"] = s.run.seed;
    j["p_mu_first"] = jest(p_first);
    j["mean_customers_given_mu_first"] = jest(cond);
    j["mean_customers"] = jest(mean_a);
    j["payoff"] = jest(pay);
    j["supplier_pmf"] = std::vector<double>(pmf.mass().begin(), pmf.mass().end());
    emit(s, j.dump(2) + "\n", out);
    return kExitOk;
  }
  auto line = [](const std::string& name, const SimEstimate& e) {
    return pad(name, 27) + num(e.mean) + "  +- " + short_num(e.ci_halfwidth) + "  (n=" +
           std::to_string(e.n) + ")\n";
  };
  std::ostringstream os;
  os << "capacity M                 " << M << "\n"
     << "replications               " << s.run.reps << "  seed " << s.run.seed << "\n"
     << line("P{mu<nu}", p_first) << line("E[A_mu | mu<nu]", cond) << line("E[A_mu]", mean_a)
     << line("payoff", pay) << "supplier pmf P{mu<nu, B_{mu-1}=k} (empirical)\n";
  for (std::size_t k = 0; k < pmf.size(); ++k) os << "  " << pad(std::to_string(k), 4) << num(pmf[k]) << "\n";
  emit(s, os.str(), out);
  return kExitOk;
}

struct ValidateRow {
  int M;
  double analytic;
  std::optional<double> dp;
  SimEstimate mc;
  double tv;
  bool pass_dp;
  bool pass_mc;
  bool pass_tv;
};

int cmd_validate(const Scenario& s, std::ostream& out) {
  s.model.require_static();
  const MGrid grid = s.run.m_grid.value_or(MGrid{s.model.capacity, s.model.capacity});
  constexpr double kTvTol = 0.01;
  std::vector<ValidateRow> rows;
  bool all = true;
  for (int M : grid.points()) {
    PlatformConfig c = s.model;
    c.capacity = M;
    ValidateRow row{};
    row.M = M;
    row.analytic = phi_functional(c, FunctionalArgs::ones(), M);
    if (M <= 12) row.dp = dp_oracle(c, M).p_mu_first;
    const auto records = simulate_batch(c, s.run.reps,
                                        RunSeed{derive_seed(s.run.seed, static_cast<std::uint64_t>(M))},
                                        sim_options(s));
    row.mc = estimate(records, [](const ExitRecord& r) { return r.flag_mu_first ? 1.0 : 0.0; });
    row.tv = total_variation(supplier_pmf(c, M),
                             empirical_pmf(records, ExitVariable::SupplierBeforeCustomerExit, M));
    row.pass_dp = !row.dp || std::abs(row.analytic - *row.dp) <= s.run.tol;
    row.pass_mc = std::abs(row.analytic - row.mc.mean) <= s.run.ci_multiple * row.mc.ci_halfwidth;
    row.pass_tv = row.tv <= kTvTol;
    all = all && row.pass_dp && row.pass_mc && row.pass_tv;
    rows.push_back(row);
  }

  const std::string fmt = format_or(s, "text", {"text", "csv", "json"}, "validate");
  std::ostringstream os;
  if (fmt == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      j["m"] = r.M;
      j["analytic"] = r.analytic;
      j["dp"] = r.dp ? ordered_json(*r.dp) : ordered_json(nullptr);
      j["mc"] = r.mc.mean;
      j["mc_ci_halfwidth"] = r.mc.ci_halfwidth;
      j["pmf_tv"] = r.tv;
      j["pass"] = r.pass_dp && r.pass_mc && r.pass_tv;
      arr.push_back(j);
    }
    os << arr.dump(2) << "\n";
  } else if (fmt == "csv") {
    os << "m,analytic,dp,mc,mc_ci_halfwidth,pmf_tv,pass\n";
    for (const auto& r : rows) {
      os << r.M << ',' << num(r.analytic) << ',' << (r.dp ? num(*r.dp) : "") << ','
         << num(r.mc.mean) << ',' << num(r.mc.ci_halfwidth) << ',' << num(r.tv) << ','
         << ((r.pass_dp && r.pass_mc && r.pass_tv) ? "pass" : "fail") << "\n";
    }
  } else {
    os << "P{mu<nu}: analytic vs exact DP (tol " << short_num(s.run.tol) << "), vs Monte Carlo ("
       << short_num(s.run.ci_multiple) << " CI, n=" << s.run.reps << "), supplier pmf TV (<= "
       << kTvTol << ")\n";
    os << pad("M", 4) << pad("analytic", 20) << pad("dp", 20) << pad("mc +- ci", 28)
       << pad("tv", 18) << "result\n";
    for (const auto& r : rows) {
      std::string verdict = "pass";
      if (!r.pass_dp) verdict = "FAIL(dp)";
      else if (!r.pass_mc) verdict = "FAIL(mc)";
      else if (!r.pass_tv) verdict = "FAIL(tv)";
      os << pad(std::to_string(r.M), 4) << pad(short_num(r.analytic), 20)
         << pad(r.dp ? short_num(*r.dp) : "-", 20)
         << pad(short_num(r.mc.mean) + " +- " + short_num(r.mc.ci_halfwidth), 28)
         << pad(short_num(r.tv), 18) << verdict << "\n";
    }
  }
  emit(s, os.str(), out);
  return all ? kExitOk : kExitValidation;
}

int cmd_optimize(const Scenario& s, std::ostream& out) {
  const AlphaGrid bounds = s.run.alpha_grid.value_or(AlphaGrid{});
  const AlphaOptimum opt =
      optimize_alpha(s.model, s.pay, make_engine(s), bounds.lo, bounds.hi, s.run.alpha_tol);
  if (format_or(s, "text", {"text", "json"}, "optimize") == "json") {
    ordered_json j;
    j["engine"] = to_string(s.run.engine);
    j["capacity"] = s.model.capacity;
    j["alpha"] = opt.alpha;
    j["payoff"] = opt.value.value;
    j["ci_halfwidth"] = opt.value.ci_halfwidth;
    j["at_boundary"] = opt.at_boundary;
    j["overlap_set"] = opt.overlap_set;
    j["evaluations"] = opt.evaluations;
    emit(s, j.dump(2) + "\n", out);
    return kExitOk;
  }
  std::ostringstream os;
  os << "engine                     " << to_string(s.run.engine) << "\n"
     << "capacity M                 " << s.model.capacity << "\n"
     << "bounds                     [" << short_num(bounds.lo) << ", " << short_num(bounds.hi)
     << "]\n"
     << "alpha*                     " << num(opt.alpha) << (opt.at_boundary ? "  (at bound)" : "")
     << "\n"
     << "payoff(alpha*)             " << num(opt.value.value);
  if (opt.value.ci_halfwidth > 0.0) os << "  +- " << short_num(opt.value.ci_halfwidth);
  os << "\n";
  if (!opt.overlap_set.empty()) {
    os << "CI-overlap set             ";
    for (std::size_t i = 0; i < opt.overlap_set.size(); ++i) {
      os << (i ? " " : "") << short_num(opt.overlap_set[i]);
    }
    os << "\n";
  }
  os << "evaluations                " << opt.evaluations << "\n";
  emit(s, os.str(), out);
  return kExitOk;
}

std::string surface_csv(const PayoffSurface& surf) {
  std::ostringstream os;
  os << "alpha,m,payoff,ci_halfwidth\n";
  for (std::size_t i = 0; i < surf.m_grid.size(); ++i) {
    for (std::size_t j = 0; j < surf.alpha_grid.size(); ++j) {
      os << num(surf.alpha_grid[j]) << ',' << surf.m_grid[i] << ',' << num(surf.value[i][j])
         << ',' << num(surf.ci[i][j]) << "\n";
    }
  }
  return os.str();
}

std::string surface_json(const PayoffSurface& surf) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < surf.m_grid.size(); ++i) {
    for (std::size_t j = 0; j < surf.alpha_grid.size(); ++j) {
      ordered_json rec;
      rec["alpha"] = surf.alpha_grid[j];
      rec["m"] = surf.m_grid[i];
      rec["payoff"] = jnum(surf.value[i][j]);
      rec["ci_halfwidth"] = jnum(surf.ci[i][j]);
      if (!surf.error[i][j].empty()) rec["error"] = surf.error[i][j];
      arr.push_back(rec);
    }
  }
  return arr.dump(2) + "\n";
}

int cmd_sweep(const Scenario& s, std::ostream& out, std::ostream& err) {
  const std::vector<double> alphas = s.run.alpha_grid.value_or(AlphaGrid{}).points();
  const std::vector<int> ms =
      s.run.m_grid.value_or(MGrid{s.model.capacity, s.model.capacity}).points();
  PayoffEngine engine = make_engine(s);
  const PayoffSurface surf = sweep_surface(s.model, s.pay, alphas, ms, engine, s.run.workers);
  const std::string fmt = format_or(s, "csv", {"csv", "json"}, "sweep");
  emit(s, fmt == "json" ? surface_json(surf) : surface_csv(surf), out);
  if (const std::size_t failed = surf.failed_cells()) {
    err << "sweep: " << failed << " cell(s) failed and were left out of the argmax\n";
  }
  err << "sweep: argmax at alpha=" << short_num(surf.argmax_alpha) << " M=" << surf.argmax_m
      << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sided platform exceedance analytics"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config, "Scenario file (YAML)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--reps", o.reps, "Monte Carlo replications");
  app.add_option("--out", o.out, "Output file (stdout when omitted)");
  app.add_option("--format", o.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--tol", o.tol, "Tolerance of analytic vs exact oracle");
  app.add_option("--alpha-grid", o.alpha_grid, "lo:hi:steps");
  app.add_option("--m-grid", o.m_grid, "lo:hi");
  app.add_option("--engine", o.engine, "Payoff engine: mc, dp or open");
  app.add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* analyze = app.add_subcommand("analyze", "Closed-form exit functionals");
  analyze->add_option("--args", o.args, "xi,z0,z1,g0,g1 for Phi_M (default all ones)");
  app.add_subcommand("simulate", "Monte Carlo estimates of the same quantities");
  app.add_subcommand("validate", "Analytic vs Monte Carlo vs exact DP table");
  app.add_subcommand("optimize", "Optimal attraction factor alpha");
  app.add_subcommand("sweep", "Payoff surface over (alpha, M)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Scenario s = o.config.empty() ? default_scenario() : load_scenario(o.config);
    apply_flags(o, s);

    std::string mode;
    if (!app.get_subcommands().empty()) {
      mode = app.get_subcommands().front()->get_name();
    } else if (s.run.mode) {
      mode = *s.run.mode;
    } else {
      err << "error: a subcommand is required (analyze, simulate, validate, optimize, sweep)\n";
      return kExitUsage;
    }

    if (mode == "analyze") {
      return cmd_analyze(s, o.args ? parse_args(*o.args) : FunctionalArgs::ones(), out);
    }
    if (mode == "simulate") return cmd_simulate(s, out);
    if (mode == "validate") return cmd_validate(s, out);
    if (mode == "optimize") return cmd_optimize(s, out);
    return cmd_sweep(s, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace twosided::cli
