#include "twosided_cli/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "twosided/errors.hpp"

namespace twosided::cli {

namespace {

std::string where(const std::string& source, const YAML::Mark& mark) {
  std::ostringstream os;
  os << source;
  if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
  return os.str();
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    throw ConfigError(where(source_, node.Mark()) + ": " + msg);
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                  const std::string& section) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + section);
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "bad value '" + node.Scalar() + "' for " + key);
    }
  }

  DelayDistribution delay(const YAML::Node& node, const std::string& key) const {
    require_map(node, key);
    if (node.size() != 1) fail(node, key + " needs exactly one of 'exp' or 'det'");
    const auto it = node.begin();
    const auto kind = it->first.as<std::string>();
    const auto value = scalar<double>(it->second, key + "." + kind);
    try {
      if (kind == "exp") return DelayDistribution::exponential(value);
      if (kind == "det") return DelayDistribution::deterministic(value);
    } catch (const DomainError& e) {
      fail(it->second, e.what());
    }
    fail(it->first, "unknown delay kind '" + kind + "' (expected exp or det)");
  }

 private:
  std::string source_;
};

double parse_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError("bad " + what + " '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("bad " + what + " '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (!text.empty() && text.back() == ':') parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<double> AlphaGrid::points() const {
  std::vector<double> p(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    p[static_cast<std::size_t>(i)] =
        steps == 1 ? lo : (i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1));
  }
  return p;
}

std::vector<int> MGrid::points() const {
  std::vector<int> p;
  for (int m = lo; m <= hi; ++m) p.push_back(m);
  return p;
}

AlphaGrid parse_alpha_grid(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 3) throw ConfigError("alpha grid must be lo:hi:steps, got '" + text + "'");
  AlphaGrid g{parse_double(parts[0], "alpha grid lo"), parse_double(parts[1], "alpha grid hi"),
              parse_int(parts[2], "alpha grid steps")};
  if (g.steps < 1) throw ConfigError("alpha grid needs at least one point");
  if (g.lo < 1.0) throw ConfigError("alpha grid must start at or above 1");
  if (g.steps == 1 ? g.hi < g.lo : !(g.hi > g.lo)) {
    throw ConfigError("alpha grid needs lo < hi (or a single point)");
  }
  return g;
}

MGrid parse_m_grid(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 2) throw ConfigError("M grid must be lo:hi, got '" + text + "'");
  MGrid g{parse_int(parts[0], "M grid lo"), parse_int(parts[1], "M grid hi")};
  if (g.lo < 1 || g.hi < g.lo) throw ConfigError("M grid needs 1 <= lo <= hi");
  return g;
}

EngineKind parse_engine(const std::string& text) {
  if (text == "mc") return EngineKind::MonteCarlo;
  if (text == "dp") return EngineKind::DpOracle;
  if (text == "open") return EngineKind::Open;
  throw ConfigError("unknown engine '" + text + "' (expected mc, dp or open)");
}

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::MonteCarlo: return "mc";
    case EngineKind::DpOracle: return "dp";
    case EngineKind::Open: return "open";
  }
  return "?";
}

Scenario default_scenario() {
  Scenario s;
  s.model = symmetric_config(3);
  return s;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  Reader rd(source);
  // Omitted keys keep the built-in scenario's values.
  Scenario s = default_scenario();
  if (root.IsNull()) return s;
  rd.require_map(root, "scenario");
  rd.check_keys(root, {"model", "payoff", "run"}, "scenario");

  try {
    if (const auto m = root["model"]) {
      rd.require_map(m, "model");
      rd.check_keys(m,
                    {"lambda_a", "lambda_b", "lambda_a0", "lambda_b0", "delta", "tau0",
                     "capacity", "alpha", "b0", "coupling"},
                    "model");
      auto& c = s.model;
      if (m["lambda_a"]) c.rates.lambda_a = rd.scalar<double>(m["lambda_a"], "lambda_a");
      if (m["lambda_b"]) c.rates.lambda_b = rd.scalar<double>(m["lambda_b"], "lambda_b");
      if (m["lambda_a0"]) c.rates.lambda_a0 = rd.scalar<double>(m["lambda_a0"], "lambda_a0");
      if (m["lambda_b0"]) c.rates.lambda_b0 = rd.scalar<double>(m["lambda_b0"], "lambda_b0");
      if (m["delta"]) c.delta = rd.delay(m["delta"], "delta");
      if (m["tau0"]) c.tau0 = rd.delay(m["tau0"], "tau0");
      if (m["capacity"]) c.capacity = rd.scalar<int>(m["capacity"], "capacity");
      if (m["alpha"]) c.alpha = rd.scalar<double>(m["alpha"], "alpha");
      if (m["b0"]) c.b0 = rd.scalar<double>(m["b0"], "b0");
      if (const auto cp = m["coupling"]) {
        const auto v = rd.scalar<std::string>(cp, "coupling");
        if (v == "static") {
          c.coupling = Coupling::Static;
        } else if (v == "attraction") {
          c.coupling = Coupling::Attraction;
        } else {
          rd.fail(cp, "coupling must be static or attraction");
        }
      }
      try {
        c.validate();
      } catch (const DomainError& e) {
        rd.fail(m, std::string("invalid model: ") + e.what());
      }
    }

    if (const auto p = root["payoff"]) {
      rd.require_map(p, "payoff");
      rd.check_keys(p, {"c0", "c1"}, "payoff");
      if (p["c0"]) s.pay.c0 = rd.scalar<double>(p["c0"], "c0");
      if (p["c1"]) s.pay.c1 = rd.scalar<double>(p["c1"], "c1");
    }

    if (const auto r = root["run"]) {
      rd.require_map(r, "run");
      rd.check_keys(r,
                    {"mode", "reps", "seed", "alpha_grid", "m_grid", "tol", "ci_multiple",
                     "alpha_tol", "out", "format", "engine", "workers"},
                    "run");
      auto& run = s.run;
      auto wrap = [&](const YAML::Node& node, auto&& f) {
        try {
          f();
        } catch (const ConfigError& e) {
          rd.fail(node, e.what());
        }
      };
      if (r["mode"]) {
        run.mode = rd.scalar<std::string>(r["mode"], "mode");
        static const std::set<std::string> modes{"analyze", "simulate", "validate", "optimize",
                                                 "sweep"};
        if (!modes.count(*run.mode)) rd.fail(r["mode"], "unknown mode '" + *run.mode + "'");
      }
      if (r["reps"]) {
        const auto reps = rd.scalar<long long>(r["reps"], "reps");
        if (reps < 2) rd.fail(r["reps"], "reps must be at least 2");
        run.reps = static_cast<std::size_t>(reps);
      }
      if (r["seed"]) run.seed = rd.scalar<std::uint64_t>(r["seed"], "seed");
      if (r["alpha_grid"]) {
        const auto v = rd.scalar<std::string>(r["alpha_grid"], "alpha_grid");
        wrap(r["alpha_grid"], [&] { run.alpha_grid = parse_alpha_grid(v); });
      }
      if (r["m_grid"]) {
        const auto v = rd.scalar<std::string>(r["m_grid"], "m_grid");
        wrap(r["m_grid"], [&] { run.m_grid = parse_m_grid(v); });
      }
      if (r["tol"]) run.tol = rd.scalar<double>(r["tol"], "tol");
      if (r["ci_multiple"]) run.ci_multiple = rd.scalar<double>(r["ci_multiple"], "ci_multiple");
      if (r["alpha_tol"]) run.alpha_tol = rd.scalar<double>(r["alpha_tol"], "alpha_tol");
      if (r["out"]) run.out = rd.scalar<std::string>(r["out"], "out");
      if (r["format"]) {
        run.format = rd.scalar<std::string>(r["format"], "format");
        if (*run.format != "csv" && *run.format != "json" && *run.format != "text") {
          rd.fail(r["format"], "format must be text, csv or json");
        }
      }
      if (r["engine"]) {
        const auto v = rd.scalar<std::string>(r["engine"], "engine");
        wrap(r["engine"], [&] { run.engine = parse_engine(v); });
      }
      if (r["workers"]) run.workers = rd.scalar<unsigned>(r["workers"], "workers");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace twosided::cli
