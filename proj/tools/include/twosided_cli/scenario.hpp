#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twosided/model.hpp"
#include "twosided/open_platform.hpp"

namespace twosided::cli {

/// Malformed scenario or flag value. The message carries "file:line:col:" when
/// the problem can be located.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlphaGrid {
  double lo = 1.0;
  double hi = 10.0;
  int steps = 37;  // number of points, ends included

  std::vector<double> points() const;
};

struct MGrid {
  int lo = 1;
  int hi = 8;

  std::vector<int> points() const;
};

enum class EngineKind { MonteCarlo, DpOracle, Open };

struct RunSettings {
  std::optional<std::string> mode;
  std::size_t reps = 100'000;
  std::uint64_t seed = 1;
  std::optional<AlphaGrid> alpha_grid;
  std::optional<MGrid> m_grid;
  double tol = 1e-8;          // analytic vs exact oracle
  double ci_multiple = 3.0;   // analytic vs Monte Carlo, in CI half-widths
  double alpha_tol = 0.05;    // optimizer interval
  std::optional<std::string> out;
  std::optional<std::string> format;  // text, csv or json; the mode picks a default
  EngineKind engine = EngineKind::MonteCarlo;
  unsigned workers = 0;
};

struct Scenario {
  PlatformConfig model;
  PayoffParams pay;
  RunSettings run;
};

/// The built-in scenario used without --config: the symmetric exponential
/// configuration at capacity 3.
Scenario default_scenario();

Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::string& path);

AlphaGrid parse_alpha_grid(const std::string& text);
MGrid parse_m_grid(const std::string& text);
EngineKind parse_engine(const std::string& text);
std::string to_string(EngineKind e);

}  // namespace twosided::cli
