#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "twosided/model.hpp"
#include "twosided/open_platform.hpp"
#include "twosided/simulator.hpp"

namespace twosided {

struct MonteCarloEngine {
  std::size_t reps = 100'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct DpOracleEngine {};

/// Closed-form open platform; capacity only sets the supplier-law truncation.
struct OpenPlatformEngine {};

using PayoffEngine = std::variant<MonteCarloEngine, DpOracleEngine, OpenPlatformEngine>;

struct PayoffEstimate {
  double value = 0.0;
  double std_error = 0.0;     // 0 for exact engines
  double ci_halfwidth = 0.0;  // 99% band
};

/// c0 E[A_mu] - c1 E[B_mu ; under] - c1 (M P{over} - E[A_mu ; over]), where
/// "under" is A_mu + B_{mu-1} <= M and "over" its complement.
double payoff_of_record(const ExitRecord& r, int M, const PayoffParams& pay);

PayoffEstimate payoff(const PlatformConfig& config, const PayoffParams& pay,
                      const PayoffEngine& engine);

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  bool at_boundary = false;
  std::vector<double> grid;
  std::vector<double> grid_values;
  std::size_t evaluations = 0;
};

/// 21-point grid on [lo, hi], then golden-section refinement of the bracket
/// around the best grid point until it is no wider than tol. A best grid point
/// on a bound is reported as is. Never evaluates outside [lo, hi].
ScalarOptimum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol, int grid_points = 21);

struct AlphaOptimum {
  double alpha = 0.0;
  PayoffEstimate value;
  bool at_boundary = false;
  /// MonteCarlo only: grid alphas whose CI overlaps the best grid cell's CI.
  std::vector<double> overlap_set;
  std::size_t evaluations = 0;
};

AlphaOptimum optimize_alpha(const PlatformConfig& config, const PayoffParams& pay,
                            const PayoffEngine& engine, double lo = 1.0, double hi = 10.0,
                            double tol = 0.05);

struct PayoffSurface {
  std::vector<double> alpha_grid;
  std::vector<int> m_grid;
  /// value[i][j] and ci[i][j] belong to (m_grid[i], alpha_grid[j]).
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> ci;
  /// Non-empty message marks a failed cell, excluded from the argmax.
  std::vector<std::vector<std::string>> error;
  double argmax_alpha = 0.0;
  int argmax_m = 0;

  std::size_t failed_cells() const;
};

/// Raised when more than 10% of the surface cells fail; carries the surface.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, PayoffSurface surface)
      : std::runtime_error(what), surface_(std::move(surface)) {}
  const PayoffSurface& surface() const noexcept { return surface_; }

 private:
  PayoffSurface surface_;
};

/// Evaluates every (M, alpha) cell in parallel. MonteCarlo cells in row i all
/// use the seed derive_seed(engine.seed, i), so a row shares random numbers.
/// The result does not depend on the worker count.
PayoffSurface sweep_surface(const PlatformConfig& config, const PayoffParams& pay,
                            const std::vector<double>& alpha_grid, const std::vector<int>& m_grid,
                            const PayoffEngine& engine, unsigned workers = 0);

/// Ties go to the smaller alpha, then the smaller M.
void fill_argmax(PayoffSurface& surface);

}  // namespace twosided
