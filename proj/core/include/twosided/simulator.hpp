#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "twosided/model.hpp"
#include "twosided/series.hpp"

namespace twosided {

/// Exit data of one simulated path. Counts are cumulative: A_k = X_0 + ... + X_k.
struct ExitRecord {
  static constexpr long kNotReached = -1;

  long mu = 0;                 // first k with A_k >= M
  long nu = kNotReached;       // first k with B_k >= M, or kNotReached past the cap
  long a_prev = 0;             // A_{mu-1} (0 when mu = 0)
  long a_exit = 0;             // A_mu
  long b_prev = 0;             // B_{mu-1} (0 when mu = 0)
  long b_exit = 0;             // B_mu
  long supplier_prev = -1;     // B_{nu-1} when nu was reached
  long supplier_exit = -1;     // B_nu when nu was reached
  double tau_exit = 0.0;       // observation time of epoch mu
  bool flag_mu_first = false;  // mu < nu
  bool flag_under = false;     // A_mu + B_{mu-1} <= M
};

/// Thrown when a path fails to exit within the epoch cap; carries the path
/// state reached so far.
class NonTerminationError : public std::runtime_error {
 public:
  NonTerminationError(const std::string& what, ExitRecord partial)
      : std::runtime_error(what), partial_(partial) {}
  const ExitRecord& partial() const noexcept { return partial_; }

 private:
  ExitRecord partial_;
};

/// A replication failed; `index` identifies it.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  double ci_halfwidth = 0.0;  // 99% normal band: 2.576 * std_error
};

inline constexpr double kCi99 = 2.576;

/// Replication i draws from an independent stream derived from (master_seed, i).
struct RunSeed {
  std::uint64_t master_seed = 0;

  std::mt19937_64 stream(std::uint64_t replication) const;
};

/// Mixes two 64-bit words into a well-spread seed.
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b);

struct SimOptions {
  long epoch_cap = 1'000'000;   // epochs allowed before the customer exit
  long supplier_cap = 10'000;   // extra epochs spent tracking B after mu
  unsigned workers = 0;         // 0: hardware concurrency
};

ExitRecord simulate_path(const PlatformConfig& config, std::mt19937_64& rng,
                         const SimOptions& options = {});

/// n independent paths; the result is identical for any worker count.
std::vector<ExitRecord> simulate_batch(const PlatformConfig& config, std::size_t n, RunSeed seed,
                                       const SimOptions& options = {});

using Statistic = std::function<double(const ExitRecord&)>;

SimEstimate estimate(const std::vector<ExitRecord>& records, const Statistic& statistic);

/// Estimate restricted to records satisfying `filter` (a conditional mean).
SimEstimate estimate_conditional(const std::vector<ExitRecord>& records,
                                 const Statistic& statistic,
                                 const std::function<bool(const ExitRecord&)>& filter);

SimEstimate estimate(const PlatformConfig& config, const Statistic& statistic, std::size_t n,
                     RunSeed seed, const SimOptions& options = {});

/// Summary statistics of n values (pairwise summation, fixed order).
SimEstimate summarize(const std::vector<double>& values);

enum class ExitVariable {
  SupplierBeforeCustomerExit,  // B_{mu-1} on {mu < nu}
  SupplierBeforeSupplierExit,  // B_{nu-1} on {mu < nu}
  CustomerAtExit,              // A_mu, unconditioned
};

/// Histogram over 0..K of the selected variable divided by the record count;
/// values above K are dropped, so the total is the mass that landed in range.
PgfArray empirical_pmf(const std::vector<ExitRecord>& records, ExitVariable variable, int K);

PgfArray empirical_pmf(const PlatformConfig& config, ExitVariable variable, std::size_t n,
                       RunSeed seed, int K, const SimOptions& options = {});

/// Draws (X, Y) for one regular epoch of a static-coupling configuration.
std::pair<long, long> draw_increment(const PlatformConfig& config, std::mt19937_64& rng);

/// Mean first-passage epoch of the supplier count to each level b = ceil(b0)..max_level,
/// starting from B_0 = b0. Entry [b] holds the estimate for level b (levels below
/// ceil(b0) are left empty).
std::vector<SimEstimate> simulate_supplier_passage(const PlatformConfig& config, int max_level,
                                                   std::size_t n, RunSeed seed,
                                                   const SimOptions& options = {});

}  // namespace twosided
