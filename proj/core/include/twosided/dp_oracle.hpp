#pragma once

#include <vector>

#include "twosided/model.hpp"
#include "twosided/series.hpp"

namespace twosided {

struct DpOptions {
  long max_epochs = 200'000;
  double mass_tolerance = 1e-15;  // stop once the unabsorbed mass drops below this
};

/// Exact exit distribution from forward dynamic programming over the lattice
/// (A_k, B_k) in [0, M) x [0, M], with B saturated at M.
struct DpOracleResult {
  int M = 0;
  double p_mu_first = 0.0;  // P{mu < nu}
  double p_nu_first = 0.0;  // P{nu < mu}
  double p_tie = 0.0;       // P{mu = nu}

  /// P{mu < nu, B_{mu-1} = k} for k = 0..M-1.
  std::vector<double> supplier_before_exit;
  /// E[A_mu ; mu < nu]
  double traced_customer_mean = 0.0;

  // Terms of the capped payoff.
  double mean_customers = 0.0;        // E[A_mu]
  double under_supplier_mean = 0.0;   // E[B_mu ; A_mu + B_{mu-1} <= M]
  double p_over = 0.0;                // P{A_mu + B_{mu-1} > M}
  double over_customer_mean = 0.0;    // E[A_mu ; A_mu + B_{mu-1} > M]

  long epochs = 0;
  double residual_mass = 0.0;

  PgfArray supplier_pmf() const { return PgfArray(supplier_before_exit); }
  double conditional_customer_mean() const { return traced_customer_mean / p_mu_first; }
};

/// Supports both couplings: under Attraction the customer intensity of an epoch
/// is read from the saturated supplier count at the previous epoch. Requires
/// M <= 12. Throws PrecisionError if the mass budget is not met in time.
DpOracleResult dp_oracle(const PlatformConfig& config, int M, const DpOptions& options = {});

}  // namespace twosided
