#pragma once

#include "twosided/model.hpp"
#include "twosided/series.hpp"

namespace twosided {

struct PayoffParams {
  double c0 = 1.0;  // revenue per customer
  double c1 = 1.0;  // cost per supplier
};

/// Number of observation epochs for the supplier count to grow from b0 to b:
/// floor((b - b0) / (lambda_b * E[delta])).
int exit_index_open(const PlatformConfig& config, double b);

/// E[A_mu | B = b] = lambda_a E[tau0] + mu(b) * attraction_rate(b) * E[delta].
double mean_customers_given_b(const PlatformConfig& config, double b);

/// Poisson(mass) weights on 0..M renormalized to total one.
PgfArray truncated_poisson_pmf(double mass, int M);

/// Which intensity sets the Poisson mass of the supplier count law.
enum class SupplierMass {
  SupplierRate,  // lambda_b * E[delta]  (default)
  CustomerRate,  // lambda_a * E[delta]  (the form printed in the source model)
};

/// Per-supplier customer increment in the open-platform mean.
enum class IncrementForm {
  AlphaScaled,  // lambda_a * alpha * (k - b0)+  (default; keeps E[A] = alpha E[B])
  Unscaled,     // lambda_a * (k - b0)+
};

struct OpenMeanOptions {
  SupplierMass mass = SupplierMass::SupplierRate;
  IncrementForm increment = IncrementForm::AlphaScaled;
};

/// Mean customer count of the unbounded-capacity platform, mixing the per-b
/// conditional mean over truncated_poisson_pmf on 0..capacity.
double mean_customers_open(const PlatformConfig& config, OpenMeanOptions options = {});

enum class OpenPayoffForm {
  Margin,   // (c0 - c1 / alpha) E[A]   (breakeven at alpha = c1 / c0)
  Printed,  // (c0 - c1 * alpha) E[A]   (literal printed form, comparison only)
};

/// Payoff of the open platform. Accepts any alpha > 0 so that the breakeven
/// can be bracketed from below.
double open_payoff(const PlatformConfig& config, const PayoffParams& pay,
                   OpenPayoffForm form = OpenPayoffForm::Margin);

/// Smallest alpha with nonnegative open payoff: c1 / c0. Requires c0 > 0.
double alpha_star_open(const PayoffParams& pay);

}  // namespace twosided
