#include "twosided/open_platform.hpp"

#include <algorithm>
#include <cmath>

#include "twosided/errors.hpp"

namespace twosided {

int exit_index_open(const PlatformConfig& config, double b) {
  if (!(b >= config.b0)) throw DomainError("exit_index_open: b must be >= b0");
  const double per_epoch = config.rates.lambda_b * config.delta.mean();
  return static_cast<int>(std::floor((b - config.b0) / per_epoch));
}

double mean_customers_given_b(const PlatformConfig& config, double b) {
  const int epochs = exit_index_open(config, b);
  return config.rates.lambda_a * config.tau0.mean() +
         epochs * attraction_rate(config, b) * config.delta.mean();
}

PgfArray truncated_poisson_pmf(double mass, int M) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("truncated_poisson_pmf: mass must be > 0");
  }
  if (M < 0) throw DomainError("truncated_poisson_pmf: M must be >= 0");
  // log-space weights; the common e^{-mass} factor cancels in the normalizer
  std::vector<double> logw(static_cast<std::size_t>(M + 1));
  for (int k = 0; k <= M; ++k) logw[k] = k * std::log(mass) - std::lgamma(k + 1.0);
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> p(logw.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) norm += (p[k] = std::exp(logw[k] - top));
  for (double& x : p) x /= norm;
  return PgfArray(std::move(p));
}

double mean_customers_open(const PlatformConfig& config, OpenMeanOptions options) {
  const auto& r = config.rates;
  const double dmean = config.delta.mean();
  const double mass =
      (options.mass == SupplierMass::SupplierRate ? r.lambda_b : r.lambda_a) * dmean;
  const double per_supplier =
      r.lambda_a * (options.increment == IncrementForm::AlphaScaled ? config.alpha : 1.0);
  const double initial = r.lambda_a * config.tau0.mean();
  const PgfArray p = truncated_poisson_pmf(mass, config.capacity);
  double mean = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double extra = std::max(static_cast<double>(k) - config.b0, 0.0);
    mean += (initial + per_supplier * extra) * p[k];
  }
  return mean;
}

double open_payoff(const PlatformConfig& config, const PayoffParams& pay, OpenPayoffForm form) {
  if (!(config.alpha > 0.0)) throw DomainError("open_payoff: alpha must be > 0");
  const double margin =
      form == OpenPayoffForm::Margin ? pay.c0 - pay.c1 / config.alpha : pay.c0 - pay.c1 * config.alpha;
  return margin * mean_customers_open(config);
}

double alpha_star_open(const PayoffParams& pay) {
  if (!(pay.c0 > 0.0)) throw DomainError("alpha_star_open: c0 must be > 0 for a breakeven");
  return pay.c1 / pay.c0;
}

}  // namespace twosided
