#include "twosided/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twosided/errors.hpp"

namespace twosided {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

DelayDistribution DelayDistribution::exponential(double rate) {
  require(finite_positive(rate), "exponential delay rate must be finite and > 0");
  return {Kind::Exponential, rate};
}

DelayDistribution DelayDistribution::deterministic(double duration) {
  require(finite_positive(duration), "deterministic delay duration must be finite and > 0");
  return {Kind::Deterministic, duration};
}

double DelayDistribution::mean() const noexcept {
  return kind_ == Kind::Exponential ? 1.0 / param_ : param_;
}

void RateParams::validate() const {
  require(finite_positive(lambda_a), "lambda_a must be > 0");
  require(finite_positive(lambda_b), "lambda_b must be > 0");
  require(finite_nonnegative(lambda_a0), "lambda_a0 must be >= 0");
  require(finite_nonnegative(lambda_b0), "lambda_b0 must be >= 0");
}

void PlatformConfig::validate() const {
  rates.validate();
  require(capacity >= 1, "capacity must be >= 1");
  require(std::isfinite(alpha) && alpha >= 1.0, "alpha must be >= 1");
  require(finite_nonnegative(b0), "b0 must be >= 0");
  if (coupling == Coupling::Attraction) {
    require(b0 == std::floor(b0), "attraction coupling fixes B0 = b0, which must be an integer");
  }
}

void PlatformConfig::require_static() const {
  validate();
  require(coupling == Coupling::Static,
          "analytic evaluation requires static coupling (i.i.d. increments)");
}

void FunctionalArgs::validate() const {
  for (double x : {xi, z0, z1, g0, g1}) {
    require(std::isfinite(x) && x >= 0.0 && x <= 1.0,
            "functional arguments must lie in [0, 1]");
  }
}

double laplace_transform(const DelayDistribution& dist, double theta) {
  require(std::isfinite(theta) && theta >= 0.0, "laplace_transform: theta must be >= 0");
  if (dist.kind() == DelayDistribution::Kind::Exponential) {
    const double rho = dist.parameter();
    return rho / (rho + theta);
  }
  return std::exp(-theta * dist.parameter());
}

double gamma_joint(double lambda_a, double lambda_b, const DelayDistribution& dist, double z,
                   double g) {
  require(z >= 0.0 && z <= 1.0 && g >= 0.0 && g <= 1.0,
          "gamma_joint: z and g must lie in [0, 1]");
  require(finite_nonnegative(lambda_a) && finite_nonnegative(lambda_b),
          "gamma_joint: rates must be >= 0");
  return laplace_transform(dist, lambda_a * (1.0 - z) + lambda_b * (1.0 - g));
}

double attraction_rate(const PlatformConfig& config, double b) {
  require(b >= 0.0, "attraction_rate: supplier count must be >= 0");
  const double saturated = std::min(b, static_cast<double>(config.capacity));
  return config.rates.lambda_a * config.alpha * (saturated / config.delta.mean());
}

double initial_supplier_mean(const PlatformConfig& config) {
  return config.rates.lambda_b0 * config.tau0.mean();
}

PlatformConfig symmetric_config(int capacity, DelayDistribution::Kind kind, Coupling coupling) {
  PlatformConfig c;
  c.rates = {1.0, 1.0, 1.0, 1.0};
  c.delta = kind == DelayDistribution::Kind::Exponential ? DelayDistribution::exponential(1.0)
                                                         : DelayDistribution::deterministic(1.0);
  c.tau0 = c.delta;
  c.capacity = capacity;
  c.alpha = 1.0;
  c.b0 = 1.0;
  c.coupling = coupling;
  return c;
}

std::string to_string(Coupling c) { return c == Coupling::Static ? "static" : "attraction"; }

std::string to_string(DelayDistribution::Kind k) {
  return k == DelayDistribution::Kind::Exponential ? "exp" : "det";
}

}  // namespace twosided
