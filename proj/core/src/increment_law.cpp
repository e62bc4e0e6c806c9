#include "twosided/increment_law.hpp"

#include <cmath>

#include "twosided/errors.hpp"

namespace twosided {

namespace {

// log(m^k / k!) with the 0^0 = 1 convention; -inf for impossible counts.
double log_weight(double m, long k) {
  if (k < 0) return -INFINITY;
  if (m == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return k * std::log(m) - std::lgamma(k + 1.0);
}

double poisson_pmf(double m, long k) { return std::exp(log_weight(m, k) - m); }

// P(X = k) for X geometric on {0, 1, ...} with mean m: m^k / (1+m)^{k+1}.
double geometric_pmf(double m, long k) {
  if (k < 0) return 0.0;
  if (m == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(m) - (k + 1) * std::log1p(m));
}

}  // namespace

IncrementLaw IncrementLaw::mixed(double rate_a, double rate_b, const DelayDistribution& interval) {
  if (!(rate_a >= 0.0) || !(rate_b >= 0.0)) throw DomainError("IncrementLaw: rates must be >= 0");
  if (interval.kind() == DelayDistribution::Kind::Exponential) {
    const double rho = interval.parameter();
    return {Shape::ExpMixed, rate_a / rho, rate_b / rho, rho, 0};
  }
  const double d = interval.parameter();
  return {Shape::DetMixed, rate_a * d, rate_b * d, d, 0};
}

IncrementLaw IncrementLaw::poisson_and_point(double mass_a, long fixed_y) {
  if (!(mass_a >= 0.0) || fixed_y < 0) throw DomainError("IncrementLaw: invalid parameters");
  return {Shape::PoissonPoint, mass_a, 0.0, 0.0, fixed_y};
}

double IncrementLaw::joint(long x, long y) const {
  if (x < 0 || y < 0) return 0.0;
  switch (shape_) {
    case Shape::ExpMixed: {
      // C(x+y, x) a^x b^y / (1+a+b)^{x+y+1}
      const double lw = std::lgamma(x + y + 1.0) + log_weight(a_, x) + log_weight(b_, y) -
                        (x + y + 1) * std::log1p(a_ + b_);
      return std::exp(lw);
    }
    case Shape::DetMixed:
      return poisson_pmf(a_, x) * poisson_pmf(b_, y);
    case Shape::PoissonPoint:
      return y == fixed_y_ ? poisson_pmf(a_, x) : 0.0;
  }
  return 0.0;
}

double IncrementLaw::marginal_x(long x) const {
  return shape_ == Shape::ExpMixed ? geometric_pmf(a_, x) : poisson_pmf(a_, x);
}

double IncrementLaw::marginal_y(long y) const {
  switch (shape_) {
    case Shape::ExpMixed: return geometric_pmf(b_, y);
    case Shape::DetMixed: return poisson_pmf(b_, y);
    case Shape::PoissonPoint: return y == fixed_y_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double IncrementLaw::mean_x() const { return a_; }

double IncrementLaw::mean_y() const {
  return shape_ == Shape::PoissonPoint ? static_cast<double>(fixed_y_) : b_;
}

double IncrementLaw::x_mass_at_y(long y) const {
  if (y < 0) return 0.0;
  switch (shape_) {
    case Shape::ExpMixed:
      // rho lambda_a (y+1) lambda_b^y / (rho + lambda_b)^{y+2} in scaled form
      if (b_ == 0.0) return y == 0 ? a_ : 0.0;
      return a_ * (y + 1) * std::exp(y * std::log(b_) - (y + 2) * std::log1p(b_));
    case Shape::DetMixed: return a_ * poisson_pmf(b_, y);
    case Shape::PoissonPoint: return y == fixed_y_ ? a_ : 0.0;
  }
  return 0.0;
}

double IncrementLaw::y_mass_at_x(long x) const {
  if (x < 0) return 0.0;
  switch (shape_) {
    case Shape::ExpMixed:
      if (a_ == 0.0) return x == 0 ? b_ : 0.0;
      return b_ * (x + 1) * std::exp(x * std::log(a_) - (x + 2) * std::log1p(a_));
    case Shape::DetMixed: return b_ * poisson_pmf(a_, x);
    case Shape::PoissonPoint: return static_cast<double>(fixed_y_) * poisson_pmf(a_, x);
  }
  return 0.0;
}

std::pair<long, long> IncrementLaw::sample(std::mt19937_64& rng) const {
  switch (shape_) {
    case Shape::ExpMixed: {
      const double d = std::exponential_distribution<double>(param_)(rng);
      return {poisson_draw(a_ * param_ * d, rng), poisson_draw(b_ * param_ * d, rng)};
    }
    case Shape::DetMixed: return {poisson_draw(a_, rng), poisson_draw(b_, rng)};
    case Shape::PoissonPoint: return {poisson_draw(a_, rng), fixed_y_};
  }
  return {0, 0};
}

long poisson_draw(double mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

double delay_draw(const DelayDistribution& dist, std::mt19937_64& rng) {
  if (dist.kind() == DelayDistribution::Kind::Exponential) {
    return std::exponential_distribution<double>(dist.parameter())(rng);
  }
  return dist.parameter();
}

}  // namespace twosided
