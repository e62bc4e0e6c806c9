#pragma once

#include <random>
#include <utility>

#include "twosided/model.hpp"

namespace twosided {

/// Closed-form law of one epoch's increments (X, Y). Two shapes occur:
/// a Poisson pair mixed over a common random interval, and an independent
/// Poisson count paired with a fixed supplier count (the attraction-coupled
/// initial batch).
class IncrementLaw {
 public:
  /// X | D ~ Poisson(rate_a D), Y | D ~ Poisson(rate_b D), D ~ interval.
  static IncrementLaw mixed(double rate_a, double rate_b, const DelayDistribution& interval);
  /// X ~ Poisson(mass_a), Y = fixed_y.
  static IncrementLaw poisson_and_point(double mass_a, long fixed_y);

  double joint(long x, long y) const;
  double marginal_x(long x) const;
  double marginal_y(long y) const;
  double mean_x() const;
  double mean_y() const;
  /// E[X ; Y = y]
  double x_mass_at_y(long y) const;
  /// E[Y ; X = x]
  double y_mass_at_x(long x) const;

  std::pair<long, long> sample(std::mt19937_64& rng) const;

 private:
  enum class Shape { ExpMixed, DetMixed, PoissonPoint };

  IncrementLaw(Shape shape, double a, double b, double rho_or_d, long fixed_y)
      : shape_(shape), a_(a), b_(b), param_(rho_or_d), fixed_y_(fixed_y) {}

  Shape shape_;
  double a_;       // ExpMixed: rate_a / rho; DetMixed: rate_a * d; PoissonPoint: mass_a
  double b_;       // same for the supplier side (unused for PoissonPoint)
  double param_;   // rho or d, needed for sampling the interval
  long fixed_y_;
};

/// Poisson(mean) draw that treats a zero mean as the point mass at 0.
long poisson_draw(double mean, std::mt19937_64& rng);

/// Draws one interval length.
double delay_draw(const DelayDistribution& dist, std::mt19937_64& rng);

}  // namespace twosided
