#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace twosided {

/// Law of an observation interval. Only the memoryless (exponential) and
/// fixed-length (deterministic) kinds are supported.
class DelayDistribution {
 public:
  enum class Kind { Exponential, Deterministic };

  static DelayDistribution exponential(double rate);
  static DelayDistribution deterministic(double duration);

  Kind kind() const noexcept { return kind_; }
  /// Rate for Exponential, duration for Deterministic.
  double parameter() const noexcept { return param_; }
  /// Expected interval length.
  double mean() const noexcept;

  bool operator==(const DelayDistribution&) const = default;

 private:
  DelayDistribution(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

struct RateParams {
  double lambda_a = 1.0;   // customer arrivals per unit time
  double lambda_b = 1.0;   // supplier arrivals per unit time
  double lambda_a0 = 0.0;  // initial-batch customer intensity
  double lambda_b0 = 0.0;  // initial-batch supplier intensity

  void validate() const;
};

enum class Coupling { Static, Attraction };

struct PlatformConfig {
  RateParams rates;
  DelayDistribution delta = DelayDistribution::exponential(1.0);
  DelayDistribution tau0 = DelayDistribution::exponential(1.0);
  int capacity = 1;
  double alpha = 1.0;
  double b0 = 0.0;
  Coupling coupling = Coupling::Static;

  /// Checks every model invariant; throws DomainError.
  void validate() const;
  /// Same as validate() but additionally requires Static coupling.
  void require_static() const;
};

/// Arguments (xi, z0, z1, g0, g1) of the joint exit functional.
struct FunctionalArgs {
  double xi = 1.0;
  double z0 = 1.0;
  double z1 = 1.0;
  double g0 = 1.0;
  double g1 = 1.0;

  static FunctionalArgs ones() { return {}; }
  void validate() const;
};

/// E[exp(-theta * D)] for the delay law D.
double laplace_transform(const DelayDistribution& dist, double theta);

/// Joint PGF E[z^X g^Y] of one epoch's Poisson increments with intensities
/// (lambda_a, lambda_b) observed over an interval drawn from `dist`.
double gamma_joint(double lambda_a, double lambda_b, const DelayDistribution& dist,
                   double z, double g);

/// Customer arrival rate under attraction coupling for `b` suppliers; `b` is
/// saturated at the capacity.
double attraction_rate(const PlatformConfig& config, double b);

/// Expected supplier count at time zero under the initial batch,
/// lambda_b0 * E[tau0].
double initial_supplier_mean(const PlatformConfig& config);

/// Convenience factory for the symmetric benchmark configuration: unit rates on
/// both sides, unit-mean delays of the given kind, and a matching initial batch.
PlatformConfig symmetric_config(int capacity,
                                DelayDistribution::Kind kind = DelayDistribution::Kind::Exponential,
                                Coupling coupling = Coupling::Static);

std::string to_string(Coupling c);
std::string to_string(DelayDistribution::Kind k);

}  // namespace twosided
