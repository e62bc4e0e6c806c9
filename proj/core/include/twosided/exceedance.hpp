#pragma once

#include <complex>
#include <string>
#include <vector>

#include "twosided/model.hpp"
#include "twosided/series.hpp"

namespace twosided {

/// The six increment-PGF series that enter the joint exit functional:
/// gamma, gamma0 (fully scaled), phi, phi0 (customer-exit scaled) and phi1,
/// phi01 (customer variable fixed at z1). All share the same degree bounds.
template <class T>
struct BasicTransformBundle {
  BasicSeries2<T> gamma;
  BasicSeries2<T> gamma0;
  BasicSeries2<T> phi;
  BasicSeries2<T> phi0;
  BasicSeries2<T> phi1;
  BasicSeries2<T> phi01;
};

using TransformBundle = BasicTransformBundle<double>;

enum class BundleMode {
  Full,         // all five functional arguments
  SupplierPgf,  // (1, 1, 1, g0, 1): only g0 of `args` is used
};

/// Builds the bundle with degree bounds (capacity, capacity).
TransformBundle build_bundle(const PlatformConfig& config, const FunctionalArgs& args,
                             BundleMode mode);

/// Joint exit functional E[xi^mu z0^A_{mu-1} z1^A_mu g0^B_{mu-1} g1^B_mu ; mu < nu]
/// for exits defined by A_k >= M (customers) and B_k >= M (suppliers).
/// At all-ones arguments this is P{mu < nu}.
double phi_functional(const PlatformConfig& config, const FunctionalArgs& args, int M);

/// Defective PGF E[g0^S ; mu < nu] of S = B_{mu-1}, the supplier count one
/// observation before the customer exit.
double supplier_pgf(const PlatformConfig& config, int M, double g0);
std::complex<double> supplier_pgf(const PlatformConfig& config, int M, std::complex<double> g0);

/// p_k = P{B_{mu-1} = k, mu < nu} for k = 0..M. The total equals P{mu < nu};
/// use PgfArray::normalized() for the conditional law.
PgfArray supplier_pmf(const PlatformConfig& config, int M);

struct CappedMean {
  double conditional_mean;    // E[A_mu | mu < nu]
  double traced_mean;         // E[A_mu ; mu < nu], the z1-derivative at 1
  double mixture_diagnostic;  // open-model conditional means mixed over the supplier pmf
};

/// Mean customer count at exit. The primary value comes from a second-order
/// backward difference of the functional in z1 (step 1e-3).
CappedMean mean_customers_capped(const PlatformConfig& config, int M);

/// Geometric laws matching the one-sided marginals of the exponential-delay
/// increment PGFs: gamma(z, 1) = beta_a / (1 - alpha_a z), and likewise for
/// the supplier side and the initial batch (suffix 0).
struct GeometricParams {
  double alpha_a, beta_a;
  double alpha_a0, beta_a0;
  double alpha_b, beta_b;
  double alpha_b0, beta_b0;
};

GeometricParams geometric_params(const PlatformConfig& config);

/// C(i-1+j, j) x^j (y^j - y^{m+1}) / (1 - y); at y = 1 the ratio is replaced by
/// its limit m+1-j. For i = 0 the binomial reads 1 at j = 0 and 0 otherwise.
double xi_term(int i, int m, int j, double x, double y);

/// Closed-form supplier PGF for exponential delays built from GeometricParams.
double memoryless_supplier_pgf(const PlatformConfig& config, int M, double g0);
std::complex<double> memoryless_supplier_pgf(const PlatformConfig& config, int M,
                                             std::complex<double> g0);

struct CoefficientResidual {
  int k;
  double series;
  double memoryless;
  double residual;  // memoryless - series
};

struct PgfResidual {
  double g0;
  double series;
  double memoryless;
  double residual;
};

/// Side-by-side comparison of the closed form against the series evaluator.
struct MemorylessComparison {
  int M = 0;
  std::vector<PgfResidual> values;
  std::vector<CoefficientResidual> coefficients;
  double max_value_residual = 0.0;

  std::string format() const;
};

MemorylessComparison compare_memoryless(const PlatformConfig& config, int M,
                                        const std::vector<double>& g0_points);

}  // namespace twosided
