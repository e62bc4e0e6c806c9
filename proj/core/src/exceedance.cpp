#include "twosided/exceedance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "twosided/errors.hpp"
#include "twosided/open_platform.hpp"

namespace twosided {

namespace {

template <class T>
struct Args5 {
  T xi, z0, z1, g0, g1;
};

template <class T>
BasicTransformBundle<T> make_bundle(const PlatformConfig& c, const Args5<T>& a, int bound) {
  using A = AffineArg<T>;
  const auto& r = c.rates;
  auto inc = [&](A z, A g) {
    return expand_gamma_series<T>(r.lambda_a, r.lambda_b, c.delta, z, g, bound, bound);
  };
  auto init = [&](A z, A g) {
    return expand_gamma_series<T>(r.lambda_a0, r.lambda_b0, c.tau0, z, g, bound, bound);
  };
  const A z_full = A::variable(a.z0 * a.z1);
  const A g_full = A::variable(a.g0 * a.g1);
  const A z_exit = A::variable(a.z1);
  const A g_exit = A::variable(a.g1);
  const A z_fixed = A::fixed(a.z1);
  return {inc(z_full, g_full),  init(z_full, g_full), inc(z_exit, g_exit),
          init(z_exit, g_exit), inc(z_fixed, g_exit), init(z_fixed, g_exit)};
}

// Threshold index of the inverse D-operator for exits A_k >= M: the family
// indexed by x traces first passage above x, so capacity M sits at x = M - 1.
int inverse_index(int M) { return M - 1; }

template <class T>
T evaluate_functional(const PlatformConfig& config, const Args5<T>& a, int M) {
  config.require_static();
  if (M < 1) throw DomainError("capacity M must be >= 1");
  const auto b = make_bundle(config, a, M);
  const auto one = BasicSeries2<T>::constant(T{1}, M, M);
  // phi01 - phi0 + xi gamma0 / (1 - xi gamma) (phi1 - phi)
  auto psi = b.phi01 - b.phi0;
  const auto ratio = series_mul(a.xi * b.gamma0, series_reciprocal(one - a.xi * b.gamma));
  psi += series_mul(ratio, b.phi1 - b.phi);
  const int x = inverse_index(M);
  return d_inverse(psi, x, x);
}

Args5<double> from_args(const FunctionalArgs& a) { return {a.xi, a.z0, a.z1, a.g0, a.g1}; }

double binom_shifted(int i, int j) {
  // C(i-1+j, j) with the i = 0 convention C(j-1, j) = [j == 0]
  if (i == 0) return j == 0 ? 1.0 : 0.0;
  double c = 1.0;
  for (int t = 1; t <= j; ++t) c = c * static_cast<double>(i - 1 + t) / static_cast<double>(t);
  return c;
}

// Xi written through (xy, y) so a vanishing y with a diverging x = xy / y stays
// finite: x^j (y^j - y^{m+1}) = (xy)^j (1 - y^{m+1-j}) for j <= m+1.
template <class T>
T xi_product(int i, int m, int j, T xy, T y) {
  const T one{1};
  T ratio;
  if (std::abs(one - y) < 1e-12) {
    ratio = T(static_cast<double>(m + 1 - j));
  } else {
    ratio = (one - std::pow(y, m + 1 - j)) / (one - y);
  }
  return binom_shifted(i, j) * std::pow(xy, j) * ratio;
}

template <class T>
T memoryless_eval(const PlatformConfig& config, int M, T g0) {
  const GeometricParams gp = geometric_params(config);
  if (M < 1) throw DomainError("capacity M must be >= 1");
  const int m = inverse_index(M);

  const double l1 =
      gp.beta_b0 * (1.0 - std::pow(gp.alpha_b0, m + 1)) / (1.0 - gp.alpha_b0) -
      gp.beta_a0 * gp.beta_b0 * (1.0 - std::pow(gp.alpha_a0, m + 1)) *
          (1.0 - std::pow(gp.alpha_b0, m + 1)) / ((1.0 - gp.alpha_a0) * (1.0 - gp.alpha_b0));

  const T denom = gp.alpha_b - gp.alpha_b0 * g0;
  if (std::abs(denom) < 1e-9) {
    throw SingularityError(
        "memoryless_supplier_pgf: alpha_b - alpha_b0 * g0 vanishes at this g0");
  }

  // Inner sums run over j = 0..m; Xi vanishes at j = m+1.
  auto q_a = [&](int i) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j) s += xi_product<double>(i, m, j, gp.alpha_a, gp.alpha_a0);
    return gp.beta_a0 * std::pow(gp.beta_a, i) * s;
  };
  auto q_b = [&](int i) {
    T s{};
    for (int j = 0; j <= m; ++j) {
      s += gp.alpha_b * xi_product<T>(i, m, j, g0 * gp.alpha_b, T(gp.alpha_b)) -
           gp.alpha_b0 * g0 * xi_product<T>(i, m, j, gp.alpha_b * g0, gp.alpha_b0 * g0);
    }
    return (gp.beta_a0 * std::pow(gp.beta_a, i + 1)) / denom * s;
  };

  constexpr int kMaxTerms = 100000;
  constexpr double kTail = 1e-14;
  T total = T(l1);
  double qa_i = q_a(0);
  for (int i = 0; i < kMaxTerms; ++i) {
    const double qa_next = q_a(i + 1);
    const T term = (qa_i - qa_next) * q_b(i);
    total += term;
    if (std::abs(term) < kTail && std::abs(qa_next) < kTail) break;
    qa_i = qa_next;
  }
  return total;
}

}  // namespace

TransformBundle build_bundle(const PlatformConfig& config, const FunctionalArgs& args,
                             BundleMode mode) {
  config.require_static();
  args.validate();
  const Args5<double> a = mode == BundleMode::Full
                              ? from_args(args)
                              : Args5<double>{1.0, 1.0, 1.0, args.g0, 1.0};
  return make_bundle(config, a, config.capacity);
}

double phi_functional(const PlatformConfig& config, const FunctionalArgs& args, int M) {
  args.validate();
  return evaluate_functional(config, from_args(args), M);
}

double supplier_pgf(const PlatformConfig& config, int M, double g0) {
  if (!(g0 >= 0.0 && g0 <= 1.0)) throw DomainError("supplier_pgf: g0 must lie in [0, 1]");
  return evaluate_functional<double>(config, {1.0, 1.0, 1.0, g0, 1.0}, M);
}

std::complex<double> supplier_pgf(const PlatformConfig& config, int M, std::complex<double> g0) {
  if (!(std::abs(g0) <= 1.0 + 1e-12)) throw DomainError("supplier_pgf: |g0| must be <= 1");
  using C = std::complex<double>;
  return evaluate_functional<C>(config, {C{1}, C{1}, C{1}, g0, C{1}}, M);
}

PgfArray supplier_pmf(const PlatformConfig& config, int M) {
  config.require_static();
  // B_{mu-1} < M on {mu < nu}, so the PGF is a polynomial of degree <= M-1.
  return pgf_extract([&](std::complex<double> g) { return supplier_pgf(config, M, g); }, M);
}

CappedMean mean_customers_capped(const PlatformConfig& config, int M) {
  constexpr double h = 1e-3;
  auto at = [&](double z1) {
    FunctionalArgs a;
    a.z1 = z1;
    return phi_functional(config, a, M);
  };
  const double f0 = at(1.0);
  if (!(f0 > 0.0)) throw DomainError("mean_customers_capped: P{mu < nu} is zero");
  const double traced = (3.0 * f0 - 4.0 * at(1.0 - h) + at(1.0 - 2.0 * h)) / (2.0 * h);

  const PgfArray p = supplier_pmf(config, M).normalized();
  double mixture = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double b = std::max(static_cast<double>(k), config.b0);
    mixture += mean_customers_given_b(config, b) * p[k];
  }
  return {traced / f0, traced, mixture};
}

GeometricParams geometric_params(const PlatformConfig& config) {
  if (config.delta.kind() != DelayDistribution::Kind::Exponential ||
      config.tau0.kind() != DelayDistribution::Kind::Exponential) {
    throw DomainError("geometric_params: both delay laws must be exponential");
  }
  auto geo = [](double mass) { return std::pair{mass / (1.0 + mass), 1.0 / (1.0 + mass)}; };
  const auto& r = config.rates;
  const double d = config.delta.mean();
  const double d0 = config.tau0.mean();
  const auto [aa, ba] = geo(r.lambda_a * d);
  const auto [aa0, ba0] = geo(r.lambda_a0 * d0);
  const auto [ab, bb] = geo(r.lambda_b * d);
  const auto [ab0, bb0] = geo(r.lambda_b0 * d0);
  return {aa, ba, aa0, ba0, ab, bb, ab0, bb0};
}

double xi_term(int i, int m, int j, double x, double y) {
  if (i < 0 || j < 0 || m < 0) throw DomainError("xi_term: indices must be >= 0");
  if (!(std::abs(x) <= 1.0) || !(std::abs(y) <= 1.0)) {
    throw DomainError("xi_term: requires |x| <= 1 and |y| <= 1");
  }
  const double ratio =
      y == 1.0 ? static_cast<double>(m + 1 - j) : (std::pow(y, j) - std::pow(y, m + 1)) / (1.0 - y);
  return binom_shifted(i, j) * std::pow(x, j) * ratio;
}

double memoryless_supplier_pgf(const PlatformConfig& config, int M, double g0) {
  if (!(g0 >= 0.0 && g0 < 1.0)) throw DomainError("memoryless_supplier_pgf: g0 must lie in [0, 1)");
  return memoryless_eval<double>(config, M, g0);
}

std::complex<double> memoryless_supplier_pgf(const PlatformConfig& config, int M,
                                             std::complex<double> g0) {
  if (!(std::abs(g0) < 1.0)) throw DomainError("memoryless_supplier_pgf: |g0| must be < 1");
  return memoryless_eval<std::complex<double>>(config, M, g0);
}

MemorylessComparison compare_memoryless(const PlatformConfig& config, int M,
                                        const std::vector<double>& g0_points) {
  MemorylessComparison out;
  out.M = M;
  for (double g : g0_points) {
    const double s = supplier_pgf(config, M, g);
    const double c = memoryless_supplier_pgf(config, M, g);
    out.values.push_back({g, s, c, c - s});
    out.max_value_residual = std::max(out.max_value_residual, std::abs(c - s));
  }

  // Taylor coefficients in g0 on a circle that stays clear of the pole
  // g0 = alpha_b / alpha_b0 of the closed form.
  const GeometricParams gp = geometric_params(config);
  double radius = 0.5;
  if (gp.alpha_b0 > 0.0) radius = std::min(radius, 0.5 * gp.alpha_b / gp.alpha_b0);
  const int K = M + 1;
  const auto closed = taylor_coefficients(
      [&](std::complex<double> g) { return memoryless_supplier_pgf(config, M, g); }, K, radius,
      64 * (K + 1));
  const PgfArray series = supplier_pmf(config, M);
  for (int k = 0; k <= K; ++k) {
    const double s = k < static_cast<int>(series.size()) ? series[k] : 0.0;
    out.coefficients.push_back({k, s, closed[k].real(), closed[k].real() - s});
  }
  return out;
}

std::string MemorylessComparison::format() const {
  std::ostringstream os;
  char line[160];
  os << "memoryless residual report, M = " << M << "\n";
  os << "  g0        series           closed-form      residual\n";
  for (const auto& v : values) {
    std::snprintf(line, sizeof line, "  %-8.3g  %-15.10f  %-15.10f  %+.3e\n", v.g0, v.series,
                  v.memoryless, v.residual);
    os << line;
  }
  os << "  k         series p_k       closed-form p_k  residual\n";
  for (const auto& c : coefficients) {
    std::snprintf(line, sizeof line, "  %-8d  %-15.10f  %-15.10f  %+.3e\n", c.k, c.series,
                  c.memoryless, c.residual);
    os << line;
  }
  return os.str();
}

}  // namespace twosided
