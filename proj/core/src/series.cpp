#include "twosided/series.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "twosided/errors.hpp"

namespace twosided {

namespace {

constexpr double kSingularityGuard = 1e-9;
constexpr double kImagFail = 1e-6;

template <class T>
void check_bounds_match(const BasicSeries2<T>& a, const BasicSeries2<T>& b, const char* op) {
  if (!a.same_bounds(b)) {
    std::ostringstream os;
    os << op << ": degree bounds differ (" << a.max_u() << "," << a.max_v() << ") vs ("
       << b.max_u() << "," << b.max_v() << ")";
    throw DomainError(os.str());
  }
}

template <class T>
void check_in_disk(const AffineArg<T>& arg, const char* name) {
  const double c = std::abs(arg.constant);
  const double s = std::abs(arg.scale);
  if (!std::isfinite(c) || !std::isfinite(s) || c + s > 1.0 + 1e-12) {
    throw DomainError(std::string("expand_gamma_series: ") + name +
                      " argument leaves the closed unit disk");
  }
}

}  // namespace

template <class T>
BasicSeries2<T>::BasicSeries2(int max_u, int max_v) : max_u_(max_u), max_v_(max_v) {
  if (max_u < 0 || max_v < 0) throw DomainError("series degree bounds must be >= 0");
  coeff_.assign(static_cast<std::size_t>(max_u + 1) * static_cast<std::size_t>(max_v + 1), T{});
}

template <class T>
BasicSeries2<T> BasicSeries2<T>::constant(T value, int max_u, int max_v) {
  BasicSeries2 s(max_u, max_v);
  s(0, 0) = value;
  return s;
}

template <class T>
const T& BasicSeries2<T>::at(int i, int j) const {
  if (i < 0 || j < 0 || i > max_u_ || j > max_v_) {
    throw DomainError("series coefficient index out of bounds");
  }
  return coeff_[index(i, j)];
}

template <class T>
BasicSeries2<T>& BasicSeries2<T>::operator+=(const BasicSeries2& rhs) {
  check_bounds_match(*this, rhs, "series add");
  for (std::size_t k = 0; k < coeff_.size(); ++k) coeff_[k] += rhs.coeff_[k];
  return *this;
}

template <class T>
BasicSeries2<T>& BasicSeries2<T>::operator-=(const BasicSeries2& rhs) {
  check_bounds_match(*this, rhs, "series subtract");
  for (std::size_t k = 0; k < coeff_.size(); ++k) coeff_[k] -= rhs.coeff_[k];
  return *this;
}

template <class T>
BasicSeries2<T>& BasicSeries2<T>::operator*=(T scalar) {
  for (auto& c : coeff_) c *= scalar;
  return *this;
}

template <class T>
BasicSeries2<T> series_mul(const BasicSeries2<T>& a, const BasicSeries2<T>& b) {
  check_bounds_match(a, b, "series_mul");
  const int mu = a.max_u();
  const int mv = a.max_v();
  BasicSeries2<T> r(mu, mv);
  for (int p = 0; p <= mu; ++p) {
    for (int q = 0; q <= mv; ++q) {
      const T apq = a(p, q);
      if (apq == T{}) continue;
      for (int i = 0; i + p <= mu; ++i) {
        for (int j = 0; j + q <= mv; ++j) r(i + p, j + q) += apq * b(i, j);
      }
    }
  }
  return r;
}

template <class T>
BasicSeries2<T> series_reciprocal(const BasicSeries2<T>& a) {
  const T a00 = a(0, 0);
  if (std::abs(a00) < kSingularityGuard) {
    throw SingularityError("series_reciprocal: constant term is (near) zero");
  }
  const int mu = a.max_u();
  const int mv = a.max_v();
  BasicSeries2<T> r(mu, mv);
  // Solve sum_{p,q} a(p,q) r(i-p, j-q) = [i=j=0] in graded order.
  for (int i = 0; i <= mu; ++i) {
    for (int j = 0; j <= mv; ++j) {
      T acc = (i == 0 && j == 0) ? T{1} : T{};
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          acc -= a(p, q) * r(i - p, j - q);
        }
      }
      r(i, j) = acc / a00;
    }
  }
  return r;
}

template <class T>
T d_inverse(const BasicSeries2<T>& a, int m, int n) {
  if (m < 0 || n < 0) return T{};
  if (m > a.max_u() || n > a.max_v()) {
    throw DomainError("d_inverse: index beyond the series degree bounds");
  }
  T sum{};
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) sum += a(i, j);
  }
  return sum;
}

template <class T>
BasicSeries2<T> expand_gamma_series(double lambda_a, double lambda_b,
                                    const DelayDistribution& dist, AffineArg<T> z,
                                    AffineArg<T> g, int max_u, int max_v) {
  if (!(lambda_a >= 0.0) || !(lambda_b >= 0.0)) {
    throw DomainError("expand_gamma_series: rates must be >= 0");
  }
  check_in_disk(z, "z");
  check_in_disk(g, "g");

  BasicSeries2<T> s(max_u, max_v);
  const T one{1};
  if (dist.kind() == DelayDistribution::Kind::Exponential) {
    // 1 / (A - B u - C v) = sum_{i,j} C(i+j, i) B^i C^j / A^{i+j+1}
    const double mass_a = lambda_a / dist.parameter();
    const double mass_b = lambda_b / dist.parameter();
    const T big_a = one + mass_a * (one - z.constant) + mass_b * (one - g.constant);
    const T ru = mass_a * z.scale / big_a;
    const T rv = mass_b * g.scale / big_a;
    for (int j = 0; j <= max_v; ++j) {
      s(0, j) = j == 0 ? one / big_a : s(0, j - 1) * rv;
      for (int i = 1; i <= max_u; ++i) {
        s(i, j) = s(i - 1, j) * ru * (static_cast<double>(i + j) / static_cast<double>(i));
      }
    }
  } else {
    // exp(-d(...)) factorizes into two Poisson-weight expansions.
    const double mass_a = lambda_a * dist.parameter();
    const double mass_b = lambda_b * dist.parameter();
    const T base = std::exp(-(mass_a * (one - z.constant) + mass_b * (one - g.constant)));
    std::vector<T> wu(static_cast<std::size_t>(max_u + 1));
    std::vector<T> wv(static_cast<std::size_t>(max_v + 1));
    wu[0] = one;
    for (int i = 1; i <= max_u; ++i) wu[i] = wu[i - 1] * (mass_a * z.scale) / static_cast<double>(i);
    wv[0] = one;
    for (int j = 1; j <= max_v; ++j) wv[j] = wv[j - 1] * (mass_b * g.scale) / static_cast<double>(j);
    for (int i = 0; i <= max_u; ++i) {
      for (int j = 0; j <= max_v; ++j) s(i, j) = base * wu[i] * wv[j];
    }
  }
  return s;
}

TruncatedSeries2 expand_gamma_series(double lambda_a, double lambda_b,
                                     const DelayDistribution& dist, double z_scale,
                                     double g_scale, int max_u, int max_v) {
  if (!(z_scale >= 0.0 && z_scale <= 1.0 && g_scale >= 0.0 && g_scale <= 1.0)) {
    throw DomainError("expand_gamma_series: scales must lie in [0, 1]");
  }
  return expand_gamma_series<double>(lambda_a, lambda_b, dist,
                                     AffineArg<double>::variable(z_scale),
                                     AffineArg<double>::variable(g_scale), max_u, max_v);
}

template class BasicSeries2<double>;
template class BasicSeries2<std::complex<double>>;
template TruncatedSeries2 series_mul(const TruncatedSeries2&, const TruncatedSeries2&);
template ComplexSeries2 series_mul(const ComplexSeries2&, const ComplexSeries2&);
template TruncatedSeries2 series_reciprocal(const TruncatedSeries2&);
template ComplexSeries2 series_reciprocal(const ComplexSeries2&);
template double d_inverse(const TruncatedSeries2&, int, int);
template std::complex<double> d_inverse(const ComplexSeries2&, int, int);
template TruncatedSeries2 expand_gamma_series(double, double, const DelayDistribution&,
                                              AffineArg<double>, AffineArg<double>, int, int);
template ComplexSeries2 expand_gamma_series(double, double, const DelayDistribution&,
                                            AffineArg<std::complex<double>>,
                                            AffineArg<std::complex<double>>, int, int);

// ---------------------------------------------------------------------------

LatticeFunction::LatticeFunction(int last_x, int last_y)
    : LatticeFunction(last_x, last_y,
                      std::vector<double>(static_cast<std::size_t>(last_x + 1) *
                                          static_cast<std::size_t>(last_y + 1))) {}

LatticeFunction::LatticeFunction(int last_x, int last_y, std::vector<double> values)
    : last_x_(last_x), last_y_(last_y), values_(std::move(values)) {
  if (last_x < 0 || last_y < 0) throw DomainError("LatticeFunction: extents must be >= 0");
  if (values_.size() !=
      static_cast<std::size_t>(last_x + 1) * static_cast<std::size_t>(last_y + 1)) {
    throw DomainError("LatticeFunction: value count does not match the grid");
  }
}

LatticeFunction LatticeFunction::constant(double value) { return {0, 0, {value}}; }

std::size_t LatticeFunction::index(int x, int y) const {
  if (x < 0 || y < 0 || x > last_x_ || y > last_y_) {
    throw DomainError("LatticeFunction: grid index out of range");
  }
  return static_cast<std::size_t>(x) * static_cast<std::size_t>(last_y_ + 1) +
         static_cast<std::size_t>(y);
}

double LatticeFunction::operator()(int x, int y) const {
  if (x < 0 || y < 0) return 0.0;
  return values_[static_cast<std::size_t>(std::min(x, last_x_)) *
                     static_cast<std::size_t>(last_y_ + 1) +
                 static_cast<std::size_t>(std::min(y, last_y_))];
}

double d_forward(const LatticeFunction& f, double u, double v) {
  if (!(std::abs(u) < 1.0) || !(std::abs(v) < 1.0)) {
    throw DomainError("d_forward: requires |u| < 1 and |v| < 1");
  }
  // Weight of grid cell i along one axis: u^i inside, u^X / (1 - u) on the
  // edge cell that carries the infinite tail.
  auto weights = [](int last, double w) {
    std::vector<double> out(static_cast<std::size_t>(last + 1));
    double p = 1.0;
    for (int i = 0; i < last; ++i, p *= w) out[i] = p;
    out[last] = p / (1.0 - w);
    return out;
  };
  const auto wu = weights(f.last_x(), u);
  const auto wv = weights(f.last_y(), v);
  double sum = 0.0;
  for (int i = 0; i <= f.last_x(); ++i) {
    for (int j = 0; j <= f.last_y(); ++j) sum += f(i, j) * wu[i] * wv[j];
  }
  return (1.0 - u) * (1.0 - v) * sum;
}

TruncatedSeries2 d_transform_series(const LatticeFunction& f, int max_u, int max_v) {
  TruncatedSeries2 s(max_u, max_v);
  for (int i = 0; i <= max_u; ++i) {
    for (int j = 0; j <= max_v; ++j) {
      s(i, j) = f(i, j) - f(i - 1, j) - f(i, j - 1) + f(i - 1, j - 1);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

PgfArray::PgfArray(std::vector<double> mass) : mass_(std::move(mass)) {
  double total = 0.0;
  for (double& p : mass_) {
    if (!std::isfinite(p) || p < -1e-12) {
      throw DomainError("PgfArray: probability mass must be >= 0");
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (total > 1.0 + 1e-9) throw DomainError("PgfArray: total mass exceeds 1");
  total_ = total;
}

PgfArray PgfArray::normalized() const {
  if (!(total_ > 0.0)) throw DomainError("PgfArray::normalized: zero total mass");
  std::vector<double> out(mass_.size());
  for (std::size_t k = 0; k < mass_.size(); ++k) out[k] = mass_[k] / total_;
  return PgfArray(std::move(out));
}

double total_variation(const PgfArray& p, const PgfArray& q) {
  const std::size_t n = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

std::vector<std::complex<double>> taylor_coefficients(const ComplexFunction& f, int K,
                                                      double radius, int samples) {
  if (K < 0) throw DomainError("taylor_coefficients: K must be >= 0");
  if (samples < K + 1) throw DomainError("taylor_coefficients: too few samples");
  if (!(radius > 0.0)) throw DomainError("taylor_coefficients: radius must be > 0");
  const double step = 2.0 * std::numbers::pi / samples;
  std::vector<std::complex<double>> values(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) values[s] = f(std::polar(radius, step * s));

  std::vector<std::complex<double>> coeff(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    std::complex<double> acc{};
    for (int s = 0; s < samples; ++s) {
      // exponent reduced mod samples keeps the twiddle angle small
      const int e = static_cast<int>((static_cast<long long>(k) * s) % samples);
      acc += values[s] * std::polar(1.0, -step * e);
    }
    coeff[k] = acc / (static_cast<double>(samples) * std::pow(radius, k));
  }
  return coeff;
}

PgfArray pgf_extract(const ComplexFunction& pgf, int K) {
  const auto coeff = taylor_coefficients(pgf, K, 1.0, 4 * (K + 1));
  std::vector<double> mass(coeff.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    const double im = std::abs(coeff[k].imag());
    if (im > kImagFail) {
      std::ostringstream os;
      os << "pgf_extract: coefficient " << k << " keeps imaginary residual " << im
         << "; raise K";
      throw ExtractionError(os.str());
    }
    mass[k] = coeff[k].real();
  }
  return PgfArray(std::move(mass));
}

}  // namespace twosided
