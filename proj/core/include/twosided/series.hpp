#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "twosided/model.hpp"

namespace twosided {

/// Dense bivariate power series in (u, v), hard-truncated at degrees
/// (max_u, max_v). Entry (i, j) is the coefficient of u^i v^j.
template <class T>
class BasicSeries2 {
 public:
  using value_type = T;

  BasicSeries2(int max_u, int max_v);

  static BasicSeries2 constant(T value, int max_u, int max_v);

  int max_u() const noexcept { return max_u_; }
  int max_v() const noexcept { return max_v_; }

  T& operator()(int i, int j) noexcept { return coeff_[index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return coeff_[index(i, j)]; }
  /// Bounds-checked access.
  const T& at(int i, int j) const;

  std::span<const T> coefficients() const noexcept { return coeff_; }

  BasicSeries2& operator+=(const BasicSeries2& rhs);
  BasicSeries2& operator-=(const BasicSeries2& rhs);
  BasicSeries2& operator*=(T scalar);

  friend BasicSeries2 operator+(BasicSeries2 a, const BasicSeries2& b) { return a += b; }
  friend BasicSeries2 operator-(BasicSeries2 a, const BasicSeries2& b) { return a -= b; }
  friend BasicSeries2 operator*(T s, BasicSeries2 a) { return a *= s; }

  bool same_bounds(const BasicSeries2& other) const noexcept {
    return max_u_ == other.max_u_ && max_v_ == other.max_v_;
  }

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(max_v_ + 1) +
           static_cast<std::size_t>(j);
  }

  int max_u_;
  int max_v_;
  std::vector<T> coeff_;
};

using TruncatedSeries2 = BasicSeries2<double>;
using ComplexSeries2 = BasicSeries2<std::complex<double>>;

/// Coefficient-wise convolution truncated at the common bounds.
template <class T>
BasicSeries2<T> series_mul(const BasicSeries2<T>& a, const BasicSeries2<T>& b);

/// Multiplicative inverse up to truncation. Throws SingularityError when the
/// constant term is below 1e-9 in magnitude.
template <class T>
BasicSeries2<T> series_reciprocal(const BasicSeries2<T>& a);

/// Partial coefficient sum over i <= m, j <= n: the (m, n) coefficient of
/// a(u, v) / ((1 - u)(1 - v)). Negative indices give 0.
template <class T>
T d_inverse(const BasicSeries2<T>& a, int m, int n);

/// An argument of the increment PGF that is affine in a formal variable:
/// value = constant + scale * w.
template <class T>
struct AffineArg {
  T constant{};
  T scale{};

  static AffineArg variable(T s) { return {T{}, s}; }
  static AffineArg fixed(T c) { return {c, T{}}; }
};

/// Expands gamma(z, g) = delta(lambda_a (1 - z) + lambda_b (1 - g)) with
/// z = z.constant + z.scale * u and g = g.constant + g.scale * v as a series
/// in (u, v). Both arguments must stay inside the closed unit disk.
template <class T>
BasicSeries2<T> expand_gamma_series(double lambda_a, double lambda_b,
                                    const DelayDistribution& dist, AffineArg<T> z,
                                    AffineArg<T> g, int max_u, int max_v);

/// Expansion of gamma(z_scale * u, g_scale * v); scales in [0, 1].
TruncatedSeries2 expand_gamma_series(double lambda_a, double lambda_b,
                                     const DelayDistribution& dist, double z_scale,
                                     double g_scale, int max_u, int max_v);

/// Lattice function on N^2 given by a finite grid whose last row and column
/// extend to infinity: f(x, y) = grid(min(x, X), min(y, Y)).
class LatticeFunction {
 public:
  LatticeFunction(int last_x, int last_y);
  LatticeFunction(int last_x, int last_y, std::vector<double> values);

  static LatticeFunction constant(double value);

  int last_x() const noexcept { return last_x_; }
  int last_y() const noexcept { return last_y_; }

  double& at(int x, int y) { return values_[index(x, y)]; }
  /// Value at any lattice point; points past the grid read the edge.
  double operator()(int x, int y) const;

 private:
  std::size_t index(int x, int y) const;

  int last_x_;
  int last_y_;
  std::vector<double> values_;
};

/// (1-u)(1-v) sum_{x,y} f(x,y) u^x v^y with the edge tails summed in closed
/// form. Requires |u| < 1 and |v| < 1.
double d_forward(const LatticeFunction& f, double u, double v);

/// The D-transform of f as a truncated series (second differences of f).
TruncatedSeries2 d_transform_series(const LatticeFunction& f, int max_u, int max_v);

/// Finite (possibly defective) probability mass sequence p_0..p_K.
class PgfArray {
 public:
  PgfArray() = default;
  /// Entries in [-1e-12, 0) are clamped to zero; anything more negative, or a
  /// total above 1 + 1e-9, is rejected.
  explicit PgfArray(std::vector<double> mass);

  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t k) const { return mass_.at(k); }
  std::size_t size() const noexcept { return mass_.size(); }
  double total() const noexcept { return total_; }

  /// Mass divided by the total (the conditional law on the tracing event).
  PgfArray normalized() const;

 private:
  std::vector<double> mass_;
  double total_ = 0.0;
};

/// Total-variation distance 0.5 * sum |p_k - q_k|, padding the shorter array
/// with zeros.
double total_variation(const PgfArray& p, const PgfArray& q);

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

/// Taylor coefficients 0..K of an analytic function from `samples` equally
/// spaced evaluations on the circle of the given radius.
std::vector<std::complex<double>> taylor_coefficients(const ComplexFunction& f, int K,
                                                      double radius, int samples);

/// First K+1 coefficients of a PGF from unit-circle samples (inverse DFT with
/// 4(K+1) points). Throws ExtractionError if a coefficient keeps an imaginary
/// part above 1e-6.
PgfArray pgf_extract(const ComplexFunction& pgf, int K);

}  // namespace twosided
