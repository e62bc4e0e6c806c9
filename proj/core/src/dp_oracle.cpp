#include "twosided/dp_oracle.hpp"

#include <cmath>
#include <sstream>

#include "twosided/errors.hpp"
#include "twosided/increment_law.hpp"

namespace twosided {

namespace {

constexpr int kMaxCapacity = 12;

class Lattice {
 public:
  explicit Lattice(int M) : M_(M), mass_(static_cast<std::size_t>(M * (M + 1)), 0.0) {}
  double& operator()(int a, int b) { return mass_[static_cast<std::size_t>(a * (M_ + 1) + b)]; }
  double total() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
  }
  void clear() { std::fill(mass_.begin(), mass_.end(), 0.0); }

 private:
  int M_;
  std::vector<double> mass_;
};

// Applies one epoch of increments drawn from `law` to the mass w sitting at
// (a, b): absorbed mass goes to the tallies, the rest to `next`.
void step(const IncrementLaw& law, int M, int a, int b, double w, Lattice& next,
          DpOracleResult& out) {
  const int t = M - a;  // customer increment that triggers the exit
  const int room = M - b;  // supplier increment that triggers nu (b < M)

  // Surviving transitions x < t.
  double p_below = 0.0;
  double x_below = 0.0;
  for (int x = 0; x < t; ++x) {
    const double px = law.marginal_x(x);
    p_below += px;
    x_below += x * px;
    if (b >= M) {
      next(a + x, M) += w * px;
      continue;
    }
    double inside = 0.0;
    for (int y = 0; y < room; ++y) {
      const double pxy = law.joint(x, y);
      inside += pxy;
      next(a + x, b + y) += w * pxy;
    }
    next(a + x, M) += w * (px - inside);
  }

  const double p_exit = 1.0 - p_below;
  const double x_exit = law.mean_x() - x_below;  // E[X ; X >= t]
  out.mean_customers += w * (a * p_exit + x_exit);

  if (b >= M) {
    out.p_nu_first += w * p_exit;
  } else {
    double first = 0.0;
    double first_x = 0.0;
    for (int y = 0; y < room; ++y) {
      double p = law.marginal_y(y);
      double e = law.x_mass_at_y(y);
      for (int x = 0; x < t; ++x) {
        const double pxy = law.joint(x, y);
        p -= pxy;
        e -= x * pxy;
      }
      first += p;
      first_x += a * p + e;
    }
    out.p_mu_first += w * first;
    out.p_tie += w * (p_exit - first);
    out.supplier_before_exit[static_cast<std::size_t>(b)] += w * first;
    out.traced_customer_mean += w * first_x;
  }

  // A_mu + B_{mu-1} <= M only when B_{mu-1} = 0 and the exit lands exactly on M.
  if (b == 0) {
    const double p_on = law.marginal_x(t);
    out.under_supplier_mean += w * law.y_mass_at_x(t);
    out.p_over += w * (p_exit - p_on);
    out.over_customer_mean += w * (a * (p_exit - p_on) + x_exit - t * p_on);
  } else {
    out.p_over += w * p_exit;
    out.over_customer_mean += w * (a * p_exit + x_exit);
  }
}

}  // namespace

DpOracleResult dp_oracle(const PlatformConfig& config, int M, const DpOptions& options) {
  config.validate();
  if (M < 1 || M > kMaxCapacity) {
    throw DomainError("dp_oracle: capacity must lie in [1, 12]");
  }
  const auto& r = config.rates;

  DpOracleResult out;
  out.M = M;
  out.supplier_before_exit.assign(static_cast<std::size_t>(M), 0.0);

  Lattice current(M);
  Lattice next(M);

  // Epoch 0 moves the empty platform (A_{-1} = B_{-1} = 0) by the initial batch.
  const IncrementLaw initial =
      config.coupling == Coupling::Static
          ? IncrementLaw::mixed(r.lambda_a0, r.lambda_b0, config.tau0)
          : IncrementLaw::poisson_and_point(r.lambda_a0 * config.tau0.mean(),
                                            static_cast<long>(config.b0));
  step(initial, M, 0, 0, 1.0, current, out);

  std::vector<IncrementLaw> laws;
  laws.reserve(static_cast<std::size_t>(M + 1));
  for (int b = 0; b <= M; ++b) {
    const double rate_a =
        config.coupling == Coupling::Static ? r.lambda_a : attraction_rate(config, b);
    laws.push_back(IncrementLaw::mixed(rate_a, r.lambda_b, config.delta));
  }

  double remaining = current.total();
  long epoch = 0;
  while (remaining >= options.mass_tolerance) {
    if (epoch >= options.max_epochs) {
      std::ostringstream os;
      os << "dp_oracle: " << remaining << " of the mass is unabsorbed after " << epoch
         << " epochs";
      throw PrecisionError(os.str());
    }
    next.clear();
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b <= M; ++b) {
        const double w = current(a, b);
        if (w != 0.0) step(laws[static_cast<std::size_t>(b)], M, a, b, w, next, out);
      }
    }
    std::swap(current, next);
    remaining = current.total();
    ++epoch;
  }
  out.epochs = epoch;
  out.residual_mass = remaining;
  return out;
}

}  // namespace twosided
