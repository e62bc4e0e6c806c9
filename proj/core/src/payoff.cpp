#include "twosided/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twosided/dp_oracle.hpp"
#include "twosided/errors.hpp"
#include "twosided/parallel.hpp"

namespace twosided {

namespace {

constexpr int kDpMaxCapacity = 12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_pay(const PayoffParams& pay) {
  if (!std::isfinite(pay.c0) || !std::isfinite(pay.c1)) {
    throw DomainError("payoff: c0 and c1 must be finite");
  }
}

}  // namespace

double payoff_of_record(const ExitRecord& r, int M, const PayoffParams& pay) {
  const double a = static_cast<double>(r.a_exit);
  double v = pay.c0 * a;
  if (r.flag_under) {
    v -= pay.c1 * static_cast<double>(r.b_exit);
  } else {
    v -= pay.c1 * (static_cast<double>(M) - a);
  }
  return v;
}

PayoffEstimate payoff(const PlatformConfig& config, const PayoffParams& pay,
                      const PayoffEngine& engine) {
  config.validate();
  check_pay(pay);
  return std::visit(
      Overloaded{
          [&](const MonteCarloEngine& mc) {
            if (mc.reps < 2) throw DomainError("payoff: MonteCarlo needs at least 2 replications");
            SimOptions opts;
            opts.workers = mc.workers;
            const auto records = simulate_batch(config, mc.reps, RunSeed{mc.seed}, opts);
            const int M = config.capacity;
            const SimEstimate est = estimate(
                records, [&](const ExitRecord& r) { return payoff_of_record(r, M, pay); });
            return PayoffEstimate{est.mean, est.std_error, est.ci_halfwidth};
          },
          [&](const DpOracleEngine&) {
            if (config.capacity > kDpMaxCapacity) {
              throw DomainError("payoff: DpOracle engine requires capacity <= 12");
            }
            const DpOracleResult dp = dp_oracle(config, config.capacity);
            const double M = static_cast<double>(config.capacity);
            const double v = pay.c0 * dp.mean_customers - pay.c1 * dp.under_supplier_mean -
                             pay.c1 * (M * dp.p_over - dp.over_customer_mean);
            return PayoffEstimate{v, 0.0, 0.0};
          },
          [&](const OpenPlatformEngine&) {
            return PayoffEstimate{open_payoff(config, pay), 0.0, 0.0};
          },
      },
      engine);
}

ScalarOptimum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol, int grid_points) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("maximize_scalar: need finite lo <= hi");
  }
  if (!(tol > 0.0)) throw DomainError("maximize_scalar: tol must be positive");
  if (grid_points < 2) throw DomainError("maximize_scalar: need at least 2 grid points");

  ScalarOptimum out;
  auto eval = [&](double x) {
    x = std::clamp(x, lo, hi);
    ++out.evaluations;
    return f(x);
  };

  const int n = lo == hi ? 1 : grid_points;
  out.grid.resize(static_cast<std::size_t>(n));
  out.grid_values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    out.grid[static_cast<std::size_t>(i)] = i == n - 1 ? hi : x;
    out.grid_values[static_cast<std::size_t>(i)] = eval(out.grid[static_cast<std::size_t>(i)]);
  }
  const auto best_it = std::max_element(out.grid_values.begin(), out.grid_values.end());
  const int best = static_cast<int>(best_it - out.grid_values.begin());
  out.x = out.grid[static_cast<std::size_t>(best)];
  out.value = *best_it;
  if (best == 0 || best == n - 1) {
    out.at_boundary = true;
    return out;
  }

  // Golden section on [x_{best-1}, x_{best+1}].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = out.grid[static_cast<std::size_t>(best - 1)];
  double b = out.grid[static_cast<std::size_t>(best + 1)];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  auto consider = [&](double x, double fx) {
    if (fx > out.value) {
      out.value = fx;
      out.x = x;
    }
  };
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
      consider(d, fd);
    }
  }
  return out;
}

AlphaOptimum optimize_alpha(const PlatformConfig& config, const PayoffParams& pay,
                            const PayoffEngine& engine, double lo, double hi, double tol) {
  if (!(lo >= 1.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw DomainError("optimize_alpha: bounds must satisfy 1 <= lo <= hi < inf");
  }
  auto at = [&](double alpha) {
    PlatformConfig c = config;
    c.alpha = alpha;
    return c;
  };

  AlphaOptimum out;
  if (std::holds_alternative<OpenPlatformEngine>(engine)) {
    out.alpha = std::clamp(alpha_star_open(pay), lo, hi);
    out.at_boundary = out.alpha == lo || out.alpha == hi;
    out.value = payoff(at(out.alpha), pay, engine);
    out.evaluations = 1;
    return out;
  }

  // MonteCarlo evaluations all reuse engine.seed: common random numbers in alpha.
  std::vector<PayoffEstimate> grid_est;
  const auto opt = maximize_scalar(
      [&](double alpha) {
        const PayoffEstimate e = payoff(at(alpha), pay, engine);
        grid_est.push_back(e);
        return e.value;
      },
      lo, hi, tol);

  out.alpha = opt.x;
  out.at_boundary = opt.at_boundary;
  out.evaluations = opt.evaluations;
  const auto best_grid = static_cast<std::size_t>(
      std::max_element(opt.grid_values.begin(), opt.grid_values.end()) - opt.grid_values.begin());
  out.value = payoff(at(out.alpha), pay, engine);

  if (std::holds_alternative<MonteCarloEngine>(engine)) {
    const PayoffEstimate& top = grid_est[best_grid];
    for (std::size_t i = 0; i < opt.grid.size(); ++i) {
      const PayoffEstimate& e = grid_est[i];
      if (e.value + e.ci_halfwidth >= top.value - top.ci_halfwidth) {
        out.overlap_set.push_back(opt.grid[i]);
      }
    }
  }
  return out;
}

std::size_t PayoffSurface::failed_cells() const {
  std::size_t n = 0;
  for (const auto& row : error) {
    for (const auto& e : row) n += e.empty() ? 0 : 1;
  }
  return n;
}

void fill_argmax(PayoffSurface& s) {
  bool found = false;
  double best = 0.0;
  // Column-major scan with strict improvement: smaller alpha, then smaller M, wins ties.
  for (std::size_t j = 0; j < s.alpha_grid.size(); ++j) {
    for (std::size_t i = 0; i < s.m_grid.size(); ++i) {
      if (!s.error[i][j].empty()) continue;
      const double v = s.value[i][j];
      if (!found || v > best) {
        found = true;
        best = v;
        s.argmax_alpha = s.alpha_grid[j];
        s.argmax_m = s.m_grid[i];
      }
    }
  }
}

PayoffSurface sweep_surface(const PlatformConfig& config, const PayoffParams& pay,
                            const std::vector<double>& alpha_grid, const std::vector<int>& m_grid,
                            const PayoffEngine& engine, unsigned workers) {
  if (alpha_grid.empty() || m_grid.empty()) {
    throw DomainError("sweep_surface: grids must be nonempty");
  }
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end(), std::less_equal<>{}) ||
      std::adjacent_find(alpha_grid.begin(), alpha_grid.end()) != alpha_grid.end()) {
    throw DomainError("sweep_surface: alpha grid must be strictly ascending");
  }
  if (std::adjacent_find(m_grid.begin(), m_grid.end(), std::greater_equal<>{}) != m_grid.end()) {
    throw DomainError("sweep_surface: M grid must be strictly ascending");
  }

  PayoffSurface s;
  s.alpha_grid = alpha_grid;
  s.m_grid = m_grid;
  const std::size_t rows = m_grid.size();
  const std::size_t cols = alpha_grid.size();
  s.value.assign(rows, std::vector<double>(cols, 0.0));
  s.ci.assign(rows, std::vector<double>(cols, 0.0));
  s.error.assign(rows, std::vector<std::string>(cols));

  parallel_for(rows * cols, workers, [&](std::size_t k) {
    const std::size_t i = k / cols;
    const std::size_t j = k % cols;
    PlatformConfig c = config;
    c.capacity = m_grid[i];
    c.alpha = alpha_grid[j];
    PayoffEngine cell_engine = engine;
    if (auto* mc = std::get_if<MonteCarloEngine>(&cell_engine)) {
      mc->seed = derive_seed(mc->seed, i);
      mc->workers = 1;
    }
    try {
      const PayoffEstimate e = payoff(c, pay, cell_engine);
      s.value[i][j] = e.value;
      s.ci[i][j] = e.ci_halfwidth;
    } catch (const std::exception& ex) {
      s.value[i][j] = std::nan("");
      s.ci[i][j] = std::nan("");
      s.error[i][j] = ex.what();
    }
  });

  fill_argmax(s);
  const std::size_t failed = s.failed_cells();
  if (failed * 10 > rows * cols) {
    std::ostringstream os;
    os << "sweep_surface: " << failed << " of " << rows * cols << " cells failed";
    throw SweepError(os.str(), std::move(s));
  }
  return s;
}

}  // namespace twosided
