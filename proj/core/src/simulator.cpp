#include "twosided/simulator.hpp"

#include <cmath>
#include <sstream>

#include "twosided/errors.hpp"
#include "twosided/increment_law.hpp"
#include "twosided/parallel.hpp"

namespace twosided {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
}

std::mt19937_64 RunSeed::stream(std::uint64_t replication) const {
  return std::mt19937_64(derive_seed(master_seed, replication));
}

ExitRecord simulate_path(const PlatformConfig& config, std::mt19937_64& rng,
                         const SimOptions& options) {
  config.validate();
  const auto& r = config.rates;
  const long M = config.capacity;

  ExitRecord rec;
  double tau = delay_draw(config.tau0, rng);
  long a = 0;
  long b = 0;
  if (config.coupling == Coupling::Static) {
    a = poisson_draw(r.lambda_a0 * tau, rng);
    b = poisson_draw(r.lambda_b0 * tau, rng);
  } else {
    a = poisson_draw(r.lambda_a0 * config.tau0.mean(), rng);
    b = static_cast<long>(config.b0);
  }
  long a_prev = 0;
  long b_prev = 0;
  long k = 0;
  if (b >= M) {
    rec.nu = 0;
    rec.supplier_prev = 0;
    rec.supplier_exit = b;
  }

  while (a < M) {
    if (k >= options.epoch_cap) {
      rec.mu = k;
      rec.a_prev = a_prev;
      rec.a_exit = a;
      rec.b_prev = b_prev;
      rec.b_exit = b;
      rec.tau_exit = tau;
      std::ostringstream os;
      os << "simulate_path: no customer exit within " << options.epoch_cap << " epochs";
      throw NonTerminationError(os.str(), rec);
    }
    const double d = delay_draw(config.delta, rng);
    const double rate_a =
        config.coupling == Coupling::Static ? r.lambda_a : attraction_rate(config, b);
    const long x = poisson_draw(rate_a * d, rng);
    const long y = poisson_draw(r.lambda_b * d, rng);
    a_prev = a;
    b_prev = b;
    a += x;
    b += y;
    tau += d;
    ++k;
    if (rec.nu == ExitRecord::kNotReached && b >= M) {
      rec.nu = k;
      rec.supplier_prev = b_prev;
      rec.supplier_exit = b;
    }
  }

  rec.mu = k;
  rec.a_prev = a_prev;
  rec.a_exit = a;
  rec.b_prev = b_prev;
  rec.b_exit = b;
  rec.tau_exit = tau;
  rec.flag_mu_first = rec.nu == ExitRecord::kNotReached;
  rec.flag_under = a + b_prev <= M;

  // Follow the supplier count past the customer exit until it reaches M.
  for (long extra = 0; rec.nu == ExitRecord::kNotReached && extra < options.supplier_cap;
       ++extra) {
    const long y = poisson_draw(r.lambda_b * delay_draw(config.delta, rng), rng);
    ++k;
    if (b + y >= M) {
      rec.nu = k;
      rec.supplier_prev = b;
      rec.supplier_exit = b + y;
    }
    b += y;
  }
  return rec;
}

std::vector<ExitRecord> simulate_batch(const PlatformConfig& config, std::size_t n, RunSeed seed,
                                       const SimOptions& options) {
  config.validate();
  std::vector<ExitRecord> out(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    auto rng = seed.stream(i);
    try {
      out[i] = simulate_path(config, rng, options);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "replication " << i << ": " << e.what();
      throw ReplicationError(os.str(), i);
    }
  });
  return out;
}

SimEstimate summarize(const std::vector<double>& values) {
  SimEstimate est;
  est.n = values.size();
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  est.mean = pairwise_sum(values.data(), values.size()) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
  }
  est.ci_halfwidth = kCi99 * est.std_error;
  return est;
}

SimEstimate estimate(const std::vector<ExitRecord>& records, const Statistic& statistic) {
  std::vector<double> v(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) v[i] = statistic(records[i]);
  return summarize(v);
}

SimEstimate estimate_conditional(const std::vector<ExitRecord>& records,
                                 const Statistic& statistic,
                                 const std::function<bool(const ExitRecord&)>& filter) {
  std::vector<double> v;
  for (const auto& r : records) {
    if (filter(r)) v.push_back(statistic(r));
  }
  return summarize(v);
}

SimEstimate estimate(const PlatformConfig& config, const Statistic& statistic, std::size_t n,
                     RunSeed seed, const SimOptions& options) {
  if (n < 100) throw DomainError("estimate: at least 100 replications are required");
  return estimate(simulate_batch(config, n, seed, options), statistic);
}

PgfArray empirical_pmf(const std::vector<ExitRecord>& records, ExitVariable variable, int K) {
  if (K < 0) throw DomainError("empirical_pmf: K must be >= 0");
  std::vector<double> counts(static_cast<std::size_t>(K + 1), 0.0);
  for (const auto& r : records) {
    long value = -1;
    switch (variable) {
      case ExitVariable::SupplierBeforeCustomerExit:
        if (r.flag_mu_first) value = r.b_prev;
        break;
      case ExitVariable::SupplierBeforeSupplierExit:
        if (r.flag_mu_first && r.nu != ExitRecord::kNotReached) value = r.supplier_prev;
        break;
      case ExitVariable::CustomerAtExit:
        value = r.a_exit;
        break;
    }
    if (value >= 0 && value <= K) counts[static_cast<std::size_t>(value)] += 1.0;
  }
  const double n = records.empty() ? 1.0 : static_cast<double>(records.size());
  for (double& c : counts) c /= n;
  return PgfArray(std::move(counts));
}

PgfArray empirical_pmf(const PlatformConfig& config, ExitVariable variable, std::size_t n,
                       RunSeed seed, int K, const SimOptions& options) {
  if (n < 10'000) throw DomainError("empirical_pmf: at least 10^4 replications are required");
  return empirical_pmf(simulate_batch(config, n, seed, options), variable, K);
}

std::pair<long, long> draw_increment(const PlatformConfig& config, std::mt19937_64& rng) {
  config.require_static();
  return IncrementLaw::mixed(config.rates.lambda_a, config.rates.lambda_b, config.delta)
      .sample(rng);
}

std::vector<SimEstimate> simulate_supplier_passage(const PlatformConfig& config, int max_level,
                                                   std::size_t n, RunSeed seed,
                                                   const SimOptions& options) {
  config.validate();
  if (config.b0 != std::floor(config.b0)) {
    throw DomainError("simulate_supplier_passage: b0 must be an integer");
  }
  const long start = static_cast<long>(config.b0);
  if (max_level < start) throw DomainError("simulate_supplier_passage: max_level below b0");
  const std::size_t levels = static_cast<std::size_t>(max_level + 1);

  // passage[i * levels + b]: first epoch at which path i has B_k >= b
  std::vector<double> passage(n * levels, 0.0);
  parallel_for(n, options.workers, [&](std::size_t i) {
    auto rng = seed.stream(i);
    double* row = passage.data() + i * levels;
    long b = start;
    long k = 0;
    while (b < max_level) {
      if (k >= options.epoch_cap) {
        throw NonTerminationError("simulate_supplier_passage: epoch cap reached", ExitRecord{});
      }
      const long y = poisson_draw(config.rates.lambda_b * delay_draw(config.delta, rng), rng);
      ++k;
      for (long lev = b + 1; lev <= std::min<long>(b + y, max_level); ++lev) {
        row[lev] = static_cast<double>(k);
      }
      b += y;
    }
  });

  std::vector<SimEstimate> out(levels);
  std::vector<double> column(n);
  for (long lev = start; lev <= max_level; ++lev) {
    for (std::size_t i = 0; i < n; ++i) column[i] = passage[i * levels + lev];
    out[static_cast<std::size_t>(lev)] = summarize(column);
  }
  return out;
}

}  // namespace twosided
