#include <cmath>

#include <gtest/gtest.h>

#include "twosided/dp_oracle.hpp"
#include "twosided/errors.hpp"
#include "twosided/payoff.hpp"

using namespace twosided;
using Kind = DelayDistribution::Kind;

namespace {

PlatformConfig attraction(int M, Kind kind = Kind::Exponential) {
  return symmetric_config(M, kind, Coupling::Attraction);
}

}  // namespace

TEST(Payoff, ZeroCoefficients) {
  const auto c = symmetric_config(3);
  EXPECT_EQ(payoff(c, {0, 0}, DpOracleEngine{}).value, 0.0);
  EXPECT_EQ(payoff(c, {0, 0}, MonteCarloEngine{1000, 1, 1}).value, 0.0);
}

TEST(Payoff, RevenueOnlyBound) {
  const auto c = symmetric_config(3);
  EXPECT_GE(payoff(c, {2.0, 0.0}, DpOracleEngine{}).value, 2.0 * 3);
  const auto dp = dp_oracle(c, 3);
  EXPECT_NEAR(payoff(c, {2.0, 0.0}, DpOracleEngine{}).value, 2.0 * dp.mean_customers, 1e-14);
  EXPECT_GE(payoff(c, {1.0, 0.0}, MonteCarloEngine{2000, 3, 1}).value, 3.0);
}

TEST(Payoff, MonteCarloAgreesWithOracle) {
  for (auto c : {symmetric_config(3), attraction(3), attraction(5, Kind::Deterministic)}) {
    c.alpha = 2.0;
    const auto mc = payoff(c, {1.0, 1.0}, MonteCarloEngine{100000, 42, 0});
    const auto dp = payoff(c, {1.0, 1.0}, DpOracleEngine{});
    EXPECT_NEAR(mc.value, dp.value, 3.0 * mc.ci_halfwidth);
  }
}

TEST(Payoff, ExactlyLinearInCoefficients) {
  const auto c = attraction(4);
  const MonteCarloEngine mc{5000, 17, 2};
  const double base = payoff(c, {1.3, 0.7}, mc).value;
  EXPECT_NEAR(payoff(c, {2.6, 1.4}, mc).value, 2.0 * base, 1e-12);
}

TEST(Payoff, EnginePreconditions) {
  EXPECT_THROW(payoff(symmetric_config(13), {1, 1}, DpOracleEngine{}), DomainError);
  EXPECT_THROW(payoff(symmetric_config(3), {1, 1}, MonteCarloEngine{1, 1, 1}), DomainError);
  EXPECT_THROW(payoff(symmetric_config(3), {std::nan(""), 1}, DpOracleEngine{}), DomainError);
}

TEST(MaximizeScalar, UnimodalSynthetic) {
  const auto r = maximize_scalar([](double a) { return -(a - 4.0) * (a - 4.0); }, 1.0, 10.0, 0.05);
  EXPECT_NEAR(r.x, 4.0, 0.05);
  EXPECT_FALSE(r.at_boundary);
}

TEST(MaximizeScalar, OffGridPeakAndBounds) {
  double lo_seen = 1e300, hi_seen = -1e300;
  const auto r = maximize_scalar(
      [&](double a) {
        lo_seen = std::min(lo_seen, a);
        hi_seen = std::max(hi_seen, a);
        return -std::abs(a - 3.1234);
      },
      1.0, 10.0, 0.01);
  EXPECT_NEAR(r.x, 3.1234, 0.01);
  EXPECT_GE(lo_seen, 1.0);
  EXPECT_LE(hi_seen, 10.0);
  EXPECT_EQ(r.grid.size(), 21u);
}

TEST(MaximizeScalar, BoundaryReport) {
  const auto r = maximize_scalar([](double a) { return a; }, 1.0, 10.0, 0.05);
  EXPECT_TRUE(r.at_boundary);
  EXPECT_EQ(r.x, 10.0);
  EXPECT_EQ(r.evaluations, 21u);
}

TEST(OptimizeAlpha, OpenDelegate) {
  const auto c = attraction(20);
  auto r = optimize_alpha(c, {2.0, 5.0}, OpenPlatformEngine{});
  EXPECT_EQ(r.alpha, 2.5);
  r = optimize_alpha(c, {1.0, 0.0}, OpenPlatformEngine{});
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_TRUE(r.at_boundary);
  r = optimize_alpha(c, {1.0, 50.0}, OpenPlatformEngine{});
  EXPECT_EQ(r.alpha, 10.0);
}

TEST(OptimizeAlpha, OpenDelegateSignAroundOptimum) {
  auto c = attraction(20);
  const PayoffParams pay{2.0, 5.0};
  const double star = optimize_alpha(c, pay, OpenPlatformEngine{}).alpha;
  c.alpha = star - 1e-6;
  EXPECT_LT(payoff(c, pay, OpenPlatformEngine{}).value, 0.0);
  c.alpha = star + 1e-6;
  EXPECT_GE(payoff(c, pay, OpenPlatformEngine{}).value, 0.0);
}

TEST(OptimizeAlpha, DpMatchesExhaustiveGrid) {
  const auto c = attraction(8, Kind::Deterministic);
  const PayoffParams pay{1.0, 1.0};
  const auto r = optimize_alpha(c, pay, DpOracleEngine{});
  double best = -1e300, best_a = 0.0;
  for (int i = 0; i <= 900; ++i) {
    auto ci = c;
    ci.alpha = 1.0 + 0.01 * i;
    const double v = payoff(ci, pay, DpOracleEngine{}).value;
    if (v > best) {
      best = v;
      best_a = ci.alpha;
    }
  }
  EXPECT_NEAR(r.alpha, best_a, 0.05);
  EXPECT_FALSE(r.at_boundary);
  EXPECT_GE(r.value.value, best - 1e-3);
}

TEST(OptimizeAlpha, MonteCarloReproducibleWithOverlapSet) {
  const auto c = attraction(3);
  const MonteCarloEngine mc{3000, 5, 0};
  const auto a = optimize_alpha(c, {1.0, 1.0}, mc);
  const auto b = optimize_alpha(c, {1.0, 1.0}, MonteCarloEngine{3000, 5, 1});
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.value.value, b.value.value);
  EXPECT_EQ(a.overlap_set, b.overlap_set);
  EXPECT_FALSE(a.overlap_set.empty());
  EXPECT_GE(a.alpha, 1.0);
  EXPECT_LE(a.alpha, 10.0);
  EXPECT_THROW(optimize_alpha(c, {1, 1}, mc, 0.5, 2.0), DomainError);
}

TEST(SweepSurface, SingleCellIsOnePayoffCall) {
  auto c = attraction(3);
  const MonteCarloEngine mc{2000, 9, 1};
  const auto s = sweep_surface(c, {1, 1}, {2.0}, {3}, mc);
  c.alpha = 2.0;
  MonteCarloEngine row = mc;
  row.seed = derive_seed(mc.seed, 0);
  const auto e = payoff(c, {1, 1}, row);
  EXPECT_EQ(s.value[0][0], e.value);
  EXPECT_EQ(s.ci[0][0], e.ci_halfwidth);
  EXPECT_EQ(s.argmax_alpha, 2.0);
  EXPECT_EQ(s.argmax_m, 3);

  const auto d = sweep_surface(c, {1, 1}, {2.0}, {3}, DpOracleEngine{});
  EXPECT_EQ(d.value[0][0], payoff(c, {1, 1}, DpOracleEngine{}).value);
}

TEST(SweepSurface, RevenueOnlyNondecreasingInAlpha) {
  const std::vector<double> alphas{1.0, 2.0, 4.0, 7.0, 10.0};
  const auto s = sweep_surface(attraction(3), {1.0, 0.0}, alphas, {2, 4}, MonteCarloEngine{4000, 3, 0});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 1; j < alphas.size(); ++j)
      EXPECT_GE(s.value[i][j] + 3.0 * (s.ci[i][j] + s.ci[i][j - 1]), s.value[i][j - 1]);
}

TEST(SweepSurface, TieGoesToSmallerAlphaThenM) {
  PayoffSurface s;
  s.alpha_grid = {1.0, 2.0, 3.0};
  s.m_grid = {2, 3};
  s.value = {{0.0, 5.0, 5.0}, {5.0, 1.0, 5.0}};
  s.ci = {{0, 0, 0}, {0, 0, 0}};
  s.error = {{"", "", ""}, {"", "", ""}};
  fill_argmax(s);
  EXPECT_EQ(s.argmax_alpha, 1.0);
  EXPECT_EQ(s.argmax_m, 3);
  s.value = {{0.0, 5.0, 5.0}, {1.0, 5.0, 5.0}};
  fill_argmax(s);
  EXPECT_EQ(s.argmax_alpha, 2.0);
  EXPECT_EQ(s.argmax_m, 2);
  s.error[0][1] = "poisoned";
  s.value[0][1] = 100.0;
  fill_argmax(s);
  EXPECT_EQ(s.argmax_alpha, 2.0);
  EXPECT_EQ(s.argmax_m, 3);
}

TEST(SweepSurface, ArgmaxInvariantUnderRescaling) {
  const std::vector<double> alphas{1.0, 3.0, 5.0, 8.0};
  const MonteCarloEngine mc{3000, 21, 0};
  const auto a = sweep_surface(attraction(3), {1.0, 2.0}, alphas, {2, 3, 4}, mc);
  const auto b = sweep_surface(attraction(3), {3.0, 6.0}, alphas, {2, 3, 4}, mc);
  EXPECT_EQ(a.argmax_alpha, b.argmax_alpha);
  EXPECT_EQ(a.argmax_m, b.argmax_m);
}

TEST(SweepSurface, IndependentOfWorkerCount) {
  const std::vector<double> alphas{1.0, 2.5, 6.0};
  const auto a = sweep_surface(attraction(3), {1, 1}, alphas, {2, 3}, MonteCarloEngine{2000, 4, 0}, 1);
  const auto b = sweep_surface(attraction(3), {1, 1}, alphas, {2, 3}, MonteCarloEngine{2000, 4, 0}, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.ci, b.ci);
}

TEST(SweepSurface, CellErrors) {
  const std::vector<double> alphas{1.0, 2.0, 3.0, 4.0, 5.0};
  // 12 and 13: the oracle rejects M = 13, so half the cells fail.
  try {
    sweep_surface(attraction(3), {1, 1}, alphas, {12, 13}, DpOracleEngine{});
    FAIL() << "expected SweepError";
  } catch (const SweepError& e) {
    EXPECT_EQ(e.surface().failed_cells(), 5u);
    EXPECT_EQ(e.surface().argmax_m, 12);
  }
  EXPECT_THROW(sweep_surface(attraction(3), {1, 1}, {}, {2}, DpOracleEngine{}), DomainError);
  EXPECT_THROW(sweep_surface(attraction(3), {1, 1}, {2.0, 1.0}, {2}, DpOracleEngine{}), DomainError);
  EXPECT_THROW(sweep_surface(attraction(3), {1, 1}, {1.0}, {3, 3}, DpOracleEngine{}), DomainError);
}
