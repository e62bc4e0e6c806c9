#include <cmath>

#include <gtest/gtest.h>

#include "twosided/dp_oracle.hpp"
#include "twosided/errors.hpp"
#include "twosided/simulator.hpp"

using namespace twosided;
using Kind = DelayDistribution::Kind;

TEST(DpOracle, OutcomesSumToOne) {
  for (auto coupling : {Coupling::Static, Coupling::Attraction}) {
    for (int M = 1; M <= 8; ++M) {
      const auto dp = dp_oracle(symmetric_config(M, Kind::Deterministic, coupling), M);
      EXPECT_NEAR(dp.p_mu_first + dp.p_nu_first + dp.p_tie, 1.0, 1e-10);
      EXPECT_LT(dp.residual_mass, 1e-15);
    }
  }
}

TEST(DpOracle, SymmetricExchangeability) {
  for (auto kind : {Kind::Exponential, Kind::Deterministic}) {
    for (int M = 1; M <= 8; ++M) {
      const auto dp = dp_oracle(symmetric_config(M, kind), M);
      EXPECT_NEAR(dp.p_mu_first, dp.p_nu_first, 1e-10);
    }
  }
}

TEST(DpOracle, FrozenSupplierSide) {
  auto c = symmetric_config(2);
  c.rates.lambda_b0 = 0.0;
  c.rates.lambda_b = 1e-12;
  EXPECT_NEAR(dp_oracle(c, 2).p_mu_first, 1.0, 1e-9);
}

TEST(DpOracle, PayoffTermsConsistent) {
  const auto dp = dp_oracle(symmetric_config(4), 4);
  EXPECT_GE(dp.mean_customers, 4.0);
  EXPECT_GE(dp.over_customer_mean, 4.0 * dp.p_over);
  EXPECT_LE(dp.p_over, 1.0);
  EXPECT_NEAR(dp.supplier_pmf().total(), dp.p_mu_first, 1e-14);
}

TEST(DpOracle, Preconditions) {
  EXPECT_THROW(dp_oracle(symmetric_config(13), 13), DomainError);
  EXPECT_THROW(dp_oracle(symmetric_config(3), 0), DomainError);
  DpOptions tight;
  tight.max_epochs = 2;
  EXPECT_THROW(dp_oracle(symmetric_config(6), 6, tight), PrecisionError);
}

TEST(DpOracle, AttractionAgreesWithSimulation) {
  for (auto kind : {Kind::Exponential, Kind::Deterministic}) {
    auto c = symmetric_config(4, kind, Coupling::Attraction);
    c.alpha = 2.5;
    const auto dp = dp_oracle(c, 4);
    const auto records = simulate_batch(c, 40000, RunSeed{77});
    const auto p = estimate(records, [](const ExitRecord& r) { return r.flag_mu_first ? 1.0 : 0.0; });
    const auto a = estimate(records, [](const ExitRecord& r) { return double(r.a_exit); });
    EXPECT_NEAR(p.mean, dp.p_mu_first, 3.0 * p.ci_halfwidth + 1e-12);
    EXPECT_NEAR(a.mean, dp.mean_customers, 3.0 * a.ci_halfwidth);
  }
}
