#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "emv/errors.hpp"
#include "emv/gfunc.hpp"
#include "emv/rng.hpp"
#include "oracles.hpp"

namespace {

using emv::GPair;
const double kE = std::exp(1.0);

TEST(GPair, RejectsBadOrdering) {
  EXPECT_THROW(GPair(2.0, 1.0), emv::DomainError);
  EXPECT_THROW(GPair(1.0, 1.0), emv::DomainError);
  EXPECT_THROW(GPair(0.0, 1.0), emv::DomainError);
  EXPECT_THROW(GPair(1.0, std::numeric_limits<double>::infinity()), emv::DomainError);
}

TEST(GPair, LogRatioNearOne) {
  const GPair p(1.0, 1.0 + 1e-12);
  EXPECT_NEAR(p.log_ratio() / 1e-12, 1.0, 1e-3);
}

TEST(EvalG, SimpleValues) {
  EXPECT_DOUBLE_EQ(emv::eval_g(GPair(1, 2), 1.0), 1.0);
  EXPECT_NEAR(emv::eval_g(GPair(1, 4), 0.5), 2.0, 1e-15);
  EXPECT_NEAR(emv::eval_g(GPair(1, kE), 1.0), oracle::kEMinus1, 4e-16);
}

TEST(EvalG, RemovableValueIsLogRatio) {
  // The limit at t = 0 is ln(b/a).
  EXPECT_NEAR(emv::eval_g(GPair(1, 3), 0.0), std::log(3.0), 1e-15);
  const auto r = emv::eval_g_detailed(GPair(1, 3), 0.0);
  EXPECT_EQ(r.method, emv::EvalMethod::series_near_zero);
}

TEST(EvalG, ContinuousAcrossSeriesThreshold) {
  const GPair p(0.7, 3.1);
  const double L = p.log_ratio();
  for (double u : {0.999e-3, 1.001e-3, -0.999e-3, -1.001e-3}) {
    const double t = u / L;
    EXPECT_LT(oracle::rel(emv::eval_g(p, t), oracle::g(0.7L, 3.1L, t)), 4e-15) << t;
  }
}

TEST(EvalG, MatchesDirectOracle) {
  emv::SplitMix64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(0.1, 10), b = a * rng.uniform(1.01, 20);
    const double t = rng.uniform(-30, 30);
    EXPECT_LT(oracle::rel(emv::eval_g(GPair(a, b), t), oracle::g(a, b, t)), 1e-13);
  }
}

TEST(EvalG, OverflowRaisesRangeError) {
  EXPECT_THROW(emv::eval_g(GPair(1, 10), 400.0), emv::RangeError);
  EXPECT_NO_THROW(emv::log_g(GPair(1, 10), 400.0));
  EXPECT_THROW(emv::eval_g(GPair(1, 2), std::nan("")), emv::DomainError);
}

TEST(LogG, AgreesWithLogOfG) {
  const GPair p(0.3, 7.0);
  for (double t : {-20.0, -1.0, 0.0, 1e-9, 2.0, 30.0}) {
    EXPECT_NEAR(emv::log_g(p, t), std::log(emv::eval_g(p, t)), 1e-14 * std::max(1.0, std::abs(emv::log_g(p, t))));
  }
}

TEST(EvalH, KnownValues) {
  EXPECT_NEAR(emv::eval_h(GPair(1, kE * kE), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(emv::eval_h(GPair(4, 9), 0.0), std::log(6.0), 1e-15);
  EXPECT_NEAR(emv::eval_h(GPair(1, kE), 1.0), oracle::kH1e1, 1e-15);
  EXPECT_NEAR(emv::eval_h(GPair(1, kE), -1e4), 0.0, 2e-4);
  EXPECT_NEAR(emv::eval_h(GPair(1, kE), 1e4), 1.0, 2e-4);
}

TEST(EvalH, MatchesDerivativeOfLogG) {
  emv::SplitMix64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0.1, 10), b = a * rng.uniform(1.05, 20), t = rng.uniform(-10, 10);
    const auto lg = [&](long double u) { return std::log(oracle::g(a, b, u)); };
    const long double want = oracle::derivative(lg, t, 1, 1e-3L);
    EXPECT_LT(oracle::rel(emv::eval_h(GPair(a, b), t), want), 1e-6);
    if (std::abs(t) > 1e-3) EXPECT_LT(oracle::rel(emv::eval_h(GPair(a, b), t), oracle::h(a, b, t)), 1e-12);
  }
}

TEST(LogGD2, LimitAtZero) {
  const GPair p(1, kE);
  EXPECT_NEAR(emv::log_g_d2(p, 0.0), 1.0 / 12.0, 1e-16);
  const auto lg = [&](long double u) { return std::log(oracle::g(1.0L, std::exp(1.0L), u)); };
  EXPECT_NEAR(static_cast<double>(oracle::derivative(lg, 0.0L, 2, 1e-2L)), 1.0 / 12.0, 1e-6);
}

TEST(LogGD2, EvenAndBounded) {
  const GPair p(0.4, 6.5);
  for (double t : {0.1, 1.0, 3.7, 25.0}) EXPECT_EQ(emv::log_g_d2(p, t), emv::log_g_d2(p, -t));
  const double v = emv::log_g_d2(GPair(1, kE), 10.0);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 0.01);
  EXPECT_NEAR(v, oracle::kD2At10, 1e-16);
}

TEST(LogGD3, SignsAndSymmetry) {
  const GPair p(1, kE);
  EXPECT_EQ(emv::log_g_d3(p, 0.0), 0.0);
  EXPECT_LT(emv::log_g_d3(p, 1.0), 0.0);
  EXPECT_EQ(emv::log_g_d3(p, -1.0), -emv::log_g_d3(p, 1.0));
  EXPECT_NEAR(emv::log_g_d3(p, 1.0), oracle::kD3At1, 1e-17);
}

TEST(LogGD3, MatchesFiniteDifference) {
  emv::SplitMix64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.1, 10), b = a * rng.uniform(1.5, 20), t = rng.uniform(-5, 5);
    const auto lg = [&](long double u) { return std::log(oracle::g(a, b, u)); };
    const long double want = oracle::derivative(lg, t, 3, 2e-2L);
    EXPECT_NEAR(emv::log_g_d3(GPair(a, b), t), static_cast<double>(want), 1e-6 * std::max(1.0L, std::fabs(want)));
  }
}

TEST(LazarevicGap, Values) {
  EXPECT_EQ(emv::lazarevic_gap(0.0), 0.0);
  EXPECT_NEAR(emv::lazarevic_gap(1.0), oracle::kGap1, 1e-16);
  EXPECT_EQ(emv::lazarevic_gap(-1.0), emv::lazarevic_gap(1.0));
  for (double t : {0.3, 0.999, 1.001, 2.0, 10.0, 30.0}) {
    EXPECT_LT(emv::lazarevic_gap(t), 0.0) << t;
    EXPECT_LT(oracle::rel(emv::lazarevic_gap(t), oracle::gap(t)), 1e-12) << t;
  }
  // Leading term -t^4/15; the direct formula cancels completely here.
  EXPECT_LT(oracle::rel(emv::lazarevic_gap(1e-4), -1e-16L / 15), 1e-7);
  EXPECT_THROW(emv::lazarevic_gap(300.0), emv::RangeError);
}

}  // namespace
