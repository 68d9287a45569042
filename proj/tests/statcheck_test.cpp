#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freeshift/checks.hpp"
#include "freeshift/errors.hpp"
#include "freeshift/statcheck.hpp"

namespace freeshift {
namespace {

Outcome pair_outcome(std::int32_t u, std::int32_t v) { return {{u}, {v}}; }

TEST(Collect, SingleTrialAndDeterminism) {
  const Sampler sampler = [](std::uint64_t seed) { return pair_outcome(seed % 3, seed % 5); };
  const Sample one = collect({"x", "y"}, sampler, 1, 7);
  ASSERT_EQ(one.outcomes.size(), 1u);
  const EmpiricalTable t1 = tabulate(one.window, one.outcomes);
  EXPECT_EQ(t1.counts.size(), 1u);
  EXPECT_EQ(t1.counts.begin()->second, 1u);

  const Sample a = collect({"x", "y"}, sampler, 100, 1);
  const Sample b = collect({"x", "y"}, sampler, 100, 1);
  EXPECT_EQ(tabulate(a.window, a.outcomes).counts, tabulate(b.window, b.outcomes).counts);
}

TEST(Collect, CountsAborts) {
  const Sampler sampler = [](std::uint64_t seed) -> Outcome {
    if (seed % 10 == 0) throw ScanBudgetExceeded("e", 1, 5);
    return {{1}};
  };
  const Sample s = collect({"x"}, sampler, 100, 0);
  EXPECT_EQ(s.aborts, 10u);
  EXPECT_EQ(s.outcomes.size(), 90u);
  EXPECT_DOUBLE_EQ(s.abort_rate(), 0.1);
}

TEST(Table, MergeIsOrderIndependent) {
  std::vector<Outcome> outcomes;
  for (int i = 0; i < 60; ++i) outcomes.push_back(pair_outcome(i % 4, i % 7));
  const EmpiricalTable whole = tabulate({"x", "y"}, outcomes);
  EmpiricalTable ab = tabulate({"x", "y"}, outcomes, 0, 25);
  ab.merge(tabulate({"x", "y"}, outcomes, 25, 60));
  EmpiricalTable ba = tabulate({"x", "y"}, outcomes, 25, 60);
  ba.merge(tabulate({"x", "y"}, outcomes, 0, 25));
  EXPECT_EQ(ab.counts, whole.counts);
  EXPECT_EQ(ba.counts, whole.counts);
  EXPECT_EQ(ab.trials, 60u);
}

TEST(TotalVariation, Examples) {
  EmpiricalTable exact;
  exact.window = {"x"};
  exact.add({{1}});
  exact.add({{2}});
  const SiteLaw half = [](const SiteOutcome&) { return 0.5; };
  EXPECT_NEAR(tv_distance(exact, product_law({half})), 0.0, 1e-15);

  EmpiricalTable point;
  point.window = {"x"};
  for (int i = 0; i < 10; ++i) point.add({{3}});
  for (int m : {2, 5, 10}) {
    const SiteLaw uniform = [m](const SiteOutcome&) { return 1.0 / m; };
    EXPECT_NEAR(tv_distance(point, product_law({uniform})), 1.0 - 1.0 / m, 1e-12);
  }
}

TEST(TotalVariation, ProductOfFairCoins) {
  // 2 x 10^5 draws over 16 outcomes: TV well below 0.5 * sqrt(16 / n).
  std::mt19937_64 rng(1);
  EmpiricalTable t;
  t.window = {"e", "a", "b", "ab"};
  for (int i = 0; i < 200000; ++i) {
    Outcome o;
    for (int s = 0; s < 4; ++s) o.push_back({static_cast<std::int32_t>(1 + rng() % 2)});
    t.add(o);
  }
  const SiteLaw half = [](const SiteOutcome&) { return 0.5; };
  EXPECT_LE(tv_distance(t, product_law({half, half, half, half})), 0.02);
}

EmpiricalTable product_table(std::mt19937_64& rng, int n) {
  EmpiricalTable t;
  t.window = {"u", "v"};
  std::uniform_int_distribution<std::int32_t> u(1, 3);
  std::discrete_distribution<std::int32_t> v({0.5, 0.3, 0.2});
  for (int i = 0; i < n; ++i) t.add(pair_outcome(u(rng), v(rng)));
  return t;
}

TEST(ChiSquare, CalibratedOnProductData) {
  std::mt19937_64 rng(12345);
  std::vector<double> p;
  for (int rep = 0; rep < 200; ++rep) {
    const ChiSquareResult r = chi_square_independence(product_table(rng, 2000), {0}, {1});
    ASSERT_FALSE(r.inconclusive);
    EXPECT_EQ(r.dof, 4u);
    p.push_back(r.p_value);
  }
  EXPECT_TRUE(ks_uniform(p).pass);
}

TEST(ChiSquare, PlantedCopyRejected) {
  std::mt19937_64 rng(3);
  EmpiricalTable t;
  t.window = {"u", "v"};
  for (int i = 0; i < 2000; ++i) {
    const auto u = static_cast<std::int32_t>(1 + rng() % 3);
    t.add(pair_outcome(u, u));
  }
  EXPECT_LT(chi_square_independence(t, {0}, {1}).p_value, 1e-6);
}

TEST(ChiSquare, ConstantSideIsInconclusive) {
  EmpiricalTable t;
  t.window = {"u", "v"};
  for (int i = 0; i < 100; ++i) t.add(pair_outcome(1, 1 + i % 2));
  EXPECT_TRUE(chi_square_independence(t, {0}, {1}).inconclusive);
}

TEST(ChiSquare, RareCategoriesMerged) {
  std::mt19937_64 rng(8);
  EmpiricalTable t;
  t.window = {"u", "v"};
  for (int i = 0; i < 400; ++i) {
    const auto u = static_cast<std::int32_t>(rng() % 100 == 0 ? 9 : 1 + rng() % 2);
    t.add(pair_outcome(u, static_cast<std::int32_t>(1 + rng() % 2)));
  }
  const ChiSquareResult r = chi_square_independence(t, {0}, {1});
  EXPECT_FALSE(r.inconclusive);
  EXPECT_EQ(r.rows, 2u);
}

TEST(ChiSquare, FitDetectsWrongLaw) {
  const ChiSquareResult good = chi_square_fit({5000, 5000}, {0.5, 0.5}, 0.0);
  EXPECT_NEAR(good.p_value, 1.0, 1e-9);
  const ChiSquareResult bad = chi_square_fit({6000, 4000}, {0.5, 0.5}, 0.0);
  EXPECT_LT(bad.p_value, 1e-6);
}

TEST(LengthLaw, GeometricSamplesPassConstantFails) {
  std::mt19937_64 rng(4);
  std::geometric_distribution<std::uint64_t> geo(0.5);
  std::vector<std::uint64_t> sizes;
  for (int i = 0; i < 100000; ++i) sizes.push_back(1 + geo(rng));
  const LengthLawFit fit = length_law_fit(sizes, 2);
  EXPECT_LE(fit.tv, 0.01);
  EXPECT_GT(fit.chi_square.p_value, 0.001);
  EXPECT_NEAR(fit.mean, 2.0, 0.02);

  const LengthLawFit planted = length_law_fit(std::vector<std::uint64_t>(100000, 1), 2);
  EXPECT_GT(planted.tv, 0.4);
  EXPECT_LT(planted.chi_square.p_value, 1e-6);
}

TEST(Ks, UniformPassesSkewedFails) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> flat, skew;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    flat.push_back(x);
    skew.push_back(x * x);
  }
  EXPECT_TRUE(ks_uniform(flat).pass);
  EXPECT_FALSE(ks_uniform(skew).pass);
}

TEST(Encoding, RunRoundTrip) {
  const RunLabel r({{1, 2}, {3, 1}});
  EXPECT_EQ(decode_run(encode(r)), r);
  EXPECT_EQ(encode(SymbolPair{2, 3}), (SiteOutcome{2, 3}));
}

TEST(Suites, CalibrationSmall) {
  CheckOptions opt;
  opt.trials = 20000;
  SuiteConfig cfg;
  cfg.batches = 10;
  cfg.min_pass_fraction = 0.9;
  cfg.tv_threshold = 0.04;
  cfg.length_tv_threshold = 0.02;
  for (const auto& r : calibration_suite(opt, cfg)) {
    EXPECT_TRUE(r.pass) << r.test << " statistic " << r.statistic << " threshold " << r.threshold;
  }
}

}  // namespace
}  // namespace freeshift
