#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeshift/labels.hpp"

// Empirical tests for finite-window marginals of random configurations.
namespace freeshift {

/// Encoded value at one window site (a symbol, a pair, or a flattened run).
using SiteOutcome = std::vector<std::int32_t>;
using Outcome = std::vector<SiteOutcome>;

SiteOutcome encode(Symbol s);
SiteOutcome encode(const SymbolPair& p);
SiteOutcome encode(const RunLabel& r);
RunLabel decode_run(const SiteOutcome& o);

/// Outcomes of independent trials in seed order. Aborted trials (scan
/// budget exhausted) are excluded and counted.
struct Sample {
  std::vector<std::string> window;
  std::uint64_t seed_base = 0;
  std::uint64_t attempted = 0;
  std::uint64_t aborts = 0;
  std::vector<Outcome> outcomes;

  double abort_rate() const;
};

using Sampler = std::function<Outcome(std::uint64_t seed)>;

/// Runs seeds seed_base .. seed_base + trials - 1.
Sample collect(std::vector<std::string> window, const Sampler& sampler, std::uint64_t trials,
               std::uint64_t seed_base);

struct EmpiricalTable {
  std::vector<std::string> window;
  std::map<Outcome, std::uint64_t> counts;
  std::uint64_t trials = 0;

  void add(const Outcome& o) {
    ++counts[o];
    ++trials;
  }
  /// Associative and order independent.
  void merge(const EmpiricalTable& other);
};

EmpiricalTable tabulate(const std::vector<std::string>& window, const std::vector<Outcome>& outcomes,
                        std::size_t begin = 0, std::size_t end = static_cast<std::size_t>(-1));

/// Probability of an outcome; must be defined on every observed outcome.
using Reference = std::function<double(const Outcome&)>;
using SiteLaw = std::function<double(const SiteOutcome&)>;

/// Product of per-site laws.
Reference product_law(std::vector<SiteLaw> sites);

/// Total variation distance between the empirical law and the reference.
/// Unobserved outcomes contribute their reference mass, so the reference
/// may have infinite support: TV = (sum_obs |p_hat - p| + 1 - sum_obs p) / 2.
double tv_distance(const EmpiricalTable& table, const Reference& reference);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  /// Coarsening could not reach the minimum expected count with at least
  /// two categories per side. Distinct from a failure.
  bool inconclusive = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Pearson test of independence between two blocks of window sites. Rare
/// categories are merged, smallest first, until every expected count is at
/// least `min_expected`.
ChiSquareResult chi_square_independence(const EmpiricalTable& table,
                                        const std::vector<std::size_t>& block_a,
                                        const std::vector<std::size_t>& block_b,
                                        double min_expected = 5.0);

/// Goodness of fit of observed counts against probabilities over the same
/// categories; trailing categories are pooled into a tail bucket until the
/// expected count reaches `min_expected`. `tail_mass` is the reference mass
/// beyond the listed categories and is folded into the last bucket.
ChiSquareResult chi_square_fit(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& probabilities, double tail_mass,
                               double min_expected = 5.0);

struct LengthLawFit {
  ChiSquareResult chi_square;
  double tv = 0.0;
  double mean = 0.0;
  std::uint64_t samples = 0;
};

/// Run sizes (number of entries, >= 1) against P(m) = (1/K)(1-1/K)^(m-1).
LengthLawFit length_law_fit(const std::vector<std::uint64_t>& sizes, std::size_t alphabet_size);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

/// One-sample Kolmogorov-Smirnov test against U[0, 1] at level 0.01
/// (asymptotic critical value 1.63 / sqrt(n)).
KsResult ks_uniform(std::vector<double> values);

struct TestReport {
  std::string test;
  std::vector<std::string> window;
  std::uint64_t trials = 0;
  std::uint64_t aborts = 0;
  std::string statistic_name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed_base = 0;
  double abort_limit = 1e-3;
  /// Bracket scans started, when known. With scans > 0 the abort rate is
  /// per scan, otherwise per attempted trial.
  std::uint64_t scans = 0;

  /// Abort rate above the limit makes the pass flag unreliable.
  bool degraded() const;
  double abort_rate() const;
};

}  // namespace freeshift
