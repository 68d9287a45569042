#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "freeshift/bracket_scan.hpp"
#include "freeshift/config.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/statcheck.hpp"

// Seeded property checks over many random configurations. Each check runs
// one trial per seed and tallies completed trials, aborted trials (scan
// budget exhausted) and failures.
namespace freeshift {

struct CheckOptions {
  std::size_t alphabet_size = 2;
  /// Empty means uniform.
  std::vector<double> law;
  std::uint64_t seed_base = 1;
  std::uint64_t trials = 100;
  std::size_t radius = 3;
  std::int64_t budget = kDefaultScanBudget;
  /// Keep drawing seeds until `trials` trials complete (at most
  /// `max_attempt_factor` * trials seeds).
  bool replace_aborted = false;
  std::uint64_t max_attempt_factor = 4;

  MeasureSpec measure(MeasureKind kind) const;
};

struct CheckTally {
  std::string name;
  std::uint64_t completed = 0;
  std::uint64_t aborts = 0;
  std::uint64_t failures = 0;
  std::uint64_t seeds_used = 0;
  /// Bracket scans started over all trials, aborted ones included.
  std::uint64_t scans = 0;
  std::string first_failure;

  bool pass() const { return completed > 0 && failures == 0; }
  /// Aborted trials per bracket scan (each abort ends its trial).
  double abort_rate() const;
};

/// Uniformly random length in [0, max_length], then uniformly random
/// letters avoiding cancellation.
Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_length);

/// partner(partner(g)) = g for random g, |g| <= 6.
CheckTally check_bracket_involution(const CheckOptions& opt);
/// The per-symbol pairing is an involution, random g and k.
CheckTally check_symbol_involution(const CheckOptions& opt);
/// Rewiring twice reproduces x on the F2 ball of the given radius.
CheckTally check_rewiring_involution(const CheckOptions& opt);
/// first(rewired(gb)) = second(rewired(g)) on the ball.
CheckTally check_coordinate_identity(const CheckOptions& opt);
/// Rewired network actionable on the ball; traversal matches the
/// position recursion for |g| <= 4.
CheckTally check_rewired_actionable(const CheckOptions& opt);
/// A unique witness per generator move.
CheckTally check_rewiring_orbit(const CheckOptions& opt);
/// Contracted network ball is acyclic and actionable.
CheckTally check_contracted_tree(const CheckOptions& opt);
/// Expanded network (of the contracted configuration) is actionable.
CheckTally check_expanded_actionable(const CheckOptions& opt);
/// expand(contract(y)) = y on the F2 ball of the given radius.
CheckTally check_roundtrip_y(const CheckOptions& opt);
/// contract(expand(z)) = z on the F_T ball of the given radius, z i.i.d.
CheckTally check_roundtrip_z(const CheckOptions& opt);
/// A unique witness for moves along b and to neighboring run starts.
CheckTally check_contraction_orbit(const CheckOptions& opt);
/// The network of g·x equals the network of x rerooted at g^-1 (radius
/// from options, |g| <= 4).
CheckTally check_rerooting(const CheckOptions& opt);

/// Statistical samplers. Every trial uses one seed.
/// Second coordinates of the rewired configuration on `window`.
Sample sample_projected(const CheckOptions& opt, const std::vector<Word>& window);
/// Second coordinates of x itself (direct product-law reference).
Sample sample_direct_pairs(const CheckOptions& opt, const std::vector<Word>& window);
/// Contracted configuration of y ~ conditioned law on an F_T window.
Sample sample_contracted(const CheckOptions& opt, const std::vector<Word>& window);
/// Directly sampled i.i.d. run labels on an F_T window.
Sample sample_direct_runs(const CheckOptions& opt, const std::vector<Word>& window);

struct BatchIndependence {
  std::size_t batches = 0;
  std::size_t passed = 0;
  std::size_t inconclusive = 0;
  std::vector<double> p_values;
};

/// Chi-square independence in consecutive batches of the sample.
BatchIndependence batch_independence(const Sample& s, std::size_t batches,
                                     const std::vector<std::size_t>& block_a,
                                     const std::vector<std::size_t>& block_b, double alpha,
                                     const std::function<Outcome(const Outcome&)>& coarsen = {});

struct SuiteConfig {
  std::size_t batches = 100;
  double alpha = 1e-3;
  /// Fraction of batches whose independence p-value must exceed alpha.
  double min_pass_fraction = 0.99;
  /// Overrides the default TV bound 2 * sqrt(|outcomes| / trials) for
  /// finite outcome spaces.
  std::optional<double> tv_threshold;
  /// TV bound for the run-size law.
  double length_tv_threshold = 0.01;
  double abort_limit = 1e-3;
};

/// Window {e, a, b, ab, a^-1}: TV of the projected rewired configuration
/// against the product law and batched independence of {e, a, a^-1} vs
/// {b, ab}. With `direct`, samples x's own second coordinates instead.
std::vector<TestReport> projected_suite(const CheckOptions& opt, const SuiteConfig& cfg,
                                        bool direct = false);

/// Window {e, s0, s1, s2}: TV of the run label at e against the closed-form
/// law, TV and chi-square of the run-size law, batched independence of
/// {e, s0} vs {s1, s2}. With `direct`, samples i.i.d. run labels instead.
std::vector<TestReport> contracted_suite(const CheckOptions& opt, const SuiteConfig& cfg,
                                         bool direct = false);

/// Second coordinates of x with the b-site copying e and the ab-site
/// copying a: a planted dependence across the independence blocks.
Sample sample_planted_pairs(const CheckOptions& opt);
/// I.i.d. run labels truncated to one entry and copied to every site.
Sample sample_planted_runs(const CheckOptions& opt);

/// Both direct suites (must pass) followed by the same tests on planted
/// samples, reported as "<test>_rejected" and passing iff the test failed.
std::vector<TestReport> calibration_suite(const CheckOptions& opt, const SuiteConfig& cfg);

}  // namespace freeshift
