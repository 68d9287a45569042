#include <gtest/gtest.h>

#include <cmath>

#include "freeshift/checks.hpp"
#include "freeshift/config.hpp"
#include "freeshift/errors.hpp"
#include "freeshift/rewiring.hpp"
#include "support.hpp"

namespace freeshift {
namespace {

using testing::a_pow;
using testing::RayPairField;

const GeneratorSet kF2 = GeneratorSet::free_rank2();

Word w(std::string_view text) { return parse_word(text, kF2); }

LazyConfig pair_config(std::uint64_t seed, std::size_t k = 2) {
  return LazyConfig(seed, MeasureSpec::uniform(MeasureKind::pair, k));
}

// Oracle: literal scan for the least n > 0 with x(ga^n) = (j, i) and equal
// counts of (i, j) and (j, i) over offsets 0..n.
std::int64_t literal_partner_offset(const PairField& x, const Word& g) {
  const SymbolPair p = x.at(g);
  if (p.first == p.second) return 0;
  const int dir = p.first < p.second ? 1 : -1;
  std::int64_t open = 0, close = 0;
  for (std::int64_t n = 0;; ++n) {
    const SymbolPair q = x.at(g.times(kGenA, dir * n));
    open += q == p;
    close += q == p.swapped();
    if (n > 0 && q == p.swapped() && open == close) return dir * n;
  }
}

TEST(BracketPartner, SelfPair) {
  const RayPairField x(3, {{0, {3, 3}}}, {2, 2});
  const PairingScan s = bracket_partner(x, Word(2));
  EXPECT_EQ(s.partner, Word(2));
  EXPECT_EQ(s.direction, 0);
}

TEST(BracketPartner, AdjacentClose) {
  const RayPairField x(3, {{0, {1, 2}}, {1, {2, 1}}}, {3, 3});
  EXPECT_EQ(bracket_partner(x, Word(2)).partner, a_pow(1));
}

TEST(BracketPartner, NestedBrackets) {
  const RayPairField x(3, {{0, {1, 2}}, {1, {1, 2}}, {2, {2, 1}}, {3, {2, 1}}}, {3, 3});
  EXPECT_EQ(bracket_partner(x, Word(2)).partner, a_pow(3));
  EXPECT_EQ(bracket_partner(x, a_pow(1)).partner, a_pow(2));
  EXPECT_EQ(bracket_partner(x, a_pow(3)).partner, Word(2));
  EXPECT_EQ(bracket_partner(x, a_pow(2)).partner, a_pow(1));
}

TEST(BracketPartner, BackwardScan) {
  const RayPairField x(3, {{-1, {1, 2}}, {0, {2, 1}}}, {3, 3});
  const PairingScan s = bracket_partner(x, Word(2));
  EXPECT_EQ(s.partner, a_pow(-1));
  EXPECT_EQ(s.direction, -1);
}

TEST(BracketPartner, BudgetExceeded) {
  const RayPairField x(3, {{0, {1, 2}}}, {3, 3});
  EXPECT_THROW(bracket_partner(x, Word(2), 1000), ScanBudgetExceeded);
}

TEST(BracketPartner, MatchesLiteralScanOnRandomConfigs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LazyConfig x = pair_config(seed, 3);
    for (const auto& g : ball_enumerate(kF2, 2)) {
      try {
        const PairingScan s = bracket_partner(x, g, 10000);
        EXPECT_EQ(s.offset, literal_partner_offset(x, g));
        EXPECT_EQ(bracket_partner(x, s.partner, 10000).partner, g);
        EXPECT_EQ(x.at(s.partner), x.at(g).swapped());
      } catch (const ScanBudgetExceeded&) {
      }
    }
  }
}

TEST(Traversal, Examples) {
  const LazyConfig x = pair_config(3);
  const RewiringView v(x);
  EXPECT_EQ(v.position(a_pow(5)), a_pow(5));
  EXPECT_EQ(v.position(Word(2)), Word(2));
  EXPECT_EQ(v.position(w("b")), bracket_partner(x, Word(2)).partner.times(kGenB, 1));
}

TEST(Rewiring, EdgeTargets) {
  const RayPairField self(3, {{0, {2, 2}}}, {3, 3});
  EXPECT_EQ(rewired_b_target(self, Word(2)), w("b"));
  const RayPairField paired(3, {{0, {1, 2}}, {1, {2, 1}}}, {3, 3});
  EXPECT_EQ(rewired_b_target(paired, Word(2)), w("a b"));
  EXPECT_EQ(rewired_b_source(paired, w("a b")), Word(2));
}

TEST(Rewiring, Equivariance) {
  // With (h.x)(g) = x(h^-1 g): P(h.x, g) = h P(x, h^-1 g).
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const LazyConfig x = pair_config(seed, 3);
    const Word h = random_word(rng, 2, 3);
    const ShiftedPairField hx(x, h);
    for (const auto& g : ball_enumerate(kF2, 2)) {
      try {
        EXPECT_EQ(rewired_b_target(hx, g, 100000), h * rewired_b_target(x, h.inverse() * g, 100000));
      } catch (const ScanBudgetExceeded&) {
      }
    }
  }
}

TEST(Omega, FixesTheARay) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LazyConfig x = pair_config(seed, 3);
    const RewiringView v(x);
    for (std::int64_t n = -10; n <= 10; ++n) EXPECT_EQ(v.at(a_pow(n)), x.at(a_pow(n)));
  }
}

TEST(Omega, CoordinateIdentityAndReconstruction) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LazyConfig x = pair_config(seed, 2);
    try {
      const RewiringView v(x);
      for (const auto& g : ball_enumerate(kF2, 3)) {
        EXPECT_EQ(v.at(g.times(kGenB, 1)).first, v.at(g).second);
        EXPECT_EQ(v.at(g).first, v.at(g.times(kGenB, -1)).second);
      }
    } catch (const ScanBudgetExceeded&) {
    }
  }
}

TEST(Omega, InvolutionOnWindow) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LazyConfig x = pair_config(seed, 3);
    const RewiringView once(x);
    const RewiringView twice(static_cast<const PairField&>(once));
    try {
      EXPECT_EQ(twice.at(w("a b'")), x.at(w("a b'")));
      EXPECT_EQ(twice.at(Word(2)), x.at(Word(2)));
      const auto window = ball_enumerate(kF2, 3);
      std::vector<SymbolPair> direct;
      for (const auto& g : window) direct.push_back(x.at(g));
      EXPECT_EQ(double_rewired_window(x, window), direct);
    } catch (const ScanBudgetExceeded&) {
    }
  }
}

TEST(RewiredNetwork, ActionableAndMatchesTraversal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LazyConfig x = pair_config(seed, 2);
    const RewiredNetwork n(x);
    const RewiringView v(x);
    try {
      EXPECT_TRUE(is_actionable(n, kF2, 3));
      for (const auto& g : ball_enumerate(kF2, 3)) EXPECT_EQ(act(n, n.root(), g).word, v.position(g));
    } catch (const ScanBudgetExceeded&) {
    }
  }
}

TEST(Projection, MarginalsMatchBaseLaw) {
  // Two symbols: TV = |p_hat - 1/2|. 10^5 seeds at e (sd 0.0016) and
  // 2 x 10^4 at ab (sd 0.0035).
  std::uint64_t ones_e = 0;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    ones_e += projected_window(pair_config(seed), {Word(2)}).front() == 1;
  }
  EXPECT_LE(std::abs(ones_e / 1e5 - 0.5), 0.01);
  std::uint64_t ones_ab = 0;
  std::uint64_t done = 0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    try {
      ones_ab += projected_window(pair_config(seed), {w("a b")}).front() == 1;
      ++done;
    } catch (const ScanBudgetExceeded&) {
    }
  }
  EXPECT_GE(done, 19900u);
  EXPECT_LE(std::abs(static_cast<double>(ones_ab) / done - 0.5), 0.015);
}

TEST(OrbitWitness, IdentityMove) {
  const LazyConfig x = pair_config(8);
  const OrbitWitness f = rewiring_orbit_witness(x, Word(2), 2, 2);
  EXPECT_EQ(f.element, Word(2));
  EXPECT_EQ(f.matches, 1u);
}

TEST(Checks, SmallRuns) {
  CheckOptions opt;
  opt.trials = 10;
  opt.replace_aborted = true;
  for (const auto& check : {check_bracket_involution, check_rewiring_involution,
                            check_coordinate_identity, check_rewired_actionable,
                            check_rewiring_orbit, check_rerooting}) {
    const CheckTally t = check(opt);
    EXPECT_TRUE(t.pass()) << t.name << ": " << t.first_failure;
    EXPECT_EQ(t.completed, 10u) << t.name;
  }
}

TEST(Checks, NonUniformLaw) {
  CheckOptions opt;
  opt.alphabet_size = 3;
  opt.law = {0.2, 0.3, 0.5};
  opt.trials = 10;
  opt.replace_aborted = true;
  for (const auto& check : {check_rewiring_involution, check_coordinate_identity}) {
    const CheckTally t = check(opt);
    EXPECT_TRUE(t.pass()) << t.name << ": " << t.first_failure;
  }
}

}  // namespace
}  // namespace freeshift
