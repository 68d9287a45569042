#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "freeshift/config.hpp"
#include "freeshift/errors.hpp"
#include "freeshift/network.hpp"

namespace freeshift {
namespace {

const GeneratorSet kF2 = GeneratorSet::free_rank2();

Word w(std::string_view text) { return parse_word(text, kF2); }

LazyConfig pair_config(std::uint64_t seed, std::size_t k = 3) {
  return LazyConfig(seed, MeasureSpec::uniform(MeasureKind::pair, k));
}

TEST(CayleyNetwork, RootLabelAndDegrees) {
  const LazyConfig x = pair_config(1);
  const auto n = network_from_config(x, kF2);
  EXPECT_EQ(n.label(n.root()), VertexLabel(x.at(Word(2))));
  for (const auto& g : ball_enumerate(kF2, 2)) {
    EXPECT_EQ(n.out_edges({g, 0}).size(), 2u);
    EXPECT_EQ(n.in_edges({g, 0}).size(), 2u);
  }
}

TEST(Ball, CountsOnF2) {
  const LazyConfig x = pair_config(2);
  const auto n = network_from_config(x, kF2);
  EXPECT_EQ(ball(n, 0).vertices.size(), 1u);
  EXPECT_EQ(ball(n, 1).vertices.size(), 5u);
  const FiniteBall b2 = ball(n, 2);
  EXPECT_EQ(b2.vertices.size(), 17u);
  // Tree with 17 vertices: 16 edges.
  EXPECT_EQ(b2.edges.size(), 16u);
  EXPECT_TRUE(is_forest(b2));
}

TEST(Ball, RadiiNest) {
  const LazyConfig x = pair_config(3);
  const auto n = network_from_config(x, kF2);
  for (std::size_t m = 0; m < 4; ++m) {
    const FiniteBall small = ball(n, m);
    const FiniteBall big = ball(n, m + 1);
    for (const auto& v : small.vertices) EXPECT_TRUE(big.find(v).has_value());
  }
}

TEST(Ball, DegreeCapThrows) {
  const LazyConfig x = pair_config(3);
  const auto n = network_from_config(x, kF2);
  EXPECT_THROW(ball(n, 2, 3), ResourceError);
}

TEST(Rerooting, IdentityAndTwice) {
  const LazyConfig x = pair_config(4);
  const auto n = network_from_config(x, kF2);
  const RerootedNetwork same(n, n.root());
  EXPECT_TRUE(ball_isomorphic(ball(n, 3), ball(same, 3)));
  const RerootedNetwork once(n, {w("a b"), 0});
  const RerootedNetwork twice(once, n.root());
  EXPECT_TRUE(ball_isomorphic(ball(n, 3), ball(twice, 3)));
  EXPECT_THROW(RerootedNetwork(n, {Word(3), 0}), UsageError);
}

TEST(Rerooting, ShiftedConfigMatchesRerootedNetwork) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LazyConfig x = pair_config(seed);
    for (const auto& g : {w("a"), w("b' a"), w("a a b'")}) {
      const ShiftedPairField gx(x, g);
      const auto lhs = network_from_field(gx);
      const auto base = network_from_field(x);
      const RerootedNetwork rhs(base, {g.inverse(), 0});
      const NetworkDistance d = network_distance(lhs, rhs, 4);
      EXPECT_TRUE(d.upper_bound);
      EXPECT_EQ(d.denominator, 5u);
    }
  }
}

TEST(Isomorphism, SelfAndChangedLabel) {
  std::map<std::vector<std::string>, VertexLabel> labels;
  for (const auto& g : ball_enumerate(kF2, 3)) labels[to_tokens(g, kF2)] = Symbol{1};
  const auto n1 = network_from_labels(labels, kF2);
  labels[{"a", "b"}] = Symbol{2};
  const auto n2 = network_from_labels(labels, kF2);
  const FiniteBall b1 = ball(n1, 2);
  EXPECT_TRUE(ball_isomorphic(b1, b1));
  EXPECT_FALSE(ball_isomorphic(b1, ball(n2, 2)));
  EXPECT_THROW(ball_isomorphic(b1, ball(n1, 1)), UsageError);
}

TEST(Isomorphism, CayleyBallsIsomorphicIffLabelsAgree) {
  // Root-preserving label-preserving maps between Cayley balls fix every
  // word, so the oracle is equality of the label patterns.
  const MeasureSpec m = MeasureSpec::uniform(MeasureKind::plain, 2);
  const auto words = ball_enumerate(kF2, 1);
  std::size_t agree = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const LazyConfig x(2 * s, m);
    const LazyConfig y(2 * s + 1, m);
    const bool same = std::all_of(words.begin(), words.end(),
                                  [&](const Word& g) { return x.symbol_at(g) == y.symbol_at(g); });
    agree += same;
    EXPECT_EQ(ball_isomorphic(ball(network_from_config(x, kF2), 1),
                              ball(network_from_config(y, kF2), 1)),
              same);
  }
  EXPECT_GT(agree, 0u);
}

TEST(Distance, Examples) {
  const LazyConfig x = pair_config(5);
  const auto n = network_from_config(x, kF2);
  const NetworkDistance self = network_distance(n, n, 3);
  EXPECT_LE(self.value(), 1.0 / 4.0);
  EXPECT_TRUE(self.upper_bound);

  std::map<std::vector<std::string>, VertexLabel> l1;
  std::map<std::vector<std::string>, VertexLabel> l2;
  for (const auto& g : ball_enumerate(kF2, 2)) {
    l1[to_tokens(g, kF2)] = Symbol{1};
    l2[to_tokens(g, kF2)] = Symbol{1};
  }
  l2[{}] = Symbol{2};
  EXPECT_EQ(network_distance(network_from_labels(l1, kF2), network_from_labels(l2, kF2), 1).value(),
            2.0);
  l2[{}] = Symbol{1};
  l2[{"b", "b"}] = Symbol{2};
  const NetworkDistance d = network_distance(network_from_labels(l1, kF2), network_from_labels(l2, kF2), 2);
  EXPECT_EQ(d.denominator, 2u);
  EXPECT_FALSE(d.upper_bound);
}

TEST(Distance, UltrametricOnRandomTriples) {
  // Composition of isomorphisms: d(N1, N3) <= max(d(N1, N2), d(N2, N3)).
  const MeasureSpec m = MeasureSpec::uniform(MeasureKind::plain, 2);
  for (std::uint64_t s = 0; s < 60; ++s) {
    const LazyConfig x1(3 * s, m), x2(3 * s + 1, m), x3(3 * s + 2, m);
    const auto n1 = network_from_config(x1, kF2);
    const auto n2 = network_from_config(x2, kF2);
    const auto n3 = network_from_config(x3, kF2);
    const double d12 = network_distance(n1, n2, 2).value();
    const double d23 = network_distance(n2, n3, 2).value();
    const double d13 = network_distance(n1, n3, 2).value();
    EXPECT_LE(d13, std::max(d12, d23));
  }
}

TEST(Actionable, CayleyAndDuplicatedLabel) {
  const LazyConfig x = pair_config(6);
  const auto n = network_from_config(x, kF2);
  EXPECT_TRUE(is_actionable(n, kF2, 3));

  FiniteBall b;
  b.radius = 1;
  b.vertices = {{Word(2), 0}, {w("a"), 0}, {w("b"), 0}};
  b.distance = {0, 1, 1};
  b.labels = {Symbol{1}, Symbol{1}, Symbol{1}};
  b.edges = {{0, 1, kGenA}, {0, 2, kGenA}};
  EXPECT_FALSE(is_actionable(b, 2));
}

TEST(Act, CayleyTraversal) {
  const LazyConfig x = pair_config(7);
  const auto n = network_from_config(x, kF2);
  for (const auto& g : ball_enumerate(kF2, 4)) {
    EXPECT_EQ(act(n, n.root(), g).word, g);
    for (const auto& s : {w("a"), w("b")}) {
      EXPECT_EQ(act(n, act(n, {g, 0}, s), s.inverse()).word, g);
    }
  }
  EXPECT_EQ(act(n, n.root(), Word(2)), n.root());
}

TEST(Act, MissingEdgeThrows) {
  FiniteBall b;
  b.radius = 1;
  b.vertices = {{Word(2), 0}, {w("a"), 0}};
  b.distance = {0, 1};
  b.labels = {Symbol{1}, Symbol{1}};
  b.edges = {{0, 1, kGenA}};
  const FiniteNetwork n(b);
  EXPECT_EQ(act(n, n.root(), w("a")).word, w("a"));
  EXPECT_THROW(act(n, n.root(), w("b")), ActionabilityError);
}

TEST(Forest, DetectsCycle) {
  FiniteBall b;
  b.radius = 1;
  b.vertices = {{Word(2), 0}, {w("a"), 0}};
  b.distance = {0, 1};
  b.labels = {Symbol{1}, Symbol{1}};
  b.edges = {{0, 1, kGenA}};
  EXPECT_TRUE(is_forest(b));
  b.edges.push_back({1, 0, kGenB});
  EXPECT_FALSE(is_forest(b));
  b.edges = {{0, 0, kGenA}};
  EXPECT_FALSE(is_forest(b));
}

}  // namespace
}  // namespace freeshift
