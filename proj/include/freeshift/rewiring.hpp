#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "freeshift/bracket_scan.hpp"
#include "freeshift/field.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/network.hpp"

// Edge-rewiring orbit equivalence on F2. The b-edge leaving g is moved to
// leave the bracket partner of g along its a-ray; the rewired Cayley graph is
// still a Cayley graph of F2 and reading labels through it gives the new
// configuration.
namespace freeshift {

struct PairingScan {
  Word partner;
  /// partner = g·a^offset.
  std::int64_t offset = 0;
  /// Sites visited after g; 0 for a self partner.
  std::int64_t scan_length = 0;
  /// +1 or -1 along the a-ray, 0 for a self partner.
  int direction = 0;
};

/// x(g) = (i, i) pairs g with itself. For i < j, scans forward for the
/// first (j, i) site balancing the (i, j) sites seen so far; for i > j it
/// mirrors the scan backwards. Throws ScanBudgetExceeded.
PairingScan bracket_partner(const PairField& x, const Word& g,
                            std::int64_t budget = kDefaultScanBudget);

/// Target of the b-labeled edge leaving g after rewiring: partner(g)·b.
Word rewired_b_target(const PairField& x, const Word& g, std::int64_t budget = kDefaultScanBudget);
/// Source of the unique b-labeled edge entering v: partner(v·b^-1).
Word rewired_b_source(const PairField& x, const Word& v, std::int64_t budget = kDefaultScanBudget);

/// The rewired configuration g -> x(position(g)), where position(g) is the
/// vertex reached from e by following g through the rewired network.
/// Positions are memoized by word; the view is single-threaded.
class RewiringView final : public PairField {
 public:
  explicit RewiringView(const PairField& source, std::int64_t budget = kDefaultScanBudget);
  // Copying would silently stand in for rewiring a view a second time.
  RewiringView(const RewiringView&) = delete;
  RewiringView& operator=(const RewiringView&) = delete;

  SymbolPair at(const Word& g) const override { return source_.at(position(g)); }
  /// a-edges are never rewired, so the ray at g is the source ray at
  /// position(g).
  std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const override {
    return source_.ray(position(g));
  }
  std::size_t alphabet_size() const override { return source_.alphabet_size(); }

  const Word& position(const Word& g) const;
  std::int64_t budget() const { return budget_; }
  const PairField& source() const { return source_; }

 private:
  const PairField& source_;
  std::int64_t budget_;
  mutable std::unordered_map<Word, Word, WordHash> memo_;
};

/// Rewired network over F2: a-edges (g, ga), b-edges (g, partner(g)·b),
/// labels from x, root e. `x` must outlive it.
class RewiredNetwork final : public RootedNetwork {
 public:
  explicit RewiredNetwork(const PairField& x, std::int64_t budget = kDefaultScanBudget);

  Vertex root() const override { return {Word::identity(2), 0}; }
  bool contains(const Vertex& v) const override { return v.index == 0 && v.word.rank() == 2; }
  VertexLabel label(const Vertex& v) const override { return x_.at(v.word); }
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override;
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override;
  const GeneratorSet& edge_labels() const override { return gens_; }
  const GeneratorSet& vertex_generators() const override { return gens_; }

 private:
  const PairField& x_;
  std::int64_t budget_;
  GeneratorSet gens_ = GeneratorSet::free_rank2();
};

/// Rewired configuration on a window.
std::vector<SymbolPair> rewired_window(const PairField& x, const std::vector<Word>& window,
                                       std::int64_t budget = kDefaultScanBudget);
/// The rewiring applied twice; equals x on the window.
std::vector<SymbolPair> double_rewired_window(const PairField& x, const std::vector<Word>& window,
                                              std::int64_t budget = kDefaultScanBudget);
/// Second coordinates of the rewired configuration on a window.
std::vector<Symbol> projected_window(const PairField& x, const std::vector<Word>& window,
                                     std::int64_t budget = kDefaultScanBudget);

struct OrbitWitness {
  /// First matching candidate; identity when none matched.
  Word element;
  std::size_t matches = 0;
  std::size_t candidates = 0;
};

/// Looks for f with rewired(h·x) = f·rewired(x) on the window of the given
/// radius. Candidates are every word of length <= `cap` plus the element
/// predicted by traversal, which can be arbitrarily long along a. Reports
/// the number of matching candidates; callers expect exactly one. Throws
/// SearchFailure when no candidate matches.
OrbitWitness rewiring_orbit_witness(const PairField& x, const Word& h, std::size_t window_radius,
                                    std::size_t cap, std::int64_t budget = kDefaultScanBudget);

}  // namespace freeshift
