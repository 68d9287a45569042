#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "freeshift/bracket_scan.hpp"
#include "freeshift/field.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/network.hpp"

// Tree-contraction stable orbit equivalence. Sites of F2 whose first
// coordinate is the distinguished symbol become vertices of a tree whose
// edges carry labels 0..K; each vertex is labeled by the run of pairs read
// along its a-ray up to the next such site. Expansion unfolds the runs
// again and is the exact inverse.
namespace freeshift {

/// Per-symbol pairing along the a-ray. Identity when k = 1 or when the
/// first coordinate at g is neither 1 nor k; otherwise a bracket scan with
/// 1 opening and k closing (forward from a 1-site, backward from a k-site).
Word symbol_partner(const PairField& y, const Word& g, Symbol k,
                    std::int64_t budget = kDefaultScanBudget);

/// The pairs y(g·a^m), m = 0..n, where n + 1 is the first positive offset
/// with first coordinate 1. Requires y1(g) = 1.
RunLabel run_label_at(const PairField& y, const Word& g, std::int64_t budget = kDefaultScanBudget);

/// Offset of the next (step = +1) or previous (step = -1) site on g's a-ray
/// with first coordinate 1.
std::int64_t next_run_start(const PairField& y, const Word& g, int step,
                            std::int64_t budget = kDefaultScanBudget);

/// Target of the k-labeled tree edge leaving vertex v.
Word contracted_target(const PairField& y, const Word& v, Symbol k,
                       std::int64_t budget = kDefaultScanBudget);
/// Source of the k-labeled tree edge entering vertex v.
Word contracted_source(const PairField& y, const Word& v, Symbol k,
                       std::int64_t budget = kDefaultScanBudget);

/// The contracted configuration on F_T: f -> run label at the vertex
/// reached by following f from e through the tree. Requires y1(e) = 1
/// (DomainError otherwise). Positions are memoized; single-threaded.
class ContractionView final : public RunField {
 public:
  explicit ContractionView(const PairField& y, std::int64_t budget = kDefaultScanBudget);

  RunLabel at(const Word& f) const override { return run_label_at(y_, position(f), budget_); }
  std::unique_ptr<Ray<RunLabel>> ray(const Word& f) const override;
  std::size_t alphabet_size() const override { return y_.alphabet_size(); }

  /// Vertex of F2 reached by f.
  const Word& position(const Word& f) const;
  const GeneratorSet& generators() const { return gens_; }

 private:
  const PairField& y_;
  std::int64_t budget_;
  GeneratorSet gens_;
  mutable std::unordered_map<Word, Word, WordHash> memo_;
};

/// The contracted tree network: vertices are F2 words with y1 = 1, edges
/// labeled 0..K as above, labels are run labels, root e.
class ContractedNetwork final : public RootedNetwork {
 public:
  explicit ContractedNetwork(const PairField& y, std::int64_t budget = kDefaultScanBudget);

  Vertex root() const override { return {Word::identity(2), 0}; }
  bool contains(const Vertex& v) const override;
  VertexLabel label(const Vertex& v) const override { return run_label_at(y_, v.word, budget_); }
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override;
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override;
  const GeneratorSet& edge_labels() const override { return tree_; }
  const GeneratorSet& vertex_generators() const override { return f2_; }

 private:
  const PairField& y_;
  std::int64_t budget_;
  GeneratorSet tree_;
  GeneratorSet f2_ = GeneratorSet::free_rank2();
};

/// (base, index) with index <= len of the run label at base.
struct IndexedSite {
  Word base;
  std::int64_t index = 0;

  bool operator==(const IndexedSite&) const = default;
};

enum class SiteOrder { less, equal, greater, incomparable };

/// (g, i) < (h, j) iff h = g·s0^n for some n > 0, or g = h and i < j.
SiteOrder compare_sites(const IndexedSite& p, const IndexedSite& q);

/// Forward site pairing from (f, 0): the first later site with first
/// coordinate k at which 1-sites and k-sites balance. (f, 0) when k = 1.
IndexedSite site_partner(const RunField& z, const Word& f, Symbol k,
                         std::int64_t budget = kDefaultScanBudget);
/// Inverse of site_partner for a site v with first coordinate k != 1.
/// Throws DomainError if the balancing site is not the start of a cell.
Word site_partner_preimage(const RunField& z, const IndexedSite& v,
                           std::int64_t budget = kDefaultScanBudget);

/// Pair at a site; DomainError if the index is out of range.
SymbolPair site_value(const RunField& z, const IndexedSite& v);

/// Target of the b-labeled edge leaving site v of the expanded network.
IndexedSite expanded_b_target(const RunField& z, const IndexedSite& v,
                              std::int64_t budget = kDefaultScanBudget);
/// Source of the b-labeled edge entering site v.
IndexedSite expanded_b_source(const RunField& z, const IndexedSite& v,
                              std::int64_t budget = kDefaultScanBudget);
/// Site n steps along the flattened s0-ray of cells.
IndexedSite expanded_a_step(const RunField& z, const IndexedSite& v, std::int64_t n);

/// The expanded configuration on F2: g -> pair at the site reached by
/// following g from (e, 0). Sites are memoized; single-threaded.
class ExpansionView final : public PairField {
 public:
  explicit ExpansionView(const RunField& z, std::int64_t budget = kDefaultScanBudget);

  SymbolPair at(const Word& g) const override { return site_value(z_, site_of(g)); }
  std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const override;
  std::size_t alphabet_size() const override { return z_.alphabet_size(); }

  const IndexedSite& site_of(const Word& g) const;

 private:
  const RunField& z_;
  std::int64_t budget_;
  mutable std::unordered_map<Word, IndexedSite, WordHash> memo_;
};

/// The expanded network: vertices (f, i) (Vertex.word = f, Vertex.index =
/// i), a-edges through the flattened cells, b-edges through site pairings,
/// root (e, 0).
class ExpandedNetwork final : public RootedNetwork {
 public:
  explicit ExpandedNetwork(const RunField& z, std::int64_t budget = kDefaultScanBudget);

  Vertex root() const override;
  bool contains(const Vertex& v) const override;
  VertexLabel label(const Vertex& v) const override;
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override;
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override;
  const GeneratorSet& edge_labels() const override { return f2_; }
  const GeneratorSet& vertex_generators() const override { return tree_; }

 private:
  const RunField& z_;
  std::int64_t budget_;
  GeneratorSet tree_;
  GeneratorSet f2_ = GeneratorSet::free_rank2();
};

/// Network induced by a run-label configuration and the tree generators.
CayleyNetwork network_from_runs(const RunField& z);

/// Probability of a single run label under the contracted law for the
/// uniform base law on K symbols: K^-(2n+2) with n = len, 0 when xi is not
/// run shaped.
double run_label_pmf(std::size_t alphabet_size, const RunLabel& xi);
/// Law of the number of entries: P(m) = (1/K)(1 - 1/K)^(m-1), m >= 1.
double run_size_pmf(std::size_t alphabet_size, std::size_t entries);

/// Independent i.i.d. run labels on F_T sampled directly: (1, j0) followed
/// by uniform pairs until a first coordinate of 1 is drawn.
class IidRunField final : public RunField {
 public:
  IidRunField(std::uint64_t seed, std::size_t alphabet_size);

  RunLabel at(const Word& f) const override;
  std::unique_ptr<Ray<RunLabel>> ray(const Word& f) const override;
  std::size_t alphabet_size() const override { return alphabet_size_; }

  RunLabel at_digest(std::uint64_t digest) const;

 private:
  std::size_t alphabet_size_;
  std::uint64_t first_stream_;
  std::uint64_t second_stream_;
};

/// Run-label configuration known on finitely many words, e.g. read from a
/// file. Queries outside the table throw DomainError.
class TableRunField final : public RunField {
 public:
  TableRunField(std::size_t alphabet_size, std::unordered_map<Word, RunLabel, WordHash> table);

  RunLabel at(const Word& f) const override;
  std::unique_ptr<Ray<RunLabel>> ray(const Word& f) const override;
  std::size_t alphabet_size() const override { return alphabet_size_; }

 private:
  std::size_t alphabet_size_;
  std::unordered_map<Word, RunLabel, WordHash> table_;
};

struct TreeWitness {
  Word element;
  std::size_t matches = 0;
  std::size_t candidates = 0;
};

/// Exhaustive search for f in F_T, |f| <= cap, with
/// contracted(h·y) = f·contracted(y) on the F_T window of the given radius.
/// Requires y1(h^-1) = 1.
TreeWitness contraction_orbit_witness(const PairField& y, const Word& h, std::size_t window_radius,
                                      std::size_t cap, std::int64_t budget = kDefaultScanBudget);

}  // namespace freeshift
