#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeshift/config.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/labels.hpp"

namespace freeshift {

/// Vertex of a rooted network. Networks over a group use `word` alone;
/// networks over indexed sites (g, i) also use `index`.
struct Vertex {
  Word word;
  std::int64_t index = 0;

  bool operator==(const Vertex&) const = default;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const;
};

struct NetworkEdge {
  Vertex source;
  Vertex target;
  Generator label = 0;

  bool operator==(const NetworkEdge&) const = default;
};

/// Lazy oracle for a rooted network (V, E, vertex labels, edge labels,
/// root). Most networks here are infinite, so only balls are materialized.
class RootedNetwork {
 public:
  virtual ~RootedNetwork() = default;

  virtual Vertex root() const = 0;
  virtual bool contains(const Vertex& v) const = 0;
  virtual VertexLabel label(const Vertex& v) const = 0;
  virtual std::vector<NetworkEdge> out_edges(const Vertex& v) const = 0;
  virtual std::vector<NetworkEdge> in_edges(const Vertex& v) const = 0;
  /// Names for edge labels.
  virtual const GeneratorSet& edge_labels() const = 0;
  /// Names used to print vertex words.
  virtual const GeneratorSet& vertex_generators() const = 0;
};

std::string to_string(const Vertex& v, const GeneratorSet& gens);

/// The network induced by a labeling of a free group and its generators:
/// V = group, E = {(g, gs)}, root e.
class CayleyNetwork final : public RootedNetwork {
 public:
  using Labeling = std::function<VertexLabel(const Word&)>;

  CayleyNetwork(Labeling labeling, GeneratorSet gens);

  Vertex root() const override { return {Word::identity(gens_.rank()), 0}; }
  bool contains(const Vertex& v) const override;
  VertexLabel label(const Vertex& v) const override { return labeling_(v.word); }
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override;
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override;
  const GeneratorSet& edge_labels() const override { return gens_; }
  const GeneratorSet& vertex_generators() const override { return gens_; }

 private:
  Labeling labeling_;
  GeneratorSet gens_;
};

/// Network induced by x and the generators {a, b}. `x` must outlive it.
CayleyNetwork network_from_config(const LazyConfig& x, const GeneratorSet& gens);
/// Network induced by a pair configuration and {a, b}. `x` must outlive it.
CayleyNetwork network_from_field(const PairField& x);
/// Explicit finite labeling; querying an unlabeled vertex throws DomainError.
CayleyNetwork network_from_labels(std::map<std::vector<std::string>, VertexLabel> labels,
                                  const GeneratorSet& gens);

/// Same network with a different root. `base` must outlive it.
class RerootedNetwork final : public RootedNetwork {
 public:
  RerootedNetwork(const RootedNetwork& base, Vertex root);

  Vertex root() const override { return root_; }
  bool contains(const Vertex& v) const override { return base_.contains(v); }
  VertexLabel label(const Vertex& v) const override { return base_.label(v); }
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override { return base_.out_edges(v); }
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override { return base_.in_edges(v); }
  const GeneratorSet& edge_labels() const override { return base_.edge_labels(); }
  const GeneratorSet& vertex_generators() const override { return base_.vertex_generators(); }

 private:
  const RootedNetwork& base_;
  Vertex root_;
};

struct BallEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  Generator label = 0;

  auto operator<=>(const BallEdge&) const = default;
};

/// Materialized ball of radius n around the root (distances ignore edge
/// direction). Vertex 0 is the root; vertices are in BFS order.
struct FiniteBall {
  std::size_t radius = 0;
  std::vector<Vertex> vertices;
  std::vector<std::size_t> distance;
  std::vector<VertexLabel> labels;
  std::vector<BallEdge> edges;
  GeneratorSet edge_labels = GeneratorSet::free_rank2();
  GeneratorSet vertex_generators = GeneratorSet::free_rank2();

  std::optional<std::size_t> find(const Vertex& v) const;
};

inline constexpr std::size_t kDefaultDegreeCap = 64;

/// Throws ResourceError if a vertex has more than `degree_cap` edges.
FiniteBall ball(const RootedNetwork& network, std::size_t radius,
                std::size_t degree_cap = kDefaultDegreeCap);

/// Explicit network, typically built from a materialized ball.
class FiniteNetwork final : public RootedNetwork {
 public:
  explicit FiniteNetwork(FiniteBall ball);

  Vertex root() const override { return ball_.vertices[root_]; }
  bool contains(const Vertex& v) const override { return ball_.find(v).has_value(); }
  VertexLabel label(const Vertex& v) const override;
  std::vector<NetworkEdge> out_edges(const Vertex& v) const override;
  std::vector<NetworkEdge> in_edges(const Vertex& v) const override;
  const GeneratorSet& edge_labels() const override { return ball_.edge_labels; }
  const GeneratorSet& vertex_generators() const override { return ball_.vertex_generators; }

  FiniteBall& data() { return ball_; }
  void set_root(std::size_t index) { root_ = index; }

 private:
  std::size_t index_of(const Vertex& v) const;

  FiniteBall ball_;
  std::size_t root_ = 0;
};

/// Root-preserving, label-preserving isomorphism of directed graphs, found
/// by backtracking along BFS order with edge-label pruning.
bool ball_isomorphic(const FiniteBall& lhs, const FiniteBall& rhs);

/// Truncated network distance: 1/(n+1) for the largest n <= max_radius with
/// isomorphic n-balls, 2 if the 0-balls differ. When every tested radius
/// agrees the true distance is only bounded above and `upper_bound` is set.
struct NetworkDistance {
  std::uint64_t numerator = 2;
  std::uint64_t denominator = 1;
  bool upper_bound = false;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

NetworkDistance network_distance(const RootedNetwork& lhs, const RootedNetwork& rhs,
                                 std::size_t max_radius);

/// Every vertex at distance < radius has exactly one outgoing and one
/// incoming edge for each of the `label_count` labels. Boundary vertices
/// are skipped since their edges may leave the ball.
bool is_actionable(const FiniteBall& ball, std::size_t label_count);
bool is_actionable(const RootedNetwork& network, const GeneratorSet& labels, std::size_t radius);

/// No undirected cycle (parallel edges and loops count as cycles).
bool is_forest(const FiniteBall& ball);

/// v·g: positive letters follow the unique out-edge with that label,
/// inverse letters the unique in-edge. Throws ActionabilityError.
Vertex act(const RootedNetwork& network, const Vertex& v, const Word& g);

}  // namespace freeshift
