#include "freeshift/network.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "freeshift/errors.hpp"
#include "freeshift/keyed_hash.hpp"

namespace freeshift {

std::size_t VertexHash::operator()(const Vertex& v) const {
  return static_cast<std::size_t>(
      hashing::combine(hashing::word_digest(v.word), static_cast<std::uint64_t>(v.index)));
}

std::string to_string(const Vertex& v, const GeneratorSet& gens) {
  std::string s = to_string(v.word, gens);
  if (v.index != 0) s += "#" + std::to_string(v.index);
  return s;
}

CayleyNetwork::CayleyNetwork(Labeling labeling, GeneratorSet gens)
    : labeling_(std::move(labeling)), gens_(std::move(gens)) {}

bool CayleyNetwork::contains(const Vertex& v) const {
  return v.index == 0 && v.word.rank() == gens_.rank();
}

std::vector<NetworkEdge> CayleyNetwork::out_edges(const Vertex& v) const {
  std::vector<NetworkEdge> out;
  for (Generator s = 0; s < gens_.rank(); ++s) out.push_back({v, {v.word.times(s, 1), 0}, s});
  return out;
}

std::vector<NetworkEdge> CayleyNetwork::in_edges(const Vertex& v) const {
  std::vector<NetworkEdge> in;
  for (Generator s = 0; s < gens_.rank(); ++s) in.push_back({{v.word.times(s, -1), 0}, v, s});
  return in;
}

CayleyNetwork network_from_config(const LazyConfig& x, const GeneratorSet& gens) {
  return CayleyNetwork([&x](const Word& g) { return x.value_at(g); }, gens);
}

CayleyNetwork network_from_field(const PairField& x) {
  return CayleyNetwork([&x](const Word& g) -> VertexLabel { return x.at(g); },
                       GeneratorSet::free_rank2());
}

CayleyNetwork network_from_labels(std::map<std::vector<std::string>, VertexLabel> labels,
                                  const GeneratorSet& gens) {
  auto table = std::make_shared<std::map<std::vector<std::string>, VertexLabel>>(std::move(labels));
  return CayleyNetwork(
      [table, gens](const Word& g) -> VertexLabel {
        const auto it = table->find(to_tokens(g, gens));
        if (it == table->end()) throw DomainError("no label for " + to_string(g, gens));
        return it->second;
      },
      gens);
}

RerootedNetwork::RerootedNetwork(const RootedNetwork& base, Vertex root)
    : base_(base), root_(std::move(root)) {
  if (!base_.contains(root_)) throw UsageError("new root is not a vertex of the network");
}

std::optional<std::size_t> FiniteBall::find(const Vertex& v) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == v) return i;
  }
  return std::nullopt;
}

FiniteBall ball(const RootedNetwork& network, std::size_t radius, std::size_t degree_cap) {
  FiniteBall b;
  b.radius = radius;
  b.edge_labels = network.edge_labels();
  b.vertex_generators = network.vertex_generators();

  std::unordered_map<Vertex, std::size_t, VertexHash> index;
  auto add_vertex = [&](const Vertex& v, std::size_t d) {
    const auto [it, fresh] = index.emplace(v, b.vertices.size());
    if (fresh) {
      b.vertices.push_back(v);
      b.distance.push_back(d);
    }
    return it->second;
  };
  auto check_degree = [&](const Vertex& v, std::size_t degree) {
    if (degree > degree_cap) {
      throw ResourceError("vertex " + to_string(v, b.vertex_generators) + " has degree " +
                          std::to_string(degree) + " above the cap " + std::to_string(degree_cap));
    }
  };

  // Each edge is recorded exactly once: from its source when the source is
  // interior, from its target when only the target is interior, and in the
  // second pass when both ends lie on the boundary.
  add_vertex(network.root(), 0);
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    const std::size_t d = b.distance[i];
    if (d == radius) continue;
    const Vertex v = b.vertices[i];
    auto out = network.out_edges(v);
    auto in = network.in_edges(v);
    check_degree(v, out.size() + in.size());
    for (const auto& e : out) {
      const std::size_t t = add_vertex(e.target, d + 1);
      b.edges.push_back({i, t, e.label});
    }
    for (const auto& e : in) {
      const std::size_t s = add_vertex(e.source, d + 1);
      if (b.distance[s] == radius) b.edges.push_back({s, i, e.label});
    }
  }
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.distance[i] != radius) continue;
    const auto out = network.out_edges(b.vertices[i]);
    check_degree(b.vertices[i], out.size());
    for (const auto& e : out) {
      const auto it = index.find(e.target);
      if (it != index.end() && b.distance[it->second] == radius) {
        b.edges.push_back({i, it->second, e.label});
      }
    }
  }
  std::sort(b.edges.begin(), b.edges.end());

  b.labels.reserve(b.vertices.size());
  for (const auto& v : b.vertices) b.labels.push_back(network.label(v));
  return b;
}

FiniteNetwork::FiniteNetwork(FiniteBall ball) : ball_(std::move(ball)) {
  if (ball_.vertices.empty()) throw UsageError("empty ball");
}

std::size_t FiniteNetwork::index_of(const Vertex& v) const {
  const auto i = ball_.find(v);
  if (!i) throw UsageError("vertex " + to_string(v, ball_.vertex_generators) + " not in network");
  return *i;
}

VertexLabel FiniteNetwork::label(const Vertex& v) const { return ball_.labels[index_of(v)]; }

std::vector<NetworkEdge> FiniteNetwork::out_edges(const Vertex& v) const {
  const std::size_t i = index_of(v);
  std::vector<NetworkEdge> out;
  for (const auto& e : ball_.edges) {
    if (e.source == i) out.push_back({v, ball_.vertices[e.target], e.label});
  }
  return out;
}

std::vector<NetworkEdge> FiniteNetwork::in_edges(const Vertex& v) const {
  const std::size_t i = index_of(v);
  std::vector<NetworkEdge> in;
  for (const auto& e : ball_.edges) {
    if (e.target == i) in.push_back({ball_.vertices[e.source], v, e.label});
  }
  return in;
}

namespace {

struct Arc {
  std::size_t other;
  Generator label;
  bool outgoing;
};

std::vector<std::vector<Arc>> adjacency(const FiniteBall& b) {
  std::vector<std::vector<Arc>> adj(b.vertices.size());
  for (const auto& e : b.edges) {
    adj[e.source].push_back({e.target, e.label, true});
    if (e.source != e.target) adj[e.target].push_back({e.source, e.label, false});
  }
  return adj;
}

class IsoSearch {
 public:
  IsoSearch(const FiniteBall& lhs, const FiniteBall& rhs)
      : lhs_(lhs), rhs_(rhs), ladj_(adjacency(lhs)), radj_(adjacency(rhs)),
        map_(lhs.vertices.size(), kUnmapped), used_(rhs.vertices.size(), false) {
    // Each non-root vertex is reached through an arc to an earlier vertex in
    // BFS order; candidates for it are the matching arcs of that vertex's image.
    parent_.assign(lhs.vertices.size(), Arc{0, 0, false});
    for (std::size_t v = 1; v < lhs.vertices.size(); ++v) {
      for (const auto& arc : ladj_[v]) {
        if (arc.other < v) {
          parent_[v] = arc;
          break;
        }
      }
    }
  }

  bool run() {
    if (lhs_.vertices.size() != rhs_.vertices.size()) return false;
    if (lhs_.edges.size() != rhs_.edges.size()) return false;
    if (lhs_.vertices.empty()) return true;
    if (!compatible(0, 0)) return false;
    assign(0, 0);
    return extend(1);
  }

 private:
  static constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

  bool compatible(std::size_t v, std::size_t w) const {
    if (used_[w]) return false;
    if (lhs_.distance[v] != rhs_.distance[w]) return false;
    if (lhs_.labels[v] != rhs_.labels[w]) return false;
    if (ladj_[v].size() != radj_[w].size()) return false;
    // Arcs between v and already mapped vertices must correspond exactly.
    std::map<std::tuple<std::size_t, Generator, bool>, int> balance;
    for (const auto& arc : ladj_[v]) {
      const std::size_t img = arc.other == v ? w : map_[arc.other];
      if (img != kUnmapped) ++balance[{img, arc.label, arc.outgoing}];
    }
    for (const auto& arc : radj_[w]) {
      const bool mapped = arc.other == w || inverse_.count(arc.other) > 0;
      if (mapped) --balance[{arc.other, arc.label, arc.outgoing}];
    }
    return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
  }

  void assign(std::size_t v, std::size_t w) {
    map_[v] = w;
    used_[w] = true;
    inverse_[w] = v;
  }

  void unassign(std::size_t v, std::size_t w) {
    map_[v] = kUnmapped;
    used_[w] = false;
    inverse_.erase(w);
  }

  bool extend(std::size_t v) {
    if (v == lhs_.vertices.size()) return true;
    const Arc& via = parent_[v];
    const std::size_t anchor = map_[via.other];
    // `via` is stored from v's side, so the matching arc at the anchor's
    // image points back to the candidate in the opposite direction.
    for (const auto& arc : radj_[anchor]) {
      if (arc.label != via.label || arc.outgoing == via.outgoing) continue;
      const std::size_t w = arc.other;
      if (!compatible(v, w)) continue;
      assign(v, w);
      if (extend(v + 1)) return true;
      unassign(v, w);
    }
    return false;
  }

  const FiniteBall& lhs_;
  const FiniteBall& rhs_;
  std::vector<std::vector<Arc>> ladj_;
  std::vector<std::vector<Arc>> radj_;
  std::vector<Arc> parent_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
  std::unordered_map<std::size_t, std::size_t> inverse_;
};

FiniteBall restrict_ball(const FiniteBall& b, std::size_t radius) {
  if (radius >= b.radius) return b;
  FiniteBall r;
  r.radius = radius;
  r.edge_labels = b.edge_labels;
  r.vertex_generators = b.vertex_generators;
  std::vector<std::size_t> remap(b.vertices.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.distance[i] > radius) continue;
    remap[i] = r.vertices.size();
    r.vertices.push_back(b.vertices[i]);
    r.distance.push_back(b.distance[i]);
    r.labels.push_back(b.labels[i]);
  }
  for (const auto& e : b.edges) {
    if (b.distance[e.source] <= radius && b.distance[e.target] <= radius) {
      r.edges.push_back({remap[e.source], remap[e.target], e.label});
    }
  }
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

}  // namespace

bool ball_isomorphic(const FiniteBall& lhs, const FiniteBall& rhs) {
  if (lhs.radius != rhs.radius) throw UsageError("balls of different radii");
  return IsoSearch(lhs, rhs).run();
}

NetworkDistance network_distance(const RootedNetwork& lhs, const RootedNetwork& rhs,
                                 std::size_t max_radius) {
  const FiniteBall bl = ball(lhs, max_radius);
  const FiniteBall br = ball(rhs, max_radius);
  for (std::size_t n = 0; n <= max_radius; ++n) {
    if (!ball_isomorphic(restrict_ball(bl, n), restrict_ball(br, n))) {
      if (n == 0) return {2, 1, false};
      return {1, n, false};
    }
  }
  return {1, max_radius + 1, true};
}

bool is_actionable(const FiniteBall& b, std::size_t label_count) {
  std::vector<std::vector<int>> out(b.vertices.size(), std::vector<int>(label_count, 0));
  std::vector<std::vector<int>> in(b.vertices.size(), std::vector<int>(label_count, 0));
  for (const auto& e : b.edges) {
    if (e.label >= label_count) return false;
    ++out[e.source][e.label];
    ++in[e.target][e.label];
  }
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.distance[i] >= b.radius) continue;
    for (std::size_t s = 0; s < label_count; ++s) {
      if (out[i][s] != 1 || in[i][s] != 1) return false;
    }
  }
  return true;
}

bool is_actionable(const RootedNetwork& network, const GeneratorSet& labels, std::size_t radius) {
  return is_actionable(ball(network, radius), labels.rank());
}

bool is_forest(const FiniteBall& b) {
  std::vector<std::size_t> parent(b.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : b.edges) {
    const std::size_t s = find(e.source);
    const std::size_t t = find(e.target);
    if (s == t) return false;
    parent[s] = t;
  }
  return true;
}

Vertex act(const RootedNetwork& network, const Vertex& v, const Word& g) {
  Vertex cur = v;
  for (const auto& letter : g.letters()) {
    const auto edges = letter.sign > 0 ? network.out_edges(cur) : network.in_edges(cur);
    const NetworkEdge* hit = nullptr;
    std::size_t found = 0;
    for (const auto& e : edges) {
      if (e.label != letter.gen) continue;
      ++found;
      hit = &e;
    }
    if (found != 1) {
      const auto& gens = network.edge_labels();
      throw ActionabilityError(to_string(cur, network.vertex_generators()),
                               gens.name(letter.gen) + (letter.sign > 0 ? "" : "'"), found);
    }
    cur = letter.sign > 0 ? hit->target : hit->source;
  }
  return cur;
}

}  // namespace freeshift
