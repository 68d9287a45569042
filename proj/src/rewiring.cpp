#include "freeshift/rewiring.hpp"

#include <algorithm>

#include "freeshift/errors.hpp"

namespace freeshift {

PairingScan bracket_partner(const PairField& x, const Word& g, std::int64_t budget) {
  const SymbolPair start = x.at(g);
  if (start.first == start.second) return {g, 0, 0, 0};
  const int step = start.first < start.second ? 1 : -1;
  const SymbolPair close = start.swapped();
  auto ray = x.ray(g);
  const auto offset = first_return(
      [&](std::int64_t n) {
        const SymbolPair v = ray->at(n);
        if (v == start) return 1;
        if (v == close) return -1;
        return 0;
      },
      step, budget);
  if (!offset) throw ScanBudgetExceeded(debug_string(g), step, budget);
  return {g.times(kGenA, *offset), *offset, *offset * step, step};
}

Word rewired_b_target(const PairField& x, const Word& g, std::int64_t budget) {
  return bracket_partner(x, g, budget).partner.times(kGenB, 1);
}

Word rewired_b_source(const PairField& x, const Word& v, std::int64_t budget) {
  return bracket_partner(x, v.times(kGenB, -1), budget).partner;
}

RewiringView::RewiringView(const PairField& source, std::int64_t budget)
    : source_(source), budget_(budget) {
  if (budget <= 0) throw UsageError("scan budget must be positive");
}

const Word& RewiringView::position(const Word& g) const {
  if (g.rank() != 2) throw UsageError("rewiring acts on F2");
  if (const auto it = memo_.find(g); it != memo_.end()) return it->second;
  Word pos(2);
  if (!g.is_identity()) {
    const Syllable last = g.syllables().back();
    if (last.gen == kGenA) {
      pos = position(g.without_trailing(kGenA)).times(kGenA, last.power);
    } else {
      const int sign = last.power > 0 ? 1 : -1;
      const Word& prev = position(g.times(kGenB, -sign));
      pos = sign > 0 ? rewired_b_target(source_, prev, budget_)
                     : rewired_b_source(source_, prev, budget_);
    }
  }
  return memo_.emplace(g, std::move(pos)).first->second;
}

RewiredNetwork::RewiredNetwork(const PairField& x, std::int64_t budget) : x_(x), budget_(budget) {}

std::vector<NetworkEdge> RewiredNetwork::out_edges(const Vertex& v) const {
  return {{v, {v.word.times(kGenA, 1), 0}, kGenA},
          {v, {rewired_b_target(x_, v.word, budget_), 0}, kGenB}};
}

std::vector<NetworkEdge> RewiredNetwork::in_edges(const Vertex& v) const {
  std::vector<NetworkEdge> in{{{v.word.times(kGenA, -1), 0}, v, kGenA}};
  // The pairing is an involution, so this is the only candidate; keep it
  // only if its out-edge really lands on v.
  const Word source = rewired_b_source(x_, v.word, budget_);
  if (rewired_b_target(x_, source, budget_) == v.word) in.push_back({{source, 0}, v, kGenB});
  return in;
}

std::vector<SymbolPair> rewired_window(const PairField& x, const std::vector<Word>& window,
                                       std::int64_t budget) {
  const RewiringView view(x, budget);
  std::vector<SymbolPair> out;
  out.reserve(window.size());
  for (const auto& g : window) out.push_back(view.at(g));
  return out;
}

std::vector<SymbolPair> double_rewired_window(const PairField& x, const std::vector<Word>& window,
                                              std::int64_t budget) {
  const RewiringView once(x, budget);
  const RewiringView twice(once, budget);
  std::vector<SymbolPair> out;
  out.reserve(window.size());
  for (const auto& g : window) out.push_back(twice.at(g));
  return out;
}

std::vector<Symbol> projected_window(const PairField& x, const std::vector<Word>& window,
                                     std::int64_t budget) {
  const RewiringView view(x, budget);
  std::vector<Symbol> out;
  out.reserve(window.size());
  for (const auto& g : window) out.push_back(view.at(g).second);
  return out;
}

OrbitWitness rewiring_orbit_witness(const PairField& x, const Word& h, std::size_t window_radius,
                                    std::size_t cap, std::int64_t budget) {
  const auto gens = GeneratorSet::free_rank2();
  const std::vector<Word> window = ball_enumerate(gens, window_radius);
  const ShiftedPairField moved(x, h);
  const RewiringView lhs(moved, budget);
  const RewiringView rhs(x, budget);

  std::vector<Word> candidates = ball_enumerate(gens, cap);
  // Traversal prediction: following h^-1 through the network of the
  // rewired configuration lands on f^-1.
  const RewiringView back(rhs, budget);
  const Word predicted = back.position(h.inverse()).inverse();
  if (std::find(candidates.begin(), candidates.end(), predicted) == candidates.end()) {
    candidates.push_back(predicted);
  }

  OrbitWitness result{Word::identity(2), 0, candidates.size()};
  for (const auto& f : candidates) {
    const Word f_inv = f.inverse();
    const bool match = std::all_of(window.begin(), window.end(), [&](const Word& w) {
      return lhs.at(w) == rhs.at(f_inv * w);
    });
    if (match) {
      if (result.matches == 0) result.element = f;
      ++result.matches;
    }
  }
  if (result.matches == 0) throw SearchFailure("no rewiring witness found");
  return result;
}

}  // namespace freeshift
