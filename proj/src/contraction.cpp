#include "freeshift/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "freeshift/errors.hpp"
#include "freeshift/keyed_hash.hpp"

namespace freeshift {

namespace {

Symbol checked_symbol(const PairField& y, Symbol k) {
  if (k < 1 || k > y.alphabet_size()) throw UsageError("symbol outside the alphabet");
  return k;
}

}  // namespace

Word symbol_partner(const PairField& y, const Word& g, Symbol k, std::int64_t budget) {
  checked_symbol(y, k);
  if (k == kDistinguished) return g;
  const Symbol first = y.at(g).first;
  if (first != kDistinguished && first != k) return g;
  const Symbol open = first;
  const Symbol close = first == kDistinguished ? k : kDistinguished;
  const int step = first == kDistinguished ? 1 : -1;
  auto ray = y.ray(g);
  const auto offset = first_return(
      [&](std::int64_t n) {
        const Symbol s = ray->at(n).first;
        if (s == open) return 1;
        if (s == close) return -1;
        return 0;
      },
      step, budget);
  if (!offset) throw ScanBudgetExceeded(debug_string(g), step, budget);
  return g.times(kGenA, *offset);
}

std::int64_t next_run_start(const PairField& y, const Word& g, int step, std::int64_t budget) {
  auto ray = y.ray(g);
  const auto offset =
      first_hit([&](std::int64_t n) { return ray->at(n).first == kDistinguished; }, step, budget);
  if (!offset) throw ScanBudgetExceeded(debug_string(g), step, budget);
  return *offset;
}

RunLabel run_label_at(const PairField& y, const Word& g, std::int64_t budget) {
  auto ray = y.ray(g);
  std::vector<SymbolPair> entries{ray->at(0)};
  if (entries.front().first != kDistinguished) {
    throw DomainError("run labels start at a distinguished site, not at " + debug_string(g));
  }
  for (std::int64_t m = 1;; ++m) {
    if (m > budget) throw ScanBudgetExceeded(debug_string(g), 1, budget);
    const SymbolPair p = ray->at(m);
    if (p.first == kDistinguished) break;
    entries.push_back(p);
  }
  return RunLabel(std::move(entries));
}

Word contracted_target(const PairField& y, const Word& v, Symbol k, std::int64_t budget) {
  if (checked_symbol(y, k) == kDistinguished) return v.times(kGenB, 1);
  return symbol_partner(y, symbol_partner(y, v, k, budget).times(kGenB, 1), k, budget);
}

Word contracted_source(const PairField& y, const Word& v, Symbol k, std::int64_t budget) {
  if (checked_symbol(y, k) == kDistinguished) return v.times(kGenB, -1);
  return symbol_partner(y, symbol_partner(y, v, k, budget).times(kGenB, -1), k, budget);
}

namespace {

/// Run labels along the a-ray of a vertex, indexed by run count. Run start
/// offsets are memoized in both directions.
class ContractionRay final : public Ray<RunLabel> {
 public:
  ContractionRay(const PairField& y, const Word& v, std::int64_t budget)
      : source_(y.ray(v)), vertex_(v), budget_(budget), forward_{0} {}

  RunLabel at(std::int64_t n) override {
    const std::int64_t start = start_of(n);
    const std::int64_t end = start_of(n + 1);
    std::vector<SymbolPair> entries;
    entries.reserve(static_cast<std::size_t>(end - start));
    for (std::int64_t m = start; m < end; ++m) entries.push_back(source_->at(m));
    return RunLabel(std::move(entries));
  }

 private:
  std::int64_t start_of(std::int64_t n) {
    if (n >= 0) {
      while (static_cast<std::int64_t>(forward_.size()) <= n) forward_.push_back(scan(forward_.back(), 1));
      return forward_[static_cast<std::size_t>(n)];
    }
    const auto k = static_cast<std::size_t>(-n - 1);
    while (backward_.size() <= k) {
      backward_.push_back(scan(backward_.empty() ? 0 : backward_.back(), -1));
    }
    return backward_[k];
  }

  std::int64_t scan(std::int64_t from, int step) {
    for (std::int64_t m = 1; m <= budget_; ++m) {
      const std::int64_t at = from + step * m;
      if (source_->at(at).first == kDistinguished) return at;
    }
    throw ScanBudgetExceeded(debug_string(vertex_.times(kGenA, from)), step, budget_);
  }

  std::unique_ptr<Ray<SymbolPair>> source_;
  Word vertex_;
  std::int64_t budget_;
  std::vector<std::int64_t> forward_;
  std::vector<std::int64_t> backward_;
};

}  // namespace

ContractionView::ContractionView(const PairField& y, std::int64_t budget)
    : y_(y), budget_(budget), gens_(GeneratorSet::tree(y.alphabet_size())) {
  if (budget <= 0) throw UsageError("scan budget must be positive");
  if (y.at(Word::identity(2)).first != kDistinguished) {
    throw DomainError("contraction needs a distinguished symbol at the identity");
  }
}

std::unique_ptr<Ray<RunLabel>> ContractionView::ray(const Word& f) const {
  return std::make_unique<ContractionRay>(y_, position(f), budget_);
}

const Word& ContractionView::position(const Word& f) const {
  if (f.rank() != gens_.rank()) throw UsageError("word is not over the tree generators");
  if (const auto it = memo_.find(f); it != memo_.end()) return it->second;
  Word pos(2);
  if (!f.is_identity()) {
    const Syllable last = f.syllables().back();
    if (last.gen == kRayGen) {
      pos = position(f.without_trailing(kRayGen));
      const int step = last.power > 0 ? 1 : -1;
      for (std::int64_t i = 0; i < std::llabs(last.power); ++i) {
        pos = pos.times(kGenA, next_run_start(y_, pos, step, budget_));
      }
    } else {
      const int sign = last.power > 0 ? 1 : -1;
      const Word& prev = position(f.times(last.gen, -sign));
      const auto k = static_cast<Symbol>(last.gen);
      pos = sign > 0 ? contracted_target(y_, prev, k, budget_)
                     : contracted_source(y_, prev, k, budget_);
    }
  }
  return memo_.emplace(f, std::move(pos)).first->second;
}

ContractedNetwork::ContractedNetwork(const PairField& y, std::int64_t budget)
    : y_(y), budget_(budget), tree_(GeneratorSet::tree(y.alphabet_size())) {
  if (y.at(Word::identity(2)).first != kDistinguished) {
    throw DomainError("contraction needs a distinguished symbol at the identity");
  }
}

bool ContractedNetwork::contains(const Vertex& v) const {
  return v.index == 0 && v.word.rank() == 2 && y_.at(v.word).first == kDistinguished;
}

std::vector<NetworkEdge> ContractedNetwork::out_edges(const Vertex& v) const {
  std::vector<NetworkEdge> out;
  out.push_back({v, {v.word.times(kGenA, next_run_start(y_, v.word, 1, budget_)), 0}, kRayGen});
  for (Symbol k = 1; k <= y_.alphabet_size(); ++k) {
    out.push_back({v, {contracted_target(y_, v.word, k, budget_), 0}, k});
  }
  return out;
}

std::vector<NetworkEdge> ContractedNetwork::in_edges(const Vertex& v) const {
  std::vector<NetworkEdge> in;
  in.push_back({{v.word.times(kGenA, next_run_start(y_, v.word, -1, budget_)), 0}, v, kRayGen});
  for (Symbol k = 1; k <= y_.alphabet_size(); ++k) {
    const Word source = contracted_source(y_, v.word, k, budget_);
    if (contracted_target(y_, source, k, budget_) == v.word) in.push_back({{source, 0}, v, k});
  }
  return in;
}

SiteOrder compare_sites(const IndexedSite& p, const IndexedSite& q) {
  const Word d = p.base.inverse() * q.base;
  if (d.is_identity()) {
    if (p.index == q.index) return SiteOrder::equal;
    return p.index < q.index ? SiteOrder::less : SiteOrder::greater;
  }
  if (d.syllables().size() == 1 && d.syllables().front().gen == kRayGen) {
    return d.syllables().front().power > 0 ? SiteOrder::less : SiteOrder::greater;
  }
  return SiteOrder::incomparable;
}

SymbolPair site_value(const RunField& z, const IndexedSite& v) {
  const RunLabel cell = z.at(v.base);
  if (v.index < 0 || static_cast<std::size_t>(v.index) > cell.len()) {
    throw DomainError("site index " + std::to_string(v.index) + " out of range at " +
                      debug_string(v.base));
  }
  return cell[static_cast<std::size_t>(v.index)];
}

namespace {

/// Walks the sites (f·s0^c, i) in their total order along one s0-ray.
class SiteCursor {
 public:
  SiteCursor(const RunField& z, const IndexedSite& start)
      : ray_(z.ray(start.base)), base_(start.base), index_(start.index), cell_(ray_->at(0)) {
    if (index_ < 0 || static_cast<std::size_t>(index_) > cell_.len()) {
      throw DomainError("site index out of range at " + debug_string(base_));
    }
  }

  void step(int dir) {
    if (dir > 0) {
      if (static_cast<std::size_t>(index_) < cell_.len()) {
        ++index_;
      } else {
        cell_ = ray_->at(++offset_);
        index_ = 0;
      }
    } else {
      if (index_ > 0) {
        --index_;
      } else {
        cell_ = ray_->at(--offset_);
        index_ = static_cast<std::int64_t>(cell_.len());
      }
    }
  }

  void advance(std::int64_t n) {
    const int dir = n > 0 ? 1 : -1;
    for (std::int64_t i = 0; i < std::llabs(n); ++i) step(dir);
  }

  const SymbolPair& value() const { return cell_[static_cast<std::size_t>(index_)]; }
  IndexedSite site() const { return {base_.times(kRayGen, offset_), index_}; }

 private:
  std::unique_ptr<Ray<RunLabel>> ray_;
  Word base_;
  std::int64_t offset_ = 0;
  std::int64_t index_;
  RunLabel cell_;
};

}  // namespace

IndexedSite site_partner(const RunField& z, const Word& f, Symbol k, std::int64_t budget) {
  if (k < 1 || k > z.alphabet_size()) throw UsageError("symbol outside the alphabet");
  if (k == kDistinguished) return {f, 0};
  auto cls = [k](Symbol s) { return s == kDistinguished ? 1 : (s == k ? -1 : 0); };
  SiteCursor cur(z, {f, 0});
  ++bracket_scans_started();
  int64_t depth = cls(cur.value().first);
  for (std::int64_t m = 1; m <= budget; ++m) {
    cur.step(1);
    const Symbol s = cur.value().first;
    depth += cls(s);
    if (s == k && depth == 0) return cur.site();
  }
  throw ScanBudgetExceeded(debug_string(f), 1, budget);
}

Word site_partner_preimage(const RunField& z, const IndexedSite& v, std::int64_t budget) {
  SiteCursor cur(z, v);
  const Symbol k = cur.value().first;
  if (k == kDistinguished) {
    if (v.index != 0) throw DomainError("distinguished symbol inside a cell");
    return v.base;
  }
  auto cls = [k](Symbol s) { return s == k ? 1 : (s == kDistinguished ? -1 : 0); };
  ++bracket_scans_started();
  int64_t depth = 1;
  for (std::int64_t m = 1; m <= budget; ++m) {
    cur.step(-1);
    const Symbol s = cur.value().first;
    depth += cls(s);
    if (s == kDistinguished && depth == 0) {
      const IndexedSite u = cur.site();
      if (u.index != 0) throw DomainError("distinguished symbol inside a cell");
      return u.base;
    }
  }
  throw ScanBudgetExceeded(debug_string(v.base), -1, budget);
}

IndexedSite expanded_b_target(const RunField& z, const IndexedSite& v, std::int64_t budget) {
  const Symbol k = site_value(z, v).first;
  const Word f = site_partner_preimage(z, v, budget);
  return site_partner(z, f.times(k, 1), k, budget);
}

IndexedSite expanded_b_source(const RunField& z, const IndexedSite& v, std::int64_t budget) {
  const Symbol k = site_value(z, v).first;
  const Word f = site_partner_preimage(z, v, budget);
  return site_partner(z, f.times(k, -1), k, budget);
}

IndexedSite expanded_a_step(const RunField& z, const IndexedSite& v, std::int64_t n) {
  if (n == 0) return v;
  SiteCursor cur(z, v);
  cur.advance(n);
  return cur.site();
}

ExpansionView::ExpansionView(const RunField& z, std::int64_t budget) : z_(z), budget_(budget) {
  if (budget <= 0) throw UsageError("scan budget must be positive");
}

const IndexedSite& ExpansionView::site_of(const Word& g) const {
  if (g.rank() != 2) throw UsageError("expansion is read on F2");
  if (const auto it = memo_.find(g); it != memo_.end()) return it->second;
  IndexedSite site{Word::identity(z_.alphabet_size() + 1), 0};
  if (!g.is_identity()) {
    const Syllable last = g.syllables().back();
    if (last.gen == kGenA) {
      site = expanded_a_step(z_, site_of(g.without_trailing(kGenA)), last.power);
    } else {
      const int sign = last.power > 0 ? 1 : -1;
      const IndexedSite& prev = site_of(g.times(kGenB, -sign));
      site = sign > 0 ? expanded_b_target(z_, prev, budget_) : expanded_b_source(z_, prev, budget_);
    }
  }
  return memo_.emplace(g, std::move(site)).first->second;
}

namespace {

class ExpansionRay final : public Ray<SymbolPair> {
 public:
  ExpansionRay(const RunField& z, const IndexedSite& start) : cursor_(z, start) {}

  SymbolPair at(std::int64_t n) override {
    cursor_.advance(n - pos_);
    pos_ = n;
    return cursor_.value();
  }

 private:
  SiteCursor cursor_;
  std::int64_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Ray<SymbolPair>> ExpansionView::ray(const Word& g) const {
  return std::make_unique<ExpansionRay>(z_, site_of(g));
}

ExpandedNetwork::ExpandedNetwork(const RunField& z, std::int64_t budget)
    : z_(z), budget_(budget), tree_(GeneratorSet::tree(z.alphabet_size())) {}

Vertex ExpandedNetwork::root() const { return {Word::identity(tree_.rank()), 0}; }

bool ExpandedNetwork::contains(const Vertex& v) const {
  if (v.word.rank() != tree_.rank() || v.index < 0) return false;
  return static_cast<std::size_t>(v.index) <= z_.at(v.word).len();
}

VertexLabel ExpandedNetwork::label(const Vertex& v) const {
  return site_value(z_, {v.word, v.index});
}

std::vector<NetworkEdge> ExpandedNetwork::out_edges(const Vertex& v) const {
  const IndexedSite s{v.word, v.index};
  const IndexedSite a = expanded_a_step(z_, s, 1);
  const IndexedSite b = expanded_b_target(z_, s, budget_);
  return {{v, {a.base, a.index}, kGenA}, {v, {b.base, b.index}, kGenB}};
}

std::vector<NetworkEdge> ExpandedNetwork::in_edges(const Vertex& v) const {
  const IndexedSite s{v.word, v.index};
  const IndexedSite a = expanded_a_step(z_, s, -1);
  std::vector<NetworkEdge> in{{{a.base, a.index}, v, kGenA}};
  const IndexedSite b = expanded_b_source(z_, s, budget_);
  if (expanded_b_target(z_, b, budget_) == s) in.push_back({{b.base, b.index}, v, kGenB});
  return in;
}

CayleyNetwork network_from_runs(const RunField& z) {
  return CayleyNetwork([&z](const Word& f) -> VertexLabel { return z.at(f); },
                       GeneratorSet::tree(z.alphabet_size()));
}

double run_label_pmf(std::size_t alphabet_size, const RunLabel& xi) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
  if (!xi.is_run_shaped()) return 0.0;
  for (const auto& p : xi.entries()) {
    if (p.first < 1 || p.first > alphabet_size || p.second < 1 || p.second > alphabet_size) {
      return 0.0;
    }
  }
  const double k = static_cast<double>(alphabet_size);
  return std::pow(k, -(2.0 * static_cast<double>(xi.len()) + 2.0));
}

double run_size_pmf(std::size_t alphabet_size, std::size_t entries) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
  if (entries == 0) return 0.0;
  const double q = 1.0 / static_cast<double>(alphabet_size);
  return q * std::pow(1.0 - q, static_cast<double>(entries - 1));
}

namespace {

Symbol uniform_symbol(std::uint64_t h, std::size_t alphabet_size) {
  const auto s = static_cast<Symbol>(hashing::unit_uniform(h) * static_cast<double>(alphabet_size));
  return std::min<Symbol>(s, static_cast<Symbol>(alphabet_size - 1)) + 1;
}

class IidRunRay final : public Ray<RunLabel> {
 public:
  IidRunRay(const IidRunField& z, const Word& f) : z_(z), anchor_(hashing::ray_anchor(f, kRayGen)) {}

  RunLabel at(std::int64_t n) override { return z_.at_digest(anchor_.at(n)); }

 private:
  const IidRunField& z_;
  hashing::RayAnchor anchor_;
};

}  // namespace

IidRunField::IidRunField(std::uint64_t seed, std::size_t alphabet_size)
    : alphabet_size_(alphabet_size),
      first_stream_(hashing::stream_key(seed, hashing::tag_key("run-first"))),
      second_stream_(hashing::stream_key(seed, hashing::tag_key("run-second"))) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
}

RunLabel IidRunField::at_digest(std::uint64_t digest) const {
  using namespace hashing;
  std::vector<SymbolPair> entries;
  entries.push_back({kDistinguished, uniform_symbol(site_hash(second_stream_, combine(digest, 0)), alphabet_size_)});
  for (std::uint64_t m = 1;; ++m) {
    const Symbol i = uniform_symbol(site_hash(first_stream_, combine(digest, m)), alphabet_size_);
    if (i == kDistinguished) break;
    entries.push_back({i, uniform_symbol(site_hash(second_stream_, combine(digest, m)), alphabet_size_)});
  }
  return RunLabel(std::move(entries));
}

RunLabel IidRunField::at(const Word& f) const {
  if (f.rank() != alphabet_size_ + 1) throw UsageError("word is not over the tree generators");
  return at_digest(hashing::word_digest(f));
}

std::unique_ptr<Ray<RunLabel>> IidRunField::ray(const Word& f) const {
  if (f.rank() != alphabet_size_ + 1) throw UsageError("word is not over the tree generators");
  return std::make_unique<IidRunRay>(*this, f);
}

TableRunField::TableRunField(std::size_t alphabet_size,
                             std::unordered_map<Word, RunLabel, WordHash> table)
    : alphabet_size_(alphabet_size), table_(std::move(table)) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
  for (const auto& [f, label] : table_) {
    if (f.rank() != alphabet_size + 1) throw UsageError("word is not over the tree generators");
  }
}

RunLabel TableRunField::at(const Word& f) const {
  const auto it = table_.find(f);
  if (it == table_.end()) throw DomainError("no run label known at " + debug_string(f));
  return it->second;
}

namespace {

class TableRunRay final : public Ray<RunLabel> {
 public:
  TableRunRay(const TableRunField& z, const Word& f) : z_(z), f_(f) {}

  RunLabel at(std::int64_t n) override { return z_.at(f_.times(kRayGen, n)); }

 private:
  const TableRunField& z_;
  Word f_;
};

}  // namespace

std::unique_ptr<Ray<RunLabel>> TableRunField::ray(const Word& f) const {
  return std::make_unique<TableRunRay>(*this, f);
}

TreeWitness contraction_orbit_witness(const PairField& y, const Word& h, std::size_t window_radius,
                                      std::size_t cap, std::int64_t budget) {
  if (y.at(h.inverse()).first != kDistinguished) {
    throw UsageError("the moved configuration must keep a distinguished symbol at e");
  }
  const GeneratorSet tree = GeneratorSet::tree(y.alphabet_size());
  const std::vector<Word> window = ball_enumerate(tree, window_radius);
  const ShiftedPairField moved(y, h);
  const ContractionView lhs(moved, budget);
  const ContractionView rhs(y, budget);

  std::vector<RunLabel> expected;
  expected.reserve(window.size());
  for (const auto& w : window) expected.push_back(lhs.at(w));

  const std::vector<Word> candidates = ball_enumerate(tree, cap);
  TreeWitness result{Word::identity(tree.rank()), 0, candidates.size()};
  for (const auto& f : candidates) {
    const Word f_inv = f.inverse();
    bool match = true;
    for (std::size_t i = 0; i < window.size() && match; ++i) {
      match = rhs.at(f_inv * window[i]) == expected[i];
    }
    if (match) {
      if (result.matches == 0) result.element = f;
      ++result.matches;
    }
  }
  if (result.matches == 0) throw SearchFailure("no tree witness of length <= " + std::to_string(cap));
  return result;
}

}  // namespace freeshift
