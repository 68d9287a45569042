#include "freeshift/config.hpp"

#include <cmath>
#include <numeric>

#include "freeshift/errors.hpp"

namespace freeshift {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2) throw UsageError("alphabet size must be at least 2");
}

MeasureSpec::MeasureSpec(MeasureKind kind, std::vector<double> law)
    : kind_(kind), law_(std::move(law)) {
  if (law_.size() < 2) throw UsageError("law needs at least two symbols");
  double total = 0.0;
  std::size_t atoms = 0;
  for (const double p : law_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw UsageError("law entries must be nonnegative");
    total += p;
    if (p > 0.0) ++atoms;
  }
  if (std::abs(total - 1.0) > 1e-12) throw UsageError("law must sum to 1");
  if (atoms < 2) throw UsageError("law is concentrated on a single symbol");
  cdf_.resize(law_.size());
  std::partial_sum(law_.begin(), law_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

MeasureSpec MeasureSpec::uniform(MeasureKind kind, std::size_t alphabet_size) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
  return MeasureSpec(kind, std::vector<double>(alphabet_size, 1.0 / static_cast<double>(alphabet_size)));
}

bool MeasureSpec::is_uniform() const {
  const double p = 1.0 / static_cast<double>(law_.size());
  for (const double q : law_) {
    if (std::abs(q - p) > 1e-12) return false;
  }
  return true;
}

Symbol MeasureSpec::draw(double u) const {
  for (std::size_t i = 0; i + 1 < cdf_.size(); ++i) {
    if (u < cdf_[i]) return static_cast<Symbol>(i + 1);
  }
  return static_cast<Symbol>(cdf_.size());
}

Symbol derive_value(std::uint64_t seed, std::string_view tag, const Word& g,
                    const MeasureSpec& measure) {
  const auto stream = hashing::stream_key(seed, hashing::tag_key(tag));
  return measure.draw(hashing::unit_uniform(hashing::site_hash(stream, hashing::word_digest(g))));
}

LazyConfig::LazyConfig(std::uint64_t seed, MeasureSpec measure)
    : seed_(seed),
      measure_(std::move(measure)),
      coset_stream_(hashing::stream_key(seed, hashing::tag_key("coset"))),
      site_stream_(hashing::stream_key(seed, hashing::tag_key("site"))),
      second_stream_(hashing::stream_key(seed, hashing::tag_key("site2"))) {}

SymbolPair LazyConfig::at(const Word& g) const {
  if (measure_.kind() != MeasureKind::pair) throw UsageError("pair value of a plain config");
  if (g.rank() != 2) throw UsageError("configurations live on F2");
  using namespace hashing;
  const auto first = measure_.draw(unit_uniform(site_hash(coset_stream_, word_digest(coset_rep_b(g)))));
  const auto second = measure_.draw(unit_uniform(site_hash(second_stream_, word_digest(g))));
  return {first, second};
}

Symbol LazyConfig::symbol_at(const Word& g) const {
  if (measure_.kind() != MeasureKind::plain) throw UsageError("symbol value of a pair config");
  using namespace hashing;
  return measure_.draw(unit_uniform(site_hash(site_stream_, word_digest(g))));
}

VertexLabel LazyConfig::value_at(const Word& g) const {
  if (measure_.kind() == MeasureKind::pair) return at(g);
  return symbol_at(g);
}

class LazyPairRay final : public Ray<SymbolPair> {
 public:
  LazyPairRay(const LazyConfig& x, const Word& g)
      : x_(x), site_(hashing::ray_anchor(g, kGenA)) {
    // When g·a^n collapses onto the a-free prefix, its coset representative
    // is that prefix with any trailing b-power removed.
    const Word prefix = g.without_trailing(kGenA);
    collapsed_coset_ = hashing::word_digest(prefix.without_trailing(kGenB));
  }

  SymbolPair at(std::int64_t n) override {
    using namespace hashing;
    const std::uint64_t site = site_.at(n);
    const std::uint64_t coset = site_.trailing + n == 0 ? collapsed_coset_ : site;
    return {x_.measure_.draw(unit_uniform(site_hash(x_.coset_stream_, coset))),
            x_.measure_.draw(unit_uniform(site_hash(x_.second_stream_, site)))};
  }

 private:
  const LazyConfig& x_;
  hashing::RayAnchor site_;
  std::uint64_t collapsed_coset_;
};

std::unique_ptr<Ray<SymbolPair>> LazyConfig::ray(const Word& g) const {
  if (measure_.kind() != MeasureKind::pair) throw UsageError("pair ray of a plain config");
  if (g.rank() != 2) throw UsageError("configurations live on F2");
  return std::make_unique<LazyPairRay>(*this, g);
}

std::optional<LazyConfig> condition_on_Y(const LazyConfig& x) {
  if (x.at(Word::identity(2)).first != kDistinguished) return std::nullopt;
  return x;
}

LazyConfig sample_in_Y(std::uint64_t seed, const MeasureSpec& measure, std::uint64_t* attempts) {
  std::uint64_t s = seed;
  for (std::uint64_t attempt = 1;; ++attempt) {
    LazyConfig x(s, measure);
    if (condition_on_Y(x)) {
      if (attempts) *attempts = attempt;
      return x;
    }
    s = hashing::combine(seed, attempt);
  }
}

}  // namespace freeshift
