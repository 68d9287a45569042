#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "freeshift/field.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/keyed_hash.hpp"
#include "freeshift/labels.hpp"

namespace freeshift {

/// K = {1, ..., size}; 1 is the distinguished element.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const { return size_; }
  bool contains(Symbol s) const { return s >= 1 && s <= size_; }
  static constexpr Symbol distinguished() { return kDistinguished; }

 private:
  std::size_t size_;
};

enum class MeasureKind {
  /// First coordinate constant on right <b>-cosets, second i.i.d.
  pair,
  /// Plain i.i.d. product.
  plain,
};

/// Finite-support base law over K together with the product structure.
class MeasureSpec {
 public:
  /// Throws UsageError unless the law is a probability vector (sum within
  /// 1e-12, nonnegative) with at least two atoms of positive mass.
  MeasureSpec(MeasureKind kind, std::vector<double> law);

  static MeasureSpec uniform(MeasureKind kind, std::size_t alphabet_size);

  MeasureKind kind() const { return kind_; }
  const std::vector<double>& law() const { return law_; }
  std::size_t alphabet_size() const { return law_.size(); }
  Alphabet alphabet() const { return Alphabet(law_.size()); }
  bool is_uniform() const;

  /// Inverse CDF: the smallest symbol s with u < P(X <= s).
  Symbol draw(double u) const;

 private:
  MeasureKind kind_;
  std::vector<double> law_;
  std::vector<double> cdf_;
};

/// Symbol drawn from `measure`'s law by hashing (seed, tag, g).
Symbol derive_value(std::uint64_t seed, std::string_view tag, const Word& g,
                    const MeasureSpec& measure);

/// Deterministic seed-derived configuration on F2. Values are pure
/// functions of (seed, site) and the object is safe to share across threads.
class LazyConfig final : public PairField {
 public:
  LazyConfig(std::uint64_t seed, MeasureSpec measure);

  std::uint64_t seed() const { return seed_; }
  const MeasureSpec& measure() const { return measure_; }
  Alphabet alphabet() const { return measure_.alphabet(); }
  std::size_t alphabet_size() const override { return measure_.alphabet_size(); }

  /// Pair kind only.
  SymbolPair at(const Word& g) const override;
  /// Plain kind only.
  Symbol symbol_at(const Word& g) const;
  /// Pair or symbol according to the measure kind.
  VertexLabel value_at(const Word& g) const;

  /// Pair kind only.
  std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const override;

 private:
  friend class LazyPairRay;

  std::uint64_t seed_;
  MeasureSpec measure_;
  std::uint64_t coset_stream_;
  std::uint64_t site_stream_;
  std::uint64_t second_stream_;
};

/// Accepts x iff its first coordinate at the identity is the distinguished
/// symbol.
std::optional<LazyConfig> condition_on_Y(const LazyConfig& x);

/// First accepted configuration in a deterministic sequence of seeds derived
/// from `seed` (the seed itself first). Returns the attempt count through
/// `attempts` when given.
LazyConfig sample_in_Y(std::uint64_t seed, const MeasureSpec& measure,
                       std::uint64_t* attempts = nullptr);

}  // namespace freeshift
