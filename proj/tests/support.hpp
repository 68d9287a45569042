#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <memory>
#include <utility>

#include "freeshift/field.hpp"
#include "freeshift/free_group.hpp"
#include "freeshift/labels.hpp"

// Hand-built configurations for unit tests.
namespace freeshift::testing {

/// Pair configuration given explicitly along the a-ray of e; every other
/// site carries `fill`.
class RayPairField final : public PairField {
 public:
  RayPairField(std::size_t alphabet_size, std::map<std::int64_t, SymbolPair> values, SymbolPair fill)
      : k_(alphabet_size), values_(std::move(values)), fill_(fill) {}

  SymbolPair at(const Word& g) const override {
    const auto n = offset(g);
    return n ? value(*n) : fill_;
  }

  std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const override {
    return std::make_unique<OffsetRay>(*this, offset(g));
  }

  std::size_t alphabet_size() const override { return k_; }

 private:
  class OffsetRay final : public Ray<SymbolPair> {
   public:
    OffsetRay(const RayPairField& f, std::optional<std::int64_t> start) : f_(f), start_(start) {}
    SymbolPair at(std::int64_t n) override { return start_ ? f_.value(*start_ + n) : f_.fill_; }

   private:
    const RayPairField& f_;
    std::optional<std::int64_t> start_;
  };

  static std::optional<std::int64_t> offset(const Word& g) {
    if (g.is_identity()) return 0;
    if (g.syllables().size() == 1 && g.syllables().front().gen == kGenA) {
      return g.syllables().front().power;
    }
    return std::nullopt;
  }

  SymbolPair value(std::int64_t n) const {
    const auto it = values_.find(n);
    return it == values_.end() ? fill_ : it->second;
  }

  std::size_t k_;
  std::map<std::int64_t, SymbolPair> values_;
  SymbolPair fill_;
};

/// Run-label configuration given explicitly along the s0-ray of e; every
/// other word carries `fill`.
class RayRunField final : public RunField {
 public:
  RayRunField(std::size_t alphabet_size, std::map<std::int64_t, RunLabel> values, RunLabel fill)
      : k_(alphabet_size), values_(std::move(values)), fill_(std::move(fill)) {}

  RunLabel at(const Word& f) const override {
    const auto n = offset(f);
    return n ? value(*n) : fill_;
  }

  std::unique_ptr<Ray<RunLabel>> ray(const Word& f) const override {
    return std::make_unique<OffsetRay>(*this, offset(f));
  }

  std::size_t alphabet_size() const override { return k_; }

 private:
  class OffsetRay final : public Ray<RunLabel> {
   public:
    OffsetRay(const RayRunField& f, std::optional<std::int64_t> start) : f_(f), start_(start) {}
    RunLabel at(std::int64_t n) override { return start_ ? f_.value(*start_ + n) : f_.fill_; }

   private:
    const RayRunField& f_;
    std::optional<std::int64_t> start_;
  };

  static std::optional<std::int64_t> offset(const Word& f) {
    if (f.is_identity()) return 0;
    if (f.syllables().size() == 1 && f.syllables().front().gen == kRayGen) {
      return f.syllables().front().power;
    }
    return std::nullopt;
  }

  RunLabel value(std::int64_t n) const {
    const auto it = values_.find(n);
    return it == values_.end() ? fill_ : it->second;
  }

  std::size_t k_;
  std::map<std::int64_t, RunLabel> values_;
  RunLabel fill_;
};

inline Word a_pow(std::int64_t n) { return Word::power(2, kGenA, n); }
inline Word b_pow(std::int64_t n) { return Word::power(2, kGenB, n); }

}  // namespace freeshift::testing
