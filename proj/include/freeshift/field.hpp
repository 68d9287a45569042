#pragma once

#include <cstdint>
#include <memory>

#include "freeshift/free_group.hpp"
#include "freeshift/labels.hpp"

namespace freeshift {

/// Values along the ray w·g^n, n in Z, for the ray generator g. `at` is
/// random access but implementations may memoize, hence non-const. A ray
/// must not outlive the field that produced it.
template <typename Value>
class Ray {
 public:
  virtual ~Ray() = default;
  virtual Value at(std::int64_t n) = 0;
};

/// A configuration F2 -> K x K. Implementations range from the lazily
/// sampled source to views through the rewiring and expansion maps. Views
/// keep trial-local caches and are not safe to share across threads.
class PairField {
 public:
  virtual ~PairField() = default;

  virtual SymbolPair at(const Word& g) const = 0;
  /// Values at g·a^n.
  virtual std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const = 0;
  virtual std::size_t alphabet_size() const = 0;
};

/// A configuration F_T -> K*, T = {0, 1, ..., K}.
class RunField {
 public:
  virtual ~RunField() = default;

  virtual RunLabel at(const Word& f) const = 0;
  /// Values at f·s0^n.
  virtual std::unique_ptr<Ray<RunLabel>> ray(const Word& f) const = 0;
  virtual std::size_t alphabet_size() const = 0;
};

/// (h·x)(g) = x(h^-1 g).
class ShiftedPairField final : public PairField {
 public:
  ShiftedPairField(const PairField& base, Word h) : base_(base), h_inv_(h.inverse()) {}

  SymbolPair at(const Word& g) const override { return base_.at(h_inv_ * g); }
  std::unique_ptr<Ray<SymbolPair>> ray(const Word& g) const override {
    return base_.ray(h_inv_ * g);
  }
  std::size_t alphabet_size() const override { return base_.alphabet_size(); }

 private:
  const PairField& base_;
  Word h_inv_;
};

/// (f·z)(g) = z(f^-1 g).
class ShiftedRunField final : public RunField {
 public:
  ShiftedRunField(const RunField& base, Word f) : base_(base), f_inv_(f.inverse()) {}

  RunLabel at(const Word& g) const override { return base_.at(f_inv_ * g); }
  std::unique_ptr<Ray<RunLabel>> ray(const Word& g) const override {
    return base_.ray(f_inv_ * g);
  }
  std::size_t alphabet_size() const override { return base_.alphabet_size(); }

 private:
  const RunField& base_;
  Word f_inv_;
};

}  // namespace freeshift
