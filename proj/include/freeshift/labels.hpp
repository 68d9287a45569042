#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace freeshift {

/// Alphabet values are 1..K with 1 the distinguished element. 0 is reserved
/// for the extra tree generator and never appears as a value.
using Symbol = std::uint32_t;
inline constexpr Symbol kDistinguished = 1;

struct SymbolPair {
  Symbol first = 0;
  Symbol second = 0;

  auto operator<=>(const SymbolPair&) const = default;
  SymbolPair swapped() const { return {second, first}; }
};

/// Nonempty list of pairs read along a ray between consecutive sites whose
/// first coordinate is the distinguished symbol.
class RunLabel {
 public:
  /// Throws DomainError when `entries` is empty.
  explicit RunLabel(std::vector<SymbolPair> entries);

  const std::vector<SymbolPair>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Index of the last entry (size - 1).
  std::size_t len() const { return entries_.size() - 1; }
  const SymbolPair& operator[](std::size_t i) const { return entries_[i]; }

  /// First entry starts with the distinguished symbol, later ones do not.
  bool is_run_shaped() const;

  auto operator<=>(const RunLabel&) const = default;

 private:
  std::vector<SymbolPair> entries_;
};

using VertexLabel = std::variant<Symbol, SymbolPair, RunLabel>;

std::string to_string(const SymbolPair& p);
std::string to_string(const RunLabel& r);
std::string to_string(const VertexLabel& l);

}  // namespace freeshift
