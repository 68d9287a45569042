#include "freeshift/labels.hpp"

#include <type_traits>

#include "freeshift/errors.hpp"

namespace freeshift {

RunLabel::RunLabel(std::vector<SymbolPair> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("run labels are nonempty");
}

bool RunLabel::is_run_shaped() const {
  if (entries_.front().first != kDistinguished) return false;
  for (std::size_t m = 1; m < entries_.size(); ++m) {
    if (entries_[m].first == kDistinguished) return false;
  }
  return true;
}

std::string to_string(const SymbolPair& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

std::string to_string(const RunLabel& r) {
  std::string out;
  for (const auto& p : r.entries()) out += to_string(p);
  return out;
}

std::string to_string(const VertexLabel& l) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          return std::to_string(v);
        } else {
          return to_string(v);
        }
      },
      l);
}

}  // namespace freeshift
