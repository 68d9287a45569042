#pragma once

#include <cstdint>
#include <optional>

namespace freeshift {

inline constexpr std::int64_t kDefaultScanBudget = 1'000'000;

/// Bracket scans started on this thread. Abort rates of exact checks are
/// measured per scan; searches for the next run start are not counted.
inline std::uint64_t& bracket_scans_started() {
  thread_local std::uint64_t n = 0;
  return n;
}

/// Matched-bracket first return. Position 0 is an opening bracket; walk in
/// direction `step` (+1 or -1) and return the first offset at which the
/// number of closing brackets seen over [0, offset] equals the number of
/// opening ones. `classify(offset)` yields +1 for an opening symbol, -1 for
/// a closing one and 0 otherwise. The first balanced offset is necessarily a
/// closing symbol, so both pairing conditions hold there.
template <typename Classify>
std::optional<std::int64_t> first_return(Classify&& classify, int step, std::int64_t budget) {
  ++bracket_scans_started();
  std::int64_t depth = 1;
  for (std::int64_t m = 1; m <= budget; ++m) {
    depth += classify(step * m);
    if (depth == 0) return step * m;
  }
  return std::nullopt;
}

/// First offset step*m, m >= 1, where `hit` holds.
template <typename Hit>
std::optional<std::int64_t> first_hit(Hit&& hit, int step, std::int64_t budget) {
  for (std::int64_t m = 1; m <= budget; ++m) {
    if (hit(step * m)) return step * m;
  }
  return std::nullopt;
}

}  // namespace freeshift
