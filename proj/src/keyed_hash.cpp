#include "freeshift/keyed_hash.hpp"

namespace freeshift::hashing {

std::uint64_t word_digest(const Word& w) {
  std::uint64_t h = kEmptyDigest;
  for (const auto& s : w.syllables()) h = extend_digest(h, s.gen, s.power);
  return h;
}

RayAnchor ray_anchor(const Word& w, Generator g) {
  RayAnchor anchor;
  anchor.gen = g;
  anchor.trailing = w.trailing_power(g);
  const auto& syl = w.syllables();
  const std::size_t keep = anchor.trailing == 0 ? syl.size() : syl.size() - 1;
  std::uint64_t h = kEmptyDigest;
  for (std::size_t i = 0; i < keep; ++i) h = extend_digest(h, syl[i].gen, syl[i].power);
  anchor.base = h;
  return anchor;
}

}  // namespace freeshift::hashing
