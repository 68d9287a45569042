#pragma once

#include <cstdint>
#include <string_view>

#include "freeshift/free_group.hpp"

// Keyed hashing used to realize i.i.d. product measures lazily. A site's
// value is a pure function of (seed, tag, word), so query order never
// matters. Words are digested syllable by syllable, which makes the digest
// of w·g^n computable in O(1) from a precomputed anchor.
namespace freeshift::hashing {

/// splitmix64 finalizer; a bijection on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v + 0x9e3779b97f4a7c15ULL));
}

/// FNV-1a over the tag bytes, finalized.
constexpr std::uint64_t tag_key(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

inline constexpr std::uint64_t kEmptyDigest = 0x243f6a8885a308d3ULL;

constexpr std::uint64_t extend_digest(std::uint64_t prefix, Generator g, std::int64_t power) {
  return combine(combine(prefix, g), static_cast<std::uint64_t>(power));
}

std::uint64_t word_digest(const Word& w);

/// Digest of w·g^n for varying n: `base` digests w without its trailing
/// g-syllable, `trailing` is that syllable's exponent.
struct RayAnchor {
  std::uint64_t base = kEmptyDigest;
  std::int64_t trailing = 0;
  Generator gen = 0;

  std::uint64_t at(std::int64_t n) const {
    const std::int64_t p = trailing + n;
    return p == 0 ? base : extend_digest(base, gen, p);
  }
};

RayAnchor ray_anchor(const Word& w, Generator g);

/// Stream key for (seed, tag); combine with a site digest to get a value.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t tag) {
  return combine(mix64(seed ^ 0x6a09e667f3bcc909ULL), tag);
}

constexpr std::uint64_t site_hash(std::uint64_t stream, std::uint64_t digest) {
  return mix64(combine(stream, digest));
}

/// Top 53 bits as a double in [0, 1).
constexpr double unit_uniform(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace freeshift::hashing
