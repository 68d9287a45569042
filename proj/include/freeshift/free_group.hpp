#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freeshift {

using Generator = std::uint32_t;

/// Ordered list of distinct generator names. Words address generators by
/// index; names only appear when words are printed or parsed.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<std::string> names);

  /// {a, b}
  static GeneratorSet free_rank2();
  /// {s0, s1, ..., sK} for an alphabet of size K. s0 steps between run
  /// starts, sk follows the k-labeled edges of the contracted tree.
  static GeneratorSet tree(std::size_t alphabet_size);

  std::size_t rank() const { return names_.size(); }
  const std::string& name(Generator g) const;
  std::optional<Generator> find(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const GeneratorSet&) const = default;

 private:
  std::vector<std::string> names_;
};

inline constexpr Generator kGenA = 0;
inline constexpr Generator kGenB = 1;
/// Generator index stepping along rays: `a` in F2, `s0` in the tree group.
inline constexpr Generator kRayGen = 0;

struct Letter {
  Generator gen = 0;
  int sign = 1;

  bool operator==(const Letter&) const = default;
  Letter inverse() const { return {gen, -sign}; }
};

/// Maximal block g^power of a reduced word; power is never zero.
struct Syllable {
  Generator gen = 0;
  std::int64_t power = 0;

  bool operator==(const Syllable&) const = default;
};

/// Freely reduced word in the free group of a given rank, stored as
/// syllables so that long powers such as a^100000 stay compact.
class Word {
 public:
  Word() = default;
  explicit Word(std::size_t rank) : rank_(static_cast<std::uint32_t>(rank)) {}

  static Word identity(std::size_t rank) { return Word(rank); }
  static Word generator(std::size_t rank, Generator g, int sign = 1);
  static Word power(std::size_t rank, Generator g, std::int64_t n);
  /// Reduces the letter sequence.
  static Word from_letters(std::size_t rank, std::span<const Letter> letters);

  std::size_t rank() const { return rank_; }
  bool is_identity() const { return syllables_.empty(); }
  /// Word metric: sum of |power| over syllables.
  std::uint64_t length() const;
  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::vector<Letter> letters() const;
  std::optional<Letter> last_letter() const;

  /// Exponent of the trailing syllable if it is a power of g, otherwise 0.
  std::int64_t trailing_power(Generator g) const;
  /// This word with its trailing g-syllable (if any) removed.
  Word without_trailing(Generator g) const;

  /// Right multiplication by g^n, reducing.
  Word times(Generator g, std::int64_t n) const;
  Word times(Letter l) const { return times(l.gen, l.sign); }
  Word inverse() const;

  friend Word operator*(const Word& u, const Word& v);
  bool operator==(const Word&) const = default;

 private:
  void append(Generator g, std::int64_t n);

  std::uint32_t rank_ = 0;
  std::vector<Syllable> syllables_;
};

/// Throws UsageError when ranks differ.
Word multiply(const Word& u, const Word& v);
Word invert(const Word& u);
std::uint64_t word_length(const Word& u);

/// Shortlex: shorter first, then lexicographic over letters ranked
/// a < b < ... < a' < b' < ... (positive letters before inverse letters).
bool shortlex_less(const Word& u, const Word& v);

struct ShortlexLess {
  bool operator()(const Word& u, const Word& v) const { return shortlex_less(u, v); }
};

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

/// All reduced words of length <= radius in shortlex order.
std::vector<Word> ball_enumerate(const GeneratorSet& gens, std::size_t radius);
/// 1 + sum_{k=1..radius} 2r(2r-1)^(k-1).
std::uint64_t ball_size(std::size_t rank, std::size_t radius);

/// Canonical representative of the right coset g<b> in F2: strip the maximal
/// trailing power of b.
Word coset_rep_b(const Word& g);

/// Tokens are generator names, inverses carry a trailing apostrophe.
std::vector<std::string> to_tokens(const Word& w, const GeneratorSet& gens);
Word from_tokens(std::span<const std::string> tokens, const GeneratorSet& gens);
/// Tokens joined by a middle dot; the identity prints as "e".
std::string to_string(const Word& w, const GeneratorSet& gens);
/// Accepts tokens separated by whitespace, '*' or a middle dot. "e" or the
/// empty string is the identity.
Word parse_word(std::string_view text, const GeneratorSet& gens);

/// Name-free rendering for diagnostics: g0, g1', ...
std::string debug_string(const Word& w);

}  // namespace freeshift
