#include "freeshift/free_group.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

#include "freeshift/errors.hpp"
#include "freeshift/keyed_hash.hpp"

namespace freeshift {

GeneratorSet::GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw UsageError("generator set must have rank >= 1");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw UsageError("generator names must be nonempty");
    if (n.find('\'') != std::string::npos) {
      throw UsageError("generator name may not contain an apostrophe: " + n);
    }
    if (!seen.insert(n).second) throw UsageError("duplicate generator name: " + n);
  }
}

GeneratorSet GeneratorSet::free_rank2() { return GeneratorSet({"a", "b"}); }

GeneratorSet GeneratorSet::tree(std::size_t alphabet_size) {
  if (alphabet_size < 2) throw UsageError("alphabet size must be at least 2");
  std::vector<std::string> names;
  for (std::size_t k = 0; k <= alphabet_size; ++k) names.push_back("s" + std::to_string(k));
  return GeneratorSet(std::move(names));
}

const std::string& GeneratorSet::name(Generator g) const {
  if (g >= names_.size()) throw UsageError("generator index out of range");
  return names_[g];
}

std::optional<Generator> GeneratorSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Generator>(i);
  }
  return std::nullopt;
}

Word Word::generator(std::size_t rank, Generator g, int sign) {
  return power(rank, g, sign);
}

Word Word::power(std::size_t rank, Generator g, std::int64_t n) {
  if (g >= rank) throw UsageError("generator index out of range for rank");
  Word w(rank);
  w.append(g, n);
  return w;
}

Word Word::from_letters(std::size_t rank, std::span<const Letter> letters) {
  Word w(rank);
  for (const auto& l : letters) {
    if (l.gen >= rank || (l.sign != 1 && l.sign != -1)) throw UsageError("bad letter");
    w.append(l.gen, l.sign);
  }
  return w;
}

std::uint64_t Word::length() const {
  std::uint64_t n = 0;
  for (const auto& s : syllables_) n += static_cast<std::uint64_t>(std::llabs(s.power));
  return n;
}

std::vector<Letter> Word::letters() const {
  std::vector<Letter> out;
  out.reserve(length());
  for (const auto& s : syllables_) {
    const int sign = s.power > 0 ? 1 : -1;
    for (std::int64_t i = 0; i < std::llabs(s.power); ++i) out.push_back({s.gen, sign});
  }
  return out;
}

std::optional<Letter> Word::last_letter() const {
  if (syllables_.empty()) return std::nullopt;
  const auto& s = syllables_.back();
  return Letter{s.gen, s.power > 0 ? 1 : -1};
}

std::int64_t Word::trailing_power(Generator g) const {
  if (syllables_.empty() || syllables_.back().gen != g) return 0;
  return syllables_.back().power;
}

Word Word::without_trailing(Generator g) const {
  Word w = *this;
  if (!w.syllables_.empty() && w.syllables_.back().gen == g) w.syllables_.pop_back();
  return w;
}

Word Word::times(Generator g, std::int64_t n) const {
  if (g >= rank_) throw UsageError("generator index out of range for rank");
  Word w = *this;
  w.append(g, n);
  return w;
}

void Word::append(Generator g, std::int64_t n) {
  if (n == 0) return;
  if (!syllables_.empty() && syllables_.back().gen == g) {
    syllables_.back().power += n;
    if (syllables_.back().power == 0) syllables_.pop_back();
  } else {
    syllables_.push_back({g, n});
  }
}

Word Word::inverse() const {
  Word w(rank_);
  w.syllables_.reserve(syllables_.size());
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    w.syllables_.push_back({it->gen, -it->power});
  }
  return w;
}

Word operator*(const Word& u, const Word& v) {
  if (u.rank_ != v.rank_) {
    throw UsageError("cannot multiply words of rank " + std::to_string(u.rank_) + " and " +
                     std::to_string(v.rank_));
  }
  Word w = u;
  for (const auto& s : v.syllables_) w.append(s.gen, s.power);
  return w;
}

Word multiply(const Word& u, const Word& v) { return u * v; }
Word invert(const Word& u) { return u.inverse(); }
std::uint64_t word_length(const Word& u) { return u.length(); }

namespace {

std::size_t letter_rank(const Letter& l, std::size_t rank) {
  return l.sign > 0 ? l.gen : rank + l.gen;
}

}  // namespace

bool shortlex_less(const Word& u, const Word& v) {
  const auto lu = u.length();
  const auto lv = v.length();
  if (lu != lv) return lu < lv;
  const auto a = u.letters();
  const auto b = v.letters();
  const std::size_t rank = std::max(u.rank(), v.rank());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ra = letter_rank(a[i], rank);
    const auto rb = letter_rank(b[i], rank);
    if (ra != rb) return ra < rb;
  }
  return false;
}

std::size_t WordHash::operator()(const Word& w) const {
  return static_cast<std::size_t>(hashing::combine(hashing::word_digest(w), w.rank()));
}

std::vector<Word> ball_enumerate(const GeneratorSet& gens, std::size_t radius) {
  const std::size_t rank = gens.rank();
  std::vector<Letter> alphabet;
  for (Generator g = 0; g < rank; ++g) alphabet.push_back({g, 1});
  for (Generator g = 0; g < rank; ++g) alphabet.push_back({g, -1});

  std::vector<Word> out{Word::identity(rank)};
  std::vector<Word> frontier = out;
  for (std::size_t k = 1; k <= radius; ++k) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      const auto last = w.last_letter();
      for (const auto& l : alphabet) {
        if (last && *last == l.inverse()) continue;
        next.push_back(w.times(l));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::uint64_t ball_size(std::size_t rank, std::size_t radius) {
  std::uint64_t total = 1;
  std::uint64_t shell = 2 * rank;
  for (std::size_t k = 1; k <= radius; ++k) {
    total += shell;
    shell *= 2 * rank - 1;
  }
  return total;
}

Word coset_rep_b(const Word& g) {
  if (g.rank() != 2) throw UsageError("coset_rep_b expects a word in F2");
  return g.without_trailing(kGenB);
}

std::vector<std::string> to_tokens(const Word& w, const GeneratorSet& gens) {
  if (w.rank() != gens.rank()) throw UsageError("word rank does not match generator set");
  std::vector<std::string> out;
  for (const auto& l : w.letters()) {
    out.push_back(l.sign > 0 ? gens.name(l.gen) : gens.name(l.gen) + "'");
  }
  return out;
}

Word from_tokens(std::span<const std::string> tokens, const GeneratorSet& gens) {
  std::vector<Letter> letters;
  for (const auto& t : tokens) {
    std::string_view name = t;
    int sign = 1;
    if (!name.empty() && name.back() == '\'') {
      sign = -1;
      name.remove_suffix(1);
    }
    const auto g = gens.find(name);
    if (!g) throw UsageError("unknown generator token: " + t);
    letters.push_back({*g, sign});
  }
  return Word::from_letters(gens.rank(), letters);
}

std::string to_string(const Word& w, const GeneratorSet& gens) {
  if (w.is_identity()) return "e";
  std::string out;
  for (const auto& t : to_tokens(w, gens)) {
    if (!out.empty()) out += "·";
    out += t;
  }
  return out;
}

Word parse_word(std::string_view text, const GeneratorSet& gens) {
  static constexpr std::string_view kDot = "·";
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, kDot.size()) == kDot) {
      flush();
      i += kDot.size();
      continue;
    }
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '*' || c == ',') {
      flush();
    } else {
      cur += c;
    }
    ++i;
  }
  flush();
  if (tokens.size() == 1 && tokens[0] == "e" && !gens.find("e")) return Word::identity(gens.rank());
  return from_tokens(tokens, gens);
}

std::string debug_string(const Word& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += ' ';
    out += "g" + std::to_string(s.gen);
    if (s.power != 1) out += "^" + std::to_string(s.power);
  }
  return out;
}

}  // namespace freeshift
