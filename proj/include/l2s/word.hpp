/**
 * Words in a free group and finitely presented groups.
 *
 * A word is a sequence of signed generator indices: +i is generator i, -i its
 * inverse, with generators numbered from 1. Equality of words is equality of
 * free reductions; the word problem of the ambient group is never attempted.
 */
#pragma once

#include <compare>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <vector>

#include "core.hpp"

namespace l2s {

struct Word {
  std::vector<int> letters;

  Word() = default;
  Word(std::initializer_list<int> l) : letters(l) {}
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  Word inverse() const {
    Word w;
    w.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
    return w;
  }

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;
};

/// Cancels adjacent g g^-1 pairs. Throws on the letter 0.
inline Word free_reduce(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (int l : w.letters) {
    if (l == 0) throw ValidationError("word contains the letter 0");
    if (!out.letters.empty() && out.letters.back() == -l)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

/// As free_reduce, also rejecting letters outside [1, generator_count].
inline Word free_reduce(const Word& w, int generator_count) {
  for (int l : w.letters)
    if (l == 0 || std::abs(l) > generator_count)
      throw ValidationError("invalid generator index " + std::to_string(l) + " (group has " +
                            std::to_string(generator_count) + " generators)");
  return free_reduce(w);
}

inline bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (w.letters[i] == -w.letters[i + 1]) return false;
  for (int l : w.letters)
    if (l == 0) return false;
  return true;
}

/// Freely reduced product.
inline Word operator*(const Word& a, const Word& b) {
  Word w = a;
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return free_reduce(w);
}

/// Renumbers generators i -> i + offset.
inline Word shift_generators(const Word& w, int offset) {
  Word out = w;
  for (int& l : out.letters) l = l > 0 ? l + offset : l - offset;
  return out;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w.letters[i]);
  }
  return s;
}

struct FpGroup {
  int generator_count = 0;
  std::vector<Word> relators;

  /// Throws unless every relator is non-empty, freely reduced and uses valid
  /// generator indices.
  void validate() const {
    if (generator_count < 0) throw ValidationError("negative generator count");
    for (std::size_t i = 0; i < relators.size(); ++i) {
      const Word& r = relators[i];
      if (r.empty()) throw ValidationError("relator " + std::to_string(i) + " is empty");
      if (free_reduce(r, generator_count) != r)
        throw ValidationError("relator " + std::to_string(i) + " is not freely reduced");
    }
  }

  bool operator==(const FpGroup&) const = default;
};

inline FpGroup free_group(int rank) { return FpGroup{rank, {}}; }

}  // namespace l2s
