#pragma once

// Free-group words, free reduction, evaluation in group backends and
// (set) word maps.
//
// Convention: a word evaluates left to right, w(g) = g_{|l1|}^{±1} * g_{|l2|}^{±1} * ...
// using the backend's `multiply`. Permutation backends compose images left to
// right as well (see groups.hpp), so `a*b` means "apply a, then b".

#include "ucodes/error.hpp"
#include "ucodes/rational.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ucodes {

/// Signed generator index: i stands for x_i, -i for x_i^{-1}; indices are 1-based.
using Letter = std::int32_t;

/// A possibly unreduced sequence of letters. The empty word is the identity.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);
  Word(std::initializer_list<Letter> letters);

  static Word generator(int index);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  /// Largest |letter|, 0 for the empty word.
  int max_index() const;
  bool is_reduced() const;

  /// Formal inverse: reversed sequence with negated letters.
  Word inverse() const;

  /// Concatenation without reduction, so product structure is kept.
  friend Word operator*(const Word& a, const Word& b);
  Word& operator*=(const Word& other);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Freely reduced form (stack-based cancellation of adjacent x x^{-1}).
Word reduce(const Word& w);

/// Throws ValidationError unless every letter is nonzero with |letter| <= rank.
void validate(const Word& w, int rank);

/// Exponent-sum vector of length `rank`; letters above `rank` are dropped
/// (that is, those generators are sent to zero).
std::vector<std::int64_t> abelianize(const Word& w, int rank);

std::string to_string(const Word& w);

/// Ordered multiset of words over the free group of a declared rank.
/// Duplicates are legal and counted; order is significant for set word maps.
class WordSet {
 public:
  WordSet(int rank, std::vector<Word> words, std::string label = {});

  /// x_1, ..., x_rank in order.
  static WordSet basis(int rank, std::string label = "basis");

  int rank() const { return rank_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  const Word& operator[](std::size_t i) const { return words_[i]; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  auto begin() const { return words_.begin(); }
  auto end() const { return words_.end(); }

  /// Ordered multiset union; ranks must agree.
  WordSet concat(const WordSet& other, std::string label = {}) const;

  friend bool operator==(const WordSet&, const WordSet&) = default;

 private:
  int rank_;
  std::vector<Word> words_;
  std::string label_;
};

struct LengthStats {
  std::size_t max_len = 0;
  Rational avg_len;
};

/// Maximum and average length of the reduced words.
LengthStats length_stats(const WordSet& a);

// ---------------------------------------------------------------------------
// Evaluation

template <class G>
concept GroupLike = requires(const G& g, const typename G::element_type& a) {
  typename G::element_type;
  { g.identity() } -> std::convertible_to<typename G::element_type>;
  { g.multiply(a, a) } -> std::convertible_to<typename G::element_type>;
  { g.inverse(a) } -> std::convertible_to<typename G::element_type>;
};

template <GroupLike G>
typename G::element_type evaluate(const Word& w, std::span<const typename G::element_type> assignment,
                                  const G& group) {
  validate(w, static_cast<int>(assignment.size()));
  auto acc = group.identity();
  for (Letter l : w.letters()) {
    const auto& g = assignment[static_cast<std::size_t>(l > 0 ? l : -l) - 1];
    acc = group.multiply(acc, l > 0 ? g : group.inverse(g));
  }
  return acc;
}

/// The free group itself as a backend: elements are reduced words.
struct FreeGroup {
  using element_type = Word;
  Word identity() const { return {}; }
  Word multiply(const Word& a, const Word& b) const { return reduce(a * b); }
  Word inverse(const Word& a) const { return a.inverse(); }
};

/// Z_m with addition; a tiny backend mostly useful in tests and examples.
struct CyclicGroup {
  using element_type = std::int64_t;
  std::int64_t modulus;
  std::int64_t identity() const { return 0; }
  std::int64_t multiply(std::int64_t a, std::int64_t b) const { return (a + b) % modulus; }
  std::int64_t inverse(std::int64_t a) const { return (modulus - a % modulus) % modulus; }
};

/// Set word map over a group backend: (w_1(g), ..., w_n(g)).
template <GroupLike G>
std::vector<typename G::element_type> set_word_map(const WordSet& a,
                                                   std::span<const typename G::element_type> assignment,
                                                   const G& group) {
  if (assignment.size() != static_cast<std::size_t>(a.rank())) {
    throw ValidationError("set_word_map: assignment has " + std::to_string(assignment.size()) +
                          " entries, word set has rank " + std::to_string(a.rank()));
  }
  std::vector<typename G::element_type> out;
  out.reserve(a.size());
  for (const Word& w : a) out.push_back(evaluate(w, assignment, group));
  return out;
}

/// Set word map over words: substitutes images[i] for x_{i+1} in every word of
/// `a`. The result has rank images.rank() and freely reduced words.
WordSet set_word_map(const WordSet& a, const WordSet& images);

/// Same substitution but keeps the concatenated, unreduced letter sequence.
Word substitute(const Word& w, std::span<const Word> images);

// ---------------------------------------------------------------------------
// JSON: {"rank": k, "label": str, "words": [[signed ints]]}

void to_json(nlohmann::json& j, const Word& w);
void from_json(const nlohmann::json& j, Word& w);
nlohmann::json to_json(const WordSet& a);
WordSet word_set_from_json(const nlohmann::json& j);

}  // namespace ucodes
