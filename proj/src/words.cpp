#include "ucodes/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace ucodes {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (Letter l : letters_) {
    if (l == 0) throw ValidationError("word letters must be nonzero");
  }
}

Word::Word(std::initializer_list<Letter> letters) : Word(std::vector<Letter>(letters)) {}

Word Word::generator(int index) {
  if (index < 1) throw ValidationError("generator index must be >= 1");
  return Word{static_cast<Letter>(index)};
}

int Word::max_index() const {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, std::abs(l));
  return m;
}

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (letters_[i] == -letters_[i - 1]) return false;
  }
  return true;
}

Word Word::inverse() const {
  Word out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(-*it);
  return out;
}

Word operator*(const Word& a, const Word& b) {
  Word out = a;
  out *= b;
  return out;
}

Word& Word::operator*=(const Word& other) {
  letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end());
  return *this;
}

Word reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.length());
  for (Letter l : w.letters()) {
    if (!stack.empty() && stack.back() == -l) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

void validate(const Word& w, int rank) {
  for (Letter l : w.letters()) {
    if (l == 0 || std::abs(l) > rank) {
      throw ValidationError("letter " + std::to_string(l) + " out of range for rank " + std::to_string(rank));
    }
  }
}

std::vector<std::int64_t> abelianize(const Word& w, int rank) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(rank), 0);
  for (Letter l : w.letters()) {
    int i = std::abs(l);
    if (i <= rank) v[static_cast<std::size_t>(i - 1)] += l > 0 ? 1 : -1;
  }
  return v;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (Letter l : w.letters()) {
    if (!first) os << ' ';
    first = false;
    os << 'x' << std::abs(l);
    if (l < 0) os << "^-1";
  }
  return os.str();
}

WordSet::WordSet(int rank, std::vector<Word> words, std::string label)
    : rank_(rank), words_(std::move(words)), label_(std::move(label)) {
  if (rank_ < 1) throw ValidationError("word set rank must be positive");
  if (words_.empty()) throw ValidationError("word set must contain at least one word");
  for (const Word& w : words_) validate(w, rank_);
}

WordSet WordSet::basis(int rank, std::string label) {
  std::vector<Word> words;
  for (int i = 1; i <= rank; ++i) words.push_back(Word::generator(i));
  return WordSet(rank, std::move(words), std::move(label));
}

WordSet WordSet::concat(const WordSet& other, std::string label) const {
  if (other.rank_ != rank_) throw ValidationError("cannot concatenate word sets of different rank");
  std::vector<Word> words = words_;
  words.insert(words.end(), other.words_.begin(), other.words_.end());
  return WordSet(rank_, std::move(words), label.empty() ? label_ : std::move(label));
}

LengthStats length_stats(const WordSet& a) {
  LengthStats stats;
  std::int64_t total = 0;
  for (const Word& w : a) {
    auto len = reduce(w).length();
    stats.max_len = std::max(stats.max_len, len);
    total += static_cast<std::int64_t>(len);
  }
  stats.avg_len = Rational(total, static_cast<std::int64_t>(a.size()));
  return stats;
}

WordSet set_word_map(const WordSet& a, const WordSet& images) {
  if (images.size() != static_cast<std::size_t>(a.rank())) {
    throw ValidationError("set_word_map: " + std::to_string(images.size()) + " images for rank " +
                          std::to_string(a.rank()));
  }
  std::vector<Word> reduced_images;
  reduced_images.reserve(images.size());
  for (const Word& w : images) reduced_images.push_back(reduce(w));
  auto out = set_word_map(a, std::span<const Word>(reduced_images), FreeGroup{});
  return WordSet(images.rank(), std::move(out), a.label());
}

Word substitute(const Word& w, std::span<const Word> images) {
  validate(w, static_cast<int>(images.size()));
  Word out;
  for (Letter l : w.letters()) {
    const Word& img = images[static_cast<std::size_t>(std::abs(l)) - 1];
    out *= l > 0 ? img : img.inverse();
  }
  return out;
}

void to_json(nlohmann::json& j, const Word& w) {
  j = nlohmann::json::array();
  for (Letter l : w.letters()) j.push_back(l);
}

void from_json(const nlohmann::json& j, Word& w) {
  if (!j.is_array()) throw ValidationError("word must be a JSON array of signed integers");
  std::vector<Letter> letters;
  letters.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ValidationError("word letters must be integers");
    letters.push_back(x.get<Letter>());
  }
  w = Word(std::move(letters));
}

nlohmann::json to_json(const WordSet& a) {
  nlohmann::json j;
  j["rank"] = a.rank();
  j["label"] = a.label();
  j["words"] = a.words();
  return j;
}

WordSet word_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rank") || !j.contains("words")) {
    throw ValidationError("word set JSON needs \"rank\" and \"words\"");
  }
  std::vector<Word> words;
  for (const auto& w : j.at("words")) words.push_back(w.get<Word>());
  return WordSet(j.at("rank").get<int>(), std::move(words), j.value("label", std::string{}));
}

}  // namespace ucodes
