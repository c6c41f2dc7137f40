#include "oracles.hpp"

#include "ucodes/groups.hpp"
#include "ucodes/rng.hpp"
#include "ucodes/words.hpp"

#include <doctest.h>

using namespace ucodes;

namespace {

std::vector<int> letters(const Word& w) { return {w.letters().begin(), w.letters().end()}; }

}  // namespace

TEST_CASE("reduce cancels adjacent inverse pairs") {
  CHECK(reduce(Word{1, -1}).empty());
  CHECK(reduce(Word{1, 2, -2, -1}).empty());
  CHECK(reduce(Word{1, 2, -2, 1}) == Word{1, 1});
  CHECK(reduce(Word{}) == Word{});
  CHECK(reduce(Word{-3, 3, 2}) == Word{2});
  CHECK(Word{1, 1}.is_reduced());
  CHECK_FALSE(Word{2, -2}.is_reduced());
}

TEST_CASE("validate rejects zero and out-of-range letters") {
  CHECK_NOTHROW(validate(Word{1, -2}, 2));
  CHECK_THROWS_AS(validate(Word{3}, 2), ValidationError);
  CHECK_THROWS_AS(validate(Word{0}, 2), ValidationError);
  CHECK_THROWS_AS(WordSet(0, {}), ValidationError);
}

TEST_CASE("evaluate in small groups") {
  const CyclicGroup z5{5};
  const std::vector<std::int64_t> g{2, 3};
  CHECK(evaluate<CyclicGroup>(Word{1, 2}, g, z5) == 0);
  CHECK(evaluate<CyclicGroup>(Word{}, g, z5) == 0);
  CHECK(evaluate<CyclicGroup>(Word{1, 1, -2}, g, z5) == 1);

  // (1 2) then (2 3) then (1 2)^-1 is the transposition (1 3), fixing 2.
  const auto s3 = FiniteGroup::symmetric(3);
  const std::vector<Element> t{s3.at({2, 1, 3}), s3.at({1, 3, 2})};
  const Element v = evaluate<FiniteGroup>(Word{1, 2, -1}, t, s3);
  CHECK(s3.coordinates(v) == std::vector<int>{3, 2, 1});
  const auto hand = oracle::evaluate({1, 2, -1}, {{1, 0, 2}, {0, 2, 1}});
  CHECK(hand == oracle::Perm{2, 1, 0});

  CHECK_THROWS_AS(evaluate<FiniteGroup>(Word{3}, t, s3), ValidationError);
}

TEST_CASE("set word maps over words") {
  const WordSet a(2, {Word{1}, Word{2}, Word{1, 2}});
  const WordSet collapse(1, {Word{1}, Word{1}});
  CHECK(set_word_map(a, collapse).words() == std::vector<Word>{Word{1}, Word{1}, Word{1, 1}});
  CHECK(set_word_map(WordSet(2, {Word{1, 2}}), WordSet(2, {Word{2}, Word{1}})).words() ==
        std::vector<Word>{Word{2, 1}});
  const WordSet images(3, {Word{1, -3}, Word{2, 2}});
  CHECK(set_word_map(WordSet::basis(2), images).words() == images.words());
  CHECK_THROWS_AS(set_word_map(a, WordSet(1, {Word{1}})), ValidationError);

  // Substitution keeps the letter sequence; the set word map reduces it.
  const std::vector<Word> img{Word{1, 2}, Word{-2}};
  CHECK(substitute(Word{1, 2}, img) == Word{1, 2, -2});
  CHECK(set_word_map(WordSet(2, {Word{1, 2}}), WordSet(2, img))[0] == Word{1});
}

TEST_CASE("length statistics use reduced words") {
  auto s = length_stats(WordSet(2, {Word{1}, Word{2}}));
  CHECK(s.max_len == 1);
  CHECK(s.avg_len == Rational(1));
  s = length_stats(WordSet(2, {Word{}, Word{1, 2}}));
  CHECK(s.max_len == 2);
  CHECK(s.avg_len == Rational(1));
  s = length_stats(WordSet(1, {Word{1, -1, 1}}));
  CHECK(s.max_len == 1);
}

TEST_CASE("abelianize drops generators above the rank") {
  CHECK(abelianize(Word{1, 2, -1, 3, 3}, 3) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(abelianize(Word{1, 2, -1, 3, 3}, 2) == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("property: reduce matches the rescanning oracle and is idempotent") {
  Rng rng(11, "test.words.reduce");
  for (int trial = 0; trial < 500; ++trial) {
    const Word w = oracle::random_word(rng, 3, 16);
    const Word r = reduce(w);
    CHECK(letters(r) == oracle::reduce(letters(w)));
    CHECK(reduce(r) == r);
    CHECK(r.is_reduced());
    CHECK(reduce(w * w.inverse()).empty());
  }
}

TEST_CASE("property: evaluation is invariant under reduction") {
  Rng rng(12, "test.words.eval");
  const auto s4 = FiniteGroup::symmetric(4);
  const CyclicGroup z7{7};
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = oracle::random_word(rng, 3, 14);
    std::vector<Element> g;
    std::vector<oracle::Perm> perms;
    for (int i = 0; i < 3; ++i) {
      g.push_back(static_cast<Element>(rng.below(s4.order())));
      oracle::Perm p;
      for (int x : s4.coordinates(g.back())) p.push_back(x - 1);
      perms.push_back(p);
    }
    const Element e = evaluate<FiniteGroup>(w, g, s4);
    CHECK(e == evaluate<FiniteGroup>(reduce(w), g, s4));
    oracle::Perm got;
    for (int x : s4.coordinates(e)) got.push_back(x - 1);
    CHECK(got == oracle::evaluate(letters(w), perms));

    const std::vector<std::int64_t> c{static_cast<std::int64_t>(rng.below(7)), static_cast<std::int64_t>(rng.below(7)),
                                      static_cast<std::int64_t>(rng.below(7))};
    CHECK(evaluate<CyclicGroup>(w, c, z7) == evaluate<CyclicGroup>(reduce(w), c, z7));
  }
}

TEST_CASE("property: set word maps compose") {
  Rng rng(13, "test.words.compose");
  const auto s4 = FiniteGroup::symmetric(4);
  for (int trial = 0; trial < 100; ++trial) {
    const WordSet a = oracle::random_word_set(rng, 2, 4, 6);
    const WordSet b = oracle::random_word_set(rng, 3, 2, 5);
    const WordSet c = oracle::random_word_set(rng, 2, 3, 4);
    // Over words: A(B(C)) = (A∘B)(C).
    CHECK(set_word_map(a, set_word_map(b, c)) == set_word_map(set_word_map(a, b), c));
    // Over a group: A(B(g)) = (A∘B)(g).
    std::vector<Element> g;
    for (int i = 0; i < 3; ++i) g.push_back(static_cast<Element>(rng.below(s4.order())));
    const auto inner = set_word_map<FiniteGroup>(b, g, s4);
    CHECK(set_word_map<FiniteGroup>(a, inner, s4) == set_word_map<FiniteGroup>(set_word_map(a, b), g, s4));
  }
}

TEST_CASE("property: JSON round trip is exact") {
  Rng rng(14, "test.words.json");
  for (int trial = 0; trial < 50; ++trial) {
    WordSet a = oracle::random_word_set(rng, 4, 1 + static_cast<int>(rng.below(10)), 9);
    a.set_label("trial " + std::to_string(trial));
    const auto text = to_json(a).dump();
    const WordSet back = word_set_from_json(nlohmann::json::parse(text));
    CHECK(back == a);
    CHECK(to_json(back).dump() == text);
  }
  CHECK_THROWS_AS(word_set_from_json(nlohmann::json::parse(R"({"rank":1,"words":[[2]]})")), ValidationError);
  CHECK_THROWS_AS(word_set_from_json(nlohmann::json::parse(R"({"words":[]})")), ValidationError);
}
