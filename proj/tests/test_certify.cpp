#include "oracles.hpp"

#include "ucodes/certify.hpp"
#include "ucodes/constructions.hpp"

#include <doctest.h>

#include <memory>

using namespace ucodes;

namespace {

GroupBackend f2(int k) {
  auto g = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic_power(2, k));
  return {g, g->defining_generators()};
}

WordSet flip_signs(const WordSet& a, Rng& rng) {
  std::vector<Word> out;
  for (const auto& w : a) {
    std::vector<Letter> l(w.letters().begin(), w.letters().end());
    for (auto& x : l) {
      if (rng.below(2)) x = -x;
    }
    out.emplace_back(std::move(l));
  }
  return WordSet(a.rank(), std::move(out));
}

}  // namespace

TEST_CASE("one-occurrence counts") {
  const WordSet a(2, {Word{1}, Word{2}, Word{1, 2}});
  CHECK(one_occurrence_count(a, std::vector<int>{1}) == 2);
  CHECK(one_occurrence_count(a, std::vector<int>{1, 2}) == 2);
  CHECK(one_occurrence_count(WordSet(1, {Word{1, 1}}), std::vector<int>{1}) == 0);
  // Unreduced letters count: x1 x1^-1 x1 has three occurrences.
  CHECK(one_occurrence_count(WordSet(1, {Word{1, -1, 1}}), std::vector<int>{1}) == 0);
  CHECK_THROWS_AS(one_occurrence_count(a, std::vector<int>{3}), ValidationError);
  CHECK_THROWS_AS(one_occurrence_count(a, std::vector<int>{}), ValidationError);
}

TEST_CASE("profiles") {
  const auto p = profile(Word{1, 2, -2, 3});
  CHECK(p.support == 0b111);
  CHECK(p.once == 0b101);
  CHECK(p.certified(0b001));
  CHECK_FALSE(p.certified(0b010));
  CHECK_FALSE(p.certified(0b101));
  CHECK(p.certified(0b1001));
}

TEST_CASE("certified delta examples") {
  auto c = certified_delta(WordSet(2, {Word{1}, Word{2}, Word{1, 2}}));
  CHECK(c.delta_lower == Rational(2, 3));
  CHECK(c.certifying());
  CHECK(c.syndromes_checked == 3);
  for (int k = 1; k <= 6; ++k) {
    c = certified_delta(WordSet::basis(k));
    CHECK(c.delta_lower == Rational(1, k));
    CHECK(c.worst_syndrome == std::vector<int>{1});
  }
  c = certified_delta(WordSet(3, {Word{}}));
  CHECK(c.delta_lower == Rational(0));
  CHECK(c.worst_count == 0);
}

TEST_CASE("sampled mode above the exhaustive cap") {
  Rng rng(51, "test.certify.sampled");
  const WordSet a = oracle::random_word_set(rng, 30, 200, 6);
  CertifyOptions opts;
  opts.exhaustive_max_k = 10;
  opts.samples = 3000;
  const auto c = certified_delta(a, opts);
  CHECK(c.mode == CertMode::Sampled);
  CHECK_FALSE(c.certifying());
  CHECK(c.syndromes_checked == 3000);
}

TEST_CASE("property: syndrome counts match direct counting") {
  Rng rng(52, "test.certify.counts");
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(8));
    // Mix a few repeated profiles with random words to hit both scan paths.
    WordSet a = oracle::random_word_set(rng, k, 1 + static_cast<int>(rng.below(trial % 2 ? 6 : 200)), 7);
    const auto counts = syndrome_counts(a);
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> c;
      for (int i = 0; i < k; ++i) {
        if (mask >> i & 1) c.push_back(i + 1);
      }
      CHECK(counts[mask] == oracle::one_out(a, c));
    }
    CHECK(certified_delta(a).delta_lower == oracle::certified(a));
    CHECK(syndrome_counts(a, 4) == counts);
  }
}

TEST_CASE("property: sign flips do not change counts") {
  Rng rng(53, "test.certify.signs");
  for (int trial = 0; trial < 40; ++trial) {
    const WordSet a = oracle::random_word_set(rng, 5, 30, 8);
    CHECK(syndrome_counts(flip_signs(a, rng)) == syndrome_counts(a));
  }
}

TEST_CASE("property: counts add over concatenation") {
  Rng rng(54, "test.certify.union");
  for (int trial = 0; trial < 30; ++trial) {
    const WordSet a = oracle::random_word_set(rng, 6, 20, 6);
    const WordSet b = oracle::random_word_set(rng, 6, 13, 6);
    const auto ca = syndrome_counts(a), cb = syndrome_counts(b), cu = syndrome_counts(a.concat(b));
    for (std::size_t m = 1; m < cu.size(); ++m) CHECK(cu[m] == ca[m] + cb[m]);
    CHECK(certified_delta(a.concat(b)).delta_lower >=
          std::min(certified_delta(a).delta_lower, certified_delta(b).delta_lower));
  }
}

TEST_CASE("property: the certificate never exceeds exact detection probability") {
  Rng rng(55, "test.certify.soundness");
  std::vector<std::shared_ptr<const FiniteGroup>> groups{
      std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(3)),
      std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(4)),
      std::make_shared<const FiniteGroup>(FiniteGroup::abelian({2, 4})),
      std::make_shared<const FiniteGroup>(FiniteGroup::cyclic_power(3, 2))};
  // Only surjective assignments: a proper image subgroup sees every word as trivial.
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 120; ++trial) {
    const auto& g = groups[static_cast<std::size_t>(trial) % groups.size()];
    const int k = 2 + static_cast<int>(rng.below(3));
    const WordSet a = oracle::random_word_set(rng, k, 1 + static_cast<int>(rng.below(12)), 6);
    GroupBackend b{g, {}};
    for (int i = 0; i < k; ++i) b.generators.push_back(static_cast<Element>(rng.below(g->order())));
    if (!b.generates()) continue;
    ++checked;
    CHECK(certified_delta(a).delta_lower <= exact_delta(a, b));
  }
  CHECK(checked == 120);
}

TEST_CASE("matching certificate") {
  for (int k = 1; k <= 10; ++k) {
    const auto a = hadamard_code(k);
    const auto m = hadamard_matching_certificate(a);
    CHECK(m.value == Rational(1, 2));
    CHECK(m.exhaustive);
    CHECK(m.base_size == static_cast<std::size_t>(k));
    CHECK(exact_delta_vector_space(a, 2, k) == Rational(1, 2));
  }
  CHECK(hadamard_matching_certificate(WordSet(1, {Word{}, Word{1}})).value == Rational(1, 2));
  // k = 2, C = {2}: x_{12} x_{1}^{-1} reduces to x_1 x_2 x_1^{-1}.
  CHECK(reduce(Word{1, 2} * Word{1}.inverse()) == Word{1, 2, -1});

  // A closure over a base that is not the generators is rejected.
  CHECK_THROWS_AS(hadamard_matching_certificate(subset_closure(std::vector<Word>{Word{1, 2}, Word{2}}, 2)),
                  ValidationError);
  CHECK_THROWS_AS(hadamard_matching_certificate(WordSet(2, {Word{1}, Word{2}, Word{1, 2}})), ValidationError);
  // Larger bases fall back to sampled pairs.
  const auto big = hadamard_code(13);
  const auto m = hadamard_matching_certificate(big, 64, 3);
  CHECK_FALSE(m.exhaustive);
  CHECK(m.value == Rational(1, 2));
}

TEST_CASE("subset closure base recovery") {
  const std::vector<Word> base{Word{2}, Word{1, -2}, Word{1}};
  const auto a = subset_closure(base, 2);
  const auto got = subset_closure_base(a);
  REQUIRE(got.has_value());
  CHECK(*got == base);
  CHECK_FALSE(subset_closure_base(WordSet(1, {Word{1}, Word{1}})).has_value());
}

TEST_CASE("block union certificate") {
  const std::vector<std::vector<Word>> bases{{Word{1}}, {Word{2}}};
  const auto c = block_union_certificate(2, bases, {Rational(1, 2), Rational(1, 2)});
  CHECK(c.value == Rational(1, 4));
  CHECK(c.worst_syndrome == std::vector<int>{1});
  CHECK(c.max_miss_fraction == Rational(1, 2));
}

TEST_CASE("reports") {
  auto r = report(hadamard_code(4), {f2(4)});
  CHECK(r.n == 16);
  CHECK(r.rate == Rational(1, 4));
  CHECK(r.matching.has_value());
  CHECK(r.certified == Rational(1, 2));
  REQUIRE(r.backends.size() == 1);
  CHECK(r.backends[0].exact_delta == Rational(1, 2));
  CHECK(r.lengths.max_len == 4);

  r = report(WordSet::basis(5), {f2(5)});
  CHECK(r.certified == Rational(1, 5));
  CHECK(r.backends[0].exact_delta == Rational(1, 5));
  CHECK_FALSE(r.matching.has_value());

  r = report(WordSet(2, {Word{}, Word{}}), {f2(2)});
  CHECK(r.certified == Rational(0));
  CHECK(r.backends[0].exact_delta == Rational(0));

  const auto j = to_json(report(hadamard_code(3), {}));
  CHECK(j.at("matching_certificate").at("value") == "1/2");
  CHECK(j.at("certified_delta") == "1/2");
}
