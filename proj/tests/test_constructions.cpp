#include "oracles.hpp"

#include "ucodes/constructions.hpp"
#include "ucodes/groups.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ucodes;

namespace {

int max_right_degree(const BipartiteGraph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.right_size()), 0);
  for (int v = 0; v < g.left_size(); ++v) {
    for (int u : g.neighbors(v)) ++deg[static_cast<std::size_t>(u)];
  }
  return *std::max_element(deg.begin(), deg.end());
}

// Every generator must occur once in at least δ|A| words, so the total length is at least δk|A|.
void check_length_floor(const WordSet& a, const Rational& delta) {
  const auto s = length_stats(a);
  CHECK(s.avg_len >= delta * Rational(a.rank()));
}

}  // namespace

TEST_CASE("Hadamard codes") {
  const auto a = hadamard_code(2);
  CHECK(a.words() == std::vector<Word>{Word{}, Word{1}, Word{2}, Word{1, 2}});
  CHECK(hadamard_code(1).words() == std::vector<Word>{Word{}, Word{1}});
  const auto h3 = hadamard_code(3);
  CHECK(h3.size() == 8);
  CHECK(h3[5] == Word{1, 3});
  CHECK(h3[7] == Word{1, 2, 3});
  CHECK_THROWS_AS(hadamard_code(0), ValidationError);
  CHECK_THROWS_AS(hadamard_code(21), BudgetExceeded);
  for (int k = 1; k <= 8; ++k) {
    const auto h = hadamard_code(k);
    // The one-occurrence count is weak here; the matching certificate gives 1/2.
    CHECK(certified_delta(h).delta_lower <= Rational(1, 2));
    CHECK(hadamard_matching_certificate(h).value == Rational(1, 2));
    CHECK(length_stats(h).avg_len == Rational(k, 2));
    check_length_floor(h, Rational(1, 2));
  }
  CHECK(ceil_log2(1) == 1);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(16) == 4);
}

TEST_CASE("subset closure keeps unreduced concatenations") {
  const std::vector<Word> base{Word{1, 2}, Word{-2}};
  const auto a = subset_closure(base, 2);
  CHECK(a.size() == 4);
  CHECK(a[3].length() == 3);
  CHECK(a[3] == Word{1, 2, -2});
}

TEST_CASE("syndrome code sizes") {
  SyndromeParams p;
  p.k = 4;
  p.reps_per_level = 432;
  const auto c = random_syndrome_code(p);
  CHECK(c.words.size() == 3456);
  CHECK(c.words.rank() == 4);
  CHECK(c.threshold == Rational(1, 24));
  CHECK(c.certificate.delta_lower >= c.threshold);
  CHECK(c.attempts >= 1);
  CHECK(c.attempts <= 5);

  SyndromeParams tiny;
  tiny.k = 2;
  tiny.reps_per_level = 1;
  tiny.threshold = Rational(0);
  const auto t = random_syndrome_code(tiny);
  CHECK(t.words.size() == 2);
  CHECK(t.attempts == 1);

  // Same seed, same code.
  CHECK(random_syndrome_code(p).words == c.words);
  p.seed = 1;
  CHECK_FALSE(random_syndrome_code(p).words == c.words);
}

TEST_CASE("syndrome codes give up past the resample budget") {
  SyndromeParams p;
  p.k = 3;
  p.reps_per_level = 2;
  p.threshold = Rational(1);
  p.max_resamples = 3;
  try {
    random_syndrome_code(p);
    FAIL("expected a construction failure");
  } catch (const ConstructionFailure& e) {
    CHECK(e.best().has_value());
    CHECK(e.best_value() < Rational(1));
  }
}

TEST_CASE("amplification") {
  AmplifyParams p;
  p.delta_in = Rational(1, 2);
  p.groups = 2;
  const auto out = amplify(hadamard_code(2), p);
  CHECK(out.d == 2);
  CHECK(out.words.size() == 16);
  CHECK(out.blocks.size() == 4);
  for (const auto& b : out.blocks) CHECK(b.size() == 2);
  CHECK(out.certificate.value <= certified_delta(out.words).delta_lower);
  CHECK(amplify(hadamard_code(2), p).words == out.words);

  // The input has to carry its own certificate.
  p.delta_in = Rational(3, 4);
  CHECK_THROWS_AS(amplify(hadamard_code(2), p), ValidationError);
}

TEST_CASE("composition at small sizes") {
  ComposeParams p;
  p.t = 1;
  p.reps_per_level = 8;
  p.groups = 2;
  p.subset_sizes = {3};
  p.target = Rational(0);
  const auto c = iterative_compose(4, p);
  CHECK(c.predicted_size == compose_size(4, p));
  CHECK(c.words.size() == c.predicted_size);
  CHECK(c.words.size() == 2 * 4 * 8);
  CHECK(c.certified <= exact_delta_vector_space(c.words, 2, 4));
  CHECK(c.certified <= exact_delta_vector_space(c.words, 3, 4));
  CHECK(iterative_compose(4, p).words == c.words);

  p.max_words = 10;
  CHECK_THROWS_AS(iterative_compose(4, p), BudgetExceeded);
}

TEST_CASE("a single Spielman step") {
  const WordSet a0 = WordSet::basis(2).concat(WordSet::basis(2)).concat(WordSet::basis(2)).concat(WordSet::basis(2));
  const auto g2 = sample_left_regular(4, 2, 2, 1);
  const auto g4 = sample_left_regular(8, 4, 2, 2);
  const auto b = spielman_step(a0, g2, g4);
  CHECK(b.rank() == 4);
  CHECK(b.size() == 16);
  for (int i = 0; i < 4; ++i) CHECK(b[static_cast<std::size_t>(i)] == Word{i + 1});
  CHECK_THROWS_AS(spielman_step(WordSet::basis(2), g2, g4), ValidationError);
}

TEST_CASE("Spielman chain") {
  SpielmanParams p;
  p.steps = 0;
  auto c = spielman_chain(p);
  CHECK(c.words.size() == 16);
  REQUIRE(c.records.size() == 1);
  CHECK(c.records[0].f2_delta == Rational(1, 4));
  CHECK(c.records[0].certificate.delta_lower == Rational(1, 4));

  p.steps = 2;
  c = spielman_chain(p);
  REQUIRE(c.records.size() == 3);
  REQUIRE(c.graphs.size() == 4);
  CHECK(c.records[1].rank == 8);
  CHECK(c.records[1].size == 32);
  CHECK(c.records[2].rank == 16);
  CHECK(c.records[2].size == 64);
  CHECK(c.words.size() == 64);
  for (std::size_t i = 1; i < c.records.size(); ++i) {
    const auto& r = c.records[i];
    CHECK(r.cert2k.pass);
    CHECK(r.cert4k.pass);
    // Each step multiplies lengths by at most the two largest right degrees.
    const auto bound = c.records[i - 1].lengths.max_len *
                       static_cast<std::size_t>(max_right_degree(c.graphs[2 * (i - 1)])) *
                       static_cast<std::size_t>(max_right_degree(c.graphs[2 * (i - 1) + 1]));
    CHECK(r.lengths.max_len <= std::max<std::size_t>(bound, c.records[i - 1].lengths.max_len));
    CHECK(r.certificate.delta_lower <= r.f2_delta);
  }
  CHECK(spielman_chain(p).words == c.words);
}

TEST_CASE("property: one-occurrence certificates are sound over vector spaces") {
  Rng rng(61, "test.constructions.soundness");
  for (int trial = 0; trial < 12; ++trial) {
    SyndromeParams p;
    p.k = 2 + static_cast<int>(rng.below(5));
    p.reps_per_level = 1 + static_cast<int>(rng.below(6));
    p.threshold = Rational(0);
    p.seed = rng.next();
    const auto c = random_syndrome_code(p);
    const Rational cert = c.certificate.delta_lower;
    for (int q : {2, 3}) {
      CHECK(cert <= exact_delta_vector_space(c.words, q, p.k));
      CHECK(exact_delta_vector_space(c.words, q, p.k) == oracle::vector_space_delta(c.words, q, p.k));
    }
    check_length_floor(c.words, cert);
  }
  for (int k = 2; k <= 12; k += 5) {
    const auto h = hadamard_code(k);
    CHECK(certified_delta(h).delta_lower <= exact_delta_vector_space(h, 2, k));
  }
}
