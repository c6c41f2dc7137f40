#include "ucodes/constructions.hpp"
#include "ucodes/groups.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace ucodes {

int ceil_log2(std::int64_t k) {
  if (k < 1) throw ValidationError("ceil_log2 needs a positive argument");
  if (k == 1) return 1;
  return std::bit_width(static_cast<std::uint64_t>(k - 1));
}

WordSet subset_closure(std::span<const Word> base, int rank, std::string label) {
  if (base.size() > 30) throw BudgetExceeded("subset closure of more than 30 words");
  const std::size_t n = std::size_t{1} << base.size();
  std::vector<Word> words(n);
  for (std::size_t s = 1; s < n; ++s) {
    const int top = std::bit_width(s) - 1;
    words[s] = words[s ^ (std::size_t{1} << top)] * base[static_cast<std::size_t>(top)];
  }
  return WordSet(rank, std::move(words), std::move(label));
}

WordSet hadamard_code(int k, int cap) {
  if (k < 1) throw ValidationError("hadamard_code needs k >= 1");
  if (k > cap) throw BudgetExceeded("hadamard_code: k=" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  const auto basis = WordSet::basis(k);
  return subset_closure(basis.words(), k, "hadamard k=" + std::to_string(k));
}

std::vector<Word> sample_syndrome_words(int k, int reps_per_level, int levels, Rng& rng) {
  std::vector<Word> words;
  words.reserve(static_cast<std::size_t>(levels) * static_cast<std::size_t>(reps_per_level) *
                static_cast<std::size_t>(k));
  std::vector<Letter> letters;
  for (int ell = 1; ell <= levels; ++ell) {
    for (int j = 0; j < reps_per_level * k; ++j) {
      letters.clear();
      for (int i = 1; i <= k; ++i) {
        if (rng.one_in_pow2(static_cast<unsigned>(ell))) letters.push_back(i);
      }
      words.emplace_back(letters);
    }
  }
  return words;
}

SyndromeCode random_syndrome_code(const SyndromeParams& p) {
  if (p.k < 2) throw ValidationError("random_syndrome_code needs k >= 2");
  if (p.reps_per_level < 1) throw ValidationError("reps_per_level must be positive");
  const int levels = p.levels > 0 ? p.levels : ceil_log2(p.k);
  const Rational threshold = p.threshold.value_or(Rational(1, 12 * levels));
  Rng rng(p.seed, "constructions.syndrome");
  std::optional<SyndromeCode> best;
  for (int attempt = 1; attempt <= p.max_resamples; ++attempt) {
    WordSet words(p.k, sample_syndrome_words(p.k, p.reps_per_level, levels, rng),
                  "syndrome k=" + std::to_string(p.k));
    auto cert = certified_delta(words, p.certify);
    if (!best || cert.delta_lower > best->certificate.delta_lower) {
      best = SyndromeCode{std::move(words), std::move(cert), threshold, attempt};
    }
    if (best->certificate.delta_lower >= threshold) {
      best->attempts = attempt;
      return *best;
    }
  }
  throw ConstructionFailure("syndrome code missed threshold " + to_string(threshold) + " after " +
                                std::to_string(p.max_resamples) + " attempts; best " +
                                to_string(best->certificate.delta_lower),
                            best->words, best->certificate.delta_lower);
}

namespace {

// d distinct positions out of n, increasing (Floyd's sampling).
std::vector<std::size_t> sample_positions(std::size_t n, std::size_t d, Rng& rng) {
  std::set<std::size_t> chosen;
  for (std::size_t j = n - d; j < n; ++j) {
    auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

AmplifiedCode amplify(const WordSet& a, const AmplifyParams& p) {
  if (p.delta_in <= 0 || p.delta_in > 1) throw ValidationError("delta_in must lie in (0, 1]");
  if (p.groups < 1) throw ValidationError("groups must be positive");
  auto input_cert = certified_delta(a);
  if (!input_cert.certifying()) throw ValidationError("amplify needs an exhaustively certified input");
  if (input_cert.delta_lower < p.delta_in) {
    throw ValidationError("input certifies only " + to_string(input_cert.delta_lower) + " < delta_in " +
                          to_string(p.delta_in));
  }
  const int d = static_cast<int>(ceil(Rational(1) / p.delta_in));
  if (static_cast<std::size_t>(d) > a.size()) throw ValidationError("input has fewer than d words");
  if (d > 30) throw BudgetExceeded("subset size d=" + std::to_string(d) + " is too large");
  const std::size_t blocks = static_cast<std::size_t>(p.groups) * static_cast<std::size_t>(a.rank());

  Rng rng(p.seed, "constructions.amplify");
  std::optional<AmplifiedCode> best;
  for (int attempt = 1; attempt <= p.max_resamples; ++attempt) {
    std::vector<std::vector<std::size_t>> positions(blocks);
    std::vector<std::vector<Word>> bases(blocks);
    std::vector<Word> words;
    words.reserve(blocks << d);
    for (std::size_t j = 0; j < blocks; ++j) {
      positions[j] = sample_positions(a.size(), static_cast<std::size_t>(d), rng);
      for (std::size_t pos : positions[j]) bases[j].push_back(a[pos]);
      auto closure = subset_closure(bases[j], a.rank());
      words.insert(words.end(), closure.begin(), closure.end());
    }
    auto cert = block_union_certificate(a.rank(), bases, std::vector<Rational>(blocks, Rational(1, 2)));
    const bool ok = to_double(cert.max_miss_fraction) <= p.max_miss;
    AmplifiedCode code{WordSet(a.rank(), std::move(words), "amplified " + a.label()), d, std::move(positions),
                       std::move(cert), input_cert, attempt};
    if (ok) return code;
    if (!best || code.certificate.value > best->certificate.value) best = std::move(code);
  }
  throw ConstructionFailure("amplification: some syndrome misses more than 2/e of the subsets after " +
                                std::to_string(p.max_resamples) + " attempts",
                            best->words, best->certificate.value);
}

std::uint64_t compose_size(int k, const ComposeParams& p) {
  std::uint64_t size = 1;
  std::int64_t m = k;
  for (int level = 0; level < p.t; ++level) {
    size *= static_cast<std::uint64_t>(p.groups) * static_cast<std::uint64_t>(m);
    m = p.subset_sizes.at(static_cast<std::size_t>(level));
    if (size > (std::uint64_t{1} << 62)) return ~std::uint64_t{0};
  }
  if (m >= 62) return ~std::uint64_t{0};
  const std::uint64_t leaf = std::uint64_t{1} << m;
  if (size > (~std::uint64_t{0}) / leaf) return ~std::uint64_t{0};
  return size * leaf;
}

namespace {

struct ComposeState {
  const ComposeParams& p;
  Rng& rng;
  int rank;
  std::vector<Word> out;
};

// Builds the subtree over the tuple g at `level` and returns its certified
// fraction: min over nonempty C ⊆ positions of g of Σ_j hit_j(C) β_j / J.
Rational compose_node(ComposeState& s, const std::vector<Word>& g, int level) {
  const int m = static_cast<int>(g.size());
  const auto inner = sample_syndrome_words(m, s.p.reps_per_level, ceil_log2(m), s.rng);
  const auto d = static_cast<std::size_t>(s.p.subset_sizes[static_cast<std::size_t>(level)]);
  if (d > inner.size()) throw ValidationError("subset size exceeds the syndrome code size");
  const std::size_t blocks = static_cast<std::size_t>(s.p.groups) * static_cast<std::size_t>(m);
  std::vector<std::vector<Word>> inner_blocks(blocks);
  std::vector<Rational> beta(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    std::vector<Word> actual;
    for (std::size_t pos : sample_positions(inner.size(), d, s.rng)) {
      inner_blocks[j].push_back(inner[pos]);
      actual.push_back(substitute(inner[pos], g));
    }
    if (level + 1 == s.p.t) {
      auto closure = subset_closure(actual, s.rank);
      s.out.insert(s.out.end(), closure.begin(), closure.end());
      beta[j] = Rational(1, 2);
    } else {
      beta[j] = compose_node(s, actual, level + 1);
    }
  }
  return block_union_certificate(m, inner_blocks, beta).value;
}

}  // namespace

ComposedCode iterative_compose(int k, const ComposeParams& params) {
  if (k < 2) throw ValidationError("iterative_compose needs k >= 2");
  if (params.t < 1) throw ValidationError("t must be at least 1");
  ComposeParams p = params;
  if (p.subset_sizes.empty()) {
    int m = k;
    for (int level = 0; level < p.t; ++level) {
      m = 12 * ceil_log2(m);
      p.subset_sizes.push_back(m);
    }
  }
  if (p.subset_sizes.size() != static_cast<std::size_t>(p.t)) {
    throw ValidationError("need one subset size per level");
  }
  const std::uint64_t predicted = compose_size(k, p);
  if (predicted > p.max_words) {
    throw BudgetExceeded("composition would produce " + std::to_string(predicted) + " words, budget " +
                         std::to_string(p.max_words));
  }
  const double target = p.target ? to_double(*p.target) : 0.5 * std::pow(1.0 - 2.0 / std::exp(1.0), p.t);

  Rng rng(p.seed, "constructions.compose");
  const auto basis = WordSet::basis(k);
  std::optional<ComposedCode> best;
  for (int attempt = 1; attempt <= p.max_resamples; ++attempt) {
    ComposeState state{p, rng, k, {}};
    state.out.reserve(predicted);
    const Rational value = compose_node(state, basis.words(), 0);
    if (!best || value > best->certified) {
      best = ComposedCode{WordSet(k, std::move(state.out), "composed k=" + std::to_string(k) + " t=" +
                                                                std::to_string(p.t)),
                          value, target, p.subset_sizes, predicted, attempt};
    }
    if (to_double(best->certified) >= target) return *best;
  }
  throw ConstructionFailure("composition certified only " + to_string(best->certified) + " after " +
                                std::to_string(p.max_resamples) + " attempts",
                            best->words, best->certified);
}

WordSet spielman_step(const WordSet& a, const BipartiteGraph& g2k, const BipartiteGraph& g4k) {
  const int k = a.rank();
  if (a.size() != static_cast<std::size_t>(4 * k)) {
    throw ValidationError("spielman_step needs 4k words, got " + std::to_string(a.size()) + " for k=" +
                          std::to_string(k));
  }
  if (g2k.left_size() != 2 * k || g2k.right_size() != k) throw ValidationError("G2k must have sides 2k and k");
  if (g4k.left_size() != 4 * k || g4k.right_size() != 2 * k) throw ValidationError("G4k must have sides 4k and 2k");
  const auto b = WordSet::basis(2 * k);
  const auto d = upsilon(g2k, b);
  std::vector<Word> e;
  e.reserve(a.size());
  for (const Word& w : a) e.push_back(substitute(w, d.words()));
  const auto f = upsilon(g4k, WordSet(2 * k, e));
  std::vector<Word> out = b.words();
  out.insert(out.end(), e.begin(), e.end());
  out.insert(out.end(), f.begin(), f.end());
  return WordSet(2 * k, std::move(out), "spielman rank " + std::to_string(2 * k));
}

namespace {

SpielmanStepRecord describe_step(const WordSet& a, const SpielmanParams& p) {
  SpielmanStepRecord r;
  r.rank = a.rank();
  r.size = a.size();
  r.lengths = length_stats(a);
  r.certificate = certified_delta(a);
  r.f2_rank = std::min(a.rank(), p.exact_f2_rank);
  r.f2_delta = exact_delta_vector_space(a, 2, r.f2_rank);
  return r;
}

BipartiteGraph verified_graph(int n, int m, const SpielmanParams& p, Rng& seeds, ExpanderCert& cert, int& attempts) {
  auto found = search_verified_graph(n, m, p.d, p.alpha, p.epsilon, p.s_max, seeds.next(), p.max_graph_resamples,
                                     p.max_redraws);
  if (!found) {
    throw CertificationFailure("no " + std::to_string(n) + "x" + std::to_string(m) + " graph of degree " +
                               std::to_string(p.d) + " passed exhaustive verification after " +
                               std::to_string(p.max_graph_resamples) + " samples");
  }
  attempts += found->restarts + found->redraws;
  cert = found->cert;
  return found->graph;
}

}  // namespace

SpielmanChain spielman_chain(const SpielmanParams& p) {
  if (p.k0 < 1 || p.steps < 0) throw ValidationError("spielman_chain needs k0 >= 1 and steps >= 0");
  const auto basis = WordSet::basis(p.k0);
  std::vector<Word> a0;
  for (int copy = 0; copy < 4; ++copy) a0.insert(a0.end(), basis.begin(), basis.end());
  SpielmanChain chain{WordSet(p.k0, std::move(a0), "four copies of the basis"), {}, {}};
  chain.records.push_back(describe_step(chain.words, p));

  Rng seeds(p.seed, "constructions.spielman");
  for (int step = 0; step < p.steps; ++step) {
    const int k = chain.words.rank();
    ExpanderCert c2, c4;
    int attempts = 0;
    auto g2k = verified_graph(2 * k, k, p, seeds, c2, attempts);
    auto g4k = verified_graph(4 * k, 2 * k, p, seeds, c4, attempts);
    chain.words = spielman_step(chain.words, g2k, g4k);
    auto record = describe_step(chain.words, p);
    record.cert2k = c2;
    record.cert4k = c4;
    record.graph_attempts = attempts;
    chain.records.push_back(std::move(record));
    chain.graphs.push_back(std::move(g2k));
    chain.graphs.push_back(std::move(g4k));
  }
  return chain;
}

}  // namespace ucodes
