#pragma once

// Test-subset generators: Hadamard, random syndrome codes, amplification,
// iterated composition and the Spielman doubling chain.

#include "ucodes/certify.hpp"
#include "ucodes/error.hpp"
#include "ucodes/expanders.hpp"
#include "ucodes/rational.hpp"
#include "ucodes/rng.hpp"
#include "ucodes/words.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucodes {

/// Raised when resampling runs out; carries the best attempt seen.
class ConstructionFailure : public CertificationFailure {
 public:
  ConstructionFailure(const std::string& what, std::optional<WordSet> best, Rational best_value)
      : CertificationFailure(what), best_(std::move(best)), best_value_(best_value) {}
  const std::optional<WordSet>& best() const { return best_; }
  Rational best_value() const { return best_value_; }

 private:
  std::optional<WordSet> best_;
  Rational best_value_;
};

/// ⌈log2 k⌉, and 1 for k = 1.
int ceil_log2(std::int64_t k);

/// Ψ(y_1..y_m): word S is the concatenation of y_i, i in S, in increasing i;
/// S runs in binary counting order. Words are not reduced.
WordSet subset_closure(std::span<const Word> base, int rank, std::string label = "subset-closure");

/// x_S for every S ⊆ {1..k}: Ψ of the basis. 1 <= k <= cap.
WordSet hadamard_code(int k, int cap = 20);

struct SyndromeParams {
  int k = 2;
  int reps_per_level = 432;
  int levels = 0;  // 0 means ⌈log2 k⌉
  std::uint64_t seed = 0;
  int max_resamples = 5;
  std::optional<Rational> threshold;  // default 1/(12 levels)
  CertifyOptions certify;
};

struct SyndromeCode {
  WordSet words;
  SyndromeCertificate certificate;
  Rational threshold;
  int attempts = 0;
};

/// Level ℓ = 1..levels contributes reps·k words x_S, every index kept with
/// probability 2^-ℓ. Whole samples are redrawn until the one-occurrence
/// certificate reaches the threshold.
SyndromeCode random_syndrome_code(const SyndromeParams& p);

/// One unconditioned draw of the above as rank-k letter words (used for inner
/// levels of the composition).
std::vector<Word> sample_syndrome_words(int k, int reps_per_level, int levels, Rng& rng);

struct AmplifyParams {
  Rational delta_in;
  int groups = 61;  // c_amp
  std::uint64_t seed = 0;
  int max_resamples = 10;
  double max_miss = 0.7357588823428847;  // 2/e
};

struct AmplifiedCode {
  WordSet words;
  int d = 0;
  std::vector<std::vector<std::size_t>> blocks;  // positions in the input
  BlockCertificate certificate;
  SyndromeCertificate input_certificate;
  int attempts = 0;
};

/// Samples groups·k subsets of d = ⌈1/δ⌉ positions of `a`, replaces each by its
/// subset closure and keeps the first sample in which every syndrome misses at
/// most max_miss of the subsets. The input must certify δ_in itself.
AmplifiedCode amplify(const WordSet& a, const AmplifyParams& p);

struct ComposeParams {
  int t = 2;
  int reps_per_level = 432;
  int groups = 61;
  /// Subset size per level; empty means d_1 = 12⌈log2 k⌉, d_{i+1} = 12⌈log2 d_i⌉.
  std::vector<int> subset_sizes;
  std::uint64_t seed = 0;
  int max_resamples = 5;
  std::optional<Rational> target;  // default: accept anything >= (1/2)(1-2/e)^t
  std::uint64_t max_words = std::uint64_t{1} << 22;
};

struct ComposedCode {
  WordSet words;
  Rational certified;
  double target = 0;
  std::vector<int> subset_sizes;
  std::uint64_t predicted_size = 0;
  int attempts = 0;
};

/// Predicted output size Π_ℓ groups·m_ℓ · 2^{d_t} with m_1 = k, m_{ℓ+1} = d_ℓ.
std::uint64_t compose_size(int k, const ComposeParams& p);

/// t rounds of block sampling from syndrome codes over the previous blocks,
/// then subset closure of the last blocks.
ComposedCode iterative_compose(int k, const ComposeParams& p);

/// B ∪ A(Υ_{G2k}(B)) ∪ Υ_{G4k}(A(Υ_{G2k}(B))) over F_{2k}, size 8k. The middle
/// part substitutes without reduction.
WordSet spielman_step(const WordSet& a, const BipartiteGraph& g2k, const BipartiteGraph& g4k);

struct SpielmanParams {
  int k0 = 4;
  int steps = 3;
  // Desk defaults. Degree 16 cannot pass at |S| <= 4 while the right side has
  // at most 32 vertices, so the chain runs at degree 3 with ε just below 1/2.
  int d = 3;
  Rational alpha = Rational(1, 16);
  Rational epsilon = Rational(9, 20);
  int s_max = 4;
  std::uint64_t seed = 0;
  int max_graph_resamples = 20;  // fresh samples per graph
  int max_redraws = 2000;        // witness row re-draws per sample
  int exact_f2_rank = 16;  // F_2 quotients are truncated to this many generators
};

struct SpielmanStepRecord {
  int rank = 0;
  std::size_t size = 0;
  LengthStats lengths;
  ExpanderCert cert2k;
  ExpanderCert cert4k;
  int graph_attempts = 0;
  SyndromeCertificate certificate;
  Rational f2_delta;
  int f2_rank = 0;  // < rank when truncated
};

struct SpielmanChain {
  WordSet words;
  std::vector<SpielmanStepRecord> records;  // records[0] describes A0
  std::vector<BipartiteGraph> graphs;       // two per step
};

/// Starts from four copies of the basis of F_{k0} and applies spielman_step
/// with graphs from search_verified_graph (exhaustive pass required).
SpielmanChain spielman_chain(const SpielmanParams& p);

}  // namespace ucodes
