#pragma once

// Lower bounds on δ(A; F_k) from letter occurrences.
//
// A word is certified for a nonempty C ⊆ {1..k} when the letters with index in
// C occur exactly once in its stored (unreduced) letter sequence. Such a word
// lies outside every subgroup H with {i : x_i ∉ H} = C, because it is a product
// with exactly one factor outside H.

#include "ucodes/error.hpp"
#include "ucodes/groups.hpp"
#include "ucodes/rational.hpp"
#include "ucodes/words.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucodes {

/// Number of words of `a` certified for C (1-based generator indices).
std::int64_t one_occurrence_count(const WordSet& a, std::span<const int> c);

/// Per-word occurrence summary for k <= 64: bit i-1 of `support` is set when
/// x_i occurs, bit i-1 of `once` when it occurs exactly once.
struct Profile {
  std::uint64_t support = 0;
  std::uint64_t once = 0;

  bool certified(std::uint64_t c) const {
    const std::uint64_t x = c & support;
    return x != 0 && (x & (x - 1)) == 0 && (x & once) != 0;
  }
  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

Profile profile(const Word& w);

enum class CertMode { Exhaustive, Sampled };

struct SyndromeCertificate {
  int k = 0;
  std::size_t n = 0;
  Rational delta_lower;
  std::vector<int> worst_syndrome;  // 1-based, smallest mask among minimisers
  std::int64_t worst_count = 0;
  /// min_by_size[s] = smallest count over the checked C with |C| = s (index 0 unused, -1 if none checked).
  std::vector<std::int64_t> min_by_size;
  CertMode mode = CertMode::Exhaustive;
  std::uint64_t syndromes_checked = 0;

  /// Only an exhaustive scan is a certificate; a sampled scan is evidence.
  bool certifying() const { return mode == CertMode::Exhaustive; }
};

nlohmann::json to_json(const SyndromeCertificate& c);

struct CertifyOptions {
  int exhaustive_max_k = 24;
  std::uint64_t samples = 1 << 16;  // syndromes drawn in sampled mode
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// delta_lower = min over nonempty C of one_occurrence_count / |A|.
SyndromeCertificate certified_delta(const WordSet& a, const CertifyOptions& options = {});

/// Counts for every C at once, indexed by bitmask (entry 0 unused). Needs k <= 30.
std::vector<std::uint32_t> syndrome_counts(const WordSet& a, unsigned threads = 1);

struct MatchingCertificate {
  Rational value;
  std::size_t base_size = 0;
  std::uint64_t pairs_checked = 0;
  bool exhaustive = true;
  std::string witness;
};

nlohmann::json to_json(const MatchingCertificate& c);

/// If `a` is the ordered subset-closure Ψ(y_1..y_m) (word at index S is the
/// concatenation of the y_i with i in S, binary counting order), returns y.
std::optional<std::vector<Word>> subset_closure_base(const WordSet& a);

/// Pairs S with S ∪ {i} for i = min C and checks x_{S∪{i}} x_S^{-1} = u y_i u^{-1}
/// by free reduction (all pairs when m <= 12, `samples` random pairs per i
/// above). Value 1/2. Throws ValidationError unless `a` is a subset closure whose
/// base contains every generator x_1..x_k as a one-letter word, which is what
/// makes every proper subgroup miss some base element.
MatchingCertificate hadamard_matching_certificate(const WordSet& a, std::uint64_t samples = 4096,
                                                  std::uint64_t seed = 0);

/// Certificate for a union of equal-sized blocks, each the subset closure of a
/// tuple `bases[j]` of words in F_rank, weighted by `inner[j]`: a block whose
/// base contains a word certified for C keeps at least inner[j] of its words
/// outside every H with syndrome C. Returns min_C Σ_j hit_j(C) inner[j] / J
/// together with the worst C. Exhaustive over C; needs rank <= 30.
struct BlockCertificate {
  Rational value;
  std::vector<int> worst_syndrome;
  /// Largest fraction of blocks whose base has no word certified for some C.
  Rational max_miss_fraction;
};

BlockCertificate block_union_certificate(int rank, const std::vector<std::vector<Word>>& bases,
                                         const std::vector<Rational>& inner);

// ---------------------------------------------------------------------------

struct BackendResult {
  std::string name;
  Rational exact_delta;
};

struct DetectionReport {
  std::size_t n = 0;
  int k = 0;
  Rational rate;
  LengthStats lengths;
  SyndromeCertificate syndrome;
  std::optional<MatchingCertificate> matching;
  std::vector<BackendResult> backends;
  /// Best available lower bound: the larger of the two certificates.
  Rational certified;
  /// 1 - H_2(certified), the GV rate at the certified distance.
  double gv_rate = 0;
};

nlohmann::json to_json(const DetectionReport& r);

DetectionReport report(const WordSet& a, const std::vector<GroupBackend>& backends,
                       const CertifyOptions& options = {});

}  // namespace ucodes
