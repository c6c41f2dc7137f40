#pragma once

// Left-regular bipartite graphs, the set word map Υ_Γ and unique-neighbor
// verification.

#include "ucodes/error.hpp"
#include "ucodes/rational.hpp"
#include "ucodes/words.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <optional>
#include <vector>

namespace ucodes {

/// Left vertices 0..n-1, right vertices 0..m-1 internally. Each left vertex has
/// exactly d edge endpoints, kept sorted; repeats are multi-edges.
class BipartiteGraph {
 public:
  BipartiteGraph(int left, int right, int degree, std::vector<std::vector<int>> adjacency);

  int left_size() const { return left_; }
  int right_size() const { return right_; }
  int degree() const { return degree_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  /// For every right vertex, its left neighbors in increasing order, repeated
  /// once per parallel edge.
  std::vector<std::vector<int>> right_adjacency() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  int left_;
  int right_;
  int degree_;
  std::vector<std::vector<int>> adj_;
};

/// {"n":…, "m":…, "d":…, "adj":[[1-based right indices]]}
nlohmann::json to_json(const BipartiteGraph& g);
BipartiteGraph graph_from_json(const nlohmann::json& j);

struct LosslessParams {
  int d = 0;
  int alpha_exponent = 0;  // α = d^-alpha_exponent
  boost::multiprecision::cpp_int n0;  // ⌈1/α⌉ = d^alpha_exponent
  double log2_alpha = 0;
};

/// d = max(3, ⌈2/ε⌉, ⌈1/β⌉, min_degree), α = d^-⌈8/ε⌉, n0 = ⌈1/α⌉.
LosslessParams lossless_params(const Rational& beta, const Rational& epsilon, int min_degree = 1);

/// Every left vertex draws d right endpoints independently and uniformly.
BipartiteGraph sample_left_regular(int n, int m, int d, std::uint64_t seed);

enum class CheckMode { Exhaustive, Sampled };

struct ExpanderCert {
  Rational alpha;
  Rational epsilon;
  int s_max = 0;          // largest subset size actually checked
  CheckMode mode = CheckMode::Exhaustive;
  bool pass = true;
  std::vector<int> worst_subset;  // 0-based left vertices; empty when nothing was checked
  int worst_neighbors = 0;
  std::uint64_t checked = 0;      // subsets examined
};

nlohmann::json to_json(const ExpanderCert& c);

/// Checks |N(S)| >= (1-ε) d |S| for every S with 1 <= |S| <= min(⌊αn⌋, s_max).
/// Falls back to `trials` random subsets when the exhaustive count would
/// exceed `budget`; a sampled pass is evidence, not a certificate.
ExpanderCert verify_unique_neighbors(const BipartiteGraph& g, const Rational& alpha, const Rational& epsilon,
                                     int s_max, std::uint64_t budget = std::uint64_t{1} << 26,
                                     std::uint64_t trials = 200000, std::uint64_t seed = 0);

struct GraphSearch {
  BipartiteGraph graph;
  ExpanderCert cert;
  int restarts = 0;  // fresh samples drawn
  int redraws = 0;   // rows re-drawn in total
};

/// Samples a graph, then while exhaustive verification fails re-draws the row of
/// one vertex of the worst witness (uniformly, with replacement as before).
/// Starts over after `max_redraws`; nullopt after `max_restarts` samples.
std::optional<GraphSearch> search_verified_graph(int n, int m, int d, const Rational& alpha,
                                                 const Rational& epsilon, int s_max, std::uint64_t seed,
                                                 int max_restarts = 20, int max_redraws = 2000);

/// Υ_Γ: one word per right vertex, the product of the input words of its left
/// neighbors in left order (parallel edges repeat the factor). Kept unreduced.
WordSet upsilon(const BipartiteGraph& g, const WordSet& input);

}  // namespace ucodes
