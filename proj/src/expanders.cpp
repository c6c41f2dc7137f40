#include "ucodes/expanders.hpp"
#include "ucodes/rng.hpp"

#include <algorithm>
#include <numeric>

namespace ucodes {

BipartiteGraph::BipartiteGraph(int left, int right, int degree, std::vector<std::vector<int>> adjacency)
    : left_(left), right_(right), degree_(degree), adj_(std::move(adjacency)) {
  if (left_ < 1 || right_ < 1 || degree_ < 1) throw ValidationError("graph sizes and degree must be positive");
  if (adj_.size() != static_cast<std::size_t>(left_)) {
    throw ValidationError("adjacency has " + std::to_string(adj_.size()) + " rows for " + std::to_string(left_) +
                          " left vertices");
  }
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    auto& row = adj_[v];
    if (row.size() != static_cast<std::size_t>(degree_)) {
      throw ValidationError("left vertex " + std::to_string(v + 1) + " has degree " + std::to_string(row.size()) +
                            ", expected " + std::to_string(degree_));
    }
    for (int w : row) {
      if (w < 0 || w >= right_) throw ValidationError("right neighbor out of range");
    }
    std::sort(row.begin(), row.end());
  }
}

std::vector<std::vector<int>> BipartiteGraph::right_adjacency() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(right_));
  for (int v = 0; v < left_; ++v) {
    for (int w : adj_[static_cast<std::size_t>(v)]) out[static_cast<std::size_t>(w)].push_back(v);
  }
  return out;
}

nlohmann::json to_json(const BipartiteGraph& g) {
  nlohmann::json adj = nlohmann::json::array();
  for (const auto& row : g.adjacency()) {
    nlohmann::json r = nlohmann::json::array();
    for (int w : row) r.push_back(w + 1);
    adj.push_back(std::move(r));
  }
  return {{"n", g.left_size()}, {"m", g.right_size()}, {"d", g.degree()}, {"adj", std::move(adj)}};
}

BipartiteGraph graph_from_json(const nlohmann::json& j) {
  for (const char* key : {"n", "m", "d", "adj"}) {
    if (!j.contains(key)) throw ValidationError(std::string("graph JSON is missing \"") + key + "\"");
  }
  std::vector<std::vector<int>> adj;
  for (const auto& row : j.at("adj")) {
    std::vector<int> r;
    for (const auto& w : row) r.push_back(w.get<int>() - 1);
    adj.push_back(std::move(r));
  }
  return BipartiteGraph(j.at("n").get<int>(), j.at("m").get<int>(), j.at("d").get<int>(), std::move(adj));
}

LosslessParams lossless_params(const Rational& beta, const Rational& epsilon, int min_degree) {
  if (beta <= 0 || beta > 1) throw ValidationError("beta must lie in (0, 1]");
  if (epsilon <= 0 || epsilon >= Rational(1, 2)) throw ValidationError("epsilon must lie in (0, 1/2)");
  LosslessParams p;
  // d >= e means d >= 3 for integers.
  p.d = static_cast<int>(std::max<std::int64_t>({3, ceil(Rational(2) / epsilon), ceil(Rational(1) / beta),
                                                  static_cast<std::int64_t>(min_degree)}));
  p.alpha_exponent = static_cast<int>(ceil(Rational(8) / epsilon));
  p.n0 = boost::multiprecision::pow(boost::multiprecision::cpp_int(p.d), static_cast<unsigned>(p.alpha_exponent));
  p.log2_alpha = -p.alpha_exponent * std::log2(static_cast<double>(p.d));
  return p;
}

BipartiteGraph sample_left_regular(int n, int m, int d, std::uint64_t seed) {
  if (n < 1 || m < 1 || d < 1) throw ValidationError("graph sizes and degree must be positive");
  Rng rng(seed, "expanders.sample");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto& row : adj) {
    row.resize(static_cast<std::size_t>(d));
    for (auto& w : row) w = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
  }
  return BipartiteGraph(n, m, d, std::move(adj));
}

std::optional<GraphSearch> search_verified_graph(int n, int m, int d, const Rational& alpha,
                                                 const Rational& epsilon, int s_max, std::uint64_t seed,
                                                 int max_restarts, int max_redraws) {
  Rng rng(seed, "expanders.search");
  GraphSearch out{BipartiteGraph(1, 1, 1, {{0}}), {}, 0, 0};
  for (int r = 0; r < max_restarts; ++r) {
    ++out.restarts;
    auto adj = sample_left_regular(n, m, d, rng.next()).adjacency();
    for (int t = 0;; ++t) {
      BipartiteGraph g(n, m, d, adj);
      auto cert = verify_unique_neighbors(g, alpha, epsilon, s_max);
      if (cert.mode != CheckMode::Exhaustive) return std::nullopt;
      if (cert.pass) {
        out.graph = std::move(g);
        out.cert = std::move(cert);
        return out;
      }
      if (t == max_redraws) break;
      ++out.redraws;
      const int v = cert.worst_subset[rng.below(cert.worst_subset.size())];
      for (auto& w : adj[static_cast<std::size_t>(v)]) w = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const ExpanderCert& c) {
  nlohmann::json worst = nlohmann::json::array();
  for (int v : c.worst_subset) worst.push_back(v + 1);
  return {{"alpha", to_string(c.alpha)},
          {"epsilon", to_string(c.epsilon)},
          {"s_max", c.s_max},
          {"mode", c.mode == CheckMode::Exhaustive ? "exhaustive" : "sampled"},
          {"pass", c.pass},
          {"worst_subset", std::move(worst)},
          {"worst_neighbors", c.worst_neighbors},
          {"checked", c.checked}};
}

namespace {

class NeighborCounter {
 public:
  explicit NeighborCounter(const BipartiteGraph& g) : g_(g), hits_(static_cast<std::size_t>(g.right_size()), 0) {}

  void add(int v) {
    for (int w : g_.neighbors(v)) distinct_ += hits_[static_cast<std::size_t>(w)]++ == 0 ? 1 : 0;
  }
  void remove(int v) {
    for (int w : g_.neighbors(v)) distinct_ -= --hits_[static_cast<std::size_t>(w)] == 0 ? 1 : 0;
  }
  int distinct() const { return distinct_; }

 private:
  const BipartiteGraph& g_;
  std::vector<int> hits_;
  int distinct_ = 0;
};

struct Tracker {
  const BipartiteGraph& g;
  std::int64_t keep_num;  // (1-ε) = keep_num / keep_den
  std::int64_t keep_den;
  ExpanderCert& cert;
  bool have_worst = false;

  void visit(const std::vector<int>& s, int distinct) {
    ++cert.checked;
    const auto size = static_cast<std::int64_t>(s.size());
    if (static_cast<std::int64_t>(distinct) * keep_den < keep_num * g.degree() * size) cert.pass = false;
    // Smallest ratio distinct/|S|; first found wins ties.
    if (!have_worst ||
        static_cast<std::int64_t>(distinct) * static_cast<std::int64_t>(cert.worst_subset.size()) <
            static_cast<std::int64_t>(cert.worst_neighbors) * size) {
      have_worst = true;
      cert.worst_subset = s;
      cert.worst_neighbors = distinct;
    }
  }
};

double subsets_up_to(int n, int s) {
  double total = 0;
  double c = 1;
  for (int i = 1; i <= s; ++i) {
    c = c * (n - i + 1) / i;
    total += c;
  }
  return total;
}

}  // namespace

ExpanderCert verify_unique_neighbors(const BipartiteGraph& g, const Rational& alpha, const Rational& epsilon,
                                     int s_max, std::uint64_t budget, std::uint64_t trials, std::uint64_t seed) {
  if (alpha <= 0 || alpha > 1) throw ValidationError("alpha must lie in (0, 1]");
  if (epsilon < 0 || epsilon >= 1) throw ValidationError("epsilon must lie in [0, 1)");
  if (s_max < 0) throw ValidationError("s_max must be non-negative");
  const int n = g.left_size();
  const auto floor_alpha_n = (alpha * Rational(n)).numerator() / (alpha * Rational(n)).denominator();
  const int limit = static_cast<int>(std::min<std::int64_t>(floor_alpha_n, s_max));

  ExpanderCert cert;
  cert.alpha = alpha;
  cert.epsilon = epsilon;
  cert.s_max = limit;
  const Rational keep = Rational(1) - epsilon;
  Tracker tracker{g, keep.numerator(), keep.denominator(), cert};
  NeighborCounter counter(g);
  std::vector<int> subset;

  if (subsets_up_to(n, limit) <= static_cast<double>(budget)) {
    cert.mode = CheckMode::Exhaustive;
    // Lexicographic DFS; every prefix is itself a subset to check.
    auto dfs = [&](auto&& self, int next) -> void {
      for (int v = next; v < n; ++v) {
        subset.push_back(v);
        counter.add(v);
        tracker.visit(subset, counter.distinct());
        if (static_cast<int>(subset.size()) < limit) self(self, v + 1);
        counter.remove(v);
        subset.pop_back();
      }
    };
    if (limit > 0) dfs(dfs, 0);
    return cert;
  }

  cert.mode = CheckMode::Sampled;
  Rng rng(seed, "expanders.verify");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto size = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(limit)));
    for (std::size_t i = 0; i < size; ++i) {
      std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(pool.size() - i))]);
    }
    subset.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(subset.begin(), subset.end());
    for (int v : subset) counter.add(v);
    tracker.visit(subset, counter.distinct());
    for (int v : subset) counter.remove(v);
  }
  return cert;
}

WordSet upsilon(const BipartiteGraph& g, const WordSet& input) {
  if (input.size() != static_cast<std::size_t>(g.left_size())) {
    throw ValidationError("upsilon: " + std::to_string(input.size()) + " words for " +
                          std::to_string(g.left_size()) + " left vertices");
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(g.right_size()));
  for (const auto& lefts : g.right_adjacency()) {
    Word w;
    for (int v : lefts) w *= input[static_cast<std::size_t>(v)];
    out.push_back(std::move(w));
  }
  return WordSet(input.rank(), std::move(out), input.label());
}

}  // namespace ucodes
