#include "ucodes/certify.hpp"
#include "ucodes/entropy.hpp"
#include "ucodes/rng.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <thread>

namespace ucodes {

std::int64_t one_occurrence_count(const WordSet& a, std::span<const int> c) {
  if (c.empty()) throw ValidationError("syndrome must be nonempty");
  std::vector<bool> in_c(static_cast<std::size_t>(a.rank()) + 1, false);
  for (int i : c) {
    if (i < 1 || i > a.rank()) throw ValidationError("syndrome index " + std::to_string(i) + " out of range");
    in_c[static_cast<std::size_t>(i)] = true;
  }
  std::int64_t count = 0;
  for (const Word& w : a) {
    int hits = 0;
    for (Letter l : w.letters()) hits += in_c[static_cast<std::size_t>(std::abs(l))] ? 1 : 0;
    count += hits == 1 ? 1 : 0;
  }
  return count;
}

Profile profile(const Word& w) {
  Profile p;
  std::uint64_t twice = 0;
  for (Letter l : w.letters()) {
    const int i = std::abs(l);
    if (i > 64) throw ValidationError("bitmask profiles need generator indices <= 64");
    const std::uint64_t bit = std::uint64_t{1} << (i - 1);
    twice |= p.support & bit;
    p.support |= bit;
  }
  p.once = p.support & ~twice;
  return p;
}

namespace {

std::vector<std::pair<Profile, std::uint32_t>> grouped_profiles(const WordSet& a) {
  std::map<Profile, std::uint32_t> counts;
  for (const Word& w : a) ++counts[profile(w)];
  return {counts.begin(), counts.end()};
}

std::vector<int> mask_to_indices(std::uint64_t mask) {
  std::vector<int> out;
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask) + 1);
  return out;
}

template <class Fn>
void parallel_ranges(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn fn) {
  if (threads <= 1 || end - begin < 4096) {
    fn(begin, end, 0U);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (end - begin + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = begin + t * chunk;
    const std::uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi, t);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<std::uint32_t> syndrome_counts(const WordSet& a, unsigned threads) {
  const int k = a.rank();
  if (k > 30) throw BudgetExceeded("exhaustive syndrome counts need rank <= 30");
  const std::uint64_t size = std::uint64_t{1} << k;
  const std::uint64_t full = size - 1;
  const auto profiles = grouped_profiles(a);
  std::vector<std::uint32_t> counts(size, 0);
  threads = std::max(1U, threads);

  if (profiles.size() <= static_cast<std::size_t>(k) * static_cast<std::size_t>(k)) {
    parallel_ranges(1, size, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
      for (std::uint64_t c = lo; c < hi; ++c) {
        std::uint32_t total = 0;
        for (const auto& [p, mult] : profiles) total += p.certified(c) ? mult : 0;
        counts[c] = total;
      }
    });
    return counts;
  }

  // Word certified for C  <=>  C ∩ support = {i} with i in once. For each i,
  // g_i(T) counts words with i in once and support \ {i} ⊆ T (a subset-sum
  // transform), and count(C) = Σ_{i∈C} g_i(~C).
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(k));
  std::vector<std::vector<std::uint32_t>> partial(workers);
  auto work = [&](unsigned t) {
    std::vector<std::uint32_t>& out = t == 0 ? counts : partial[t];
    if (t != 0) out.assign(size, 0);
    std::vector<std::uint32_t> g(size);
    for (int i = static_cast<int>(t); i < k; i += static_cast<int>(workers)) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      std::fill(g.begin(), g.end(), 0);
      bool any = false;
      for (const auto& [p, mult] : profiles) {
        if (p.once & bit) {
          g[p.support & ~bit] += mult;
          any = true;
        }
      }
      if (!any) continue;
      for (int b = 0; b < k; ++b) {
        const std::uint64_t bb = std::uint64_t{1} << b;
        for (std::uint64_t m = 0; m < size; ++m) {
          if (m & bb) g[m] += g[m ^ bb];
        }
      }
      for (std::uint64_t c = bit; c < size; c = (c + 1) | bit) out[c] += g[~c & full];
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
    for (unsigned t = 1; t < workers; ++t) {
      for (std::uint64_t c = 0; c < size; ++c) counts[c] += partial[t][c];
    }
  }
  counts[0] = 0;
  return counts;
}

SyndromeCertificate certified_delta(const WordSet& a, const CertifyOptions& options) {
  SyndromeCertificate cert;
  cert.k = a.rank();
  cert.n = a.size();
  const int k = a.rank();
  cert.min_by_size.assign(static_cast<std::size_t>(k) + 1, -1);
  const auto n = static_cast<std::int64_t>(a.size());
  cert.worst_count = n + 1;

  auto record = [&](const std::vector<int>& indices, std::int64_t count) {
    ++cert.syndromes_checked;
    auto& slot = cert.min_by_size[indices.size()];
    if (slot < 0 || count < slot) slot = count;
    if (count < cert.worst_count) {
      cert.worst_count = count;
      cert.worst_syndrome = indices;
    }
  };

  if (k <= std::min(options.exhaustive_max_k, 30)) {
    cert.mode = CertMode::Exhaustive;
    const auto counts = syndrome_counts(a, options.threads);
    const std::uint64_t size = std::uint64_t{1} << k;
    std::vector<std::int64_t>& by_size = cert.min_by_size;
    std::uint64_t worst = 0;
    for (std::uint64_t c = 1; c < size; ++c) {
      const auto count = static_cast<std::int64_t>(counts[c]);
      auto& slot = by_size[static_cast<std::size_t>(std::popcount(c))];
      if (slot < 0 || count < slot) slot = count;
      if (count < cert.worst_count) {
        cert.worst_count = count;
        worst = c;
      }
    }
    cert.syndromes_checked = size - 1;
    cert.worst_syndrome = mask_to_indices(worst);
  } else {
    cert.mode = CertMode::Sampled;
    // Sparse occurrence lists per word: (index, multiplicity).
    std::vector<std::vector<std::pair<int, int>>> occ(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) {
      std::map<int, int> m;
      for (Letter l : a[w].letters()) ++m[std::abs(l)];
      occ[w].assign(m.begin(), m.end());
    }
    Rng rng(options.seed, "certify.sampled");
    std::vector<int> pool(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::vector<bool> in_c(static_cast<std::size_t>(k) + 1);
    for (std::uint64_t t = 0; t < options.samples; ++t) {
      const auto s = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)));
      for (std::size_t i = 0; i < s; ++i) {
        std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(pool.size() - i))]);
      }
      std::vector<int> c(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
      std::sort(c.begin(), c.end());
      std::fill(in_c.begin(), in_c.end(), false);
      for (int i : c) in_c[static_cast<std::size_t>(i)] = true;
      std::int64_t count = 0;
      for (const auto& o : occ) {
        int hits = 0;
        for (const auto& [i, mult] : o) {
          if (in_c[static_cast<std::size_t>(i)]) hits += mult;
          if (hits > 1) break;
        }
        count += hits == 1 ? 1 : 0;
      }
      record(c, count);
    }
  }
  cert.delta_lower = Rational(cert.worst_count, n);
  return cert;
}

nlohmann::json to_json(const SyndromeCertificate& c) {
  return {{"k", c.k},
          {"n", c.n},
          {"delta_lower", to_string(c.delta_lower)},
          {"worst_syndrome", c.worst_syndrome},
          {"worst_count", c.worst_count},
          {"min_by_size", c.min_by_size},
          {"mode", c.mode == CertMode::Exhaustive ? "exhaustive" : "sampled"},
          {"certifying", c.certifying()},
          {"syndromes_checked", c.syndromes_checked}};
}

nlohmann::json to_json(const MatchingCertificate& c) {
  return {{"value", to_string(c.value)},
          {"base_size", c.base_size},
          {"pairs_checked", c.pairs_checked},
          {"exhaustive", c.exhaustive},
          {"witness", c.witness}};
}

std::optional<std::vector<Word>> subset_closure_base(const WordSet& a) {
  const std::size_t n = a.size();
  if (!std::has_single_bit(n)) return std::nullopt;
  const int m = std::countr_zero(n);
  if (!a[0].empty()) return std::nullopt;
  std::vector<Word> base;
  for (int i = 0; i < m; ++i) base.push_back(a[std::size_t{1} << i]);
  for (std::size_t s = 1; s < n; ++s) {
    // a[s] = a[s without its top bit] * y_top.
    const int top = std::bit_width(s) - 1;
    const std::size_t rest = s ^ (std::size_t{1} << top);
    if (a[s] != a[rest] * base[static_cast<std::size_t>(top)]) return std::nullopt;
  }
  return base;
}

MatchingCertificate hadamard_matching_certificate(const WordSet& a, std::uint64_t samples, std::uint64_t seed) {
  auto base = subset_closure_base(a);
  if (!base) throw ValidationError("word set is not an ordered subset closure");
  for (int j = 1; j <= a.rank(); ++j) {
    bool present = std::any_of(base->begin(), base->end(), [j](const Word& y) {
      return y.length() == 1 && std::abs(y.letters()[0]) == j;
    });
    if (!present) {
      throw ValidationError("subset-closure base does not contain x" + std::to_string(j) + " as a single letter");
    }
  }
  const std::size_t m = base->size();
  MatchingCertificate cert;
  cert.base_size = m;
  cert.exhaustive = m <= 12;

  auto check = [&](std::size_t i, std::size_t s) {
    const std::size_t s2 = s | (std::size_t{1} << i);
    Word u;
    for (std::size_t r = 0; r < i; ++r) {
      if (s >> r & 1U) u *= (*base)[r];
    }
    const Word lhs = reduce(a[s2] * a[s].inverse());
    const Word rhs = reduce(u * (*base)[i] * u.inverse());
    ++cert.pairs_checked;
    if (lhs != rhs) {
      throw ValidationError("conjugation identity fails for S=" + std::to_string(s) + ", i=" + std::to_string(i + 1));
    }
  };

  Rng rng(seed, "certify.matching");
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    if (cert.exhaustive) {
      for (std::size_t s = 0; s < a.size(); ++s) {
        if (!(s & bit)) check(i, s);
      }
    } else {
      for (std::uint64_t t = 0; t < samples; ++t) check(i, static_cast<std::size_t>(rng.below(a.size())) & ~bit);
    }
  }
  cert.value = Rational(1, 2);
  cert.witness = "S <-> S+{min C}: x_{S+i} x_S^-1 = u y_i u^-1 with u over positions < i";
  return cert;
}

BlockCertificate block_union_certificate(int rank, const std::vector<std::vector<Word>>& bases,
                                         const std::vector<Rational>& inner) {
  if (rank > 30) throw BudgetExceeded("block certificate needs rank <= 30");
  if (bases.empty() || bases.size() != inner.size()) throw ValidationError("need one weight per block");
  const std::uint64_t size = std::uint64_t{1} << rank;
  const auto blocks = static_cast<std::int64_t>(bases.size());

  // Blocks with the same weight are summed as integers first.
  std::map<Rational, std::vector<std::vector<Profile>>> by_weight;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    std::vector<Profile> ps;
    for (const Word& w : bases[j]) ps.push_back(profile(w));
    by_weight[inner[j]].push_back(std::move(ps));
  }

  BlockCertificate cert;
  bool first = true;
  std::uint64_t worst = 1;
  std::int64_t max_miss = 0;
  for (std::uint64_t c = 1; c < size; ++c) {
    Rational total(0);
    std::int64_t misses = 0;
    for (const auto& [weight, group] : by_weight) {
      std::int64_t hits = 0;
      for (const auto& ps : group) {
        const bool hit = std::any_of(ps.begin(), ps.end(), [c](const Profile& p) { return p.certified(c); });
        hits += hit ? 1 : 0;
      }
      misses += static_cast<std::int64_t>(group.size()) - hits;
      total += weight * Rational(hits);
    }
    total /= Rational(blocks);
    max_miss = std::max(max_miss, misses);
    if (first || total < cert.value) {
      cert.value = total;
      worst = c;
      first = false;
    }
  }
  cert.worst_syndrome = mask_to_indices(worst);
  cert.max_miss_fraction = Rational(max_miss, blocks);
  return cert;
}

nlohmann::json to_json(const DetectionReport& r) {
  nlohmann::json backends = nlohmann::json::array();
  for (const auto& b : r.backends) backends.push_back({{"group", b.name}, {"exact_delta", to_string(b.exact_delta)}});
  nlohmann::json j = {{"n", r.n},
                      {"k", r.k},
                      {"rate", to_string(r.rate)},
                      {"max_len", r.lengths.max_len},
                      {"avg_len", to_string(r.lengths.avg_len)},
                      {"syndrome_certificate", to_json(r.syndrome)},
                      {"backends", std::move(backends)},
                      {"certified_delta", to_string(r.certified)},
                      {"gv_rate_at_certified", r.gv_rate}};
  j["matching_certificate"] = r.matching ? to_json(*r.matching) : nlohmann::json(nullptr);
  return j;
}

DetectionReport report(const WordSet& a, const std::vector<GroupBackend>& backends, const CertifyOptions& options) {
  DetectionReport r;
  r.n = a.size();
  r.k = a.rank();
  r.rate = Rational(a.rank(), static_cast<std::int64_t>(a.size()));
  r.lengths = length_stats(a);
  r.syndrome = certified_delta(a, options);
  try {
    r.matching = hadamard_matching_certificate(a, 4096, options.seed);
  } catch (const ValidationError&) {
    r.matching.reset();
  }
  for (const auto& b : backends) r.backends.push_back({b.group->name(), exact_delta(a, b)});
  r.certified = r.syndrome.certifying() ? r.syndrome.delta_lower : Rational(0);
  if (r.matching) r.certified = std::max(r.certified, r.matching->value);
  r.gv_rate = 1.0 - binary_entropy(to_double(r.certified));
  return r;
}

}  // namespace ucodes
