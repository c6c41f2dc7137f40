// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "ucodes/abelian.hpp"
#include "ucodes/certify.hpp"
#include "ucodes/constructions.hpp"
#include "ucodes/expanders.hpp"
#include "ucodes/groups.hpp"
#include "ucodes/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace ucodes;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

// Every construction output lands here for the length check.
struct LengthRecord {
  std::string name;
  Rational avg_len;
  Rational delta_lower;
  int k;
};
std::vector<LengthRecord> corpus;

void record(const std::string& name, const WordSet& a, const Rational& delta_lower) {
  corpus.push_back({name, length_stats(a).avg_len, delta_lower, a.rank()});
}

Word random_word(Rng& rng, int k, int max_len) {
  std::vector<Letter> l;
  const auto len = rng.below(static_cast<std::uint64_t>(max_len) + 1);
  for (std::uint64_t i = 0; i < len; ++i) {
    const auto g = static_cast<Letter>(1 + rng.below(static_cast<std::uint64_t>(k)));
    l.push_back(rng.below(2) ? g : -g);
  }
  return Word(std::move(l));
}

WordSet random_word_set(Rng& rng, int k, int n, int max_len) {
  std::vector<Word> w;
  for (int i = 0; i < n; ++i) w.push_back(random_word(rng, k, max_len));
  return WordSet(k, std::move(w));
}

std::shared_ptr<const FiniteGroup> share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

FiniteGroup wreath_z2_z3() { return FiniteGroup::permutation(6, {{2, 1, 3, 4, 5, 6}, {3, 4, 5, 6, 1, 2}}); }
FiniteGroup dihedral4() { return FiniteGroup::permutation(4, {{2, 3, 4, 1}, {3, 2, 1, 4}}); }
FiniteGroup alternating5() { return FiniteGroup::permutation(5, {{2, 3, 1, 4, 5}, {2, 3, 4, 5, 1}}); }

// Draws generator images until they generate the whole group.
std::optional<std::vector<Element>> generating_images(const FiniteGroup& g, int k, Rng& rng, int tries = 200) {
  for (int t = 0; t < tries; ++t) {
    std::vector<Element> x;
    for (int i = 0; i < k; ++i) x.push_back(static_cast<Element>(rng.below(g.order())));
    if (g.generated_subgroup(x).count() == g.order()) return x;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome hadamard_reproduction() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int k = 1; k <= 10; ++k) {
    const auto a = hadamard_code(k);
    const auto m = hadamard_matching_certificate(a);
    const std::string at = "k=" + std::to_string(k);
    o.require(a.size() == (std::size_t{1} << k), at + " size");
    o.require(length_stats(a).max_len == static_cast<std::size_t>(k), at + " max length");
    o.require(m.value == Rational(1, 2) && m.exhaustive, at + " matching certificate");
    o.require(exact_delta_vector_space(a, 2, k) == Rational(1, 2), at + " F2 quotient");
    record("hadamard " + at, a, m.value);
  }
  const double s = seconds_since(t0);
  o.require(s < 10, "runtime");
  o.detail << "k=1..10, " << s << " s";
  return o;
}

Outcome bridge_identity() {
  Outcome o;
  Rng rng(2, "acceptance.bridge");
  const std::int64_t primes[] = {2, 3, 5};
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(8));
    const int n = 1 + static_cast<int>(rng.below(64));
    const std::int64_t p = primes[rng.below(3)];
    const WordSet a = random_word_set(rng, k, n, 8);
    const auto d = distance_exact(abelianized_matrix(a), p);
    o.require(d.exact, "exact distance");
    o.require(exact_delta_vector_space(a, static_cast<int>(p), k) == Rational(d.distance, n),
              "trial " + std::to_string(trial));
  }
  o.detail << "50 cases";
  return o;
}

Outcome syndrome_construction() {
  Outcome o;
  SyndromeParams p;
  p.k = 16;
  p.reps_per_level = 432;
  p.max_resamples = 5;
  const auto t0 = Clock::now();
  try {
    const auto c = random_syndrome_code(p);
    const double s = seconds_since(t0);
    o.require(c.words.size() == 27648, "size");
    o.require(c.certificate.certifying() && c.certificate.syndromes_checked == 65535, "exhaustive scan");
    o.require(c.certificate.delta_lower >= Rational(1, 48), "delta_lower");
    o.require(c.attempts <= 5, "resamples");
    o.require(s < 60, "runtime");
    record("syndrome k=16", c.words, c.certificate.delta_lower);
    o.detail << "|A|=" << c.words.size() << " delta_lower=" << to_string(c.certificate.delta_lower)
             << " attempts=" << c.attempts << " " << s << " s";
  } catch (const CertificationFailure& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome amplification() {
  Outcome o;
  // Input over F_8: five copies of the basis, all 3-subsets, and eight copies of x_1..x_8.
  std::vector<Word> w;
  for (int r = 0; r < 5; ++r) {
    for (int i = 1; i <= 8; ++i) w.push_back(Word{i});
  }
  for (int i = 1; i <= 8; ++i) {
    for (int j = i + 1; j <= 8; ++j) {
      for (int l = j + 1; l <= 8; ++l) w.push_back(Word{i, j, l});
    }
  }
  for (int r = 0; r < 8; ++r) w.push_back(Word{1, 2, 3, 4, 5, 6, 7, 8});
  const WordSet in(8, std::move(w));
  const auto in_cert = certified_delta(in);
  o.require(in_cert.delta_lower >= Rational(1, 4), "input certificate");
  record("amplify input", in, in_cert.delta_lower);

  AmplifyParams p;
  p.delta_in = Rational(1, 4);
  p.groups = 8;
  p.max_resamples = 10;
  try {
    const auto out = amplify(in, p);
    const double floor = 0.5 * (1 - 2 / std::exp(1.0)) - 0.02;
    o.require(out.words.size() == 8u * 8u * 16u, "size");
    o.require(to_double(out.certificate.value) >= floor, "certified delta");
    o.require(out.attempts <= 10, "resamples");
    record("amplify output", out.words, out.certificate.value);
    o.detail << "input " << to_string(in_cert.delta_lower) << ", output |A|=" << out.words.size()
             << " certified=" << to_string(out.certificate.value) << " (" << to_double(out.certificate.value)
             << " vs " << floor << ") attempts=" << out.attempts;
  } catch (const CertificationFailure& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome spielman() {
  Outcome o;
  SpielmanParams p;
  p.k0 = 4;
  p.steps = 3;
  p.s_max = 4;
  try {
    const auto c = spielman_chain(p);
    o.require(c.words.rank() == 32, "rank");
    o.require(c.words.size() == 128, "size");
    for (int i = 0; i < 32; ++i) o.require(c.words[static_cast<std::size_t>(i)] == Word{i + 1}, "basis prefix");
    bool evidence = false;
    for (std::size_t i = 1; i < c.records.size(); ++i) {
      const auto& r = c.records[i];
      o.require(r.cert2k.pass && r.cert4k.pass, "graph verification");
      o.require(r.cert2k.mode == CheckMode::Exhaustive && r.cert4k.mode == CheckMode::Exhaustive, "exhaustive");
      o.require(r.size == 4 * static_cast<std::size_t>(r.rank), "size 4·rank");
      if (i + 1 < c.records.size() && to_double(r.f2_delta) >= 0.05) evidence = true;
      o.detail << "rank " << r.rank << ": F2 delta " << to_string(r.f2_delta) << " (on " << r.f2_rank
               << " gens); ";
    }
    for (const auto& r : c.records) {
      corpus.push_back({"spielman rank " + std::to_string(r.rank), r.lengths.avg_len, r.certificate.delta_lower,
                        r.rank});
    }
    o.require(evidence, "intermediate F2 delta >= 0.05");
  } catch (const CertificationFailure& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome abelian_codes() {
  Outcome o;
  Rng rng(6, "acceptance.abelian");
  const Rational alpha(1, 8);
  const Rational eps(9, 20);
  int built = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 12 + 4 * static_cast<int>(rng.below(4));  // 12..24
    const int m = n / 2;
    const auto found = search_verified_graph(n, m, 3, alpha, eps, 6, rng.next());
    if (!found) {
      o.require(false, "no verified graph at n=" + std::to_string(n));
      continue;
    }
    o.require(found->cert.mode == CheckMode::Exhaustive, "exhaustive verification");
    const auto code = build_abelian_code(found->graph, alpha, {2, 3});
    const auto& e = code.encoder;
    o.require(2 * rank_rational(e) >= static_cast<std::size_t>(n), "kernel rank");
    for (std::int64_t p : {2, 3, 5, 7, 11}) {
      o.require(mod_p_independence(e, p), "independence mod " + std::to_string(p));
    }
    for (const auto& pc : code.report.primes) {
      o.require(pc.distance.exact, "exact distance");
      o.require(Rational(pc.distance.distance) >= alpha * Rational(n),
                "distance at p=" + std::to_string(pc.p) + " n=" + std::to_string(n));
    }
    ++built;
  }
  o.detail << built << " graphs, alpha=1/8";
  return o;
}

Outcome soundness_sweep() {
  Outcome o;
  Rng rng(7, "acceptance.soundness");
  std::vector<std::shared_ptr<const FiniteGroup>> groups{
      share(FiniteGroup::symmetric(3)),       share(FiniteGroup::symmetric(4)),
      share(dihedral4()),                     share(FiniteGroup::abelian({2, 4})),
      share(FiniteGroup::cyclic_power(3, 2)), share(FiniteGroup::cyclic_power(2, 3)),
      share(wreath_z2_z3()),                  share(alternating5()),
      share(FiniteGroup::direct_product(FiniteGroup::symmetric(3), FiniteGroup::abelian({5}))),
      share(FiniteGroup::direct_product(FiniteGroup::symmetric(4), FiniteGroup::abelian({2})))};
  std::vector<SubgroupLattice> lattices;
  for (const auto& g : groups) lattices.push_back(subgroup_lattice(*g));
  int checked = 0;
  for (int trial = 0; checked < 200 && trial < 5000; ++trial) {
    const std::size_t gi = rng.below(groups.size());
    const auto& g = groups[gi];
    const int k = 1 + static_cast<int>(rng.below(4));
    const auto x = generating_images(*g, k, rng, 20);
    if (!x) continue;
    const WordSet a = random_word_set(rng, k, 1 + static_cast<int>(rng.below(16)), 8);
    const GroupBackend b{g, *x};
    const auto elems = b.evaluate(a);
    o.require(g->order() <= 200, "group order");
    o.require(certified_delta(a).delta_lower <= exact_delta(elems, lattices[gi]),
              g->name() + " trial " + std::to_string(trial));
    ++checked;
  }
  o.require(checked == 200, "200 generating triples");
  o.detail << checked << " triples over " << groups.size() << " groups";
  return o;
}

Outcome quotient_facts() {
  Outcome o;
  Rng rng(8, "acceptance.quotients");
  std::vector<FiniteGroup> sources{FiniteGroup::symmetric(3), FiniteGroup::symmetric(4),  dihedral4(),
                                   FiniteGroup::abelian({4, 2}), FiniteGroup::cyclic_power(3, 2), wreath_z2_z3(),
                                   FiniteGroup::direct_product(FiniteGroup::symmetric(3), FiniteGroup::abelian({2}))};
  int maps = 0;
  for (int trial = 0; maps < 30 && trial < 1000; ++trial) {
    const auto& g = sources[rng.below(sources.size())];
    const auto lattice = subgroup_lattice(g);
    std::vector<const ElementSet*> normals;
    for (const auto& h : lattice.subgroups) {
      if (h.count() > 1 && h.count() < g.order() && g.is_normal(h)) normals.push_back(&h);
    }
    if (normals.empty()) continue;
    const ElementSet& n = *normals[rng.below(normals.size())];
    const auto q = share(FiniteGroup::quotient(g, n));
    const int k = 2 + static_cast<int>(rng.below(2));
    const auto x = generating_images(g, k, rng, 50);
    if (!x) continue;
    // Coset of each image: the quotient element whose representative lies in xN.
    std::vector<Element> y;
    for (Element e : *x) {
      for (Element c = 0; c < q->order(); ++c) {
        const Element rep = g.at(q->coordinates(c));
        if (n.contains(g.multiply(e, g.inverse(rep)))) {
          y.push_back(c);
          break;
        }
      }
    }
    const auto src = share(FiniteGroup(g));
    const WordSet a = random_word_set(rng, k, 1 + static_cast<int>(rng.below(12)), 6);
    const auto r = quotient_pushforward_check(a, GroupBackend{src, *x}, GroupBackend{q, y});
    o.require(r.surjective && r.monotone, g.name() + " -> " + q->name());
    o.require(!r.frattini || r.equal, "Frattini equality " + g.name());
    ++maps;
  }
  o.require(maps == 30, "30 quotient maps");
  int frattini = 0;
  for (int p : {2, 3}) {
    for (int r = 1; r <= 3; ++r) {
      const auto big = share(FiniteGroup::cyclic_power(p * p, r));
      const auto small = share(FiniteGroup::cyclic_power(p, r));
      for (int trial = 0; trial < 3; ++trial) {
        const WordSet a = random_word_set(rng, r, 1 + static_cast<int>(rng.below(10)), 6);
        const auto rep = quotient_pushforward_check(a, GroupBackend{big, big->defining_generators()},
                                                    GroupBackend{small, small->defining_generators()});
        o.require(rep.frattini && rep.equal && rep.ok(),
                  "Z_" + std::to_string(p * p) + "^" + std::to_string(r));
        ++frattini;
      }
    }
  }
  o.detail << maps << " quotient maps, " << frattini << " Frattini checks";
  return o;
}

Outcome pmsg() {
  Outcome o;
  const Rational e_prime(17, 4), delta(1, 10);
  double lo = 1e9, hi = 0;
  for (int k : {100, 200, 500, 1000, 10000, 100000}) {
    const double ratio = static_cast<double>(pmsg_sample_size({e_prime, delta, k}).n) / k;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  o.require(lo >= 10 && hi <= 11, "ratio in [10, 11] for k >= 100");
  double worst = 0;
  for (int k = 1; k <= 2000; ++k) {
    worst = std::max(worst, static_cast<double>(pmsg_sample_size({e_prime, delta, k}).n) / k);
  }
  o.require(worst <= 85, "envelope 85");
  std::vector<FiniteGroup> groups{FiniteGroup::symmetric(3), FiniteGroup::symmetric(4), wreath_z2_z3(),
                                  FiniteGroup::direct_product(FiniteGroup::symmetric(3), FiniteGroup::abelian({3}))};
  std::ostringstream codes;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    try {
      const auto c = solvable_random_code(groups[i], {e_prime, delta, 2}, 90 + i, 20);
      o.require(c.delta >= delta && c.attempts <= 20, groups[i].name());
      codes << groups[i].name() << " delta=" << to_string(c.delta) << " ";
    } catch (const CertificationFailure& e) {
      o.require(false, groups[i].name() + ": " + e.what());
    }
  }
  o.detail << "n/k for k>=100 in [" << lo << ", " << hi << "], max n/k " << worst << "; " << codes.str();
  return o;
}

Outcome length_bound() {
  Outcome o;
  // Small compositions join the corpus here.
  ComposeParams p;
  p.t = 1;
  p.reps_per_level = 8;
  p.groups = 2;
  p.subset_sizes = {3};
  p.target = Rational(0);
  const auto c = iterative_compose(4, p);
  record("compose k=4", c.words, c.certified);
  for (const auto& r : corpus) {
    o.require(r.avg_len >= r.delta_lower * Rational(r.k), r.name);
  }
  o.detail << corpus.size() << " outputs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"hadamard reproduction", hadamard_reproduction},
      {"bridge identity", bridge_identity},
      {"random syndrome construction", syndrome_construction},
      {"amplification", amplification},
      {"spielman chain", spielman},
      {"abelian simultaneous code", abelian_codes},
      {"certificate soundness sweep", soundness_sweep},
      {"quotient monotonicity and Frattini equality", quotient_facts},
      {"pmsg sample size", pmsg},
      {"length lower bound", length_bound}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
