#include "ucodes/entropy.hpp"
#include "ucodes/groups.hpp"
#include "ucodes/rng.hpp"

#include <algorithm>
#include <unordered_set>

namespace ucodes {

namespace {

struct Subgroup {
  ElementSet members;
  std::vector<Element> elements;
  std::vector<Element> generators;
};

// Dimino step: <H, g> as a union of right cosets Hx, closed under right
// multiplication by every generator.
Subgroup extend(const FiniteGroup& g, const Subgroup& h, Element gen) {
  Subgroup j;
  j.members = h.members;
  j.elements = h.elements;
  j.generators = h.generators;
  j.generators.push_back(gen);
  std::vector<Element> reps{0};
  auto add_coset = [&](Element r) {
    reps.push_back(r);
    for (Element x : h.elements) {
      Element y = g.multiply(x, r);
      j.members.insert(y);
      j.elements.push_back(y);
    }
  };
  add_coset(gen);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (Element s : j.generators) {
      Element y = g.multiply(reps[i], s);
      if (!j.members.contains(y)) add_coset(y);
    }
  }
  return j;
}

}  // namespace

SubgroupLattice subgroup_lattice(const FiniteGroup& g, std::size_t cap, std::size_t max_subgroups) {
  const std::size_t n = g.order();
  if (n > cap) throw BudgetExceeded("group order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));

  Subgroup trivial{ElementSet(n), {0}, {}};
  trivial.members.insert(0);

  // One generator per distinct cyclic subgroup.
  std::vector<Element> cyclic;
  std::unordered_set<ElementSet, ElementSet::Hash> seen;
  seen.insert(trivial.members);
  std::vector<Subgroup> all{trivial};
  for (Element x = 1; x < n; ++x) {
    Subgroup c = extend(g, trivial, x);
    if (seen.insert(c.members).second) {
      cyclic.push_back(x);
      all.push_back(std::move(c));
    }
  }

  for (std::size_t i = 1; i < all.size(); ++i) {
    for (Element c : cyclic) {
      if (all[i].members.contains(c)) continue;
      Subgroup j = extend(g, all[i], c);
      if (seen.insert(j.members).second) {
        if (all.size() >= max_subgroups) {
          throw BudgetExceeded("subgroup lattice of " + g.name() + " exceeds " + std::to_string(max_subgroups) +
                               " subgroups");
        }
        all.push_back(std::move(j));
      }
    }
  }

  SubgroupLattice lattice;
  lattice.group_order = n;
  lattice.subgroups.reserve(all.size());
  for (auto& s : all) lattice.subgroups.push_back(std::move(s.members));
  std::vector<std::size_t> order(lattice.subgroups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = lattice.subgroups[i].count();
  std::vector<std::size_t> idx(order.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (order[a] != order[b]) return order[a] < order[b];
    return lattice.subgroups[a] < lattice.subgroups[b];
  });
  std::vector<ElementSet> sorted;
  std::vector<std::size_t> sorted_order;
  for (std::size_t i : idx) {
    sorted.push_back(std::move(lattice.subgroups[i]));
    sorted_order.push_back(order[i]);
  }
  lattice.subgroups = std::move(sorted);

  const std::size_t count = lattice.subgroups.size();
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const std::size_t oi = sorted_order[i];
    bool maximal = true;
    for (std::size_t j = i + 1; j + 1 < count && maximal; ++j) {
      const std::size_t oj = sorted_order[j];
      if (oj > oi && oj % oi == 0 && lattice.subgroups[i].is_subset_of(lattice.subgroups[j])) maximal = false;
    }
    if (maximal && oi < n) lattice.maximal.push_back(i);
  }
  return lattice;
}

namespace {

Rational min_outside(std::span<const Element> a, const SubgroupLattice& lattice, bool maximal_only) {
  if (a.empty()) throw ValidationError("detection probability needs a nonempty multiset");
  const auto n = static_cast<std::int64_t>(a.size());
  std::int64_t best = n;
  auto visit = [&](const ElementSet& h) {
    std::int64_t inside = 0;
    for (Element x : a) inside += h.contains(x) ? 1 : 0;
    best = std::min(best, n - inside);
  };
  if (maximal_only) {
    for (std::size_t i : lattice.maximal) visit(lattice.subgroups[i]);
  } else {
    for (const auto& h : lattice.subgroups) {
      if (h.count() < lattice.group_order) visit(h);
    }
  }
  return Rational(best, n);
}

}  // namespace

Rational exact_delta(std::span<const Element> a, const SubgroupLattice& lattice) {
  return min_outside(a, lattice, true);
}

Rational exact_delta(const WordSet& a, const GroupBackend& backend) {
  auto lattice = subgroup_lattice(*backend.group);
  auto elements = backend.evaluate(a);
  return exact_delta(elements, lattice);
}

Rational exact_delta_all_proper(std::span<const Element> a, const SubgroupLattice& lattice) {
  return min_outside(a, lattice, false);
}

Rational exact_delta_vector_space(const WordSet& a, int p, int k, std::uint64_t budget) {
  if (p < 2) throw ValidationError("p must be a prime");
  for (int q = 2; q * q <= p; ++q) {
    if (p % q == 0) throw ValidationError(std::to_string(p) + " is not prime");
  }
  if (k < 1) throw ValidationError("vector space dimension must be positive");
  std::uint64_t functionals = 0;
  {
    std::uint64_t power = 1;
    for (int i = 0; i < k; ++i) {
      if (power > budget * static_cast<std::uint64_t>(p)) throw BudgetExceeded("too many functionals");
      power *= static_cast<std::uint64_t>(p);
    }
    functionals = (power - 1) / static_cast<std::uint64_t>(p - 1);
  }
  if (functionals > budget) {
    throw BudgetExceeded(std::to_string(functionals) + " functionals exceed budget " + std::to_string(budget));
  }

  const std::size_t n = a.size();
  const auto ku = static_cast<std::size_t>(k);
  // Column-major: col[j][i] = exponent sum of x_{j+1} in word i, mod p.
  std::vector<std::vector<int>> col(ku, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto v = abelianize(a[i], k);
    for (std::size_t j = 0; j < ku; ++j) col[j][i] = static_cast<int>(((v[j] % p) + p) % p);
  }

  // Functionals normalised to a leading 1 at position t. Each odometer step
  // changes some digits by +1 mod p, which adds that column to the pairings.
  std::size_t best = n;
  std::vector<int> dot(n);
  for (std::size_t t = 0; t < ku; ++t) {
    for (std::size_t i = 0; i < n; ++i) dot[i] = col[t][i];
    std::vector<int> digit(ku, 0);
    for (;;) {
      std::size_t outside = 0;
      for (int d : dot) outside += d != 0 ? 1 : 0;
      best = std::min(best, outside);
      std::size_t j = t + 1;
      for (; j < ku; ++j) {
        for (std::size_t i = 0; i < n; ++i) dot[i] = (dot[i] + col[j][i]) % p;
        if (++digit[j] < p) break;
        digit[j] = 0;
      }
      if (j == ku) break;
    }
  }
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(n));
}

std::optional<std::vector<Element>> induced_homomorphism(const GroupBackend& source, const GroupBackend& target) {
  if (source.generators.size() != target.generators.size()) {
    throw ValidationError("homomorphism needs one image per source generator");
  }
  const FiniteGroup& g = *source.group;
  const FiniteGroup& h = *target.group;
  constexpr Element kUnset = ~Element{0};
  std::vector<Element> map(g.order(), kUnset);
  map[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    Element x = queue[q];
    for (std::size_t i = 0; i < source.generators.size(); ++i) {
      Element y = g.multiply(x, source.generators[i]);
      Element image = h.multiply(map[x], target.generators[i]);
      if (map[y] == kUnset) {
        map[y] = image;
        queue.push_back(y);
      } else if (map[y] != image) {
        return std::nullopt;
      }
    }
  }
  if (queue.size() != g.order()) return std::nullopt;
  return map;
}

PushforwardReport quotient_pushforward_check(const WordSet& a, const GroupBackend& source,
                                             const GroupBackend& target) {
  auto hom = induced_homomorphism(source, target);
  if (!hom) throw ValidationError("generator images do not define a homomorphism on the source group");
  auto source_lattice = subgroup_lattice(*source.group);
  auto target_lattice = subgroup_lattice(*target.group);

  PushforwardReport r;
  r.surjective = target.generates();
  r.delta_source = exact_delta(source.evaluate(a), source_lattice);
  r.delta_target = exact_delta(target.evaluate(a), target_lattice);
  r.monotone = r.delta_target >= r.delta_source;

  ElementSet kernel(source.group->order());
  for (Element x = 0; x < source.group->order(); ++x) {
    if ((*hom)[x] == 0) kernel.insert(x);
  }
  r.frattini = true;
  for (std::size_t i : source_lattice.maximal) {
    if (!kernel.is_subset_of(source_lattice.subgroups[i])) {
      r.frattini = false;
      break;
    }
  }
  r.equal = r.delta_source == r.delta_target;
  return r;
}

std::vector<ElementSet> derived_series(const FiniteGroup& g) {
  std::vector<ElementSet> series{g.whole()};
  for (;;) {
    const auto members = series.back().elements();
    std::vector<Element> commutators;
    ElementSet seen(g.order());
    for (Element a : members) {
      for (Element b : members) {
        Element c = g.multiply(g.multiply(g.inverse(a), g.inverse(b)), g.multiply(a, b));
        if (!seen.contains(c)) {
          seen.insert(c);
          commutators.push_back(c);
        }
      }
    }
    ElementSet next = g.generated_subgroup(commutators);
    if (next == series.back()) break;
    series.push_back(std::move(next));
  }
  return series;
}

bool is_solvable(const FiniteGroup& g) { return derived_series(g).back().count() == 1; }

PMSGBound pmsg_sample_size(const PMSGParams& p) {
  if (p.delta <= 0 || p.delta >= Rational(1, 3)) throw ValidationError("PMSG bound needs 0 < delta < 1/3");
  if (p.e_prime <= 0) throw ValidationError("PMSG exponent must be positive");
  if (p.k < 1) throw ValidationError("rank must be positive");
  const double keep = 1.0 - to_double(p.delta);
  PMSGBound b;
  b.denominator = keep - binary_entropy(keep);
  const double numerator = 2.0 + to_double(p.e_prime * Rational(p.k));
  b.n = static_cast<std::int64_t>(std::ceil(numerator / b.denominator));
  b.proof_constant = 2.0 * to_double(p.e_prime) / b.denominator;
  return b;
}

SolvableCode solvable_random_code(const FiniteGroup& g, const PMSGParams& p, std::uint64_t seed, int max_resamples) {
  if (!is_solvable(g)) throw ValidationError(g.name() + " is not solvable");
  const auto bound = pmsg_sample_size(p);
  const auto lattice = subgroup_lattice(g);
  Rng rng(seed, "groups.pmsg");
  SolvableCode best;
  best.delta = Rational(-1);
  for (int attempt = 1; attempt <= max_resamples; ++attempt) {
    std::vector<Element> sample(static_cast<std::size_t>(bound.n));
    for (auto& x : sample) x = static_cast<Element>(rng.below(g.order()));
    Rational delta = exact_delta(sample, lattice);
    if (delta > best.delta) {
      best = {std::move(sample), delta, attempt};
    }
    if (best.delta >= p.delta) {
      best.attempts = attempt;
      return best;
    }
  }
  throw CertificationFailure("no sample of " + std::to_string(bound.n) + " elements of " + g.name() +
                             " reached delta " + to_string(p.delta) + " in " + std::to_string(max_resamples) +
                             " attempts; best " + to_string(best.delta));
}

}  // namespace ucodes
