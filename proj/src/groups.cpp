#include "ucodes/groups.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <sstream>

namespace ucodes {

ElementSet::ElementSet(std::size_t universe) : universe_(universe), bits_((universe + 63) / 64, 0) {}

std::size_t ElementSet::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] & ~other.bits_[i]) return false;
  }
  return true;
}

std::vector<Element> ElementSet::elements() const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    for (auto w = bits_[i]; w; w &= w - 1) {
      out.push_back(static_cast<Element>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
    }
  }
  return out;
}

std::size_t ElementSet::Hash::operator()(const ElementSet& s) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto w : s.bits_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t FiniteGroup::CoordHash::operator()(const std::vector<int>& v) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <class Compose>
FiniteGroup FiniteGroup::close(GroupKind kind, std::string name, std::vector<int> identity,
                               const std::vector<std::vector<int>>& generators, Compose compose, std::size_t cap) {
  FiniteGroup g;
  g.kind_ = kind;
  g.name_ = std::move(name);
  g.coords_.push_back(identity);
  g.index_.emplace(std::move(identity), 0);

  // Breadth-first closure under right multiplication by the generators. The
  // spanning tree (parent, via) lets build_table fill the Cayley table in O(|G|^2).
  std::vector<Element> parent{0};
  std::vector<std::size_t> via{0};
  std::vector<std::vector<Element>> right(generators.size());
  for (std::size_t e = 0; e < g.coords_.size(); ++e) {
    for (std::size_t s = 0; s < generators.size(); ++s) {
      auto c = compose(g.coords_[e], generators[s]);
      auto [it, inserted] = g.index_.try_emplace(c, static_cast<Element>(g.coords_.size()));
      if (inserted) {
        if (g.coords_.size() >= cap) {
          throw BudgetExceeded("group " + g.name_ + " has more than " + std::to_string(cap) + " elements");
        }
        g.coords_.push_back(std::move(c));
        parent.push_back(static_cast<Element>(e));
        via.push_back(s);
      }
      right[s].resize(g.coords_.size());
      right[s][e] = it->second;
    }
  }
  for (const auto& gen : generators) g.defining_generators_.push_back(g.index_.at(gen));
  g.build_table(parent, via, right);
  return g;
}

void FiniteGroup::build_table(const std::vector<Element>& parent, const std::vector<std::size_t>& via,
                              const std::vector<std::vector<Element>>& right) {
  const std::size_t n = order();
  table_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    Element* row = &table_[a * n];
    row[0] = static_cast<Element>(a);
    // Elements are discovered in BFS order, so parent[b] < b.
    for (std::size_t b = 1; b < n; ++b) row[b] = right[via[b]][row[parent[b]]];
  }
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const Element* row = &table_[a * n];
    for (std::size_t b = 0; b < n; ++b) {
      if (row[b] == 0) {
        inverse_[a] = static_cast<Element>(b);
        break;
      }
    }
  }
}

FiniteGroup FiniteGroup::abelian(const std::vector<int>& moduli, std::size_t cap) {
  if (moduli.empty()) throw ValidationError("abelian group needs at least one modulus");
  std::ostringstream name;
  std::vector<std::vector<int>> gens;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] < 1) throw ValidationError("moduli must be positive");
    name << (i ? "x" : "") << "Z" << moduli[i];
    std::vector<int> unit(moduli.size(), 0);
    unit[i] = moduli[i] > 1 ? 1 : 0;
    gens.push_back(std::move(unit));
  }
  auto compose = [&moduli](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % moduli[i];
    return c;
  };
  return close(GroupKind::Abelian, name.str(), std::vector<int>(moduli.size(), 0), gens, compose, cap);
}

FiniteGroup FiniteGroup::cyclic_power(int m, int r, std::size_t cap) {
  if (r < 1) throw ValidationError("cyclic_power needs r >= 1");
  return abelian(std::vector<int>(static_cast<std::size_t>(r), m), cap);
}

FiniteGroup FiniteGroup::permutation(int degree, const std::vector<std::vector<int>>& generators, std::size_t cap) {
  if (degree < 1) throw ValidationError("permutation degree must be positive");
  for (const auto& p : generators) {
    if (p.size() != static_cast<std::size_t>(degree)) {
      throw ValidationError("permutation has " + std::to_string(p.size()) + " images, degree is " +
                            std::to_string(degree));
    }
    std::vector<bool> seen(static_cast<std::size_t>(degree), false);
    for (int x : p) {
      if (x < 1 || x > degree || seen[static_cast<std::size_t>(x - 1)]) {
        throw ValidationError("image list is not a permutation of 1.." + std::to_string(degree));
      }
      seen[static_cast<std::size_t>(x - 1)] = true;
    }
  }
  std::vector<int> identity(static_cast<std::size_t>(degree));
  std::iota(identity.begin(), identity.end(), 1);
  // Left-to-right: apply a first, then b.
  auto compose = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) c[x] = b[static_cast<std::size_t>(a[x] - 1)];
    return c;
  };
  return close(GroupKind::Permutation, "Perm(" + std::to_string(degree) + ")", identity, generators, compose, cap);
}

FiniteGroup FiniteGroup::symmetric(int degree, std::size_t cap) {
  std::vector<std::vector<int>> gens;
  if (degree >= 2) {
    std::vector<int> transposition(static_cast<std::size_t>(degree));
    std::iota(transposition.begin(), transposition.end(), 1);
    std::swap(transposition[0], transposition[1]);
    std::vector<int> cycle(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % degree + 1;
    gens = {transposition, cycle};
  }
  auto g = permutation(degree, gens, cap);
  g.name_ = "S" + std::to_string(degree);
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t cap) {
  const std::size_t wa = a.coordinates(0).size();
  auto join = [](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> c = x;
    c.insert(c.end(), y.begin(), y.end());
    return c;
  };
  std::vector<std::vector<int>> gens;
  for (Element g : a.defining_generators()) gens.push_back(join(a.coordinates(g), b.coordinates(0)));
  for (Element h : b.defining_generators()) gens.push_back(join(a.coordinates(0), b.coordinates(h)));
  auto compose = [&](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> xl(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(wa));
    std::vector<int> xr(x.begin() + static_cast<std::ptrdiff_t>(wa), x.end());
    std::vector<int> yl(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(wa));
    std::vector<int> yr(y.begin() + static_cast<std::ptrdiff_t>(wa), y.end());
    return join(a.coordinates(a.multiply(a.at(xl), a.at(yl))), b.coordinates(b.multiply(b.at(xr), b.at(yr))));
  };
  auto g = close(GroupKind::Product, a.name() + "x" + b.name(), join(a.coordinates(0), b.coordinates(0)), gens,
                 compose, cap);
  g.left_width_ = wa;
  return g;
}

FiniteGroup FiniteGroup::quotient(const FiniteGroup& g, const ElementSet& normal) {
  if (!g.is_normal(normal)) throw ValidationError("quotient needs a normal subgroup");
  const std::size_t n = g.order();
  std::vector<Element> coset_of(n, static_cast<Element>(n));
  std::vector<Element> reps;
  const auto members = normal.elements();
  for (Element x = 0; x < n; ++x) {
    if (coset_of[x] != n) continue;
    auto id = static_cast<Element>(reps.size());
    reps.push_back(x);
    for (Element h : members) coset_of[g.multiply(h, x)] = id;
  }
  FiniteGroup q;
  q.kind_ = GroupKind::Quotient;
  q.name_ = g.name() + "/N" + std::to_string(members.size());
  const std::size_t m = reps.size();
  for (std::size_t i = 0; i < m; ++i) {
    q.coords_.push_back(g.coordinates(reps[i]));
    q.index_.emplace(q.coords_.back(), static_cast<Element>(i));
  }
  q.table_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) q.table_[i * m + j] = coset_of[g.multiply(reps[i], reps[j])];
  }
  q.inverse_.resize(m);
  for (std::size_t i = 0; i < m; ++i) q.inverse_[i] = coset_of[g.inverse(reps[i])];
  for (Element s : g.defining_generators()) q.defining_generators_.push_back(coset_of[s]);
  return q;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != 0; x = multiply(x, a)) ++k;
  return k;
}

std::optional<Element> FiniteGroup::find(const std::vector<int>& coordinates) const {
  auto it = index_.find(coordinates);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Element FiniteGroup::at(const std::vector<int>& coordinates) const {
  if (auto e = find(coordinates)) return *e;
  std::ostringstream os;
  os << "element [";
  for (std::size_t i = 0; i < coordinates.size(); ++i) os << (i ? "," : "") << coordinates[i];
  os << "] is not in group " << name_;
  throw ValidationError(os.str());
}

std::string FiniteGroup::describe(Element e) const {
  std::ostringstream os;
  os << '[';
  const auto& c = coords_[e];
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

bool FiniteGroup::is_abelian() const {
  const std::size_t n = order();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (table_[a * n + b] != table_[b * n + a]) return false;
    }
  }
  return true;
}

bool FiniteGroup::is_subgroup(const ElementSet& s) const {
  if (s.universe() != order() || !s.contains(0)) return false;
  const auto members = s.elements();
  for (Element a : members) {
    for (Element b : members) {
      if (!s.contains(multiply(a, b))) return false;
    }
  }
  return true;
}

bool FiniteGroup::is_normal(const ElementSet& s) const {
  if (!is_subgroup(s)) return false;
  const auto members = s.elements();
  for (Element g : defining_generators_) {
    for (Element h : members) {
      if (!s.contains(multiply(multiply(inverse(g), h), g))) return false;
    }
  }
  return true;
}

ElementSet FiniteGroup::generated_subgroup(std::span<const Element> generators) const {
  ElementSet s(order());
  std::vector<Element> members{0};
  s.insert(0);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (Element g : generators) {
      Element x = multiply(members[i], g);
      if (!s.contains(x)) {
        s.insert(x);
        members.push_back(x);
      }
    }
  }
  return s;
}

ElementSet FiniteGroup::whole() const {
  ElementSet s(order());
  for (Element e = 0; e < order(); ++e) s.insert(e);
  return s;
}

bool GroupBackend::generates() const {
  return group->generated_subgroup(generators).count() == group->order();
}

std::vector<Element> GroupBackend::evaluate(const WordSet& a) const {
  if (a.rank() > rank()) {
    throw ValidationError("word set of rank " + std::to_string(a.rank()) + " needs that many generator images, got " +
                          std::to_string(rank()));
  }
  std::span<const Element> assignment(generators.data(), static_cast<std::size_t>(a.rank()));
  std::vector<Element> out;
  out.reserve(a.size());
  for (const Word& w : a) out.push_back(ucodes::evaluate(w, assignment, *group));
  return out;
}

}  // namespace ucodes
