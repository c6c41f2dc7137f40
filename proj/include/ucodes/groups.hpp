#pragma once

// Finite group backends, subgroup lattices and exact detection probability.
//
// Every group is stored concretely: elements are indices 0..|G|-1 (0 is the
// identity) with a full multiplication table, so |G| is capped (default 2000).
// Permutations are written as 1-based image lists and compose left to right:
// (a*b)(x) = b(a(x)).

#include "ucodes/error.hpp"
#include "ucodes/rational.hpp"
#include "ucodes/words.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ucodes {

using Element = std::uint32_t;

/// Bitset over the elements of one group.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe);

  void insert(Element e) { bits_[e >> 6] |= std::uint64_t{1} << (e & 63); }
  bool contains(Element e) const { return (bits_[e >> 6] >> (e & 63)) & 1U; }
  std::size_t count() const;
  std::size_t universe() const { return universe_; }
  bool is_subset_of(const ElementSet& other) const;
  std::vector<Element> elements() const;

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
  friend bool operator<(const ElementSet& a, const ElementSet& b) { return a.bits_ < b.bits_; }

  struct Hash {
    std::size_t operator()(const ElementSet& s) const;
  };

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

enum class GroupKind { Abelian, Permutation, Product, Quotient };

class FiniteGroup {
 public:
  using element_type = Element;
  static constexpr std::size_t kDefaultCap = 2000;

  /// Z_{m_1} x ... x Z_{m_r}; coordinates are residue vectors.
  static FiniteGroup abelian(const std::vector<int>& moduli, std::size_t cap = kDefaultCap);
  /// Z_m^r.
  static FiniteGroup cyclic_power(int m, int r, std::size_t cap = kDefaultCap);
  /// Subgroup of Sym(degree) generated by 1-based image lists.
  static FiniteGroup permutation(int degree, const std::vector<std::vector<int>>& generators,
                                 std::size_t cap = kDefaultCap);
  static FiniteGroup symmetric(int degree, std::size_t cap = kDefaultCap);
  /// Coordinates of (a, b) are the concatenation of the factor coordinates.
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t cap = kDefaultCap);
  /// G / N for a normal subgroup N; cosets are labelled by their smallest member.
  static FiniteGroup quotient(const FiniteGroup& g, const ElementSet& normal_subgroup);

  std::size_t order() const { return coords_.size(); }
  GroupKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  Element identity() const { return 0; }
  Element multiply(Element a, Element b) const { return table_[static_cast<std::size_t>(a) * order() + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  std::size_t element_order(Element a) const;

  const std::vector<int>& coordinates(Element e) const { return coords_[e]; }
  std::optional<Element> find(const std::vector<int>& coordinates) const;
  /// Like find, but throws ValidationError for unknown coordinates.
  Element at(const std::vector<int>& coordinates) const;
  std::string describe(Element e) const;

  /// Generators used to build the group (unit vectors, the given permutations, ...).
  const std::vector<Element>& defining_generators() const { return defining_generators_; }
  /// Number of coordinates belonging to the left factor of a direct product.
  std::size_t left_width() const { return left_width_; }

  bool is_abelian() const;
  bool is_subgroup(const ElementSet& s) const;
  bool is_normal(const ElementSet& s) const;
  ElementSet generated_subgroup(std::span<const Element> generators) const;
  ElementSet whole() const;

 private:
  FiniteGroup() = default;
  template <class Compose>
  static FiniteGroup close(GroupKind kind, std::string name, std::vector<int> identity,
                           const std::vector<std::vector<int>>& generators, Compose compose, std::size_t cap);
  void build_table(const std::vector<Element>& parent, const std::vector<std::size_t>& via,
                   const std::vector<std::vector<Element>>& right_by_generator);

  struct CoordHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };

  GroupKind kind_ = GroupKind::Abelian;
  std::string name_;
  std::vector<std::vector<int>> coords_;
  std::unordered_map<std::vector<int>, Element, CoordHash> index_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<Element> defining_generators_;
  std::size_t left_width_ = 0;
};

/// A finite group together with the images of x_1..x_k.
struct GroupBackend {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<Element> generators;

  int rank() const { return static_cast<int>(generators.size()); }
  /// True when the generator images generate the whole group.
  bool generates() const;
  /// Evaluates every word of `a` at the generator images.
  std::vector<Element> evaluate(const WordSet& a) const;
};

// ---------------------------------------------------------------------------
// Subgroup lattice and detection probability

struct SubgroupLattice {
  std::size_t group_order = 0;
  /// Every subgroup, sorted by order and then by bit pattern.
  std::vector<ElementSet> subgroups;
  /// Indices into `subgroups` of the maximal subgroups.
  std::vector<std::size_t> maximal;

  std::size_t order(std::size_t i) const { return subgroups[i].count(); }
  std::size_t index(std::size_t i) const { return group_order / order(i); }
};

/// All subgroups by join-closure of cyclic subgroups. Throws BudgetExceeded if
/// the group exceeds `cap` or the lattice grows beyond `max_subgroups`.
SubgroupLattice subgroup_lattice(const FiniteGroup& g, std::size_t cap = FiniteGroup::kDefaultCap,
                                 std::size_t max_subgroups = 500000);

/// min over maximal M of 1 - |A ∩ M|/|A|, counting A as a multiset. A group
/// without proper subgroups yields 1.
Rational exact_delta(std::span<const Element> a, const SubgroupLattice& lattice);
Rational exact_delta(const WordSet& a, const GroupBackend& backend);
/// Same infimum taken over every proper subgroup.
Rational exact_delta_all_proper(std::span<const Element> a, const SubgroupLattice& lattice);

/// δ of the image of A in F_p^k under abelianization mod p. Generators with
/// index above k are sent to zero, which allows truncated quotients.
Rational exact_delta_vector_space(const WordSet& a, int p, int k, std::uint64_t budget = std::uint64_t{1} << 26);

struct PushforwardReport {
  Rational delta_source;
  Rational delta_target;
  bool surjective = false;
  bool monotone = false;  // delta_target >= delta_source
  bool frattini = false;  // kernel inside every maximal subgroup of the source
  bool equal = false;
  /// monotone, and equal whenever the map is Frattini.
  bool ok() const { return surjective && monotone && (!frattini || equal); }
};

/// Checks the quotient behaviour of δ for the map x_i ↦ target.generators[i],
/// from source.group to target.group. Throws ValidationError if those images
/// do not define a homomorphism.
PushforwardReport quotient_pushforward_check(const WordSet& a, const GroupBackend& source,
                                             const GroupBackend& target);

/// Table of the homomorphism source -> target defined by generator images, or
/// nullopt when the images are inconsistent or source.generators do not
/// generate source.group.
std::optional<std::vector<Element>> induced_homomorphism(const GroupBackend& source, const GroupBackend& target);

// ---------------------------------------------------------------------------
// Solvable groups and random codes

std::vector<ElementSet> derived_series(const FiniteGroup& g);
bool is_solvable(const FiniteGroup& g);

struct PMSGParams {
  Rational e_prime;  // uniform PMSG exponent
  Rational delta;    // target detection probability, < 1/3
  int k = 1;         // rank
};

struct PMSGBound {
  std::int64_t n = 0;              // ceil((2 + E'k) / ((1-δ) - H_2(1-δ)))
  double denominator = 0;          // (1-δ) - H_2(1-δ)
  double proof_constant = 0;       // 2E' / ((1-δ) - H_2(1-δ))
  double stated_envelope = 85.0;   // the published C for finite solvable groups
};

PMSGBound pmsg_sample_size(const PMSGParams& p);

struct SolvableCode {
  std::vector<Element> elements;
  Rational delta;
  int attempts = 0;
};

/// Samples pmsg_sample_size(p).n uniform elements until exact δ >= p.delta.
/// Throws ValidationError for non-solvable input and CertificationFailure after
/// max_resamples attempts.
SolvableCode solvable_random_code(const FiniteGroup& g, const PMSGParams& p, std::uint64_t seed,
                                  int max_resamples = 20);

}  // namespace ucodes
