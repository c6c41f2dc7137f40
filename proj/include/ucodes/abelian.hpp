#pragma once

// Integer parity maps, integer kernels and the codes they give modulo every
// prime at once.

#include "ucodes/error.hpp"
#include "ucodes/expanders.hpp"
#include "ucodes/groups.hpp"
#include "ucodes/rational.hpp"
#include "ucodes/words.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ucodes {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const;
  /// Largest bit length of any entry's absolute value.
  std::size_t max_bitsize() const;
  std::vector<BigInt> column(std::size_t c) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> entries_;
};

/// {"rows":…, "cols":…, "entries":[["decimal strings"]]}
nlohmann::json to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const nlohmann::json& j);

bool is_prime(std::int64_t p);

/// m×n matrix of π: entry (w, v) is the number of edges between left v and right w.
IntMatrix parity_matrix(const BipartiteGraph& g);

/// Columns form a Z-basis of {x in Z^n : M x = 0}. Computed by unimodular
/// column reduction of M and then pairwise size reduction of the basis.
IntMatrix integer_kernel_basis(const IntMatrix& m);

/// Rank over Q.
std::size_t rank_rational(const IntMatrix& m);
/// Rank of the reduction mod p. Throws ValidationError unless p is prime.
std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p);
/// True iff the columns stay independent mod p.
bool mod_p_independence(const IntMatrix& b, std::int64_t p);

/// Exponent-sum matrix of a word set: row i is the abelianization of word i.
IntMatrix abelianized_matrix(const WordSet& a);

struct DistanceResult {
  std::int64_t distance = 0;  // exact minimum, or the smallest weight seen when sampled
  bool exact = true;
  std::uint64_t messages = 0;
};

/// Minimum Hamming weight of Gen·x mod p over nonzero x in F_p^k. Messages are
/// enumerated up to scalars; above `budget` of them, `samples` random messages
/// give an upper bound instead. A generator with no columns has distance 0.
DistanceResult distance_exact(const IntMatrix& gen, std::int64_t p, std::uint64_t budget = std::uint64_t{1} << 24,
                              std::uint64_t samples = std::uint64_t{1} << 20, std::uint64_t seed = 0);

/// H_p(x) for 0 <= x <= 1.
double gv_entropy(std::int64_t p, const Rational& x);
/// max over p of ⌈r_p / (1 - H_p(δ))⌉. Needs δ < 1 - 1/p for every listed p.
std::int64_t gv_abelian_size(const std::map<std::int64_t, std::int64_t>& ranks, const Rational& delta);

struct PrimeCheck {
  std::int64_t p = 0;
  std::size_t dimension = 0;
  DistanceResult distance;
  bool pass = false;
};

struct AbelianCodeReport {
  std::size_t n = 0;
  std::size_t k = 0;
  Rational alpha;
  std::size_t entry_bitsize = 0;
  std::vector<PrimeCheck> primes;
  bool rank_bound = false;  // k >= n - m
  bool pass = false;
};

nlohmann::json to_json(const AbelianCodeReport& r);

struct AbelianCode {
  IntMatrix encoder;  // n×k
  AbelianCodeReport report;
};

/// 𝓔 = integer_kernel_basis(parity_matrix(g)), checked at each prime for full
/// dimension and minimum distance >= α·n.
AbelianCode build_abelian_code(const BipartiteGraph& g, const Rational& alpha,
                               const std::vector<std::int64_t>& primes = {2, 3, 5, 7, 11},
                               std::uint64_t budget = std::uint64_t{1} << 24);

/// Diagonal pairing c_i = (a_i, b_i) inside `product` = g × h. Orders must be coprime.
std::vector<Element> coprime_combine(std::span<const Element> a, const FiniteGroup& g, std::span<const Element> b,
                                     const FiniteGroup& h, const FiniteGroup& product);

}  // namespace ucodes
