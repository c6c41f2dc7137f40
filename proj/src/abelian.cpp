#include "ucodes/abelian.hpp"
#include "ucodes/entropy.hpp"
#include "ucodes/rng.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace ucodes {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return x == 0; });
}

std::size_t IntMatrix::max_bitsize() const {
  std::size_t bits = 0;
  for (const auto& x : entries_) {
    if (x != 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(abs(x)) + 1);
  }
  return bits;
}

std::vector<BigInt> IntMatrix::column(std::size_t c) const {
  std::vector<BigInt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix dimensions do not match");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      if (a(i, l) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, l) * b(l, j);
    }
  }
  return out;
}

nlohmann::json to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

IntMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    throw ValidationError("matrix JSON needs \"rows\", \"cols\" and \"entries\"");
  }
  IntMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& entries = j.at("entries");
  if (entries.size() != m.rows()) throw ValidationError("matrix JSON has the wrong number of rows");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (entries[r].size() != m.cols()) throw ValidationError("matrix JSON row " + std::to_string(r) + " is ragged");
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& x = entries[r][c];
      try {
        m(r, c) = x.is_string() ? BigInt(x.get<std::string>()) : BigInt(x.get<std::int64_t>());
      } catch (const std::runtime_error&) {
        throw ValidationError("matrix entry is not an integer");
      }
    }
  }
  return m;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

IntMatrix parity_matrix(const BipartiteGraph& g) {
  IntMatrix m(static_cast<std::size_t>(g.right_size()), static_cast<std::size_t>(g.left_size()));
  for (int v = 0; v < g.left_size(); ++v) {
    for (int w : g.neighbors(v)) m(static_cast<std::size_t>(w), static_cast<std::size_t>(v)) += 1;
  }
  return m;
}

namespace {

void column_axpy(IntMatrix& m, std::size_t dst, const BigInt& q, std::size_t src) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m(r, src) != 0) m(r, dst) -= q * m(r, src);
  }
}

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

// Unimodular column reduction: returns the rank and leaves A·U in column
// echelon form, so the trailing n - rank columns of U span the kernel.
std::size_t column_echelon(IntMatrix& a, IntMatrix& u) {
  const std::size_t n = a.cols();
  std::size_t pivot = 0;
  for (std::size_t r = 0; r < a.rows() && pivot < n; ++r) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t c = pivot; c < n; ++c) {
        if (a(r, c) != 0 && (best == n || abs(a(r, c)) < abs(a(r, best)))) best = c;
      }
      if (best == n) break;
      if (best != pivot) {
        swap_columns(a, best, pivot);
        swap_columns(u, best, pivot);
      }
      bool done = true;
      for (std::size_t c = pivot + 1; c < n; ++c) {
        if (a(r, c) == 0) continue;
        BigInt q = a(r, c) / a(r, pivot);
        column_axpy(a, c, q, pivot);
        column_axpy(u, c, q, pivot);
        if (a(r, c) != 0) done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  return pivot;
}

BigInt dot(const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
  BigInt s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Pairwise size reduction: b_i -= round(<b_i,b_j>/<b_j,b_j>) b_j whenever that
// shortens b_i. The sum of squared norms strictly drops, so this terminates.
void size_reduce(std::vector<std::vector<BigInt>>& basis) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        BigInt nj = dot(basis[j], basis[j]);
        BigInt d = dot(basis[i], basis[j]);
        if (2 * abs(d) <= nj) continue;
        // Nearest integer to d / nj.
        BigInt q = d >= 0 ? BigInt((2 * d + nj) / (2 * nj)) : BigInt(-((-2 * d + nj) / (2 * nj)));
        for (std::size_t r = 0; r < basis[i].size(); ++r) basis[i][r] -= q * basis[j][r];
        changed = true;
      }
    }
  }
}

std::vector<std::vector<std::int64_t>> residues(const IntMatrix& m, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> out(m.rows(), std::vector<std::int64_t>(m.cols()));
  const BigInt bp = p;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      BigInt x = m(r, c) % bp;
      if (x < 0) x += bp;
      out[r][c] = static_cast<std::int64_t>(x);
    }
  }
  return out;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  std::int64_t result = 1;
  std::int64_t base = a % p;
  for (std::int64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = static_cast<std::int64_t>(static_cast<__int128>(result) * base % p);
    base = static_cast<std::int64_t>(static_cast<__int128>(base) * base % p);
  }
  return result;
}

}  // namespace

IntMatrix integer_kernel_basis(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.cols());
  const std::size_t rank = column_echelon(a, u);
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t c = rank; c < m.cols(); ++c) basis.push_back(u.column(c));
  size_reduce(basis);
  IntMatrix out(m.cols(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (std::size_t r = 0; r < m.cols(); ++r) out(r, c) = basis[c][r];
  }
  return out;
}

std::size_t rank_rational(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.cols());
  return column_echelon(a, u);
}

std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p) {
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  auto a = residues(m, p);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t r = rank;
    while (r < m.rows() && a[r][c] == 0) ++r;
    if (r == m.rows()) continue;
    std::swap(a[r], a[rank]);
    const std::int64_t inv = inverse_mod(a[rank][c], p);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (a[i][c] == 0) continue;
      const auto f = static_cast<std::int64_t>(static_cast<__int128>(a[i][c]) * inv % p);
      for (std::size_t j = c; j < m.cols(); ++j) {
        a[i][j] = static_cast<std::int64_t>((a[i][j] - static_cast<__int128>(f) * a[rank][j]) % p);
        if (a[i][j] < 0) a[i][j] += p;
      }
    }
    ++rank;
  }
  return rank;
}

bool mod_p_independence(const IntMatrix& b, std::int64_t p) { return rank_mod_p(b, p) == b.cols(); }

IntMatrix abelianized_matrix(const WordSet& a) {
  IntMatrix m(a.size(), static_cast<std::size_t>(a.rank()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto v = abelianize(a[i], a.rank());
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[j];
  }
  return m;
}

DistanceResult distance_exact(const IntMatrix& gen, std::int64_t p, std::uint64_t budget, std::uint64_t samples,
                              std::uint64_t seed) {
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  const std::size_t n = gen.rows();
  const std::size_t k = gen.cols();
  DistanceResult result;
  if (k == 0) return result;

  // Projective message count (p^k - 1)/(p - 1), saturating.
  long double count = 0;
  for (std::size_t i = 0; i < k; ++i) count = count * static_cast<long double>(p) + 1;
  const auto a = residues(gen, p);
  std::vector<std::vector<std::int64_t>> col(k, std::vector<std::int64_t>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) col[c][r] = a[r][c];
  }
  result.distance = static_cast<std::int64_t>(n) + 1;

  if (count > static_cast<long double>(budget)) {
    result.exact = false;
    Rng rng(seed, "abelian.distance");
    std::vector<std::int64_t> msg(k);
    while (result.messages < samples) {
      bool nonzero = false;
      for (auto& x : msg) {
        x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
        nonzero = nonzero || x != 0;
      }
      if (!nonzero) continue;
      ++result.messages;
      std::int64_t weight = 0;
      for (std::size_t r = 0; r < n; ++r) {
        __int128 s = 0;
        for (std::size_t c = 0; c < k; ++c) s += static_cast<__int128>(col[c][r]) * msg[c];
        weight += s % p != 0 ? 1 : 0;
      }
      result.distance = std::min(result.distance, weight);
    }
    return result;
  }

  if (p == 2 && n <= 64) {
    // Bit-sliced binary path: a codeword is a mask, adding a column is xor.
    std::vector<std::uint64_t> mask(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t r = 0; r < n; ++r) mask[c] |= static_cast<std::uint64_t>(col[c][r]) << r;
    }
    for (std::size_t t = 0; t < k; ++t) {
      // Gray code over positions t+1..k-1 with bit t fixed to 1.
      std::uint64_t word = mask[t];
      const std::size_t free_bits = k - t - 1;
      const std::uint64_t steps = std::uint64_t{1} << free_bits;
      for (std::uint64_t g = 0;; ) {
        ++result.messages;
        result.distance = std::min<std::int64_t>(result.distance, std::popcount(word));
        if (++g == steps) break;
        word ^= mask[t + 1 + static_cast<std::size_t>(std::countr_zero(g))];
      }
    }
    return result;
  }

  std::vector<std::int64_t> acc(n);
  for (std::size_t t = 0; t < k; ++t) {
    acc = col[t];
    std::vector<std::int64_t> digit(k, 0);
    for (;;) {
      ++result.messages;
      std::int64_t weight = 0;
      for (auto x : acc) weight += x != 0 ? 1 : 0;
      result.distance = std::min(result.distance, weight);
      std::size_t j = t + 1;
      for (; j < k; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
          acc[r] += col[j][r];
          if (acc[r] >= p) acc[r] -= p;
        }
        if (++digit[j] < p) break;
        digit[j] = 0;
      }
      if (j == k) break;
    }
  }
  return result;
}

double gv_entropy(std::int64_t p, const Rational& x) {
  if (p < 2) throw ValidationError("alphabet size must be at least 2");
  if (x < 0 || x > 1) throw ValidationError("entropy argument must lie in [0, 1]");
  return q_ary_entropy(static_cast<int>(p), to_double(x));
}

std::int64_t gv_abelian_size(const std::map<std::int64_t, std::int64_t>& ranks, const Rational& delta) {
  if (ranks.empty()) throw ValidationError("need at least one prime rank");
  if (delta < 0) throw ValidationError("delta must be non-negative");
  std::int64_t best = 0;
  for (const auto& [p, r] : ranks) {
    if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
    if (delta >= Rational(p - 1, p)) {
      throw ValidationError("delta " + to_string(delta) + " is not below 1 - 1/" + std::to_string(p));
    }
    const double size = static_cast<double>(r) / (1.0 - gv_entropy(p, delta));
    best = std::max(best, static_cast<std::int64_t>(std::ceil(size - 1e-12)));
  }
  return best;
}

nlohmann::json to_json(const AbelianCodeReport& r) {
  nlohmann::json primes = nlohmann::json::array();
  for (const auto& c : r.primes) {
    primes.push_back({{"p", c.p},
                      {"dimension", c.dimension},
                      {"min_distance", c.distance.distance},
                      {"method", c.distance.exact ? "exact" : "sampled"},
                      {"messages", c.distance.messages},
                      {"pass", c.pass}});
  }
  return {{"n", r.n},
          {"k", r.k},
          {"alpha_target", to_string(r.alpha)},
          {"entry_bitsize", r.entry_bitsize},
          {"rank_bound", r.rank_bound},
          {"primes", std::move(primes)},
          {"pass", r.pass}};
}

AbelianCode build_abelian_code(const BipartiteGraph& g, const Rational& alpha, const std::vector<std::int64_t>& primes,
                               std::uint64_t budget) {
  AbelianCode code;
  code.encoder = integer_kernel_basis(parity_matrix(g));
  auto& r = code.report;
  r.n = static_cast<std::size_t>(g.left_size());
  r.k = code.encoder.cols();
  r.alpha = alpha;
  r.entry_bitsize = code.encoder.max_bitsize();
  r.rank_bound = r.k + static_cast<std::size_t>(g.right_size()) >= r.n;
  r.pass = r.rank_bound;
  const Rational target = alpha * Rational(static_cast<std::int64_t>(r.n));
  for (std::int64_t p : primes) {
    PrimeCheck c;
    c.p = p;
    c.dimension = rank_mod_p(code.encoder, p);
    c.distance = distance_exact(code.encoder, p, budget);
    c.pass = c.dimension == r.k && (r.k == 0 || Rational(c.distance.distance) >= target);
    r.pass = r.pass && c.pass;
    r.primes.push_back(c);
  }
  return code;
}

std::vector<Element> coprime_combine(std::span<const Element> a, const FiniteGroup& g, std::span<const Element> b,
                                     const FiniteGroup& h, const FiniteGroup& product) {
  if (a.size() != b.size()) throw ValidationError("coprime_combine needs tuples of equal length");
  if (std::gcd(g.order(), h.order()) != 1) {
    throw ValidationError("group orders " + std::to_string(g.order()) + " and " + std::to_string(h.order()) +
                          " are not coprime");
  }
  if (product.order() != g.order() * h.order() || product.left_width() != g.coordinates(0).size()) {
    throw ValidationError("product group does not match the factors");
  }
  std::vector<Element> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<int> c = g.coordinates(a[i]);
    const auto& right = h.coordinates(b[i]);
    c.insert(c.end(), right.begin(), right.end());
    out.push_back(product.at(c));
  }
  return out;
}

}  // namespace ucodes
