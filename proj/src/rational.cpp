#include "ucodes/rational.hpp"

#include "ucodes/error.hpp"

#include <charconv>

namespace ucodes {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ValidationError("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), text);
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = !text.empty() && text.front() == '-';
    auto int_part = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) throw ValidationError("too many decimals in '" + std::string(text) + "'");
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational value(whole * scale + frac, scale);
    return negative ? -value : value;
  }
  return Rational(parse_int(text, text));
}

std::int64_t ceil(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (q * r.denominator() < r.numerator()) ++q;
  return q;
}

}  // namespace ucodes
