#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74 spells `integer == rational` as `rational == integer`, which C++20
// rewrites back into the first form and recurses forever. Exact-match
// overloads for the integer types in use end the cycle.
namespace boost {
#define COARSE_RATIONAL_EQ(T)                                                                  \
  inline bool operator==(const rational<std::int64_t>& a, T b) {                              \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);              \
  }                                                                                            \
  inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }              \
  inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }           \
  inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
COARSE_RATIONAL_EQ(int)
COARSE_RATIONAL_EQ(long)
COARSE_RATIONAL_EQ(long long)
#undef COARSE_RATIONAL_EQ
}  // namespace boost

namespace coarse {

/// Exact rational used for every distance, radius and threshold.
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on junk or q == 0.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t num = parse_int(text.substr(0, slash));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Always "p/q" with q > 0, so output parses back bit-exactly.
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// ||a - b||_1 / ||a ^ b||_1 kept as raw counts. A zero denominator is the
/// distinguished infinity; it is larger than every finite ratio and fails
/// every epsilon comparison.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Ratio infinity(std::uint64_t num = 1) { return Ratio{num, 0}; }

  bool is_infinite() const { return den == 0; }

  /// Strict `ratio < eps` by cross-multiplication.
  bool below(const Rational& eps) const {
    if (is_infinite()) return false;
    return static_cast<__int128>(num) * eps.denominator() <
           static_cast<__int128>(eps.numerator()) * static_cast<__int128>(den);
  }

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    auto lhs = static_cast<unsigned __int128>(a.num) * b.den;
    auto rhs = static_cast<unsigned __int128>(b.num) * a.den;
    return lhs <=> rhs;
  }
  friend bool operator==(const Ratio& a, const Ratio& b) { return (a <=> b) == 0; }
};

/// Reduced "p/q", or "inf".
inline std::string to_string(const Ratio& r) {
  if (r.is_infinite()) return "inf";
  if (r.num == 0) return "0/1";
  Rational q(static_cast<std::int64_t>(r.num), static_cast<std::int64_t>(r.den));
  return to_string(q);
}

inline Ratio parse_ratio(std::string_view text) {
  if (text == "inf") return Ratio::infinity();
  Rational q = parse_rational(text);
  if (q < 0) throw std::invalid_argument("negative ratio '" + std::string(text) + "'");
  return Ratio{static_cast<std::uint64_t>(q.numerator()), static_cast<std::uint64_t>(q.denominator())};
}

}  // namespace coarse
