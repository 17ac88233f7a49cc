#include "entropic/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace entropic {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("bad integer literal");
  Integer z(std::string(s), 10);
  return neg ? Integer(-z) : z;
}

Integer pow10(long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_integer(trim(s.substr(0, slash))),
                         parse_integer(trim(s.substr(slash + 1))));
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_integer(s.substr(e + 1)).get_si();
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("bad decimal literal: " + std::string(text));
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("bad number literal: " + std::string(text));
    digits = std::string(s);
  }
  Integer mant(digits, 10);
  if (neg) mant = -mant;
  long shift = exponent - frac_len;
  if (shift >= 0) return Rational(Integer(mant * pow10(shift)));
  return make_rational(mant, pow10(-shift));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational round_to_dyadic(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite probability");
  double scaled = std::nearbyint(std::ldexp(x, static_cast<int>(bits)));
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  return make_rational(Integer(scaled), den);
}

}  // namespace entropic
