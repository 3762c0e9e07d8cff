#include "epsdist/values.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <stdexcept>

#include "epsdist/errors.hpp"

namespace epsdist {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

void check_unit(const Rational& q) {
  if (sgn(q) < 0 || cmp(q, 1) > 0) {
    throw std::domain_error("value " + q.get_str() + " outside [0,1]");
  }
}

}  // namespace

Value Value::ratio(long num, unsigned long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  check_unit(q);
  return Value(std::move(q));
}

Value Value::from_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  check_unit(c);
  return Value(std::move(c));
}

Value Value::clamp(const Rational& q) {
  if (sgn(q) <= 0) return zero();
  if (cmp(q, 1) >= 0) return one();
  Rational c = q;
  c.canonicalize();
  return Value(std::move(c));
}

Value Value::parse(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty value");

  Rational q;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw ParseError("malformed rational '" + std::string(original) + "'");
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(original) + "'");
    q = Rational(n, d);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ParseError("malformed decimal '" + std::string(original) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class digits((whole.empty() ? std::string("0") : std::string(whole)) + std::string(frac), 10);
    q = Rational(digits, scale);
  } else {
    if (!all_digits(text)) {
      throw ParseError("malformed value '" + std::string(original) + "'");
    }
    q = Rational(mpz_class(std::string(text), 10));
  }
  q.canonicalize();
  if (sgn(q) < 0 || cmp(q, 1) > 0) {
    throw ParseError("value '" + std::string(original) + "' outside [0,1]");
  }
  return Value(std::move(q));
}

std::string Value::str() const {
  if (is_zero()) return "0";
  if (is_one()) return "1";
  return q_.get_str();
}

Value truncated_add(const Value& a, const Value& b) {
  return Value::clamp(a.rational() + b.rational());
}

Value truncated_sub(const Value& a, const Value& b) {
  return Value::clamp(a.rational() - b.rational());
}

Value meet(const Value& a, const Value& b) { return a <= b ? a : b; }

Value join(const Value& a, const Value& b) { return a >= b ? a : b; }

Value complement(const Value& a) { return Value::clamp(1 - a.rational()); }

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

std::size_t hash_rational(const Rational& q) noexcept {
  const auto* num = q.get_num_mpz_t();
  const auto* den = q.get_den_mpz_t();
  std::size_t h = mpz_size(num) ? mpz_getlimbn(num, 0) : 0;
  h ^= (mpz_size(den) ? mpz_getlimbn(den, 0) : 0) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::size_t>(mpz_sgn(num)) << 1;
  return h;
}

}  // namespace epsdist
