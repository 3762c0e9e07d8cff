#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace epsdist {

using Rational = mpq_class;

/// An exact rational in the unit interval [0,1].
///
/// Values are always canonical (reduced, positive denominator) and never
/// leave [0,1]; arithmetic that may overshoot goes through `Rational` and is
/// brought back with `Value::clamp` or `Value::from_rational`.
class Value {
 public:
  Value() = default;

  static Value zero() { return Value(); }
  static Value one() { return Value(Rational(1)); }

  /// num/den, throws std::domain_error outside [0,1].
  static Value ratio(long num, unsigned long den);
  static Value from_rational(const Rational& q);
  static Value clamp(const Rational& q);

  /// Accepts "p/q", a finite decimal ("0.9", ".25", "1.0") or an integer.
  /// Decimals convert exactly. Throws ParseError.
  static Value parse(std::string_view text);

  const Rational& rational() const noexcept { return q_; }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return cmp(q_, 1) == 0; }

  /// Canonical text: "0", "1" or "p/q".
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  explicit Value(Rational q) : q_(std::move(q)) {}

  Rational q_;
};

/// min(a + b, 1)
Value truncated_add(const Value& a, const Value& b);
/// max(a - b, 0)
Value truncated_sub(const Value& a, const Value& b);
Value meet(const Value& a, const Value& b);
Value join(const Value& a, const Value& b);
/// 1 - a
Value complement(const Value& a);

std::ostream& operator<<(std::ostream& os, const Value& v);

std::size_t hash_rational(const Rational& q) noexcept;

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept {
    return hash_rational(v.rational());
  }
};

}  // namespace epsdist
