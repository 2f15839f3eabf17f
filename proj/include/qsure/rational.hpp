#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace qsure {

using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Parses "p", "-p", "p/q" or "-p/q" (decimal digits only). Returns nullopt on
// malformed input or zero denominator. The result is always canonical: the GMP
// string constructor would keep "2/4" un-reduced, so we normalize here.
inline std::optional<Rat> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::size_t digits_start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == digits_start) return std::nullopt;
  BigInt num(text.substr(digits_start, pos - digits_start));
  BigInt den(1);
  if (pos < text.size()) {
    if (text[pos] != '/') return std::nullopt;
    ++pos;
    std::size_t den_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == den_start || pos != text.size()) return std::nullopt;
    den = BigInt(text.substr(den_start));
    if (den == 0) return std::nullopt;
  }
  if (negative) num = -num;
  Rat value(num, den);  // the (mpz, mpz) constructor canonicalizes
  return value;
}

inline std::string format_rational(const Rat& r) { return r.str(); }

// Fixed-point decimal approximation, rounded half away from zero.
inline std::string decimal_approx(const Rat& r, int digits = 6) {
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt num = numerator(r) * scale * 2;
  BigInt den = denominator(r);
  BigInt q = num / den;
  // round half away from zero on the doubled numerator
  BigInt scaled = (q >= 0) ? BigInt((q + 1) / 2) : BigInt((q - 1) / 2);
  bool negative = scaled < 0;
  BigInt mag = negative ? BigInt(-scaled) : scaled;
  BigInt whole = mag / scale;
  BigInt frac = mag % scale;
  std::string frac_str = frac.str();
  frac_str.insert(frac_str.begin(), digits - static_cast<int>(frac_str.size()), '0');
  std::string out = (negative ? "-" : "") + whole.str();
  if (digits > 0) out += "." + frac_str;
  return out;
}

// Rational extended with two infinities. Only the operations the localized
// functionals need: total order, addition of finite shifts, negation, and the
// gap convention (-inf) - (-inf) = 0 used by bubble reports.
class ExtRat {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtRat() : kind_(Kind::Finite), value_(0) {}
  ExtRat(Rat v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT: implicit by design
  static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }
  static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  Kind kind() const { return kind_; }

  const Rat& finite() const {
    if (!is_finite()) throw std::logic_error("ExtRat: no finite value");
    return value_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ == b.kind_) return a.kind_ == Kind::Finite && a.value_ < b.value_;
    if (a.kind_ == Kind::NegInf) return true;
    if (b.kind_ == Kind::NegInf) return false;
    return b.kind_ == Kind::PosInf;
  }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }

  ExtRat operator+(const Rat& shift) const {
    return is_finite() ? ExtRat(value_ + shift) : *this;
  }
  ExtRat operator-() const {
    switch (kind_) {
      case Kind::NegInf: return pos_inf();
      case Kind::PosInf: return neg_inf();
      default: return ExtRat(-value_);
    }
  }

  // Difference with the convention that two equal infinities cancel to zero;
  // this is exactly the "no gap" reading both localized values being -inf gets.
  static ExtRat gap(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ == b.kind_ && a.kind_ != Kind::Finite) return ExtRat(Rat(0));
    if (a.is_pos_inf() || b.is_neg_inf()) return pos_inf();
    if (a.is_neg_inf() || b.is_pos_inf()) return neg_inf();
    return ExtRat(a.value_ - b.value_);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::NegInf: return "-inf";
      case Kind::PosInf: return "+inf";
      default: return format_rational(value_);
    }
  }

 private:
  explicit ExtRat(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  Rat value_;
};

inline ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }
inline ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }

}  // namespace qsure
