#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace capra {

/// Extended real number in [-inf, +inf] with Moreau lower and upper additions.
///
/// The value is stored as an IEEE scalar whose infinities represent the two
/// extended points; NaN is never admitted. Finite arithmetic that overflows
/// the representable range saturates to the corresponding infinity (this is
/// IEEE behavior and is not treated specially).
template <typename Scalar>
class ExtendedReal {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  constexpr ExtendedReal() = default;

  // Implicit on purpose: finite reals embed into the extended line.
  ExtendedReal(Scalar v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw std::invalid_argument("ExtendedReal: NaN is not an extended real");
  }

  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Raw{}, std::numeric_limits<Scalar>::infinity()); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Raw{}, -std::numeric_limits<Scalar>::infinity()); }

  Kind kind() const {
    if (value_ == std::numeric_limits<Scalar>::infinity()) return Kind::PosInf;
    if (value_ == -std::numeric_limits<Scalar>::infinity()) return Kind::NegInf;
    return Kind::Finite;
  }
  bool is_finite() const { return kind() == Kind::Finite; }
  bool is_pos_inf() const { return kind() == Kind::PosInf; }
  bool is_neg_inf() const { return kind() == Kind::NegInf; }

  /// Underlying scalar, with +-infinity for the extended points.
  Scalar value() const { return value_; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  ExtendedReal operator-() const { return ExtendedReal(Raw{}, -value_); }

 private:
  struct Raw {};
  constexpr ExtendedReal(Raw, Scalar v) : value_(v) {}

  Scalar value_ = 0;
};

using ExtReal = ExtendedReal<double>;

/// Moreau lower addition: (+inf) + (-inf) = -inf.
template <typename Scalar>
ExtendedReal<Scalar> lower_add(const ExtendedReal<Scalar>& a, const ExtendedReal<Scalar>& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtendedReal<Scalar>::neg_inf();
  return ExtendedReal<Scalar>(a.value() + b.value());
}

/// Moreau upper addition: (+inf) + (-inf) = +inf.
template <typename Scalar>
ExtendedReal<Scalar> upper_add(const ExtendedReal<Scalar>& a, const ExtendedReal<Scalar>& b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtendedReal<Scalar>::pos_inf();
  return ExtendedReal<Scalar>(a.value() + b.value());
}

template <typename Scalar>
ExtendedReal<Scalar> neg(const ExtendedReal<Scalar>& a) {
  return -a;
}

template <typename Scalar>
ExtendedReal<Scalar> max(const ExtendedReal<Scalar>& a, const ExtendedReal<Scalar>& b) {
  return a < b ? b : a;
}

template <typename Scalar>
ExtendedReal<Scalar> min(const ExtendedReal<Scalar>& a, const ExtendedReal<Scalar>& b) {
  return b < a ? b : a;
}

/// Shortest round-trip rendering; "+inf" and "-inf" for the extended points.
template <typename Scalar>
std::string to_string(const ExtendedReal<Scalar>& a) {
  if (a.is_pos_inf()) return "+inf";
  if (a.is_neg_inf()) return "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), a.value());
  if (ec != std::errc()) throw std::runtime_error("ExtendedReal: formatting failed");
  return std::string(buf, ptr);
}

/// Parses the tokens produced by to_string. Also accepts "inf", "+infinity",
/// and the unicode minus sign in "−inf".
template <typename Scalar = double>
ExtendedReal<Scalar> parse_ext_real(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "+inf" || text == "inf" || text == "+infinity" || text == "infinity")
    return ExtendedReal<Scalar>::pos_inf();
  if (text == "-inf" || text == "-infinity" || text == "−inf") return ExtendedReal<Scalar>::neg_inf();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  Scalar v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("cannot parse extended real from '" + std::string(text) + "'");
  return ExtendedReal<Scalar>(v);
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const ExtendedReal<Scalar>& a) {
  return os << to_string(a);
}

}  // namespace capra
