#pragma once

#include <cmath>
#include <cstdio>
#include <compare>
#include <limits>
#include <ostream>
#include <string>

#include "minmax/errors.hpp"

namespace minmax {

/// A value in [-inf, +inf]. Convex combinations that involve an infinity
/// collapse to that infinity; mixing +inf with -inf is undefined.
class ExtendedReal {
 public:
  enum class Kind { kNegInf, kFinite, kPosInf };

  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : kind_(Kind::kFinite), value_(v) {}  // NOLINT

  static constexpr ExtendedReal finite(double v) { return ExtendedReal(v); }
  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::kPosInf); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::kNegInf); }

  /// Maps IEEE infinities onto the matching kind. NaN is rejected.
  static ExtendedReal from_double(double v) {
    if (std::isnan(v)) throw DomainError("ExtendedReal: NaN is not an extended real");
    if (v == std::numeric_limits<double>::infinity()) return pos_inf();
    if (v == -std::numeric_limits<double>::infinity()) return neg_inf();
    return finite(v);
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }

  /// Finite value; throws DomainError on an infinity.
  double value() const {
    if (!is_finite()) throw DomainError("ExtendedReal: value() on an infinity");
    return value_;
  }

  double to_double() const {
    switch (kind_) {
      case Kind::kPosInf:
        return std::numeric_limits<double>::infinity();
      case Kind::kNegInf:
        return -std::numeric_limits<double>::infinity();
      case Kind::kFinite:
        break;
    }
    return value_;
  }

  /// θa + (1−θ)b for θ in [0,1].
  static ExtendedReal mix(double theta, const ExtendedReal& a, const ExtendedReal& b) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("ExtendedReal::mix: theta outside [0,1]");
    if (theta == 1.0) return a;
    if (theta == 0.0) return b;
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
      throw DomainError("ExtendedReal::mix: +inf and -inf cannot be mixed");
    }
    if (!a.is_finite()) return a;
    if (!b.is_finite()) return b;
    return finite(theta * a.value_ + (1.0 - theta) * b.value_);
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::kFinite || a.value_ == b.value_);
  }

  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::kFinite) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }

  /// "+inf", "-inf" or the shortest round-trip decimal.
  std::string to_string() const {
    if (is_pos_inf()) return "+inf";
    if (is_neg_inf()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value_);
    return buf;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& v) { return os << v.to_string(); }

 private:
  explicit constexpr ExtendedReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

}  // namespace minmax
