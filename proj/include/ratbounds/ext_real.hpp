#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace ratbounds {

// A threshold on the extended real line. Infinite thresholds are tags, not
// large floats, so payoff code can take analytic limits.
class ExtReal {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  constexpr ExtReal() = default;
  explicit ExtReal(double v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
    if (std::isinf(v))
      kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    else
      value_ = v;
  }

  static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf); }
  static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }

  // Finite payload; throws on an infinite tag.
  double value() const {
    if (kind_ != Kind::Finite) throw std::logic_error("ExtReal::value on infinite threshold");
    return value_;
  }

  // IEEE view, for printing and ordering only.
  double as_double() const {
    switch (kind_) {
      case Kind::NegInf: return -std::numeric_limits<double>::infinity();
      case Kind::PosInf: return std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    return a.as_double() <=> b.as_double();
  }

  std::string to_string() const;

 private:
  constexpr explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

// Same infinity tag, or both finite and within tol.
inline bool same_within(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_finite() != b.is_finite()) return false;
  if (!a.is_finite()) return a.kind() == b.kind();
  return std::fabs(a.value() - b.value()) <= tol;
}

}  // namespace ratbounds
