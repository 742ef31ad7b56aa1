#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace zerr {

/// Ambiguity of a zero-error channel: a positive integer, or infinite for
/// channels over which nothing can be communicated. Infinite orders above
/// every finite value.
class Ambiguity {
 public:
  using value_type = std::uint64_t;

  /// Throws std::invalid_argument for 0.
  static Ambiguity finite(value_type a);
  static constexpr Ambiguity infinite() { return Ambiguity{}; }

  /// Accepts a decimal integer >= 1 or the literal "infinite".
  static Ambiguity parse(const std::string& text);

  constexpr bool is_infinite() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error when infinite.
  value_type value() const;

  std::string to_string() const;

  friend constexpr bool operator==(const Ambiguity&, const Ambiguity&) = default;
  friend constexpr std::strong_ordering operator<=>(const Ambiguity& lhs, const Ambiguity& rhs) {
    if (lhs.is_infinite() || rhs.is_infinite()) {
      return lhs.is_infinite() <=> rhs.is_infinite();
    }
    return *lhs.value_ <=> *rhs.value_;
  }

  /// Product with infinity absorbing. Throws std::overflow_error past 2^64.
  friend Ambiguity operator*(const Ambiguity& lhs, const Ambiguity& rhs);

 private:
  constexpr Ambiguity() = default;
  explicit constexpr Ambiguity(value_type a) : value_(a) {}

  std::optional<value_type> value_;
};

}  // namespace zerr
