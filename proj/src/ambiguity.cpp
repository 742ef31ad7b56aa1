#include "zerr/ambiguity.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

#include "zerr/errors.hpp"

namespace zerr {

Ambiguity Ambiguity::finite(value_type a) {
  if (a == 0) {
    throw std::invalid_argument("ambiguity must be at least 1");
  }
  return Ambiguity{a};
}

Ambiguity Ambiguity::parse(const std::string& text) {
  if (text == "infinite") {
    return infinite();
  }
  value_type a = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, a);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("not an ambiguity: '" + text + "' (expected integer >= 1 or 'infinite')");
  }
  if (a == 0) {
    throw ParseError("ambiguity must be at least 1, got 0");
  }
  return Ambiguity{a};
}

Ambiguity::value_type Ambiguity::value() const {
  if (!value_) {
    throw std::logic_error("value() on infinite ambiguity");
  }
  return *value_;
}

std::string Ambiguity::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("infinite");
}

Ambiguity operator*(const Ambiguity& lhs, const Ambiguity& rhs) {
  if (lhs.is_infinite() || rhs.is_infinite()) {
    return Ambiguity::infinite();
  }
  const auto a = *lhs.value_;
  const auto b = *rhs.value_;
  if (a > std::numeric_limits<Ambiguity::value_type>::max() / b) {
    throw std::overflow_error("ambiguity product overflows 64 bits");
  }
  return Ambiguity{a * b};
}

}  // namespace zerr
