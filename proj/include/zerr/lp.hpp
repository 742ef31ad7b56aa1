#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zerr::lp {

using Rational = boost::multiprecision::cpp_rational;

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 so the origin is
/// feasible. Exact primal simplex with Bland's rule. nullopt when unbounded.
std::optional<Rational> maximize(const std::vector<std::vector<Rational>>& a,
                                 const std::vector<Rational>& b, const std::vector<Rational>& c);

}  // namespace zerr::lp
