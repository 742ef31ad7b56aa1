#include "zerr/lp.hpp"

#include <stdexcept>

namespace zerr::lp {

std::optional<Rational> maximize(const std::vector<std::vector<Rational>>& a,
                                 const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const auto rows = a.size();
  const auto vars = c.size();
  if (b.size() != rows) {
    throw std::invalid_argument("lp: constraint matrix and bound vector disagree");
  }
  const auto cols = vars + rows;  // originals then slacks; RHS kept separately

  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(cols));
  std::vector<Rational> rhs(b);
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (a[r].size() != vars) {
      throw std::invalid_argument("lp: ragged constraint matrix");
    }
    if (b[r] < 0) {
      throw std::invalid_argument("lp: negative bound, origin infeasible");
    }
    for (std::size_t j = 0; j < vars; ++j) {
      tab[r][j] = a[r][j];
    }
    tab[r][vars + r] = 1;
    basis[r] = vars + r;
  }
  // reduced[j] = c_j - z_j; objective = current value
  std::vector<Rational> reduced(cols);
  for (std::size_t j = 0; j < vars; ++j) {
    reduced[j] = c[j];
  }
  Rational objective = 0;

  while (true) {
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (reduced[j] > 0) {
        entering = j;
        break;
      }
    }
    if (entering == cols) {
      return objective;
    }

    std::size_t leaving = rows;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][entering] <= 0) {
        continue;
      }
      Rational ratio = rhs[r] / tab[r][entering];
      if (leaving == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leaving])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving == rows) {
      return std::nullopt;
    }

    const Rational pivot = tab[leaving][entering];
    for (auto& v : tab[leaving]) {
      v /= pivot;
    }
    rhs[leaving] /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leaving || tab[r][entering] == 0) {
        continue;
      }
      const Rational factor = tab[r][entering];
      for (std::size_t j = 0; j < cols; ++j) {
        tab[r][j] -= factor * tab[leaving][j];
      }
      rhs[r] -= factor * rhs[leaving];
    }
    const Rational factor = reduced[entering];
    for (std::size_t j = 0; j < cols; ++j) {
      reduced[j] -= factor * tab[leaving][j];
    }
    objective += factor * rhs[leaving];
    basis[leaving] = entering;
  }
}

}  // namespace zerr::lp
