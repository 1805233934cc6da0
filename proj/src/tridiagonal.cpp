#include "kppopt/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "kppopt/errors.hpp"

namespace kppopt {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += lower[i] * x[i - 1];
    if (i + 1 < n) acc += upper[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs,
                                      double relative_pivot_tol) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw InvalidInput("tridiagonal system size mismatch");
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);
  double prev_c = 0.0;
  double prev_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = i > 0 ? a.lower[i] : 0.0;
    const double u = i + 1 < n ? a.upper[i] : 0.0;
    const double pivot = a.diag[i] - l * prev_c;
    const double scale = std::abs(a.diag[i]) + std::abs(l) + std::abs(u);
    if (!std::isfinite(pivot) || pivot == 0.0 ||
        std::abs(pivot) <= relative_pivot_tol * scale) {
      throw SingularSystem("tridiagonal pivot vanished at row " + std::to_string(i));
    }
    c[i] = u / pivot;
    x[i] = (rhs[i] - l * prev_x) / pivot;
    prev_c = c[i];
    prev_x = x[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace kppopt
