#pragma once

#include <span>
#include <vector>

namespace kppopt {

/// Tridiagonal matrix; lower[0] and upper[n-1] are unused.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const;
};

/// Thomas elimination without pivoting. Throws SingularSystem when a pivot
/// falls to |pivot| <= relative_pivot_tol * (row magnitude) or is not finite.
std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs,
                                      double relative_pivot_tol = 0.0);

}  // namespace kppopt
