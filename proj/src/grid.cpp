#include "kppopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "kppopt/errors.hpp"
#include "kppopt/io.hpp"
#include "summation.hpp"

namespace kppopt {

Grid::Grid(int n, double length) : n_(n), length_(length), h_(length / n) {
  if (n < kMinIntervals) {
    throw InvalidInput("grid needs at least " + std::to_string(kMinIntervals) +
                       " intervals, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidInput("grid length must be positive");
  }
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(size());
  for (int i = 0; i <= n_; ++i) xs[i] = x(i);
  return xs;
}

Grid make_grid(int n) { return Grid(n, 1.0); }

int resolved_grid_size(int requested, double mu) {
  if (!(mu > 0.0)) throw InvalidInput("mu must be positive");
  const double needed = std::ceil(10.0 / std::sqrt(mu));
  const double target = std::max<double>({static_cast<double>(requested), needed,
                                          static_cast<double>(Grid::kMinIntervals)});
  if (target > (1 << 26)) throw InvalidInput("mu too small for the grid rule");
  int n = 1;
  while (n < target) n <<= 1;
  return n;
}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidInput("field length " + std::to_string(values_.size()) +
                       " does not match grid size " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("field contains non-finite values");
  }
}

GridField GridField::constant(const Grid& grid, double value) {
  return GridField(grid, std::vector<double>(grid.size(), value));
}

double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double integrate(const GridField& f) {
  const auto& v = f.values();
  detail::CompensatedSum interior;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) interior.add(v[i]);
  interior.add(0.5 * v.front());
  interior.add(0.5 * v.back());
  return f.grid().h() * interior.value();
}

double integrate_between(const GridField& f, double a, double b) {
  const Grid& g = f.grid();
  if (a > b) std::swap(a, b);
  a = std::clamp(a, 0.0, g.length());
  b = std::clamp(b, 0.0, g.length());
  if (a == b) return 0.0;
  const auto& v = f.values();
  const double h = g.h();
  auto interp = [&](double x) {
    int i = std::min(static_cast<int>(x / h), g.n() - 1);
    const double t = (x - g.x(i)) / h;
    return (1.0 - t) * v[i] + t * v[i + 1];
  };
  const int ia = std::min(static_cast<int>(a / h), g.n() - 1);
  const int ib = std::min(static_cast<int>(b / h), g.n() - 1);
  if (ia == ib) return 0.5 * (interp(a) + interp(b)) * (b - a);
  double total = 0.5 * (interp(a) + v[ia + 1]) * (g.x(ia + 1) - a);
  for (int i = ia + 1; i < ib; ++i) total += 0.5 * (v[i] + v[i + 1]) * h;
  total += 0.5 * (v[ib] + interp(b)) * (b - g.x(ib));
  return total;
}

GridField derivative(const GridField& f) {
  const auto& v = f.values();
  const int n = f.grid().n();
  const double h = f.grid().h();
  std::vector<double> d(v.size());
  for (int i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  return GridField(f.grid(), std::move(d));
}

void write_csv(std::ostream& out, const GridField& f) {
  out << "x,value\n";
  const Grid& g = f.grid();
  for (int i = 0; i <= g.n(); ++i) {
    out << format_number(g.x(i)) << ',' << format_number(f[i]) << '\n';
  }
}

}  // namespace kppopt
