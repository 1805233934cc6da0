#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace kppopt {

/// Uniform node-centered grid on [0, length] with n intervals.
///
/// Node i sits at x_i = i*h. The control volume of node i is
/// [x_i - h/2, x_i + h/2] clipped to the domain, so the two end cells have
/// width h/2. Trapezoidal weights coincide with these cell widths.
class Grid {
 public:
  static constexpr int kMinIntervals = 16;

  explicit Grid(int n, double length = 1.0);

  int n() const { return n_; }
  double h() const { return h_; }
  double length() const { return length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }

  double x(int i) const { return i == n_ ? length_ : i * h_; }
  double cell_lo(int i) const { return i == 0 ? 0.0 : (i - 0.5) * h_; }
  double cell_hi(int i) const { return i == n_ ? length_ : (i + 0.5) * h_; }
  double cell_width(int i) const { return (i == 0 || i == n_) ? 0.5 * h_ : h_; }

  std::vector<double> nodes() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_;
  double length_;
  double h_;
};

/// Unit-interval grid; rejects n < 16.
Grid make_grid(int n);

/// Smallest power of two >= max(requested, ceil(10/sqrt(mu))), so that
/// boundary layers of width sqrt(mu) get at least ten cells.
int resolved_grid_size(int requested, double mu);

/// Nodal values of a function on a grid.
class GridField {
 public:
  GridField(Grid grid, std::vector<double> values);
  static GridField constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max() const;
  double min() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Composite trapezoidal rule.
double integrate(const GridField& f);

/// Trapezoidal integral of the piecewise-linear interpolant over [a, b].
double integrate_between(const GridField& f, double a, double b);

/// Central differences inside, second-order one-sided stencils at the ends.
GridField derivative(const GridField& f);

/// CSV with header "x,value"; numbers in %.16e.
void write_csv(std::ostream& out, const GridField& f);

}  // namespace kppopt
