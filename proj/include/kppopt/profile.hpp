#pragma once

#include <vector>

#include "kppopt/grid.hpp"

namespace kppopt {

/// Piecewise-constant function on [0, L] with exact breakpoints.
///
/// breakpoints = {0 = b_0 < b_1 < ... < b_J = L}; values[j] holds on
/// (b_j, b_{j+1}). Construction drops zero-width pieces and merges runs of
/// equal values, so interior breakpoints are always genuine jumps.
class PiecewiseConstant {
 public:
  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values);
  static PiecewiseConstant constant(double value, double length = 1.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  double length() const { return breakpoints_.back(); }

  /// Value at x, right-continuous; the last piece owns x = L.
  double operator()(double x) const;

  double integral() const;
  double total_variation() const;
  int jump_count() const { return static_cast<int>(values_.size()) - 1; }
  double max() const;
  double min() const;

  /// x -> L - x.
  PiecewiseConstant reflected() const;
  /// Restriction to [a, b], mapped affinely onto [0, 1].
  PiecewiseConstant restricted(double a, double b) const;
  /// x -> scale * f(x / stretch), on [0, stretch * L].
  PiecewiseConstant transformed(double stretch, double scale) const;

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// L1 distance between two functions on the same domain; exact.
double l1_distance(const PiecewiseConstant& a, const PiecewiseConstant& b);

/// Pointwise mean of functions on a common domain; exact breakpoints.
PiecewiseConstant pointwise_mean(const std::vector<PiecewiseConstant>& fs);

/// Average of f over each node's control volume.
GridField sample(const PiecewiseConstant& f, const Grid& g);

/// Admissible resource distribution: piecewise constant with 0 <= m <= kappa.
class ResourceProfile {
 public:
  ResourceProfile(std::vector<double> breakpoints, std::vector<double> values,
                  double kappa);
  ResourceProfile(PiecewiseConstant shape, double kappa);

  static ResourceProfile constant(double value, double kappa);
  /// kappa on [0, ell], 0 on (ell, 1].
  static ResourceProfile crenel(double ell, double kappa);
  /// Cell values on the control volumes of g, e.g. an optimizer iterate.
  static ResourceProfile from_cells(const Grid& g, const std::vector<double>& cells,
                                    double kappa);

  const PiecewiseConstant& shape() const { return shape_; }
  const std::vector<double>& breakpoints() const { return shape_.breakpoints(); }
  const std::vector<double>& values() const { return shape_.values(); }
  double kappa() const { return kappa_; }
  double length() const { return shape_.length(); }

  double operator()(double x) const { return shape_(x); }

  /// Fraction of the domain where m is 0 or kappa (within tol).
  double bang_bang_fraction(double tol = 1e-8) const;

  friend bool operator==(const ResourceProfile&, const ResourceProfile&) = default;

 private:
  PiecewiseConstant shape_;
  double kappa_;
};

double mass(const ResourceProfile& m);
double total_variation(const ResourceProfile& m);
int jump_count(const ResourceProfile& m);

/// Cell averages of m on g; trapezoidal integration of the result gives the
/// exact mass.
GridField sample_resource(const ResourceProfile& m, const Grid& g);

}  // namespace kppopt
