#include "kppopt/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kppopt/errors.hpp"
#include "summation.hpp"

namespace kppopt {

using detail::CompensatedSum;

PiecewiseConstant::PiecewiseConstant(std::vector<double> breakpoints,
                                     std::vector<double> values) {
  if (values.empty() || breakpoints.size() != values.size() + 1) {
    throw InvalidInput("piecewise-constant function needs J values and J+1 breakpoints");
  }
  if (breakpoints.front() != 0.0) throw InvalidInput("first breakpoint must be 0");
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || !std::isfinite(breakpoints[j + 1])) {
      throw InvalidInput("non-finite breakpoint or value");
    }
    if (breakpoints[j + 1] < breakpoints[j]) {
      throw InvalidInput("breakpoints must be increasing");
    }
  }
  if (!(breakpoints.back() > 0.0)) throw InvalidInput("domain must have positive length");

  breakpoints_.push_back(0.0);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (breakpoints[j + 1] == breakpoints[j]) continue;
    if (!values_.empty() && values_.back() == values[j]) {
      breakpoints_.back() = breakpoints[j + 1];
    } else {
      values_.push_back(values[j]);
      breakpoints_.push_back(breakpoints[j + 1]);
    }
  }
}

PiecewiseConstant PiecewiseConstant::constant(double value, double length) {
  return PiecewiseConstant({0.0, length}, {value});
}

double PiecewiseConstant::operator()(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto j = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
  const auto last = static_cast<std::ptrdiff_t>(values_.size()) - 1;
  return values_[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, last))];
}

double PiecewiseConstant::integral() const {
  CompensatedSum s;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    s.add(values_[j] * (breakpoints_[j + 1] - breakpoints_[j]));
  }
  return s.value();
}

double PiecewiseConstant::total_variation() const {
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < values_.size(); ++j) tv += std::abs(values_[j + 1] - values_[j]);
  return tv;
}

double PiecewiseConstant::max() const { return *std::max_element(values_.begin(), values_.end()); }
double PiecewiseConstant::min() const { return *std::min_element(values_.begin(), values_.end()); }

PiecewiseConstant PiecewiseConstant::reflected() const {
  const double len = length();
  std::vector<double> b(breakpoints_.size());
  std::vector<double> v(values_.rbegin(), values_.rend());
  b.front() = 0.0;
  b.back() = len;
  for (std::size_t j = 1; j + 1 < breakpoints_.size(); ++j) {
    b[j] = len - breakpoints_[breakpoints_.size() - 1 - j];
  }
  return PiecewiseConstant(std::move(b), std::move(v));
}

PiecewiseConstant PiecewiseConstant::restricted(double a, double b) const {
  if (!(a < b) || a < 0.0 || b > length()) {
    throw InvalidInput("restriction interval must satisfy 0 <= a < b <= L");
  }
  std::vector<double> bp{0.0};
  std::vector<double> vals;
  const double width = b - a;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double lo = std::max(a, breakpoints_[j]);
    const double hi = std::min(b, breakpoints_[j + 1]);
    if (hi <= lo) continue;
    vals.push_back(values_[j]);
    bp.push_back(hi == b ? 1.0 : (hi - a) / width);
  }
  return PiecewiseConstant(std::move(bp), std::move(vals));
}

PiecewiseConstant PiecewiseConstant::transformed(double stretch, double scale) const {
  if (!(stretch > 0.0)) throw InvalidInput("stretch must be positive");
  std::vector<double> b(breakpoints_);
  for (double& x : b) x *= stretch;
  std::vector<double> v(values_);
  for (double& y : v) y *= scale;
  return PiecewiseConstant(std::move(b), std::move(v));
}

namespace {

// Union of breakpoints of several functions on the same domain.
std::vector<double> merged_breakpoints(const std::vector<const PiecewiseConstant*>& fs) {
  std::vector<double> all;
  for (const auto* f : fs) all.insert(all.end(), f->breakpoints().begin(), f->breakpoints().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

void require_same_domain(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  if (a.length() != b.length()) throw InvalidInput("functions live on different domains");
}

}  // namespace

double l1_distance(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  require_same_domain(a, b);
  const auto bp = merged_breakpoints({&a, &b});
  CompensatedSum s;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double mid = 0.5 * (bp[j] + bp[j + 1]);
    s.add(std::abs(a(mid) - b(mid)) * (bp[j + 1] - bp[j]));
  }
  return s.value();
}

PiecewiseConstant pointwise_mean(const std::vector<PiecewiseConstant>& fs) {
  if (fs.empty()) throw InvalidInput("mean of an empty set");
  std::vector<const PiecewiseConstant*> ptrs;
  for (const auto& f : fs) {
    require_same_domain(fs.front(), f);
    ptrs.push_back(&f);
  }
  auto bp = merged_breakpoints(ptrs);
  std::vector<double> vals;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double mid = 0.5 * (bp[j] + bp[j + 1]);
    double acc = 0.0;
    for (const auto& f : fs) acc += f(mid);
    vals.push_back(acc / static_cast<double>(fs.size()));
  }
  return PiecewiseConstant(std::move(bp), std::move(vals));
}

GridField sample(const PiecewiseConstant& f, const Grid& g) {
  if (std::abs(f.length() - g.length()) > 1e-14 * g.length()) {
    throw InvalidInput("function and grid live on different domains");
  }
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  const std::size_t pieces = v.size();
  std::vector<double> out(g.size());
  std::size_t j = 0;
  for (int i = 0; i <= g.n(); ++i) {
    const double lo = g.cell_lo(i);
    const double hi = g.cell_hi(i);
    while (j + 1 < pieces && b[j + 1] <= lo) ++j;
    if (j + 1 == pieces || b[j + 1] >= hi) {
      out[i] = v[j];
      continue;
    }
    double acc = 0.0;
    for (std::size_t k = j; k < pieces && b[k] < hi; ++k) {
      const double a0 = std::max(lo, b[k]);
      const double a1 = std::min(hi, b[k + 1]);
      if (a1 > a0) acc += v[k] * (a1 - a0);
    }
    out[i] = acc / (hi - lo);
  }
  return GridField(g, std::move(out));
}

namespace {

void validate_bounds(const PiecewiseConstant& shape, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidInput("kappa must be positive");
  for (double v : shape.values()) {
    if (v < 0.0 || v > kappa) {
      throw InvalidInput("resource value " + std::to_string(v) + " outside [0, kappa]");
    }
  }
}

}  // namespace

ResourceProfile::ResourceProfile(std::vector<double> breakpoints, std::vector<double> values,
                                 double kappa)
    : ResourceProfile(PiecewiseConstant(std::move(breakpoints), std::move(values)), kappa) {}

ResourceProfile::ResourceProfile(PiecewiseConstant shape, double kappa)
    : shape_(std::move(shape)), kappa_(kappa) {
  validate_bounds(shape_, kappa_);
}

ResourceProfile ResourceProfile::constant(double value, double kappa) {
  return ResourceProfile({0.0, 1.0}, {value}, kappa);
}

ResourceProfile ResourceProfile::crenel(double ell, double kappa) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw InvalidInput("crenel length must lie in [0, 1]");
  return ResourceProfile({0.0, ell, 1.0}, {kappa, 0.0}, kappa);
}

ResourceProfile ResourceProfile::from_cells(const Grid& g, const std::vector<double>& cells,
                                            double kappa) {
  if (cells.size() != g.size()) throw InvalidInput("cell vector does not match grid");
  std::vector<double> b(g.size() + 1);
  b[0] = 0.0;
  for (int i = 0; i <= g.n(); ++i) b[i + 1] = g.cell_hi(i);
  std::vector<double> v(cells);
  for (double& x : v) x = std::clamp(x, 0.0, kappa);
  return ResourceProfile(std::move(b), std::move(v), kappa);
}

double ResourceProfile::bang_bang_fraction(double tol) const {
  const auto& b = breakpoints();
  const auto& v = values();
  double covered = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::abs(v[j]) <= tol || std::abs(v[j] - kappa_) <= tol) covered += b[j + 1] - b[j];
  }
  return covered / length();
}

double mass(const ResourceProfile& m) { return m.shape().integral(); }
double total_variation(const ResourceProfile& m) { return m.shape().total_variation(); }
int jump_count(const ResourceProfile& m) { return m.shape().jump_count(); }

GridField sample_resource(const ResourceProfile& m, const Grid& g) { return sample(m.shape(), g); }

}  // namespace kppopt
