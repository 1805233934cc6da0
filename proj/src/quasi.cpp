#include "kppopt/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kppopt/errors.hpp"
#include "kppopt/symmetry.hpp"

namespace kppopt {

namespace {

double integral_between(const PiecewiseConstant& f, double a, double b) {
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double lo = std::max(a, bp[j]);
    const double hi = std::min(b, bp[j + 1]);
    if (hi > lo) acc += v[j] * (hi - lo);
  }
  return acc;
}

std::vector<double> jumps_inside(const PiecewiseConstant& f, double a, double b) {
  std::vector<double> out;
  const auto& bp = f.breakpoints();
  for (std::size_t j = 1; j + 1 < bp.size(); ++j) {
    if (bp[j] > a && bp[j] < b) out.push_back(bp[j]);
  }
  return out;
}

}  // namespace

std::vector<double> critical_points(const StateSolution& theta, double tol_deriv) {
  const GridField d = derivative(theta.theta);
  const Grid& g = d.grid();
  const double h = g.h();
  const double scale = d.max_abs();
  if (scale == 0.0) throw DegenerateState("theta' vanishes identically (constant state)");

  const auto& dv = d.values();
  int run = 0;
  for (int i = 0; i <= g.n(); ++i) {
    run = std::abs(dv[i]) < tol_deriv * scale ? run + 1 : 0;
    if (run > 10) throw DegenerateState("theta' has a plateau of near-zero values");
  }

  std::vector<double> crossings;
  int last = -1;  // last interior node with a nonzero derivative
  for (int i = 1; i < g.n(); ++i) {
    if (dv[i] == 0.0) continue;
    if (last >= 0 && (dv[last] > 0.0) != (dv[i] > 0.0)) {
      double x = g.x(last) + (g.x(i) - g.x(last)) * dv[last] / (dv[last] - dv[i]);
      // Symmetric states put their critical points on nodes or midpoints;
      // remove rounding-level offsets.
      const double snapped = std::round(x / (0.5 * h)) * (0.5 * h);
      if (std::abs(x - snapped) <= 1e-6 * h) x = snapped;
      crossings.push_back(x);
    }
    last = i;
  }

  std::vector<double> merged;
  for (std::size_t i = 0; i < crossings.size();) {
    std::size_t j = i;
    while (j + 1 < crossings.size() && crossings[j + 1] - crossings[j] < 2.0 * h) ++j;
    merged.push_back(0.5 * (crossings[i] + crossings[j]));
    i = j + 1;
  }
  std::vector<double> a{0.0};
  for (double x : merged) {
    if (x >= 2.0 * h && x <= g.length() - 2.0 * h) a.push_back(x);
  }
  a.push_back(g.length());
  return a;
}

double IntervalDecomposition::weighted_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) s += (a[i + 1] - a[i]) * A[i];
  return s;
}

IntervalDecomposition decompose(const ResourceProfile& m, const StateSolution& theta, double c,
                                const std::vector<double>& a) {
  if (a.size() < 2 || a.front() != 0.0 || a.back() != m.length()) {
    throw InvalidInput("critical points must start at 0 and end at 1");
  }
  IntervalDecomposition d;
  d.a = a;
  d.F_total = integrate(theta.theta) - c * mass(m);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double len = a[i + 1] - a[i];
    if (!(len > 0.0)) throw InvalidInput("critical points must be increasing");
    d.A.push_back((integrate_between(theta.theta, a[i], a[i + 1]) -
                   c * integral_between(m.shape(), a[i], a[i + 1])) /
                  len);
  }
  const double top = *std::max_element(d.A.begin(), d.A.end());
  const double tie = 1e-12 * (1.0 + std::abs(top));
  d.i_star = static_cast<int>(std::find_if(d.A.begin(), d.A.end(),
                                           [&](double v) { return v >= top - tie; }) -
                              d.A.begin());
  const auto is = static_cast<std::size_t>(d.i_star);
  d.delta = a[is + 1] - a[is];

  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const auto jumps = jumps_inside(m.shape(), a[i], a[i + 1]);
    if (jumps.size() != 1) {
      throw StructureViolation("interval (" + std::to_string(a[i]) + ", " +
                               std::to_string(a[i + 1]) + ") holds " +
                               std::to_string(jumps.size()) + " jumps instead of one");
    }
    if (i == is) d.ell_local = (jumps.front() - a[i]) / d.delta;
  }
  return d;
}

QuasiMaximizerReport build_quasi_maximizer(const OptimizerResult& m_bar, double c,
                                           const SolverOptions& opts) {
  if (m_bar.zero_state) throw DegenerateState("maximizer is m = 0; theta vanishes");
  const std::vector<double> a = critical_points(m_bar.theta);
  IntervalDecomposition d = decompose(m_bar.m_star, m_bar.theta, c, a);
  const auto is = static_cast<std::size_t>(d.i_star);

  const int k = std::max(1, static_cast<int>(std::floor(1.0 / d.delta)));
  // 1 - k delta is exact here (Sterbenz), so k delta + r == 1 in floating point.
  const double r = 1.0 - k * d.delta;
  const double sigma = 1.0 - r;

  PiecewiseConstant pattern = m_bar.m_star.shape().restricted(a[is], a[is + 1]);
  ResourceProfile m_hat(tile_k_symmetric(pattern, k), m_bar.m_star.kappa());
  const Grid& g = m_bar.theta.theta.grid();
  const double mu = m_bar.theta.mu;
  const double f_hat = objective(m_hat, mu, c, g, opts);
  const double gap = 2.0 * m_bar.m_star.kappa() * d.delta;
  return QuasiMaximizerReport{std::move(d), k,     r,  sigma, std::move(pattern), std::move(m_hat),
                              f_hat,        m_bar.F_value, gap,
                              mu};
}

}  // namespace kppopt
