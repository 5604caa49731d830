#include "lgosc/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lgosc/classical_model.hpp"
#include "lgosc/fock_oracle.hpp"
#include "lgosc/optimize.hpp"
#include "lgosc/parallel.hpp"
#include "lgosc/photon_experiment.hpp"
#include "lgosc/special_math.hpp"

namespace lgosc {

namespace {

// Coarse scan of f over `points`, then golden section between the neighbours of the best.
template <typename F>
Maximum grid_then_golden(F&& f, const std::vector<double>& points, double tol) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double v = f(points[k]);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  const double lo = points[best == 0 ? 0 : best - 1];
  const double hi = points[std::min(best + 1, points.size() - 1)];
  if (hi > lo) {
    const Maximum m = golden_section_max(f, lo, hi, tol);
    if (m.value > best_value) return m;
  }
  return {points[best], best_value};
}

void require_ascending(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw DomainError(std::string(what) + " grid must be ascending");
  }
}

std::string describe(double s, double gamma, double phi) {
  std::ostringstream out;
  out.precision(6);
  out << "s=" << s << " gamma=" << gamma << " phi=" << phi;
  return out.str();
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw DomainError("grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = lo + (hi - lo) * k / (count - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("log grid needs positive bounds");
  std::vector<double> out = linspace(std::log(lo), std::log(hi), count);
  for (double& x : out) x = std::exp(x);
  out.front() = lo;
  out.back() = hi;
  return out;
}

LgMaximum lg_max_over_phi(const MeasurementParams& p, PhaseWindow window,
                          const PhiSearch& search) {
  if (window.lo < 0.0 || window.hi > kPi + 1e-12 || !(window.lo < window.hi)) {
    throw DomainError("phase window must satisfy 0 <= lo < hi <= pi");
  }
  const int grid = std::max(search.grid, 2);
  std::vector<double> points(grid);
  const double step = (window.hi - window.lo) / grid;
  for (int k = 0; k < grid; ++k) points[k] = window.lo + (k + 1) * step;
  const Maximum m =
      grid_then_golden([&](double phi) { return lg_value(p, phi); }, points, search.tol);
  return {m.x, m.value};
}

OptimalGamma optimal_gamma_for_s(double s, int gamma_grid) {
  if (!(std::abs(s) < 1.0)) throw DomainError("optimal gamma search needs |s| < 1");
  const double gamma_hi = std::max(50.0, 20.0 / std::sqrt(1.0 - std::abs(s)));
  std::vector<double> log_gammas = linspace(std::log(1.001), std::log(gamma_hi), gamma_grid);
  const Maximum m = grid_then_golden(
      [&](double log_gamma) {
        return lg_max_over_phi(MeasurementParams(s, std::exp(log_gamma))).lg;
      },
      log_gammas, 1e-7);
  OptimalGamma out;
  out.gamma = std::exp(m.x);
  const LgMaximum inner = lg_max_over_phi(MeasurementParams(s, out.gamma));
  out.phi = inner.phi;
  out.lg = inner.lg;
  out.violation = out.lg > 2.0;
  return out;
}

ViolationRegion violation_region(const std::vector<double>& s_values,
                                 const std::vector<double>& gamma_values,
                                 const RegionOptions& options) {
  require_ascending(s_values, "s");
  require_ascending(gamma_values, "gamma");

  ViolationRegion region;
  region.s_values = s_values;
  region.gamma_values = gamma_values;
  const int ns = static_cast<int>(s_values.size());
  const int ng = static_cast<int>(gamma_values.size());
  region.max_lg.resize(ns, ng);
  region.phi_star.resize(ns, ng);

  parallel_for(static_cast<std::size_t>(ns) * ng, options.workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / ng);
    const int j = static_cast<int>(idx % ng);
    const LgMaximum m = lg_max_over_phi(MeasurementParams(s_values[i], gamma_values[j]),
                                        options.window, options.search);
    region.max_lg(i, j) = m.lg;
    region.phi_star(i, j) = m.phi;
  });

  Eigen::Index bi = 0;
  Eigen::Index bj = 0;
  region.best_lg = region.max_lg.maxCoeff(&bi, &bj);
  region.best_s = s_values[bi];
  region.best_gamma = gamma_values[bj];
  region.best_phi = region.phi_star(bi, bj);

  auto max_lg_at = [&](double s, double gamma) {
    return lg_max_over_phi(MeasurementParams(s, gamma), options.window, options.search).lg;
  };
  auto best_over_gamma = [&](double s) {
    std::vector<double> logs = linspace(std::log(gamma_values.front()),
                                        std::log(gamma_values.back()), options.refine_grid);
    return grid_then_golden([&](double lg) { return max_lg_at(s, std::exp(lg)); }, logs, 1e-6)
        .value;
  };
  auto best_over_s = [&](double gamma) {
    std::vector<double> ss = linspace(s_values.front(), s_values.back(), options.refine_grid);
    return grid_then_golden([&](double s) { return max_lg_at(s, gamma); }, ss, 1e-7).value;
  };
  auto bisect = [&](double lo, double hi, auto&& violates) {
    while (hi - lo > options.refine_tol) {
      const double mid = 0.5 * (lo + hi);
      (violates(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };

  const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> hits = region.max_lg.array() > 2.0;
  for (int i = 0; i < ns; ++i) {
    if (!hits.row(i).any()) continue;
    region.s_cr = i == 0 ? s_values[0]
                         : bisect(s_values[i - 1], s_values[i],
                                  [&](double s) { return best_over_gamma(s) > 2.0; });
    break;
  }
  for (int j = 0; j < ng; ++j) {
    if (!hits.col(j).any()) continue;
    region.gamma_cr = j == 0 ? gamma_values[0]
                             : bisect(gamma_values[j - 1], gamma_values[j],
                                      [&](double g) { return best_over_s(g) > 2.0; });
    break;
  }
  return region;
}

ScalingTable scaling_convergence(const std::vector<double>& x_values,
                                 const std::vector<double>& one_minus_s) {
  if (x_values.empty() || one_minus_s.empty()) throw DomainError("scaling table needs values");
  for (double x : x_values) {
    if (!(x > 0.0)) throw DomainError("scaling variable grid must start above 0");
  }
  for (std::size_t k = 0; k < one_minus_s.size(); ++k) {
    if (!(one_minus_s[k] > 0.0) || one_minus_s[k] >= 1.0) {
      throw DomainError("1 - s must lie in (0, 1)");
    }
    if (k > 0 && !(one_minus_s[k] < one_minus_s[k - 1])) {
      throw DomainError("1 - s sequence must be strictly decreasing");
    }
  }

  ScalingTable table;
  for (double eps : one_minus_s) {
    const double gamma = 1.0 / std::sqrt(eps);
    const MeasurementParams p(1.0 - eps, gamma);
    double sup = 0.0;
    for (double x : x_values) {
      ScalingRow row;
      row.one_minus_s = eps;
      row.x = x;
      row.gamma = gamma;
      row.phi = eps * std::sqrt(2.0 * x * gamma * gamma * gamma);
      row.lg = lg_value(p, row.phi);
      row.lambda = scaling_lambda(x);
      row.abs_error = std::abs(row.lg - row.lambda);
      sup = std::max(sup, row.abs_error);
      table.rows.push_back(row);
    }
    table.sup_error.push_back(sup);
  }
  table.sup_decreasing = true;
  for (std::size_t k = 1; k < table.sup_error.size(); ++k) {
    if (!(table.sup_error[k] < table.sup_error[k - 1])) table.sup_decreasing = false;
  }
  return table;
}

LgMaximum scaling_path_maximum(double one_minus_s) {
  if (!(one_minus_s > 0.0) || one_minus_s >= 1.0) throw DomainError("1 - s must lie in (0, 1)");
  const double gamma = 1.0 / std::sqrt(one_minus_s);
  // Lambda has decayed well below its peak by x = 4.
  const double phi_hi = one_minus_s * std::sqrt(2.0 * 4.0 * gamma * gamma * gamma);
  return lg_max_over_phi(MeasurementParams(1.0 - one_minus_s, gamma),
                         {0.0, std::min(kPi / 2, phi_hi)}, {400, 1e-9});
}

LgMaximum lambda_maximum(double x_hi) {
  if (!(x_hi > 0.0)) throw DomainError("lambda search needs x_hi > 0");
  const Maximum m = grid_then_golden(scaling_lambda, linspace(0.0, x_hi, 401), 1e-10);
  return {m.x, m.value};
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

VerifyReport verify(const VerifyOptions& options) {
  VerifyReport report;
  const double tol = options.tol;
  const double scale = tol / 1e-6;
  const CorrelationFn& closed = options.closed;
  auto record = [&](std::string name, double deviation, double threshold, std::string detail) {
    report.checks.push_back(
        {std::move(name), deviation < threshold, deviation, threshold, std::move(detail)});
  };

  WorkspaceCache cache;
  struct Point {
    double s, gamma, phi;
  };

  {
    double worst = 0.0;
    std::string where;
    for (const Point& pt : {Point{0.5, 2.0, 0.1}, Point{0.9, 5.0, 0.3}, Point{0.9, 7.6, 0.2}}) {
      const MeasurementParams p(pt.s, pt.gamma);
      const double d = std::abs(closed(p, pt.phi) - auto_converge(p, pt.phi, 1e-10, &cache).value);
      if (d >= worst) {
        worst = d;
        where = describe(pt.s, pt.gamma, pt.phi);
      }
    }
    record("closed_vs_fock", worst, tol, where);
  }
  {
    const MeasurementParams p(0.8, 3.0);
    const FockWorkspace ws(3.0, 96);
    const double d = std::abs(correlation_contour(p, 0.4, ws, 4 * ws.dim()).value -
                              correlation_fock(p, 0.4, ws).value);
    record("contour_vs_fock", d, tol, describe(0.8, 3.0, 0.4) + " dim=96");
  }
  {
    const MeasurementParams p(0.9, 3.0);
    const FockWorkspace ws(3.0, 256);
    const double d =
        std::abs(correlation_bipartite(p, {0.0}, {0.4}, ws) - closed(p, 0.4));
    record("bipartite_vs_closed", d, tol, describe(0.9, 3.0, 0.4) + " dim=256");
  }

  const Point sym_points[] = {{0.99, 7.6, 0.27}, {0.7, 2.5, 0.9}, {0.95, 12.0, 0.05},
                              {0.3, 1.7, 2.2},   {0.985, 4.0, 0.4}};
  auto symmetry = [&](const char* name, auto&& transform) {
    double worst = 0.0;
    std::string where;
    for (const Point& pt : sym_points) {
      const double base = lg_value(closed, MeasurementParams(pt.s, pt.gamma), pt.phi);
      const Point t = transform(pt);
      const double d =
          std::abs(base - lg_value(closed, MeasurementParams(t.s, t.gamma), t.phi));
      if (d >= worst) {
        worst = d;
        where = describe(pt.s, pt.gamma, pt.phi);
      }
    }
    record(name, worst, tol, where);
  };
  symmetry("symmetry_s_to_minus_s", [](Point p) { return Point{-p.s, p.gamma, p.phi}; });
  symmetry("symmetry_gamma_to_inverse", [](Point p) { return Point{p.s, 1.0 / p.gamma, p.phi}; });
  symmetry("symmetry_phi_to_minus_phi", [](Point p) { return Point{p.s, p.gamma, -p.phi}; });
  {
    const MeasurementParams p(0.8, 4.0);
    const MeasurementParams q(0.8, 0.25);
    const double d = std::abs(3.0 * auto_converge(p, 0.3, 1e-10, &cache).value -
                              auto_converge(p, 0.9, 1e-10, &cache).value -
                              3.0 * auto_converge(q, 0.3, 1e-10, &cache).value +
                              auto_converge(q, 0.9, 1e-10, &cache).value);
    record("fock_symmetry_gamma_to_inverse", d, tol, describe(0.8, 4.0, 0.3));
  }

  {
    const MeasurementParams p(0.99, 7.6);
    const LgMaximum quantum = lg_max_over_phi(p);
    const ClassicalEstimate classical = classical_lg_quadrature(p, quantum.phi);
    record("classical_bound", std::max(0.0, classical.value - 2.0), 1e-9 * scale,
           describe(0.99, 7.6, quantum.phi) + " classical=" + show(classical.value));
    record("quantum_violation", std::max(0.0, 2.0 - quantum.lg), 1e-9 * scale,
           describe(0.99, 7.6, quantum.phi) + " lg=" + show(quantum.lg));
  }
  {
    const double gamma = 4.0;
    const double phi = kPi / 8;
    const double eps = 1e-5;
    const double slope = (lg_value(closed, MeasurementParams(std::exp(-eps), gamma), phi) - 2.0) / eps;
    const double predicted = (semiclassical_lg(gamma, phi, eps) - 2.0) / eps;
    record("semiclassical_slope", std::abs(slope / predicted - 1.0), 1e-2 * scale,
           "gamma=4 phi=pi/8 eps=1e-5");
  }
  return report;
}

}  // namespace lgosc
