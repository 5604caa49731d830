#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgosc/closed_form.hpp"
#include "lgosc/params.hpp"

namespace lgosc {

/// Phases searched for the LG maximum; must lie within [0, pi].
/// Violations happen well inside the first quarter period.
struct PhaseWindow {
  double lo = 0.0;
  double hi = kPi / 2;
};

struct PhiSearch {
  int grid = 400;     // coarse points (lo excluded, hi included)
  double tol = 1e-6;  // golden-section bracket width
};

struct LgMaximum {
  double phi = 0.0;
  double lg = 0.0;
};

/// max over phi of <LG>(s, gamma, phi): coarse grid, then golden section on
/// the bracket around the best grid point. Flat landscapes return the grid maximum.
LgMaximum lg_max_over_phi(const MeasurementParams& p, PhaseWindow window = {},
                          const PhiSearch& search = {});

struct OptimalGamma {
  double gamma = 1.0;
  double phi = 0.0;
  double lg = 2.0;
  bool violation = false;
};

/// Nested maximization of lg_max_over_phi over log-spaced gamma followed by
/// golden section in log gamma. Requires |s| < 1.
OptimalGamma optimal_gamma_for_s(double s, int gamma_grid = 60);

struct RegionOptions {
  PhaseWindow window;
  PhiSearch search;
  int workers = 1;
  double refine_tol = 1e-6;  // bisection width for the thresholds
  int refine_grid = 40;      // coarse points for the inner maximization
};

/// max_phi <LG> over an (s, gamma) grid and the extracted thresholds:
/// s_cr is the smallest s with any violation and gamma_cr the smallest gamma,
/// both refined by bisection between the last clean and first violating grid line.
struct ViolationRegion {
  std::vector<double> s_values;
  std::vector<double> gamma_values;
  Eigen::MatrixXd max_lg;    // (s index, gamma index)
  Eigen::MatrixXd phi_star;  // maximizing phase
  std::optional<double> s_cr;
  std::optional<double> gamma_cr;
  double best_lg = 0.0;
  double best_s = 0.0;
  double best_gamma = 0.0;
  double best_phi = 0.0;

  bool violation(int i, int j) const { return max_lg(i, j) > 2.0; }
};

ViolationRegion violation_region(const std::vector<double>& s_values,
                                 const std::vector<double>& gamma_values,
                                 const RegionOptions& options = {});

/// `count` points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double lo, double hi, int count);

struct ScalingRow {
  double one_minus_s = 0.0;
  double x = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  double lg = 0.0;
  double lambda = 0.0;
  double abs_error = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::vector<double> sup_error;  // per 1 - s, over the x grid
  bool sup_decreasing = false;
};

/// Along gamma = (1-s)^{-1/2}, phi = (1-s) sqrt(2 x gamma^3) (so the scaling
/// variable equals x exactly), tabulates |<LG> - Lambda(x)|. x must be > 0 and
/// one_minus_s positive and strictly decreasing.
ScalingTable scaling_convergence(const std::vector<double>& x_values,
                                 const std::vector<double>& one_minus_s);

/// max over phi of <LG> on the scaling path gamma = (1-s)^{-1/2}.
LgMaximum scaling_path_maximum(double one_minus_s);

/// Location and value of the single maximum of Lambda on [0, x_hi].
LgMaximum lambda_maximum(double x_hi = 2.0);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
};

struct VerifyOptions {
  /// Threshold for equivalence and symmetry checks; other thresholds scale by tol / 1e-6.
  double tol = 1e-6;
  /// Closed-form correlation under test; raw evaluation so symmetries are not folded away.
  CorrelationFn closed = [](const MeasurementParams& p, double phi) {
    return correlation_closed(p, phi, Evaluation::raw);
  };
};

/// Cross-validation of every route to the correlation, the symmetries, the
/// classical bound and the semiclassical slope.
VerifyReport verify(const VerifyOptions& options = {});

}  // namespace lgosc
