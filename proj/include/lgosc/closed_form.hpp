#pragma once

#include <functional>
#include <vector>

#include "lgosc/params.hpp"

namespace lgosc {

/// Intermediates of the closed-form correlation
///   C = c / (sqrt(a - b_minus) sqrt(a + b_plus)) K(m),
///   m = 2 (b_minus - b_plus) a / ((b_minus - a)(b_plus + a)).
struct CorrelationTerms {
  double a = 0.0;
  double b_plus = 0.0;
  double b_minus = 0.0;
  double c = 0.0;
  double m = 0.0;
};

/// How parameters reach the formula. `normalized` folds (s, gamma, phi) onto
/// s >= 0, gamma >= 1, phi in [0, pi] using the symmetries of C first, so every
/// square root is of a positive real and m <= 0. `raw` evaluates the formula
/// as written with principal complex square roots.
enum class Evaluation { normalized, raw };

/// Raw intermediates for (s, gamma, phi); gamma must differ from 1.
CorrelationTerms correlation_terms(double s, double gamma, double phi);

/// Evaluates the closed form from its intermediates. Throws ConsistencyError
/// when m >= 1 or the result is not real.
double correlation_from_terms(const CorrelationTerms& t);

/// Two-time correlation <S(0) S(phi)> in the oscillator ground state.
/// Returns exactly 1 when |gamma - 1| < 1e-9 or |s| = 1.
double correlation_closed(const MeasurementParams& p, double phi,
                          Evaluation mode = Evaluation::normalized);

/// Any two-time correlation evaluator C(params, phi).
using CorrelationFn = std::function<double(const MeasurementParams&, double)>;

/// <LG> = 3 C(phi) - C(3 phi) for three equal measurement intervals.
double lg_value(const MeasurementParams& p, double phi,
                Evaluation mode = Evaluation::normalized);
double lg_value(const CorrelationFn& correlation, const MeasurementParams& p, double phi);

/// Weyl symbol of S: (2/(1+s)) exp((s-1)/(gamma(s+1)) (q^2 + gamma^2 p^2)).
/// Its maximum 2/(1+s) exceeds ||S|| = 1 for every s < 1. Requires s > -1.
double weyl_symbol(const MeasurementParams& p, double q, double pmom);

/// Amplitudes c_{2n} of the squeezed vacuum in the photon-number basis for
/// 2n <= n_max; element n of the result is c_{2n}. Odd amplitudes vanish.
std::vector<double> squeezed_vacuum_coeffs(double gamma, int n_max);

/// Same amplitudes indexed by photon number (odd entries zero), length n_max+1.
std::vector<double> squeezed_vacuum_amplitudes(double gamma, int n_max);

/// The small semiclassical parameter hbar/A0 for a step parameter s: eps = -ln s.
double semiclassical_epsilon(double s);

/// First-order prediction 2 + (f(gamma) + g(gamma)(3cos2phi - cos6phi)) eps.
double semiclassical_lg(double gamma, double phi, double eps);

/// 3cos(2phi) - cos(6phi); equals 2 sqrt(2) at phi = pi/8.
double semiclassical_angular_factor(double phi);

}  // namespace lgosc
