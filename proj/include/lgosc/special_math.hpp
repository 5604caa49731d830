#pragma once

namespace lgosc {

/// Complete elliptic integral of the first kind in the *parameter* convention:
///
///   K(m) = \int_0^1 [(1 - t^2)(1 - m t^2)]^{-1/2} dt,   m < 1.
///
/// Note m is not the modulus k (m = k^2). The correlation formula produces
/// large negative m, which is folded onto [0, 1) with
/// K(-x) = K(x / (1 + x)) / sqrt(1 + x) before running the AGM.
/// Throws DomainError for m >= 1 or NaN.
double elliptic_k(double m);

/// Arithmetic-geometric mean of two positive numbers.
double agm(double a, double b);

/// Scaling form of the LG expectation in the extreme-squeezing limit,
/// Lambda(x) = (2/pi) (3 K(-x) - K(-9x)), for x >= 0.
double scaling_lambda(double x);

/// x = phi^2 / (2 gamma^3 (1 - s)^2).
double scaling_variable(double phi, double gamma, double one_minus_s);

/// First-order semiclassical coefficients: <LG> ~ 2 + (f + g (3cos2phi - cos6phi)) eps.
struct SemiclassicalCoeffs {
  double f = 0.0;
  double g = 0.0;
};

SemiclassicalCoeffs semiclassical_coeffs(double gamma);

}  // namespace lgosc
