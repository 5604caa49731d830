#include "lgosc/special_math.hpp"

#include <cmath>
#include <string>

#include "lgosc/params.hpp"

namespace lgosc {

double agm(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("agm requires positive arguments");
  // Quadratic convergence; 64 is far beyond what double precision needs.
  for (int i = 0; i < 64; ++i) {
    if (std::abs(a - b) < 1e-15 * a) break;
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return 0.5 * (a + b);
}

double elliptic_k(double m) {
  if (std::isnan(m) || m >= 1.0) {
    throw DomainError("elliptic_k requires parameter m < 1, got " + show(m));
  }
  if (m < 0.0) {
    const double x = -m;
    return elliptic_k(x / (1.0 + x)) / std::sqrt(1.0 + x);
  }
  return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

double scaling_lambda(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("scaling variable must be >= 0, got " + show(x));
  }
  return (2.0 / kPi) * (3.0 * elliptic_k(-x) - elliptic_k(-9.0 * x));
}

double scaling_variable(double phi, double gamma, double one_minus_s) {
  if (!(gamma > 0.0) || !(one_minus_s > 0.0)) {
    throw DomainError("scaling variable needs gamma > 0 and 1 - s > 0");
  }
  return phi * phi / (2.0 * gamma * gamma * gamma * one_minus_s * one_minus_s);
}

SemiclassicalCoeffs semiclassical_coeffs(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw DomainError("semiclassical coefficients need gamma > 0");
  }
  const double g2m1 = gamma * gamma - 1.0;
  const double gm1 = gamma - 1.0;
  const double g3 = gamma * gamma * gamma;
  SemiclassicalCoeffs out;
  out.f = -((gamma * gamma + 1.0) * gm1 * gm1 * gm1 * gm1 + 4.0 * gamma * g2m1 * g2m1) /
          (8.0 * g3);
  out.g = g2m1 * g2m1 * (1.0 + gamma * gamma) / (16.0 * g3);
  return out;
}

}  // namespace lgosc
