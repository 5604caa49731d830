#include "lgosc/closed_form.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "lgosc/special_math.hpp"

namespace lgosc {

namespace {

constexpr double kUnitGammaThreshold = 1e-9;

bool trivially_one(double s, double gamma) {
  return std::abs(gamma - 1.0) < kUnitGammaThreshold || std::abs(s) == 1.0;
}

// Fold phi into [0, pi]; C is even and 2pi-periodic, and C(pi - phi) = C(phi).
double fold_phase(double phi) {
  double r = std::fmod(std::abs(phi), 2.0 * kPi);
  if (r > kPi) r = 2.0 * kPi - r;
  return r;
}

}  // namespace

CorrelationTerms correlation_terms(double s, double gamma, double phi) {
  const double sn = std::sin(phi);
  const double sn2 = sn * sn;
  const double one_minus_s2 = (1.0 - s) * (1.0 + s);
  const double g2 = gamma * gamma;
  const double g2m1 = g2 - 1.0;
  const double damped = 4.0 * g2 + one_minus_s2 * g2m1 * g2m1 * sn2;
  const double root = std::sqrt(4.0 * g2 + g2m1 * g2m1 * sn2);
  const double shift = -s * one_minus_s2 * g2m1 * sn * root;  // s (s^2 - 1)(gamma^2 - 1) sin phi root

  CorrelationTerms t;
  t.a = (gamma + 1.0) / (gamma - 1.0) * damped;
  t.b_plus = 4.0 * s * s * g2 + shift;
  t.b_minus = 4.0 * s * s * g2 - shift;
  t.c = 8.0 * std::pow(gamma, 1.5) * std::sqrt(damped) / (kPi * (gamma - 1.0));
  t.m = 2.0 * (t.b_minus - t.b_plus) * t.a / ((t.b_minus - t.a) * (t.b_plus + t.a));
  return t;
}

double correlation_from_terms(const CorrelationTerms& t) {
  if (!(t.m < 1.0)) {
    throw ConsistencyError("closed form produced elliptic parameter m = " + show(t.m));
  }
  using cplx = std::complex<double>;
  const cplx denom = std::sqrt(cplx(t.a - t.b_minus)) * std::sqrt(cplx(t.a + t.b_plus));
  const cplx value = t.c / denom * elliptic_k(t.m);
  if (std::abs(value.imag()) > 1e-9 * std::abs(value.real())) {
    throw ConsistencyError("closed form produced a complex correlation");
  }
  return value.real();
}

double correlation_closed(const MeasurementParams& p, double phi, Evaluation mode) {
  if (!std::isfinite(phi)) throw DomainError("phase must be finite");
  if (trivially_one(p.s(), p.gamma())) return 1.0;

  if (mode == Evaluation::raw) {
    return correlation_from_terms(correlation_terms(p.s(), p.gamma(), phi));
  }

  const double s = std::abs(p.s());
  const double gamma = p.gamma() >= 1.0 ? p.gamma() : 1.0 / p.gamma();
  const CorrelationTerms t = correlation_terms(s, gamma, fold_phase(phi));
  if (!(t.a - t.b_minus > 0.0) || !(t.a + t.b_plus > 0.0)) {
    throw ConsistencyError("nonpositive square-root argument in closed form");
  }
  if (t.m > 0.0) {
    throw ConsistencyError("elliptic parameter m > 0 in the normalized regime");
  }
  return t.c / (std::sqrt(t.a - t.b_minus) * std::sqrt(t.a + t.b_plus)) * elliptic_k(t.m);
}

double lg_value(const MeasurementParams& p, double phi, Evaluation mode) {
  return 3.0 * correlation_closed(p, phi, mode) - correlation_closed(p, 3.0 * phi, mode);
}

double lg_value(const CorrelationFn& correlation, const MeasurementParams& p, double phi) {
  return 3.0 * correlation(p, phi) - correlation(p, 3.0 * phi);
}

double weyl_symbol(const MeasurementParams& p, double q, double pmom) {
  const double s = p.s();
  if (s <= -1.0) throw DomainError("Weyl symbol of S diverges at s = -1");
  const double gamma = p.gamma();
  const double exponent = (s - 1.0) / (gamma * (s + 1.0)) * (q * q + gamma * gamma * pmom * pmom);
  return 2.0 / (1.0 + s) * std::exp(exponent);
}

std::vector<double> squeezed_vacuum_coeffs(double gamma, int n_max) {
  if (!std::isfinite(gamma) || gamma <= 0.0) throw DomainError("squeezing gamma must be > 0");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  const double ratio = (gamma - 1.0) / (gamma + 1.0);
  std::vector<double> c(static_cast<std::size_t>(n_max / 2) + 1);
  // c_{2n} / c_{2n-2} = ratio * (2n-1) / sqrt(2n (2n-1)) = ratio * sqrt((2n-1)/(2n))
  c[0] = std::sqrt(2.0) * std::pow(gamma, 0.25) / std::sqrt(1.0 + gamma);
  for (std::size_t n = 1; n < c.size(); ++n) {
    const double k = static_cast<double>(2 * n);
    c[n] = c[n - 1] * ratio * std::sqrt((k - 1.0) / k);
  }
  return c;
}

std::vector<double> squeezed_vacuum_amplitudes(double gamma, int n_max) {
  const std::vector<double> even = squeezed_vacuum_coeffs(gamma, n_max);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t n = 0; n < even.size(); ++n) out[2 * n] = even[n];
  return out;
}

double semiclassical_epsilon(double s) {
  if (!(s > 0.0) || s > 1.0) throw DomainError("semiclassical mapping needs 0 < s <= 1");
  return -std::log(s);
}

double semiclassical_angular_factor(double phi) {
  return 3.0 * std::cos(2.0 * phi) - std::cos(6.0 * phi);
}

double semiclassical_lg(double gamma, double phi, double eps) {
  const SemiclassicalCoeffs fg = semiclassical_coeffs(gamma);
  return 2.0 + (fg.f + fg.g * semiclassical_angular_factor(phi)) * eps;
}

}  // namespace lgosc
