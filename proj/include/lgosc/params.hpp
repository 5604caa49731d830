#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lgosc {

// Units throughout: hbar = 1, omega = 1. Phases are omega * t in radians.

inline constexpr double kPi = 3.14159265358979323846;

/// Short human-readable rendering of a double for messages.
inline std::string show(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

/// Raised for arguments outside an operation's domain (CLI exit code 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An intermediate quantity left its proven range; indicates a bug, not bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A truncated computation did not reach its tolerance (CLI exit code 2).
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, int dim_used)
      : std::runtime_error(what), best_estimate_(best_estimate), dim_used_(dim_used) {}

  double best_estimate() const noexcept { return best_estimate_; }
  int dim_used() const noexcept { return dim_used_; }

 private:
  double best_estimate_;
  int dim_used_;
};

/// The observable S = s^n of the squeezed action A = (q^2/gamma + gamma p^2)/2.
///
/// `s` is the step (smoothness) parameter, |s| <= 1. s -> 1 makes S smooth,
/// s = -1 is the squeezed parity. `gamma` > 0 is the squeezing; gamma = 1
/// makes A the oscillator Hamiltonian itself.
class MeasurementParams {
 public:
  MeasurementParams(double s, double gamma);

  double s() const noexcept { return s_; }
  double gamma() const noexcept { return gamma_; }

 private:
  double s_;
  double gamma_;
};

enum class Method { closed, fock, contour, classical, bipartite };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// A correlation value together with how it was obtained.
struct CorrelationResult {
  double value = 0.0;
  Method method = Method::closed;
  int dim_used = 0;
  bool converged = true;
  double tail_weight = 0.0;  // ground-state probability mass lost to truncation
  bool aliased = false;      // contour quadrature only
};

}  // namespace lgosc
