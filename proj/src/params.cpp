#include "lgosc/params.hpp"

#include <cmath>

namespace lgosc {

MeasurementParams::MeasurementParams(double s, double gamma) : s_(s), gamma_(gamma) {
  if (!std::isfinite(s) || std::abs(s) > 1.0) {
    throw DomainError("step parameter s must satisfy |s| <= 1, got " + show(s));
  }
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw DomainError("squeezing parameter gamma must be > 0, got " + show(gamma));
  }
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed: return "closed";
    case Method::fock: return "fock";
    case Method::contour: return "contour";
    case Method::classical: return "classical";
    case Method::bipartite: return "bipartite";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::closed, Method::fock, Method::contour, Method::classical,
                   Method::bipartite}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown method '" + std::string(name) + "'");
}

}  // namespace lgosc
