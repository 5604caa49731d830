#pragma once

#include <cstdint>
#include <vector>

#include "lgosc/params.hpp"

namespace lgosc {

/// A point (q, p) of oscillator phase space.
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// Free harmonic motion for phase phi:
/// q_t = q cos phi + p sin phi,  p_t = -q sin phi + p cos phi.
PhasePoint trajectory(PhasePoint pt, double phi);

/// How the hidden-trajectory model assigns a value of S to a phase point.
enum class ValueAssignment {
  /// min(1, s^{A(q,p) - 1/2}); bounded by 1 as the inequality requires.
  clipped_action,
  /// The Weyl symbol itself. Improper (max 2/(1+s) > 1), so the bound does not apply.
  weyl_symbol,
};

/// Requires 0 <= s <= 1.
double classical_value(const MeasurementParams& p, PhasePoint pt,
                       ValueAssignment assignment = ValueAssignment::clipped_action);

/// Ground-state Wigner density W(q, p) = exp(-(q^2 + p^2)) / pi, sampled in
/// independent streams seeded from (seed, stream index).
struct ClassicalEnsemble {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int streams = 16;
};

double ground_wigner(PhasePoint pt);

struct ClassicalEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Classical LG expectation for three equal intervals phi. Each sampled
/// trajectory contributes S0 S1 + S1 S2 + S2 S3 - S0 S3 with S_k the value at
/// phase k phi, which is <= 2 for any |S| <= 1; its mean equals
/// 3 E[S(z) S(z_phi)] - E[S(z) S(z_3phi)] because W is rotation invariant.
/// The result is independent of `workers`.
ClassicalEstimate classical_lg(const MeasurementParams& p, double phi,
                               const ClassicalEnsemble& ensemble,
                               ValueAssignment assignment = ValueAssignment::clipped_action,
                               int workers = 1);

/// Deterministic counterpart on a nodes x nodes Gauss-Hermite grid (std_error = 0).
ClassicalEstimate classical_lg_quadrature(
    const MeasurementParams& p, double phi, int nodes = 64,
    ValueAssignment assignment = ValueAssignment::clipped_action);

/// Two-time correlation E[S(z_t1) S(z_t2)] with z ~ W, by Monte Carlo.
ClassicalEstimate classical_correlation(const MeasurementParams& p, double t1, double t2,
                                        const ClassicalEnsemble& ensemble,
                                        ValueAssignment assignment =
                                            ValueAssignment::clipped_action);

/// Nodes and weights of the n-point Gauss-Hermite rule for weight exp(-x^2).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite(int n);

}  // namespace lgosc
