#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lgosc/fock_oracle.hpp"
#include "lgosc/params.hpp"

namespace lgosc {

// Photon-pair realization of the two-time measurement. The roles of H and S
// are swapped: each arm evolves under the squeezed Hamiltonian
// H' = (q^2/gamma + gamma p^2)/2 and the counters measure s^{photon number}.
// The source emits sum_n c_n |n n>, c_n the squeezed-vacuum amplitudes, so
// counting n1 photons in arm 1 leaves arm 2 in the Fock state |n1>.

/// Evolution phase applied to one arm before its counter.
struct ArmSetting {
  double phase = 0.0;
};

/// Truncated two-mode source state sum_n c_n |n n>.
struct BipartiteState {
  std::vector<double> coeffs;  // indexed by photon number; odd entries are zero
  double tail = 0.0;           // 1 - sum |c_n|^2
};

BipartiteState make_bipartite_state(double gamma, int dim);

struct JointDistribution {
  Eigen::MatrixXd prob;  // prob(n1, n2)
  double tail = 0.0;     // probability lost to truncation
  bool flagged = false;  // tail above tolerance
};

/// p(n1, n2) = |<n1 n2| U(phi_a) (x) U(phi_b) sum_n c_n |n n>|^2, U(phi) = exp(-i H' phi).
JointDistribution joint_distribution(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                                     const FockWorkspace& ws,
                                     double tol = kDefaultFockTolerance);

/// Doubles the truncation from 64 until the joint distribution for (a, b) loses
/// less than tol; the lost mass bounds the error of correlation_bipartite.
/// Throws ConvergenceError (with the best estimate of E(a, b)) past max_dim.
std::shared_ptr<const FockWorkspace> converged_workspace(const MeasurementParams& p, ArmSetting a,
                                                         ArmSetting b, double tol,
                                                         WorkspaceCache& cache,
                                                         int max_dim = 4096);

/// E(a, b) = sum s^{n1 + n2} p(n1, n2).
double correlation_bipartite(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                             const FockWorkspace& ws);

/// E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh_value(const MeasurementParams& p, ArmSetting a, ArmSetting a_prime, ArmSetting b,
                  ArmSetting b_prime, const FockWorkspace& ws);

/// 3 E(0, phi) - E(0, 3 phi).
double lg_via_bipartite(const MeasurementParams& p, double phi, const FockWorkspace& ws);

struct ShotConfig {
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 0;
  int n_max_detector = std::numeric_limits<int>::max();
  /// Per-photon detection probability (binomial thinning); 1 is ideal.
  double efficiency = 1.0;
  int streams = 16;
};

struct SampleResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double truncated_fraction = 0.0;  // shots with n1 or n2 above the detector limit
  std::uint64_t accepted = 0;
};

/// Monte Carlo of the counting experiment: n1 from the arm-1 marginal, then
/// n2 from the conditional row. Shots exceeding the detector limit are not
/// averaged but reported in truncated_fraction. Independent of `workers`.
SampleResult sample_experiment(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                               const FockWorkspace& ws, const ShotConfig& cfg,
                               int workers = 1);

struct ChshSearchResult {
  std::array<double, 4> settings{};  // a, a', b, b'
  double value = 0.0;
};

/// Grid search over the four arm phases in [-range, range] followed by
/// coordinate-wise golden-section polishing.
ChshSearchResult chsh_search(const MeasurementParams& p, const FockWorkspace& ws,
                             double range = kPi / 2, int grid = 9, int sweeps = 4);

}  // namespace lgosc
