#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "lgosc/params.hpp"

namespace lgosc {

/// Truncated number-basis representation of the squeezed-action eigenbasis.
///
/// Holds the squeeze transform V with V^T A V = H0 = a^dagger a + 1/2, so the
/// action eigenstates are |n>_A = V|n>. V is exp(r/2 (a^2 - a^dagger^2)) with
/// r = -ln(gamma)/2, computed on dim + pad states and cropped to dim. The
/// generator only couples states of equal photon-number parity, so V is kept
/// as two parity blocks. V is real, hence only |.|^2 of its phase convention
/// enters any physics.
///
/// Immutable after construction; share freely across threads.
class FockWorkspace {
 public:
  static constexpr int kDefaultPad = 8;

  struct Options {
    int pad = kDefaultPad;
    /// When set, construction throws ConvergenceError if tail_weight exceeds it.
    std::optional<double> tolerance;
  };

  FockWorkspace(double gamma, int dim) : FockWorkspace(gamma, dim, Options{}) {}
  FockWorkspace(double gamma, int dim, const Options& options);

  double gamma() const noexcept { return gamma_; }
  int dim() const noexcept { return dim_; }
  int pad() const noexcept { return pad_; }

  /// V restricted to even (odd) photon numbers: block(i, j) = V(2i(+1), 2j(+1)).
  /// The ground state lives entirely in the even sector; the odd block is
  /// only built on first request.
  const Eigen::MatrixXd& even_block() const noexcept { return even_; }
  const Eigen::MatrixXd& odd_block() const;

  /// Matrix element <row| V |col> of the cropped transform.
  double squeeze(int row, int col) const;
  Eigen::MatrixXd squeeze_dense() const;

  /// |<n|_A g>|^2 for n < dim, with |g> the oscillator ground state.
  const Eigen::VectorXd& ground_overlaps() const noexcept { return ground_; }
  /// Ground-state mass outside the retained block.
  double tail_weight() const noexcept { return tail_; }

  // Operators in the number basis, built on dim + pad states and cropped to dim.
  const Eigen::SparseMatrix<double>& lowering() const noexcept { return lowering_; }
  const Eigen::SparseMatrix<double>& position() const noexcept { return position_; }
  const Eigen::SparseMatrix<std::complex<double>>& momentum() const noexcept {
    return momentum_;
  }
  /// Squeezed action A = (q^2/gamma + gamma p^2)/2.
  const Eigen::SparseMatrix<double>& action() const noexcept { return action_; }
  /// Diagonal of H = (q^2 + p^2)/2, i.e. n + 1/2.
  Eigen::VectorXd hamiltonian_diagonal() const;

 private:
  double gamma_;
  int dim_;
  int pad_;
  Eigen::MatrixXd even_;
  mutable std::once_flag odd_once_;
  mutable Eigen::MatrixXd odd_;
  Eigen::VectorXd ground_;
  double tail_ = 0.0;
  Eigen::SparseMatrix<double> lowering_;
  Eigen::SparseMatrix<double> position_;
  Eigen::SparseMatrix<std::complex<double>> momentum_;
  Eigen::SparseMatrix<double> action_;
};

/// Thread-safe memo of workspaces keyed by (gamma, dim).
class WorkspaceCache {
 public:
  std::shared_ptr<const FockWorkspace> get(double gamma, int dim);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<double, int>, std::shared_ptr<const FockWorkspace>> entries_;
};

inline constexpr double kDefaultFockTolerance = 1e-8;

/// Direct double sum over action eigenstates:
///   C = sum_{n', n} s^{n'+n} |<n|U(phi)|n'>|^2 |<n'|g>|^2,  U = exp(-i H phi).
/// `converged` reports tail_weight < tol; the value is returned regardless.
CorrelationResult correlation_fock(const MeasurementParams& p, double phi,
                                   const FockWorkspace& ws,
                                   double tol = kDefaultFockTolerance);

/// The same correlation as the constant term of a Laurent polynomial in z,
///   C = (1/2pi i) \oint dz/z <g|rho(z)|g> Tr[rho(s) U rho(s/z) U^dagger],
/// with rho(x) = sum_n x^n |n>_A<n|_A, integrated by the trapezoid rule on
/// `nodes` equispaced points of the unit circle. `aliased` is set when
/// nodes < 2 dim + 1.
CorrelationResult correlation_contour(const MeasurementParams& p, double phi,
                                      const FockWorkspace& ws, int nodes);

struct ConvergeOptions {
  int initial_dim = 64;
  int max_dim = 4096;
};

/// Doubles the truncation until successive values differ by less than tol and
/// the tail weight is below tol. Throws ConvergenceError (carrying the best
/// estimate) if max_dim is reached first.
CorrelationResult auto_converge(const MeasurementParams& p, double phi, double tol,
                                WorkspaceCache* cache = nullptr,
                                const ConvergeOptions& options = {});

}  // namespace lgosc
