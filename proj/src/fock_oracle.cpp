#include "lgosc/fock_oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace lgosc {

namespace {

using SparseD = Eigen::SparseMatrix<double>;
using SparseZ = Eigen::SparseMatrix<std::complex<double>>;

// Ground overlaps below this cannot move a correlation of order one.
constexpr double kNegligibleOverlap = 1e-32;

template <typename Scalar>
Eigen::SparseMatrix<Scalar> crop(const Eigen::SparseMatrix<Scalar>& m, int dim) {
  std::vector<Eigen::Triplet<Scalar>> entries;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, k); it; ++it) {
      if (it.row() < dim && it.col() < dim) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  Eigen::SparseMatrix<Scalar> out(dim, dim);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

// exp(r/2 (a^2 - a^dagger^2)) on the photon numbers {parity, parity + 2, ...} < total.
Eigen::MatrixXd squeeze_block(double r, int parity, int total) {
  const int size = (total - parity + 1) / 2;
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i + 1 < size; ++i) {
    const double n = 2.0 * i + parity;  // <n| a^2 |n+2> = sqrt((n+1)(n+2))
    const double element = 0.5 * r * std::sqrt((n + 1.0) * (n + 2.0));
    generator(i, i + 1) = element;
    generator(i + 1, i) = -element;
  }
  return generator.exp();
}

// Mass of row 0 beyond the retained even columns, with the padding entries
// extended as a geometric series.
double estimate_tail(const Eigen::MatrixXd& full_even, int retained) {
  const int total = static_cast<int>(full_even.cols());
  double tail = 0.0;
  for (int j = retained; j < total; ++j) tail += full_even(0, j) * full_even(0, j);
  if (total >= 2) {
    const double last = full_even(0, total - 1) * full_even(0, total - 1);
    const double before = full_even(0, total - 2) * full_even(0, total - 2);
    if (before > 0.0) {
      const double ratio = last / before;
      if (ratio < 1.0) tail += last * ratio / (1.0 - ratio);
    }
  }
  return tail;
}

}  // namespace

FockWorkspace::FockWorkspace(double gamma, int dim, const Options& options)
    : gamma_(gamma), dim_(dim), pad_(options.pad) {
  if (!std::isfinite(gamma) || gamma <= 0.0) throw DomainError("workspace needs gamma > 0");
  if (dim < 2) throw DomainError("workspace dimension must be >= 2");
  if (options.pad < 0) throw DomainError("workspace padding must be >= 0");

  const int total = dim + pad_;
  const double r = -0.5 * std::log(gamma);
  const Eigen::MatrixXd even_full = squeeze_block(r, 0, total);
  const int n_even = (dim + 1) / 2;
  even_ = even_full.topLeftCorner(n_even, n_even);

  ground_ = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < n_even; ++j) ground_(2 * j) = even_(0, j) * even_(0, j);
  tail_ = estimate_tail(even_full, n_even);
  if (options.tolerance && tail_ > *options.tolerance) {
    throw ConvergenceError("dimension " + std::to_string(dim) +
                               " cannot represent the squeezed basis: tail weight " +
                               show(tail_),
                           std::numeric_limits<double>::quiet_NaN(), dim);
  }

  SparseD a(total, total);
  {
    std::vector<Eigen::Triplet<double>> entries;
    for (int k = 1; k < total; ++k) entries.emplace_back(k - 1, k, std::sqrt(double(k)));
    a.setFromTriplets(entries.begin(), entries.end());
  }
  const SparseD a_dag = SparseD(a.transpose());
  const SparseD q = (a + a_dag) * (1.0 / std::sqrt(2.0));
  const SparseD p_real = (a - a_dag) * (1.0 / std::sqrt(2.0));  // p = -i * p_real
  const SparseZ p = p_real.cast<std::complex<double>>() * std::complex<double>(0.0, -1.0);
  const SparseD q2 = q * q;
  const SparseD p2 = -(p_real * p_real);
  const SparseD action = (q2 * (1.0 / gamma) + p2 * gamma) * 0.5;

  lowering_ = crop(a, dim);
  position_ = crop(q, dim);
  momentum_ = crop(p, dim);
  action_ = crop(action, dim);
}

const Eigen::MatrixXd& FockWorkspace::odd_block() const {
  std::call_once(odd_once_, [this] {
    const int n_odd = dim_ / 2;
    odd_ = squeeze_block(-0.5 * std::log(gamma_), 1, dim_ + pad_).topLeftCorner(n_odd, n_odd);
  });
  return odd_;
}

double FockWorkspace::squeeze(int row, int col) const {
  if (row < 0 || col < 0 || row >= dim_ || col >= dim_) {
    throw DomainError("squeeze element index out of range");
  }
  if ((row % 2) != (col % 2)) return 0.0;
  return row % 2 == 0 ? even_(row / 2, col / 2) : odd_block()(row / 2, col / 2);
}

Eigen::MatrixXd FockWorkspace::squeeze_dense() const {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < even_.rows(); ++i)
    for (int j = 0; j < even_.cols(); ++j) v(2 * i, 2 * j) = even_(i, j);
  const Eigen::MatrixXd& odd = odd_block();
  for (int i = 0; i < odd.rows(); ++i)
    for (int j = 0; j < odd.cols(); ++j) v(2 * i + 1, 2 * j + 1) = odd(i, j);
  return v;
}

Eigen::VectorXd FockWorkspace::hamiltonian_diagonal() const {
  return Eigen::VectorXd::LinSpaced(dim_, 0.5, dim_ - 0.5);
}

std::shared_ptr<const FockWorkspace> WorkspaceCache::get(double gamma, int dim) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(gamma, dim);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  auto ws = std::make_shared<const FockWorkspace>(gamma, dim);
  entries_.emplace(key, ws);
  return ws;
}

std::size_t WorkspaceCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

namespace {

void check_workspace(const MeasurementParams& p, const FockWorkspace& ws) {
  if (std::abs(ws.gamma() - p.gamma()) > 1e-12 * std::max(1.0, p.gamma())) {
    throw DomainError("workspace built for gamma = " + show(ws.gamma()) +
                      " used with gamma = " + show(p.gamma()));
  }
}

// |<n|_A U(phi) |n'>_A|^2 within one parity block, for the first `cols` columns.
Eigen::MatrixXd transition_block(const Eigen::MatrixXd& block, int parity, double phi, int cols) {
  const int size = static_cast<int>(block.rows());
  Eigen::VectorXd cos_phase(size);
  Eigen::VectorXd sin_phase(size);
  for (int i = 0; i < size; ++i) {
    const double energy = 2.0 * i + parity + 0.5;
    cos_phase(i) = std::cos(phi * energy);
    sin_phase(i) = std::sin(phi * energy);
  }
  const auto left = block.leftCols(cols);
  const Eigen::MatrixXd re = block.transpose() * (cos_phase.asDiagonal() * left);
  const Eigen::MatrixXd im = block.transpose() * (sin_phase.asDiagonal() * left);
  return re.array().square() + im.array().square();
}

Eigen::VectorXd step_powers(double base, int count) {
  Eigen::VectorXd out(count);
  double value = 1.0;
  for (int i = 0; i < count; ++i) {
    out(i) = value;
    value *= base;
  }
  return out;
}

}  // namespace

CorrelationResult correlation_fock(const MeasurementParams& p, double phi,
                                   const FockWorkspace& ws, double tol) {
  check_workspace(p, ws);
  if (!std::isfinite(phi)) throw DomainError("phase must be finite");

  const Eigen::MatrixXd& even = ws.even_block();
  const int size = static_cast<int>(even.rows());
  int cols = 0;
  while (cols < size && ws.ground_overlaps()(2 * cols) > kNegligibleOverlap) ++cols;

  const Eigen::MatrixXd prob = transition_block(even, 0, phi, cols);
  const Eigen::VectorXd weights = step_powers(p.s() * p.s(), size);  // s^n for n = 2i
  double value = 0.0;
  for (int j = 0; j < cols; ++j) {
    value += weights(j) * ws.ground_overlaps()(2 * j) * weights.dot(prob.col(j));
  }

  CorrelationResult result;
  result.value = value;
  result.method = Method::fock;
  result.dim_used = ws.dim();
  result.tail_weight = ws.tail_weight();
  result.converged = ws.tail_weight() < tol;
  return result;
}

CorrelationResult correlation_contour(const MeasurementParams& p, double phi,
                                      const FockWorkspace& ws, int nodes) {
  check_workspace(p, ws);
  if (!std::isfinite(phi)) throw DomainError("phase must be finite");
  if (nodes < 1) throw DomainError("contour quadrature needs at least one node");

  const int dim = ws.dim();
  const double s = p.s();

  // w(n'') = sum_n s^n |<n|U|n''>|^2 over the full truncated basis.
  Eigen::VectorXd column_weight = Eigen::VectorXd::Zero(dim);
  for (int parity = 0; parity < 2; ++parity) {
    const Eigen::MatrixXd& block = parity == 0 ? ws.even_block() : ws.odd_block();
    const int size = static_cast<int>(block.rows());
    if (size == 0) continue;
    const Eigen::MatrixXd prob = transition_block(block, parity, phi, size);
    Eigen::VectorXd row_weight(size);
    for (int i = 0; i < size; ++i) row_weight(i) = std::pow(s, 2 * i + parity);
    const Eigen::VectorXd w = prob.transpose() * row_weight;
    for (int j = 0; j < size; ++j) column_weight(2 * j + parity) = w(j);
  }

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) roots[k] = std::polar(1.0, 2.0 * kPi * k / nodes);

  const Eigen::VectorXd& ground = ws.ground_overlaps();
  const Eigen::VectorXd s_powers = step_powers(s, dim);
  std::complex<double> total = 0.0;
  for (int j = 0; j < nodes; ++j) {
    std::complex<double> expectation = 0.0;  // <g| rho(z) |g>
    std::complex<double> trace = 0.0;        // Tr rho(s) U rho(s/z) U^dagger
    for (int n = 0; n < dim; ++n) {
      const long long k = (static_cast<long long>(j) * n) % nodes;
      const std::complex<double> zn = roots[k];
      expectation += ground(n) * zn;
      trace += s_powers(n) * column_weight(n) * std::conj(zn);
    }
    total += expectation * trace;
  }

  CorrelationResult result;
  result.value = total.real() / nodes;
  result.method = Method::contour;
  result.dim_used = dim;
  result.tail_weight = ws.tail_weight();
  result.converged = ws.tail_weight() < kDefaultFockTolerance;
  result.aliased = nodes < 2 * dim + 1;
  return result;
}

CorrelationResult auto_converge(const MeasurementParams& p, double phi, double tol,
                                WorkspaceCache* cache, const ConvergeOptions& options) {
  if (!(tol > 0.0)) throw DomainError("convergence tolerance must be > 0");
  if (options.initial_dim < 2 || options.max_dim < options.initial_dim) {
    throw DomainError("invalid convergence dimension range");
  }

  auto evaluate = [&](int dim) {
    if (cache != nullptr) return correlation_fock(p, phi, *cache->get(p.gamma(), dim), tol);
    return correlation_fock(p, phi, FockWorkspace(p.gamma(), dim), tol);
  };

  int dim = options.initial_dim;
  CorrelationResult previous = evaluate(dim);
  while (2 * dim <= options.max_dim) {
    dim *= 2;
    CorrelationResult current = evaluate(dim);
    const bool settled = std::abs(current.value - previous.value) < tol;
    if (settled && current.tail_weight < tol) {
      current.converged = true;
      return current;
    }
    previous = current;
  }
  throw ConvergenceError("Fock truncation did not converge to " + show(tol) +
                             " by dimension " + std::to_string(dim),
                         previous.value, dim);
}

}  // namespace lgosc
