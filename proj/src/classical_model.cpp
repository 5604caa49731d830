#include "lgosc/classical_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lgosc/closed_form.hpp"
#include "lgosc/parallel.hpp"

namespace lgosc {

PhasePoint trajectory(PhasePoint pt, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {pt.q * c + pt.p * s, -pt.q * s + pt.p * c};
}

double classical_value(const MeasurementParams& p, PhasePoint pt, ValueAssignment assignment) {
  if (assignment == ValueAssignment::weyl_symbol) return weyl_symbol(p, pt.q, pt.p);
  if (p.s() < 0.0) {
    throw DomainError("classical value assignment needs 0 <= s <= 1 (no smooth analog of sign flips)");
  }
  const double action = 0.5 * (pt.q * pt.q / p.gamma() + p.gamma() * pt.p * pt.p);
  return std::min(1.0, std::pow(p.s(), action - 0.5));
}

double ground_wigner(PhasePoint pt) { return std::exp(-(pt.q * pt.q + pt.p * pt.p)) / kPi; }

namespace {

// Mean and sum of squared deviations, merged in a fixed order.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

template <typename Sample>
ClassicalEstimate sample_mean(const ClassicalEnsemble& ensemble, int workers, Sample&& sample) {
  if (ensemble.samples == 0) throw DomainError("classical ensemble needs at least one sample");
  const auto streams = static_cast<std::uint64_t>(std::max(1, ensemble.streams));
  std::vector<Moments> partial(streams);
  parallel_for(streams, workers, [&](std::size_t k) {
    const std::uint64_t share =
        ensemble.samples / streams + (k < ensemble.samples % streams ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(ensemble.seed),
                      static_cast<std::uint32_t>(ensemble.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Moments m;
    for (std::uint64_t i = 0; i < share; ++i) {
      const double q = normal(rng);
      const double p = normal(rng);
      m.add(sample(PhasePoint{q, p}));
    }
    partial[k] = m;
  });
  Moments total;
  for (const Moments& m : partial) total.merge(m);
  ClassicalEstimate out;
  out.value = total.mean;
  out.std_error = total.count > 1.0 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  return out;
}

// S0 S1 + S1 S2 + S2 S3 - S0 S3 along one trajectory.
double four_time_combination(const MeasurementParams& p, PhasePoint z, double phi,
                             ValueAssignment assignment) {
  double v[4];
  for (int k = 0; k < 4; ++k) v[k] = classical_value(p, trajectory(z, k * phi), assignment);
  return v[0] * v[1] + v[1] * v[2] + v[2] * v[3] - v[0] * v[3];
}

}  // namespace

ClassicalEstimate classical_lg(const MeasurementParams& p, double phi,
                               const ClassicalEnsemble& ensemble, ValueAssignment assignment,
                               int workers) {
  if (assignment == ValueAssignment::clipped_action && p.s() < 0.0) {
    throw DomainError("classical model needs 0 <= s <= 1");
  }
  return sample_mean(ensemble, workers, [&](PhasePoint z) {
    return four_time_combination(p, z, phi, assignment);
  });
}

ClassicalEstimate classical_correlation(const MeasurementParams& p, double t1, double t2,
                                        const ClassicalEnsemble& ensemble,
                                        ValueAssignment assignment) {
  return sample_mean(ensemble, 1, [&](PhasePoint z) {
    return classical_value(p, trajectory(z, t1), assignment) *
           classical_value(p, trajectory(z, t2), assignment);
  });
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
  // Golub-Welsch: eigenpairs of the symmetric Jacobi matrix of the Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k - 1, k) = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = jacobi(k - 1, k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = std::sqrt(kPi) * v0 * v0;
  }
  return rule;
}

ClassicalEstimate classical_lg_quadrature(const MeasurementParams& p, double phi, int nodes,
                                          ValueAssignment assignment) {
  if (assignment == ValueAssignment::clipped_action && p.s() < 0.0) {
    throw DomainError("classical model needs 0 <= s <= 1");
  }
  const QuadratureRule rule = gauss_hermite(nodes);
  double total = 0.0;
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      const double w = rule.weights[i] * rule.weights[j] / kPi;
      total += w * four_time_combination(p, {rule.nodes[i], rule.nodes[j]}, phi, assignment);
    }
  }
  return {total, 0.0};
}

}  // namespace lgosc
