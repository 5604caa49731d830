#include "lgosc/photon_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "lgosc/closed_form.hpp"
#include "lgosc/optimize.hpp"
#include "lgosc/parallel.hpp"

namespace lgosc {

namespace {

using MatrixZ = Eigen::MatrixXcd;

void check_workspace(const MeasurementParams& p, const FockWorkspace& ws) {
  if (std::abs(ws.gamma() - p.gamma()) > 1e-12 * std::max(1.0, p.gamma())) {
    throw DomainError("workspace built for gamma = " + show(ws.gamma()) +
                      " used with gamma = " + show(p.gamma()));
  }
}

Eigen::VectorXd even_coeffs(double gamma, int size) {
  const std::vector<double> c = squeezed_vacuum_coeffs(gamma, 2 * (size - 1));
  return Eigen::Map<const Eigen::VectorXd>(c.data(), size);
}

// Amplitudes <2i, 2j| U_a (x) U_b |source> = (U_a diag(c) U_b^T)_ij.
Eigen::MatrixXd even_joint(const FockWorkspace& ws, const Eigen::VectorXd& c, double phi_a,
                           double phi_b) {
  const Eigen::MatrixXd& v = ws.even_block();
  const int size = static_cast<int>(v.rows());
  auto evolution = [&](double phi) {
    Eigen::VectorXd cs(size), sn(size);
    for (int k = 0; k < size; ++k) {
      cs(k) = std::cos(phi * (2.0 * k + 0.5));
      sn(k) = -std::sin(phi * (2.0 * k + 0.5));
    }
    MatrixZ u(size, size);
    u.real() = v * cs.asDiagonal() * v.transpose();
    u.imag() = v * sn.asDiagonal() * v.transpose();
    return u;
  };
  MatrixZ amplitude = c.cast<std::complex<double>>().asDiagonal();
  if (phi_b != 0.0) amplitude = amplitude * evolution(phi_b).transpose();
  if (phi_a != 0.0) amplitude = evolution(phi_a) * amplitude;
  return amplitude.cwiseAbs2();
}

// E(a, b) = sum_ij w_i w_j |M_ij|^2 = tr(P(a) G P(-b) G) with
// P(phi)_kl = Omega_kl exp(2i phi (k - l)), Omega = V^T diag(w) V.
// R(b) = G P(-b) G is cached per phase; each E is then O(size^2).
class PairKernel {
 public:
  PairKernel(const FockWorkspace& ws, const Eigen::VectorXd& c, const Eigen::VectorXd& w) {
    const Eigen::MatrixXd& v = ws.even_block();
    g_ = v.transpose() * (c.asDiagonal() * v);
    omega_ = v.transpose() * (w.asDiagonal() * v);
  }

  struct Twisted {
    Eigen::MatrixXd re;  // symmetric
    Eigen::MatrixXd im;  // antisymmetric
  };

  Twisted twisted(double phi) const {
    const Eigen::Index n = omega_.rows();
    std::vector<double> cs(2 * n - 1), sn(2 * n - 1);
    for (Eigen::Index d = -(n - 1); d < n; ++d) {
      cs[d + n - 1] = std::cos(2.0 * phi * static_cast<double>(d));
      sn[d + n - 1] = std::sin(2.0 * phi * static_cast<double>(d));
    }
    Twisted t{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index k = 0; k < n; ++k) {
        t.re(k, l) = omega_(k, l) * cs[k - l + n - 1];
        t.im(k, l) = omega_(k, l) * sn[k - l + n - 1];
      }
    return t;
  }

  Twisted sandwiched(double phi_b) const {
    const Twisted p = twisted(-phi_b);
    return {g_ * p.re * g_, g_ * p.im * g_};
  }

  static double pair(const Twisted& p, const Twisted& r) {
    // Re tr(P R); R_re is symmetric and R_im antisymmetric
    return p.re.cwiseProduct(r.re).sum() + p.im.cwiseProduct(r.im).sum();
  }

  double operator()(double phi_a, double phi_b) const {
    return pair(twisted(phi_a), sandwiched(phi_b));
  }

 private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd omega_;
};

Eigen::VectorXd even_weights(double s, int size) {
  Eigen::VectorXd w(size);
  double value = 1.0;
  for (int i = 0; i < size; ++i) {
    w(i) = value;  // s^{2i}
    value *= s * s;
  }
  return w;
}

// sum_ij w_i w_j p(2i, 2j); an arm with phase 0 is the exact identity.
double even_correlation(const FockWorkspace& ws, const Eigen::VectorXd& c, const Eigen::VectorXd& w,
                        double phi_a, double phi_b) {
  if (phi_a != 0.0 && phi_b == 0.0) std::swap(phi_a, phi_b);
  if (phi_b == 0.0) return (w.array() * c.array()).square().sum();
  if (phi_a == 0.0) {
    const Eigen::MatrixXd& v = ws.even_block();
    const int size = static_cast<int>(v.rows());
    Eigen::VectorXd cs(size), sn(size);
    for (int k = 0; k < size; ++k) {
      cs(k) = std::cos(phi_b * (2.0 * k + 0.5));
      sn(k) = std::sin(phi_b * (2.0 * k + 0.5));
    }
    const Eigen::MatrixXd re = v * cs.asDiagonal() * v.transpose();
    const Eigen::MatrixXd im = v * sn.asDiagonal() * v.transpose();
    const Eigen::VectorXd rows = (re.cwiseAbs2() + im.cwiseAbs2()) * w;
    return (w.array() * c.array().square() * rows.array()).sum();
  }
  return PairKernel(ws, c, w)(phi_a, phi_b);
}

}  // namespace

BipartiteState make_bipartite_state(double gamma, int dim) {
  if (dim < 1) throw DomainError("bipartite state needs dim >= 1");
  BipartiteState state;
  state.coeffs = squeezed_vacuum_amplitudes(gamma, dim - 1);
  double norm = 0.0;
  for (double c : state.coeffs) norm += c * c;
  state.tail = std::max(0.0, 1.0 - norm);
  return state;
}

JointDistribution joint_distribution(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                                     const FockWorkspace& ws, double tol) {
  check_workspace(p, ws);
  const int size = static_cast<int>(ws.even_block().rows());
  const Eigen::MatrixXd even = even_joint(ws, even_coeffs(p.gamma(), size), a.phase, b.phase);
  JointDistribution out;
  out.prob = Eigen::MatrixXd::Zero(ws.dim(), ws.dim());
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) out.prob(2 * i, 2 * j) = even(i, j);
  out.tail = std::max(0.0, 1.0 - even.sum());
  out.flagged = out.tail > tol;
  return out;
}

std::shared_ptr<const FockWorkspace> converged_workspace(const MeasurementParams& p, ArmSetting a,
                                                         ArmSetting b, double tol,
                                                         WorkspaceCache& cache, int max_dim) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
  std::shared_ptr<const FockWorkspace> ws;
  for (int dim = 64; dim <= max_dim; dim *= 2) {
    ws = cache.get(p.gamma(), dim);
    const int size = static_cast<int>(ws->even_block().rows());
    const double kept = even_correlation(*ws, even_coeffs(p.gamma(), size),
                                         Eigen::VectorXd::Ones(size), a.phase, b.phase);
    if (1.0 - kept < tol) return ws;
  }
  if (!ws) throw DomainError("max_dim must be >= 64");
  throw ConvergenceError("photon-pair truncation did not reach " + show(tol) + " by dimension " +
                             std::to_string(ws->dim()),
                         correlation_bipartite(p, a, b, *ws), ws->dim());
}

double correlation_bipartite(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                             const FockWorkspace& ws) {
  check_workspace(p, ws);
  const int size = static_cast<int>(ws.even_block().rows());
  return even_correlation(ws, even_coeffs(p.gamma(), size), even_weights(p.s(), size), a.phase,
                          b.phase);
}

double chsh_value(const MeasurementParams& p, ArmSetting a, ArmSetting a_prime, ArmSetting b,
                  ArmSetting b_prime, const FockWorkspace& ws) {
  check_workspace(p, ws);
  const int size = static_cast<int>(ws.even_block().rows());
  const PairKernel kernel(ws, even_coeffs(p.gamma(), size), even_weights(p.s(), size));
  const auto rb = kernel.sandwiched(b.phase);
  const auto rbp = kernel.sandwiched(b_prime.phase);
  const auto pa = kernel.twisted(a.phase);
  const auto pap = kernel.twisted(a_prime.phase);
  return PairKernel::pair(pa, rb) + PairKernel::pair(pa, rbp) + PairKernel::pair(pap, rb) -
         PairKernel::pair(pap, rbp);
}

double lg_via_bipartite(const MeasurementParams& p, double phi, const FockWorkspace& ws) {
  return 3.0 * correlation_bipartite(p, {0.0}, {phi}, ws) -
         correlation_bipartite(p, {0.0}, {3.0 * phi}, ws);
}

SampleResult sample_experiment(const MeasurementParams& p, ArmSetting a, ArmSetting b,
                               const FockWorkspace& ws, const ShotConfig& cfg, int workers) {
  if (cfg.shots == 0) throw DomainError("photon experiment needs at least one shot");
  if (cfg.n_max_detector < 0) throw DomainError("detector limit must be >= 0");
  if (!(cfg.efficiency > 0.0) || cfg.efficiency > 1.0) {
    throw DomainError("detector efficiency must lie in (0, 1]");
  }

  const JointDistribution joint = joint_distribution(p, a, b, ws);
  const int dim = ws.dim();

  // Inverse-CDF tables over even photon numbers.
  const int size = static_cast<int>(ws.even_block().rows());
  std::vector<double> marginal_cdf(size);
  std::vector<std::vector<double>> row_cdf(size, std::vector<double>(size));
  double running = 0.0;
  for (int i = 0; i < size; ++i) {
    double row_total = 0.0;
    for (int j = 0; j < size; ++j) {
      row_total += joint.prob(2 * i, 2 * j);
      row_cdf[i][j] = row_total;
    }
    running += row_total;
    marginal_cdf[i] = running;
  }
  auto draw = [](const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
  };

  std::vector<double> s_powers(2 * static_cast<std::size_t>(dim) + 1);
  s_powers[0] = 1.0;
  for (std::size_t n = 1; n < s_powers.size(); ++n) s_powers[n] = s_powers[n - 1] * p.s();

  struct Tally {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t truncated = 0;
  };
  const auto streams = static_cast<std::uint64_t>(std::max(1, cfg.streams));
  std::vector<Tally> partial(streams);
  parallel_for(streams, workers, [&](std::size_t k) {
    const std::uint64_t share = cfg.shots / streams + (k < cfg.shots % streams ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32), static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Tally t;
    for (std::uint64_t shot = 0; shot < share; ++shot) {
      const int i = draw(marginal_cdf, uniform(rng));
      const int j = draw(row_cdf[i], uniform(rng));
      int n1 = 2 * i;
      int n2 = 2 * j;
      if (cfg.efficiency < 1.0) {
        n1 = std::binomial_distribution<int>(n1, cfg.efficiency)(rng);
        n2 = std::binomial_distribution<int>(n2, cfg.efficiency)(rng);
      }
      if (n1 > cfg.n_max_detector || n2 > cfg.n_max_detector) {
        ++t.truncated;
        continue;
      }
      const double x = s_powers[n1 + n2];
      t.count += 1.0;
      const double delta = x - t.mean;
      t.mean += delta / t.count;
      t.m2 += delta * (x - t.mean);
    }
    partial[k] = t;
  });

  Tally total;
  for (const Tally& t : partial) {
    total.truncated += t.truncated;
    if (t.count == 0.0) continue;
    const double n = total.count + t.count;
    const double delta = t.mean - total.mean;
    total.mean += delta * t.count / n;
    total.m2 += t.m2 + delta * delta * total.count * t.count / n;
    total.count = n;
  }

  SampleResult out;
  out.accepted = static_cast<std::uint64_t>(total.count);
  out.truncated_fraction = static_cast<double>(total.truncated) / static_cast<double>(cfg.shots);
  out.estimate = total.count > 0.0 ? total.mean : std::nan("");
  out.std_error =
      total.count > 1.0 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  return out;
}

ChshSearchResult chsh_search(const MeasurementParams& p, const FockWorkspace& ws, double range,
                             int grid, int sweeps) {
  check_workspace(p, ws);
  if (grid < 2 || !(range > 0.0)) throw DomainError("CHSH search needs grid >= 2 and range > 0");

  const int size = static_cast<int>(ws.even_block().rows());
  const PairKernel kernel(ws, even_coeffs(p.gamma(), size), even_weights(p.s(), size));
  std::vector<double> phases(grid);
  std::vector<PairKernel::Twisted> twisted(grid), sandwiched(grid);
  for (int k = 0; k < grid; ++k) {
    phases[k] = -range + 2.0 * range * k / (grid - 1);
    twisted[k] = kernel.twisted(phases[k]);
    sandwiched[k] = kernel.sandwiched(phases[k]);
  }
  Eigen::MatrixXd table(grid, grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) table(i, j) = PairKernel::pair(twisted[i], sandwiched[j]);

  ChshSearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid; ++a)
    for (int ap = 0; ap < grid; ++ap)
      for (int b = 0; b < grid; ++b)
        for (int bp = 0; bp < grid; ++bp) {
          const double v = table(a, b) + table(a, bp) + table(ap, b) - table(ap, bp);
          if (v > best.value) {
            best.value = v;
            best.settings = {phases[a], phases[ap], phases[b], phases[bp]};
          }
        }

  // E(a, b) = E(b, a), so every coordinate sees its two partners as cached
  // R matrices and costs O(size^2) per evaluation.
  auto sandwich = [&](double phase) {
    const auto hit = std::find(phases.begin(), phases.end(), phase);
    return hit != phases.end() ? sandwiched[hit - phases.begin()] : kernel.sandwiched(phase);
  };
  const double step = 2.0 * range / (grid - 1);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool improved = false;
    PairKernel::Twisted first, second;
    for (int coord = 0; coord < 4; ++coord) {
      auto& x = best.settings;
      if (coord % 2 == 0) {
        first = sandwich(coord < 2 ? x[2] : x[0]);
        second = sandwich(coord < 2 ? x[3] : x[1]);
      }
      // the unprimed setting enters with (+, +), the primed one with (+, -)
      const double sign = coord % 2 == 0 ? 1.0 : -1.0;
      const auto other = kernel.twisted(x[coord ^ 1]);
      const double rest = PairKernel::pair(other, first) - sign * PairKernel::pair(other, second);
      auto evaluate = [&](double value) {
        const auto pt = kernel.twisted(value);
        return rest + PairKernel::pair(pt, first) + sign * PairKernel::pair(pt, second);
      };
      const double centre = x[coord];
      const Maximum m = golden_section_max(evaluate, centre - step, centre + step, 1e-6);
      if (m.value > best.value + 1e-14) {
        best.value = m.value;
        x[coord] = m.x;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace lgosc
