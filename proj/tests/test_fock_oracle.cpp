#include <cmath>
#include <complex>

#include <doctest.h>

#include "lgosc/closed_form.hpp"
#include "lgosc/fock_oracle.hpp"
#include "lgosc/params.hpp"
#include "random_points.hpp"

using namespace lgosc;

TEST_CASE("canonical commutator away from the truncation edge") {
  const FockWorkspace ws(3.0, 40);
  const Eigen::MatrixXcd q = Eigen::MatrixXd(ws.position()).cast<std::complex<double>>();
  const Eigen::MatrixXcd p = Eigen::MatrixXcd(ws.momentum());
  const Eigen::MatrixXcd comm = q * p - p * q;
  for (int i = 0; i < 38; ++i) {
    CHECK(std::abs(comm(i, i) - std::complex<double>(0, 1)) < 1e-12);
  }
}

TEST_CASE("squeezed vacuum minimizes the action") {
  for (double gamma : {0.3, 2.0, 7.6}) {
    const FockWorkspace ws(gamma, 120);
    const Eigen::MatrixXd v = ws.squeeze_dense();
    const Eigen::VectorXd col = v.col(0);
    CHECK(col.dot(ws.action() * col) == doctest::Approx(0.5).epsilon(1e-8));
    const Eigen::VectorXd h = ws.hamiltonian_diagonal();
    CHECK(h(0) == 0.5);
    CHECK(h(7) == 7.5);
  }
}

TEST_CASE("column 0 of V is the squeezed vacuum") {
  for (double gamma : {0.25, 3.0, 7.6}) {
    const FockWorkspace ws(gamma, 200);
    const auto amp = squeezed_vacuum_amplitudes(gamma, 199);
    for (int n = 0; n < 200; ++n) CHECK(std::abs(std::abs(ws.squeeze(n, 0)) - std::abs(amp[n])) < 1e-8);
    CHECK(ws.squeeze(0, 0) > 0);
    CHECK(ws.squeeze(2, 0) == doctest::Approx(amp[2]).epsilon(1e-10));
  }
}

TEST_CASE("columns of V follow the raising operator of A") {
  // V|n+1> = +-b^dagger V|n> / sqrt(n+1), b^dagger = (u a^dagger + w a),
  // u = (1/sqrt(gamma) + sqrt(gamma))/2, w = (1/sqrt(gamma) - sqrt(gamma))/2.
  const double gamma = 3.0;
  const int dim = 240;
  const FockWorkspace ws(gamma, dim);
  const double u = (1 / std::sqrt(gamma) + std::sqrt(gamma)) / 2;
  const double w = (1 / std::sqrt(gamma) - std::sqrt(gamma)) / 2;
  const Eigen::SparseMatrix<double> a = ws.lowering();
  const Eigen::SparseMatrix<double> adag = a.transpose();
  const Eigen::MatrixXd v = ws.squeeze_dense();
  auto raise = [&](const Eigen::VectorXd& x, int n) -> Eigen::VectorXd {
    return (u * (adag * x) + w * (a * x)) / std::sqrt(n + 1.0);
  };
  auto distance = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::min((x - y).cwiseAbs().maxCoeff(), (x + y).cwiseAbs().maxCoeff());
  };

  // chained from the analytic vacuum; rounding grows about sqrt(gamma) per step
  const auto amp = squeezed_vacuum_amplitudes(gamma, dim - 1);
  Eigen::VectorXd col = Eigen::Map<const Eigen::VectorXd>(amp.data(), dim);
  for (int n = 0; n < 16; ++n) {
    col = raise(col, n);
    CAPTURE(n);
    CHECK(distance(col, v.col(n + 1)) < 1e-8);
  }
  // single steps from V itself, while column n + 1 stays clear of the edge
  for (int n = 0; n < 40; ++n) {
    CAPTURE(n);
    CHECK(distance(raise(v.col(n), n), v.col(n + 1)) < 1e-10);
  }
}

TEST_CASE("V is orthogonal on the interior block") {
  const FockWorkspace ws(2.0, 256);
  const Eigen::MatrixXd v = ws.squeeze_dense();
  const Eigen::MatrixXd inner = v.leftCols(48).transpose() * v.leftCols(48);
  CHECK((inner - Eigen::MatrixXd::Identity(48, 48)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("workspace arguments and caching") {
  CHECK_THROWS_AS(FockWorkspace(2.0, 1), DomainError);
  CHECK_THROWS_AS(FockWorkspace(0.0, 16), DomainError);
  FockWorkspace::Options strict;
  strict.tolerance = 1e-12;
  CHECK_THROWS_AS(FockWorkspace(20.0, 16, strict), ConvergenceError);

  WorkspaceCache cache;
  const auto a = cache.get(3.0, 64);
  const auto b = cache.get(3.0, 64);
  CHECK(a.get() == b.get());
  CHECK(cache.get(3.0, 128).get() != a.get());
  CHECK(cache.size() == 2);

  const FockWorkspace ws(3.0, 64);
  CHECK_THROWS_AS(correlation_fock({0.9, 4.0}, 0.3, ws), DomainError);
}

TEST_CASE("trivial oracle values") {
  const CorrelationResult r = auto_converge({1.0, 5.0}, 0.8, 1e-10);
  CHECK(std::abs(r.value - 1.0) < 1e-10);
  const FockWorkspace unit(1.0, 64);
  for (double s : {-0.6, 0.3, 0.97})
    for (double phi : {0.1, 1.7}) CHECK(std::abs(correlation_fock({s, 1.0}, phi, unit).value - 1.0) < 1e-12);
}

TEST_CASE("oracle agrees with the closed form") {
  WorkspaceCache cache;
  for (const Point& pt : random_points(12, 21, 0.3, 0.99, 1.3, 8.0)) {
    const MeasurementParams p(pt.s, pt.gamma);
    const CorrelationResult r = auto_converge(p, pt.phi, 1e-10, &cache);
    CAPTURE(pt.s);
    CAPTURE(pt.gamma);
    CAPTURE(pt.phi);
    CHECK(r.converged);
    CHECK(r.method == Method::fock);
    CHECK(std::abs(r.value - correlation_closed(p, pt.phi)) < 1e-8);
  }
}

TEST_CASE("contour integral reproduces the direct sum") {
  for (const Point& pt : random_points(10, 5, -0.95, 0.99, 0.3, 6.0)) {
    const MeasurementParams p(pt.s, pt.gamma);
    const FockWorkspace ws(pt.gamma, 96);
    const CorrelationResult direct = correlation_fock(p, pt.phi, ws);
    const CorrelationResult contour = correlation_contour(p, pt.phi, ws, 4 * 96);
    CHECK(!contour.aliased);
    CHECK(contour.method == Method::contour);
    CHECK(std::abs(direct.value - contour.value) < 1e-12);
  }
  const int dim = auto_converge({1.0, 5.0}, 0.5, 1e-12).dim_used;
  const FockWorkspace big(5.0, dim);
  CHECK(std::abs(correlation_contour({1.0, 5.0}, 0.5, big, 4 * dim).value - 1.0) < 1e-12);

  const FockWorkspace ws(5.0, 128);

  const MeasurementParams p(0.9, 5.0);
  const CorrelationResult coarse = correlation_contour(p, 0.5, ws, 64);
  CHECK(coarse.aliased);
  CHECK(std::abs(coarse.value - correlation_fock(p, 0.5, ws).value) > 1e-8);
  CHECK_THROWS_AS(correlation_contour(p, 0.5, ws, 0), DomainError);
}

TEST_CASE("auto_converge") {
  const CorrelationResult r = auto_converge({0.99, 7.6}, 0.2, 1e-8);
  CHECK(r.converged);
  CHECK(r.dim_used <= 1024);
  CHECK(r.tail_weight < 1e-8);
  CHECK(std::abs(r.value - correlation_closed({0.99, 7.6}, 0.2)) < 1e-8);

  CHECK(auto_converge({0.9, 1.0}, 0.4, 1e-8).dim_used <= 128);
  CHECK_THROWS_AS(auto_converge({0.9, 2.0}, 0.4, 0.0), DomainError);

  // scaling regime: must converge or say so, never return a silent wrong value
  try {
    const CorrelationResult hard = auto_converge({1 - 1e-6, 1000.0}, 0.01, 1e-8, nullptr, {64, 512});
    CHECK(std::abs(hard.value - correlation_closed({1 - 1e-6, 1000.0}, 0.01)) < 1e-6);
  } catch (const ConvergenceError& e) {
    CHECK(e.dim_used() == 512);
    CHECK(std::isfinite(e.best_estimate()));
  }
}

TEST_CASE("tail weight shrinks as the truncation doubles") {
  double prev = 1.0;
  for (int dim : {8, 16, 32, 64, 128}) {
    const FockWorkspace ws(20.0, dim);
    CHECK(ws.tail_weight() < prev);
    prev = ws.tail_weight();
  }
  const FockWorkspace small(20.0, 16);
  const CorrelationResult r = correlation_fock({0.9, 20.0}, 0.3, small);
  CHECK(!r.converged);
  CHECK(r.tail_weight == small.tail_weight());
}

TEST_CASE("oracle-level symmetries of <LG>") {
  WorkspaceCache cache;
  auto lg = [&](double s, double gamma, double phi) {
    const MeasurementParams p(s, gamma);
    return 3 * auto_converge(p, phi, 1e-10, &cache).value - auto_converge(p, 3 * phi, 1e-10, &cache).value;
  };
  for (const Point& pt : random_points(6, 13, 0.4, 0.98, 1.3, 5.0)) {
    const double base = lg(pt.s, pt.gamma, pt.phi);
    CHECK(std::abs(lg(-pt.s, pt.gamma, pt.phi) - base) < 1e-6);
    CHECK(std::abs(lg(pt.s, 1 / pt.gamma, pt.phi) - base) < 1e-6);
    CHECK(std::abs(lg(pt.s, pt.gamma, -pt.phi) - base) < 1e-6);
  }
}
