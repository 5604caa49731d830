// lgosc: Leggett-Garg explorer for a harmonic oscillator measured with S = s^n.
//
// Exit codes: 0 success, 1 domain/usage error, 2 non-convergence, 3 verify failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgosc/classical_model.hpp"
#include "lgosc/closed_form.hpp"
#include "lgosc/explorer.hpp"
#include "lgosc/fock_oracle.hpp"
#include "lgosc/parallel.hpp"
#include "lgosc/photon_experiment.hpp"
#include "lgosc/special_math.hpp"
#include "lgosc/table.hpp"

using namespace lgosc;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitVerify = 3;

// "a,b,c" or "lo:hi:count" (inclusive, linear).
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::stringstream in(text);
      std::string lo, hi, count;
      std::getline(in, lo, ':');
      std::getline(in, hi, ':');
      std::getline(in, count, ':');
      return linspace(std::stod(lo), std::stod(hi), std::stoi(count));
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse value list '" + text + "'");
  }
  if (out.empty()) throw DomainError("empty value list");
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

struct OracleFlags {
  std::string method = "closed";
  int fock_dim = 0;  // 0: converge automatically
  double tol = kDefaultFockTolerance;
  int nodes = 0;  // 0: 4 * dim
  int max_dim = 4096;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--method", method, "closed | fock | contour | bipartite")
        ->check(CLI::IsMember({"closed", "fock", "contour", "bipartite"}))
        ->capture_default_str();
    cmd->add_option("--fock-dim", fock_dim, "Truncation dimension (0 = auto-converge)")
        ->capture_default_str();
    cmd->add_option("--tol", tol, "Oracle convergence tolerance")->capture_default_str();
    cmd->add_option("--nodes", nodes, "Contour nodes (0 = 4 * dim)")->capture_default_str();
    cmd->add_option("--max-dim", max_dim, "Cap for automatic convergence")->capture_default_str();
  }
};

// One correlation by the requested route.
CorrelationResult correlation_by(const OracleFlags& flags, const MeasurementParams& p, double phi,
                                 WorkspaceCache& cache) {
  const Method method = method_from_string(flags.method);
  if (method == Method::closed) {
    CorrelationResult r;
    r.value = correlation_closed(p, phi);
    return r;
  }
  if (method == Method::bipartite) {
    const auto ws = flags.fock_dim > 0
                        ? cache.get(p.gamma(), flags.fock_dim)
                        : converged_workspace(p, {0.0}, {phi}, flags.tol, cache, flags.max_dim);
    const JointDistribution joint = joint_distribution(p, {0.0}, {phi}, *ws, flags.tol);
    CorrelationResult r;
    r.value = correlation_bipartite(p, {0.0}, {phi}, *ws);
    r.method = Method::bipartite;
    r.dim_used = ws->dim();
    r.tail_weight = joint.tail;
    r.converged = !joint.flagged;
    return r;
  }
  int dim = flags.fock_dim;
  if (dim == 0) {
    const CorrelationResult converged = auto_converge(p, phi, flags.tol, &cache, {64, flags.max_dim});
    if (method == Method::fock) return converged;
    dim = converged.dim_used;
  }
  const auto ws = cache.get(p.gamma(), dim);
  if (method == Method::fock) return correlation_fock(p, phi, *ws, flags.tol);
  return correlation_contour(p, phi, *ws, flags.nodes > 0 ? flags.nodes : 4 * dim);
}

CorrelationResult lg_by(const OracleFlags& flags, const MeasurementParams& p, double phi,
                        WorkspaceCache& cache) {
  const CorrelationResult one = correlation_by(flags, p, phi, cache);
  const CorrelationResult three = correlation_by(flags, p, 3.0 * phi, cache);
  CorrelationResult out = one;
  out.value = 3.0 * one.value - three.value;
  out.dim_used = std::max(one.dim_used, three.dim_used);
  out.converged = one.converged && three.converged;
  out.tail_weight = std::max(one.tail_weight, three.tail_weight);
  return out;
}

Table correlation_table() {
  Table t;
  t.columns = {"s", "gamma", "phi", "method", "value", "dim_used", "converged"};
  return t;
}

void add_correlation_row(Table& t, const MeasurementParams& p, double phi,
                         const OracleFlags& flags, const CorrelationResult& r) {
  t.add_row({p.s(), p.gamma(), phi, flags.method, r.value, std::int64_t{r.dim_used},
             r.converged});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leggett-Garg inequality explorer for a harmonic oscillator with S = s^n"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags override it");

  std::string format = "csv";
  std::string out_path;
  int workers = 1;
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "Write output to FILE instead of stdout");
  app.add_option("--parallel", workers, "Worker threads for grid evaluations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  double s = 0.0, gamma = 1.0, phi = 0.0;
  auto add_point = [&](CLI::App* cmd, bool with_phi = true) {
    cmd->add_option("--s", s, "Step parameter, |s| <= 1")->required();
    cmd->add_option("--gamma", gamma, "Squeezing parameter, > 0")->required();
    if (with_phi) cmd->add_option("--phi", phi, "Phase omega*t between measurements")->required();
  };

  OracleFlags oracle;

  auto* correlation_cmd = app.add_subcommand("correlation", "Two-time correlation C(s, gamma, phi)");
  add_point(correlation_cmd);
  oracle.add_to(correlation_cmd);

  auto* lg_cmd = app.add_subcommand("lg", "LG expectation 3C(phi) - C(3phi)");
  add_point(lg_cmd);
  oracle.add_to(lg_cmd);

  std::string scan_s = "0.9,0.99", scan_gamma = "2,5,7.6", scan_phi = "0.05:1.5:30";
  std::string quantity = "lg";
  auto* scan_cmd = app.add_subcommand("scan", "Evaluate over an (s, gamma, phi) grid");
  scan_cmd->add_option("--s", scan_s, "Values: a,b,c or lo:hi:count")->capture_default_str();
  scan_cmd->add_option("--gamma", scan_gamma, "Values: a,b,c or lo:hi:count")->capture_default_str();
  scan_cmd->add_option("--phi", scan_phi, "Values: a,b,c or lo:hi:count")->capture_default_str();
  scan_cmd->add_option("--quantity", quantity, "lg | correlation")
      ->check(CLI::IsMember({"lg", "correlation"}))
      ->capture_default_str();
  oracle.add_to(scan_cmd);

  double s_min = 0.95, s_max = 0.999, gamma_min = 2.0, gamma_max = 20.0;
  int s_count = 100, gamma_count = 100, phi_grid = 400;
  double phi_max = kPi / 2;
  auto* region_cmd = app.add_subcommand("region", "Violation map of max_phi <LG> and thresholds");
  region_cmd->add_option("--s-min", s_min)->capture_default_str();
  region_cmd->add_option("--s-max", s_max)->capture_default_str();
  region_cmd->add_option("--s-count", s_count)->capture_default_str();
  region_cmd->add_option("--gamma-min", gamma_min)->capture_default_str();
  region_cmd->add_option("--gamma-max", gamma_max)->capture_default_str();
  region_cmd->add_option("--gamma-count", gamma_count)->capture_default_str();
  region_cmd->add_option("--phi-max", phi_max, "Upper end of the phase window")->capture_default_str();
  region_cmd->add_option("--phi-grid", phi_grid, "Coarse phase points")->capture_default_str();

  std::string optimal_s = "0.99";
  auto* optimal_cmd = app.add_subcommand("optimal-gamma", "Squeezing maximizing the violation for s");
  optimal_cmd->add_option("--s", optimal_s, "Values: a,b,c or lo:hi:count")->capture_default_str();

  std::string scaling_x = "0.05,0.1,0.24,0.5,1,2";
  std::string scaling_eps = "1e-3,1e-4,1e-5,1e-6";
  auto* scaling_cmd = app.add_subcommand("scaling", "Convergence of <LG> to the scaling form");
  scaling_cmd->add_option("--x", scaling_x, "Scaling variable values (> 0)")->capture_default_str();
  scaling_cmd->add_option("--one-minus-s", scaling_eps, "Decreasing 1 - s values")
      ->capture_default_str();

  double eps = 1e-4;
  auto* semi_cmd = app.add_subcommand("semiclassical", "First-order semiclassical <LG>");
  semi_cmd->add_option("--gamma", gamma)->required();
  semi_cmd->add_option("--phi", phi)->required();
  semi_cmd->add_option("--eps", eps, "hbar/A0 = -ln s")->capture_default_str();

  std::uint64_t samples = 1'000'000, seed = 0;
  bool quadrature = false, unclipped = false;
  int quad_nodes = 64;
  auto* classical_cmd = app.add_subcommand("classical", "Hidden-trajectory LG expectation");
  add_point(classical_cmd);
  classical_cmd->add_option("--samples", samples)->capture_default_str();
  classical_cmd->add_option("--seed", seed)->capture_default_str();
  classical_cmd->add_flag("--quadrature", quadrature, "Deterministic Gauss-Hermite grid");
  classical_cmd->add_option("--nodes", quad_nodes, "Quadrature nodes per axis")->capture_default_str();
  classical_cmd->add_flag("--unclipped", unclipped, "Assign the (improper) Weyl symbol instead");

  double phi_a = 0.0, phi_b = 0.0, efficiency = 1.0;
  std::uint64_t shots = 1'000'000;
  int nmax_detector = -1, photon_dim = 0, photon_max_dim = 4096;
  double photon_tol = kDefaultFockTolerance;
  auto* photon_cmd = app.add_subcommand("photon", "Entangled-photon counting experiment");
  add_point(photon_cmd, false);
  photon_cmd->add_option("--phi-a", phi_a)->capture_default_str();
  photon_cmd->add_option("--phi-b", phi_b)->capture_default_str();
  photon_cmd->add_option("--shots", shots)->capture_default_str();
  photon_cmd->add_option("--seed", seed)->capture_default_str();
  photon_cmd->add_option("--nmax-detector", nmax_detector, "Largest resolvable count (-1 = none)")
      ->capture_default_str();
  photon_cmd->add_option("--efficiency", efficiency)->capture_default_str();
  photon_cmd->add_option("--fock-dim", photon_dim, "Truncation dimension (0 = auto)")->capture_default_str();
  photon_cmd->add_option("--tol", photon_tol, "Lost-probability tolerance for auto truncation")
      ->capture_default_str();
  photon_cmd->add_option("--max-dim", photon_max_dim)->capture_default_str();

  std::string settings = "0,0,0.3,0.9";
  bool search = false;
  auto* chsh_cmd = app.add_subcommand("photon-chsh", "CHSH combination of bipartite correlations");
  add_point(chsh_cmd, false);
  chsh_cmd->add_option("--settings", settings, "a,a',b,b' arm phases")->capture_default_str();
  chsh_cmd->add_flag("--search", search, "Search the four settings for the largest value");
  chsh_cmd->add_option("--fock-dim", photon_dim, "Truncation dimension (0 = auto)")->capture_default_str();
  chsh_cmd->add_option("--tol", photon_tol, "Lost-probability tolerance for auto truncation")
      ->capture_default_str();
  chsh_cmd->add_option("--max-dim", photon_max_dim)->capture_default_str();

  double verify_tol = 1e-6;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-validation report");
  verify_cmd->add_option("--tol", verify_tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitDomain;
  }

  Table table;
  int exit_code = 0;
  try {
    WorkspaceCache cache;
    CLI::App* cmd = app.get_subcommands().front();

    if (cmd == correlation_cmd || cmd == lg_cmd) {
      const MeasurementParams p(s, gamma);
      table = correlation_table();
      const CorrelationResult r = cmd == lg_cmd ? lg_by(oracle, p, phi, cache)
                                                : correlation_by(oracle, p, phi, cache);
      add_correlation_row(table, p, phi, oracle, r);
    } else if (cmd == scan_cmd) {
      const auto ss = parse_values(scan_s);
      const auto gs = parse_values(scan_gamma);
      const auto ps = parse_values(scan_phi);
      struct Cellpoint {
        double s, gamma, phi;
      };
      std::vector<Cellpoint> points;
      for (double a : ss)
        for (double b : gs)
          for (double c : ps) points.push_back({a, b, c});
      std::vector<CorrelationResult> results(points.size());
      parallel_for(points.size(), workers, [&](std::size_t k) {
        const MeasurementParams p(points[k].s, points[k].gamma);
        results[k] = quantity == "lg" ? lg_by(oracle, p, points[k].phi, cache)
                                      : correlation_by(oracle, p, points[k].phi, cache);
      });
      table = correlation_table();
      table.columns[4] = quantity;
      for (std::size_t k = 0; k < points.size(); ++k) {
        add_correlation_row(table, MeasurementParams(points[k].s, points[k].gamma), points[k].phi,
                            oracle, results[k]);
      }
    } else if (cmd == region_cmd) {
      RegionOptions options;
      options.workers = workers;
      options.window = {0.0, phi_max};
      options.search.grid = phi_grid;
      const ViolationRegion region = violation_region(linspace(s_min, s_max, s_count),
                                                      linspace(gamma_min, gamma_max, gamma_count),
                                                      options);
      table.columns = {"s", "gamma", "max_lg", "phi_star", "violation"};
      for (int i = 0; i < static_cast<int>(region.s_values.size()); ++i)
        for (int j = 0; j < static_cast<int>(region.gamma_values.size()); ++j)
          table.add_row({region.s_values[i], region.gamma_values[j], region.max_lg(i, j),
                         region.phi_star(i, j), region.violation(i, j)});
      table.summary = {{"grid", std::to_string(s_count) + "x" + std::to_string(gamma_count)},
                       {"s_cr", region.s_cr ? Cell{*region.s_cr} : Cell{std::string("none")}},
                       {"gamma_cr", region.gamma_cr ? Cell{*region.gamma_cr} : Cell{std::string("none")}},
                       {"best_lg", region.best_lg},
                       {"best_s", region.best_s},
                       {"best_gamma", region.best_gamma},
                       {"best_phi", region.best_phi}};
    } else if (cmd == optimal_cmd) {
      const auto ss = parse_values(optimal_s);
      std::vector<OptimalGamma> results(ss.size());
      parallel_for(ss.size(), workers, [&](std::size_t k) { results[k] = optimal_gamma_for_s(ss[k]); });
      table.columns = {"s", "gamma_star", "phi_star", "lg_star", "violation"};
      for (std::size_t k = 0; k < ss.size(); ++k)
        table.add_row({ss[k], results[k].gamma, results[k].phi, results[k].lg, results[k].violation});
    } else if (cmd == scaling_cmd) {
      const auto xs = parse_values(scaling_x);
      const auto es = parse_values(scaling_eps);
      const ScalingTable st = scaling_convergence(xs, es);
      table.columns = {"one_minus_s", "x", "gamma", "phi", "lg", "lambda", "abs_err"};
      for (const ScalingRow& r : st.rows)
        table.add_row({r.one_minus_s, r.x, r.gamma, r.phi, r.lg, r.lambda, r.abs_error});
      for (std::size_t k = 0; k < es.size(); ++k)
        table.summary.emplace_back("sup_error[" + format_double(es[k]) + "]", st.sup_error[k]);
      table.summary.emplace_back("sup_decreasing", st.sup_decreasing);
      const LgMaximum lm = lambda_maximum();
      table.summary.emplace_back("lambda_max_x", lm.phi);
      table.summary.emplace_back("lambda_max", lm.lg);
    } else if (cmd == semi_cmd) {
      const SemiclassicalCoeffs fg = semiclassical_coeffs(gamma);
      const double first_order = semiclassical_lg(gamma, phi, eps);
      const double exact = lg_value(MeasurementParams(std::exp(-eps), gamma), phi);
      table.columns = {"gamma", "phi", "eps", "f", "g", "first_order", "exact", "slope",
                       "predicted_slope"};
      table.add_row({gamma, phi, eps, fg.f, fg.g, first_order, exact, (exact - 2.0) / eps,
                     (first_order - 2.0) / eps});
    } else if (cmd == classical_cmd) {
      const MeasurementParams p(s, gamma);
      const ValueAssignment assignment =
          unclipped ? ValueAssignment::weyl_symbol : ValueAssignment::clipped_action;
      const ClassicalEstimate est =
          quadrature ? classical_lg_quadrature(p, phi, quad_nodes, assignment)
                     : classical_lg(p, phi, {samples, seed, 16}, assignment, workers);
      table.columns = {"s", "gamma", "phi", "method", "assignment", "value", "stderr", "quantum_lg"};
      table.add_row({s, gamma, phi, std::string(quadrature ? "quadrature" : "monte_carlo"),
                     std::string(unclipped ? "weyl_symbol" : "clipped_action"), est.value,
                     est.std_error, lg_value(p, phi)});
    } else if (cmd == photon_cmd) {
      const MeasurementParams p(s, gamma);
      const auto ws = photon_dim > 0 ? cache.get(gamma, photon_dim)
                                     : converged_workspace(p, {phi_a}, {phi_b}, photon_tol, cache,
                                                           photon_max_dim);
      ShotConfig cfg;
      cfg.shots = shots;
      cfg.seed = seed;
      cfg.efficiency = efficiency;
      if (nmax_detector >= 0) cfg.n_max_detector = nmax_detector;
      const SampleResult r = sample_experiment(p, {phi_a}, {phi_b}, *ws, cfg, workers);
      const JointDistribution joint = joint_distribution(p, {phi_a}, {phi_b}, *ws);
      table.columns = {"s", "gamma", "phi_a", "phi_b", "method", "estimate", "stderr",
                       "truncated_fraction", "exact", "dim_used", "joint_tail"};
      table.add_row({s, gamma, phi_a, phi_b, std::string("monte_carlo"), r.estimate, r.std_error,
                     r.truncated_fraction, correlation_bipartite(p, {phi_a}, {phi_b}, *ws),
                     std::int64_t{ws->dim()}, joint.tail});
    } else if (cmd == chsh_cmd) {
      const MeasurementParams p(s, gamma);
      // Settings range over [-pi/2, pi/2]; converge for the worst arm phases.
      auto workspace_for = [&](double a, double b) {
        if (photon_dim > 0) return cache.get(gamma, photon_dim);
        return converged_workspace(p, {a}, {b}, photon_tol, cache, photon_max_dim);
      };
      table.columns = {"s", "gamma", "a", "a_prime", "b", "b_prime", "chsh", "dim_used", "method"};
      if (search) {
        const auto ws = workspace_for(kPi / 2, kPi / 2);
        const ChshSearchResult r = chsh_search(p, *ws);
        table.add_row({s, gamma, r.settings[0], r.settings[1], r.settings[2], r.settings[3],
                       r.value, std::int64_t{ws->dim()}, std::string("search")});
      } else {
        const auto v = parse_values(settings);
        if (v.size() != 4) throw DomainError("--settings needs four phases a,a',b,b'");
        std::shared_ptr<const FockWorkspace> ws;
        for (double a : {v[0], v[1]})
          for (double b : {v[2], v[3]}) {
            auto candidate = workspace_for(a, b);
            if (!ws || candidate->dim() > ws->dim()) ws = candidate;
          }
        table.add_row({s, gamma, v[0], v[1], v[2], v[3],
                       chsh_value(p, {v[0]}, {v[1]}, {v[2]}, {v[3]}, *ws),
                       std::int64_t{ws->dim()}, std::string("exact")});
      }
    } else if (cmd == verify_cmd) {
      VerifyOptions options;
      options.tol = verify_tol;
      const VerifyReport report = verify(options);
      table.columns = {"check", "passed", "deviation", "threshold", "detail"};
      for (const VerifyCheck& c : report.checks)
        table.add_row({c.name, c.passed, c.deviation, c.threshold, c.detail});
      table.summary.emplace_back("all_passed", report.all_passed());
      if (!report.all_passed()) exit_code = kExitVerify;
    }

    table.header.emplace_back("command", cmd->get_name());
    for (const std::string& line : split_lines(app.config_to_str(true, false))) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const auto dot = key.find('.');
      if (dot != std::string::npos && key.substr(0, dot) != cmd->get_name()) continue;
      std::string value = line.substr(eq + 1);
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        value = value.substr(1, value.size() - 2);
      table.header.emplace_back(key, value);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "lgosc: " << e.what() << " (best estimate " << format_double(e.best_estimate())
              << " at dim " << e.dim_used() << ")\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "lgosc: " << e.what() << '\n';
    return kExitDomain;
  }

  const Format fmt = format_from_string(format);
  if (out_path.empty()) {
    write_table(std::cout, table, fmt);
  } else {
    std::ofstream file(out_path);
    if (!file) {
      std::cerr << "lgosc: cannot open " << out_path << '\n';
      return kExitDomain;
    }
    write_table(file, table, fmt);
  }
  return exit_code;
}
