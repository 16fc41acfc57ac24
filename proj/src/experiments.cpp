#include "clms/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clms/errors.hpp"

namespace clms {

namespace {

std::vector<StepSize> relative(std::initializer_list<double> fractions) {
  std::vector<StepSize> out;
  for (double f : fractions) out.push_back({f, true});
  return out;
}

double first_eta(const ExperimentConfig& config, double fallback) {
  return config.eta ? config.eta->front() : fallback;
}

std::string short_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Cell optional_cell(const std::optional<double>& v) { return v; }

struct CellResult {
  double mu;
  std::size_t iters;
  EnsembleStats stats;
};

CellResult simulate_cell(const ExperimentConfig& config, const Scenario& scenario, double mu) {
  const auto iters = iteration_budget(config, scenario, mu);
  return {mu, iters, ensemble_msd_curve(scenario.spec, scenario.model, mu,
                                        run_config(config, scenario, iters))};
}

void report(const Progress& progress, const std::string& line) {
  if (progress) progress(line);
}

}  // namespace

std::vector<StepSize> default_fig1_steps() { return relative({0.2, 0.1, 0.05, 0.02}); }
std::vector<StepSize> default_fig2_steps() { return relative({0.05, 0.1}); }
std::vector<StepSize> default_fig3_steps() { return relative({0.02, 0.05, 0.1, 0.2, 0.3, 0.4}); }
std::vector<double> default_fig2_etas() { return {1e-4, 1e-3, 1e-2, 1e-1}; }

double to_db(double power) { return 10.0 * std::log10(power); }

Scenario make_scenario(const ExperimentConfig& config, double eta) {
  Scenario s;
  s.spec = scenario_from_config(config, eta);
  s.model = derive_model(s.spec);
  s.w0 = config.init == InitialWeights::optimum ? s.model.g : s.model.q;
  s.d0 = s.w0 - s.model.g;
  s.mu_max = stability_max_step(s.model);
  return s;
}

std::vector<double> resolve_steps(const Scenario& scenario, const std::vector<StepSize>& steps) {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& step : steps) {
    const double mu = step.resolve(scenario.mu_max);
    require_mean_square_stable(scenario.model, mu);
    out.push_back(mu);
  }
  return out;
}

std::size_t iteration_budget(const ExperimentConfig& config, const Scenario& scenario, double mu) {
  if (config.iters) return *config.iters;
  const auto settle = iterations_to_steady_state(scenario.model, scenario.d0, mu);
  if (!settle) {
    std::ostringstream msg;
    msg << "theory curve does not settle for mu=" << mu << "; set iters explicitly";
    throw ConfigError(msg.str());
  }
  return std::max(2 * *settle, *settle + config.ss_window);
}

RunConfig run_config(const ExperimentConfig& config, const Scenario& scenario, std::size_t iters) {
  RunConfig rc;
  rc.runs = config.runs;
  rc.iters = iters;
  rc.ss_window = std::min(config.ss_window, iters);
  rc.seed = config.monte_carlo_seed();
  rc.threads = config.threads;
  rc.initial_weights = scenario.w0;
  return rc;
}

std::vector<NamedTable> run_fig1(const ExperimentConfig& config, const Progress& progress) {
  const auto scenario = make_scenario(config, first_eta(config, kFig1Eta));
  const auto steps = config.mu.value_or(default_fig1_steps());
  const auto mus = resolve_steps(scenario, steps);

  std::vector<NamedTable> out;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const auto cell = simulate_cell(config, scenario, mus[k]);
    const auto theory = transient_msd_curve(scenario.model, scenario.d0, cell.mu, cell.iters);
    NamedTable nt;
    nt.file_name = "fig1_mu_" + short_number(cell.mu) + ".csv";
    nt.table.columns = {"iter", "msd_theory", "msd_empirical", "msd_theory_db", "msd_empirical_db"};
    nt.table.rows.reserve(theory.size());
    for (std::size_t n = 0; n < theory.size(); ++n) {
      const double th = theory[n];
      const double em = cell.stats.msd[n];
      nt.table.rows.push_back({static_cast<double>(n), th, em, to_db(th), to_db(em)});
    }
    out.push_back(std::move(nt));
    report(progress, "fig1 mu=" + short_number(cell.mu) + " (" + steps[k].text() + ") iters=" +
                         std::to_string(cell.iters) + " diverged=" + std::to_string(cell.stats.diverged));
  }
  return out;
}

NamedTable run_fig2(const ExperimentConfig& config, const Progress& progress) {
  const auto etas = config.eta.value_or(default_fig2_etas());
  const auto steps = config.mu.value_or(default_fig2_steps());
  NamedTable nt;
  nt.file_name = "fig2.csv";
  nt.table.columns = {"eta", "mu", "ssmsd_theory", "ssmsd_empirical", "ssmsd_theory_db",
                      "ssmsd_empirical_db"};
  for (double eta : etas) {
    const auto scenario = make_scenario(config, eta);
    for (double mu : resolve_steps(scenario, steps)) {
      const double theory = steady_state_msd(scenario.model, mu);
      const auto cell = simulate_cell(config, scenario, mu);
      nt.table.rows.push_back({eta, mu, theory, cell.stats.msd_ss, to_db(theory),
                               to_db(cell.stats.msd_ss)});
      report(progress, "fig2 eta=" + short_number(eta) + " mu=" + short_number(mu));
    }
  }
  return nt;
}

NamedTable run_fig3(const ExperimentConfig& config, const Progress& progress) {
  const auto scenario = make_scenario(config, first_eta(config, kFig1Eta));
  const auto steps = config.mu.value_or(default_fig3_steps());
  NamedTable nt;
  nt.file_name = "fig3.csv";
  nt.table.columns = {"mu", "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max", "zeta_empirical"};
  for (double mu : resolve_steps(scenario, steps)) {
    const auto p = predict(scenario.model, scenario.d0, mu, 0);
    const auto cell = simulate_cell(config, scenario, mu);
    nt.table.rows.push_back({mu, p.zeta_direct, optional_cell(p.zeta_eigen), optional_cell(p.zeta_min),
                             optional_cell(p.zeta_max), cell.stats.zeta_emp});
    report(progress, "fig3 mu=" + short_number(mu));
  }
  return nt;
}

NamedTable run_custom(const ExperimentConfig& config, const Progress& progress) {
  const auto etas = config.eta.value_or(std::vector<double>{kFig1Eta});
  const auto steps = config.mu.value_or(default_fig2_steps());
  NamedTable nt;
  nt.file_name = "custom.csv";
  nt.table.columns = {"eta", "mu", "mu_over_mu_max", "iters", "msd_ss_theory", "msd_ss_empirical",
                      "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max", "zeta_empirical",
                      "diverged"};
  for (double eta : etas) {
    const auto scenario = make_scenario(config, eta);
    for (double mu : resolve_steps(scenario, steps)) {
      const auto p = predict(scenario.model, scenario.d0, mu, 0);
      const auto cell = simulate_cell(config, scenario, mu);
      nt.table.rows.push_back({eta, mu, mu / scenario.mu_max, static_cast<double>(cell.iters), p.msd_ss,
                               cell.stats.msd_ss, p.zeta_direct, optional_cell(p.zeta_eigen),
                               optional_cell(p.zeta_min), optional_cell(p.zeta_max),
                               cell.stats.zeta_emp, static_cast<double>(cell.stats.diverged)});
      report(progress, "custom eta=" + short_number(eta) + " mu=" + short_number(mu));
    }
  }
  return nt;
}

std::string validate_report(const ExperimentConfig& config) {
  const auto s = make_scenario(config, first_eta(config, kFig1Eta));
  const auto& m = s.model;
  const auto L = m.L();
  std::ostringstream os;
  os.precision(10);
  os << "L = " << L << ", K = " << s.spec.K << ", eta = " << s.spec.eta;
  if (!config.scenario) os << ", seed = " << config.seed;
  os << '\n';
  os << "mu_max (2/(2 lambda_max + tr Z)) = " << s.mu_max << '\n';
  os << "tr{Z} = " << m.trace_Z() << '\n';
  os << "nonzero spectrum of Z:";
  for (double l : m.lambdas) os << ' ' << l;
  os << '\n';
  os << "e^T R e = " << weighted_sq_norm(m.e, m.R) << '\n';
  os << "||d_0||^2 = " << s.d0.squaredNorm() << '\n';
  os << "residuals:\n";
  os << "  ||P^2 - P||_F       = " << (m.P * m.P - m.P).norm() << '\n';
  os << "  ||P C||_F           = " << (m.P * s.spec.C).norm() << '\n';
  os << "  ||C^T q - f||_inf   = " << (s.spec.C.transpose() * m.q - s.spec.f).cwiseAbs().maxCoeff() << '\n';
  os << "  ||C^T g - f||_inf   = " << (s.spec.C.transpose() * m.g - s.spec.f).cwiseAbs().maxCoeff() << '\n';
  os << "  ||P R e||_inf       = " << (m.P * m.R * m.e).cwiseAbs().maxCoeff() << '\n';
  os << "spectral radius of F at 0.99 mu_max = " << spectral_radius(build_F(m, 0.99 * s.mu_max)) << '\n';
  return os.str();
}

std::vector<std::filesystem::path> write_tables(const std::filesystem::path& dir,
                                                const std::vector<NamedTable>& tables) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& t : tables) {
    out.push_back(dir / t.file_name);
    write_csv(out.back(), t.table);
  }
  return out;
}

}  // namespace clms
