#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "clms/config.hpp"
#include "clms/csv.hpp"
#include "clms/montecarlo.hpp"
#include "clms/theory.hpp"

namespace clms {

inline constexpr double kFig1Eta = 1e-2;

/// Default grids, as multiples of mu_max.
std::vector<StepSize> default_fig1_steps();
std::vector<StepSize> default_fig2_steps();
std::vector<StepSize> default_fig3_steps();
std::vector<double> default_fig2_etas();

/// A resolved problem instance ready for simulation.
struct Scenario {
  SystemSpec spec;
  DerivedModel model;
  Vector w0;
  Vector d0;  // w0 - g
  double mu_max = 0.0;
};

Scenario make_scenario(const ExperimentConfig& config, double eta);

/// Resolves the step list and refuses (InstabilityError) any step that fails
/// the mean-square stability gate.
std::vector<double> resolve_steps(const Scenario& scenario, const std::vector<StepSize>& steps);

/// Iteration budget for one cell: the configured value, or twice the theory
/// settling time (at least settling time plus the window) when "auto".
std::size_t iteration_budget(const ExperimentConfig& config, const Scenario& scenario, double mu);

RunConfig run_config(const ExperimentConfig& config, const Scenario& scenario, std::size_t iters);

struct NamedTable {
  std::string file_name;
  Table table;
};

/// Optional progress sink; receives one line per finished cell.
using Progress = std::function<void(const std::string&)>;

/// One table per step: iter, msd_theory, msd_empirical, and their dB forms.
std::vector<NamedTable> run_fig1(const ExperimentConfig& config, const Progress& progress = {});

/// eta, mu, ssmsd_theory, ssmsd_empirical, and dB forms.
NamedTable run_fig2(const ExperimentConfig& config, const Progress& progress = {});

/// mu, zeta_direct, zeta_eigen, zeta_min, zeta_max, zeta_empirical.
NamedTable run_fig3(const ExperimentConfig& config, const Progress& progress = {});

/// Full eta x mu grid with every steady-state quantity.
NamedTable run_custom(const ExperimentConfig& config, const Progress& progress = {});

/// Human-readable model diagnostics for the first configured eta.
std::string validate_report(const ExperimentConfig& config);

std::vector<std::filesystem::path> write_tables(const std::filesystem::path& dir,
                                                const std::vector<NamedTable>& tables);

double to_db(double power);

}  // namespace clms
