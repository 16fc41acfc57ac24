// clms: reproduces the CLMS theory-vs-simulation experiments as CSV files.
//
//   clms fig1 [--config FILE] [overrides...]   MSD vs iteration, one CSV per step size
//   clms fig2 ...                              steady-state MSD vs noise variance
//   clms fig3 ...                              misadjustment vs step size
//   clms custom ...                            arbitrary eta x mu grid
//   clms validate ...                          derived-model diagnostics
//
// Exit codes: 0 success, 1 configuration error, 2 instability refusal,
// 3 ensemble failure.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "clms/errors.hpp"
#include "clms/experiments.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfig = 1, kUnstable = 2, kEnsemble = 3 };

// Flag name -> config key. Flags override values read from --config.
const std::map<std::string, std::string> kFlags = {
    {"seed", "seed"},   {"mc-seed", "mc_seed"},     {"L", "L"},         {"K", "K"},
    {"eta", "eta"},     {"mu", "mu"},               {"runs", "runs"},   {"iters", "iters"},
    {"ss-window", "ss_window"}, {"out", "output_dir"}, {"threads", "threads"}, {"init", "init"},
};

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("-c,--config", inv.config_path, "flat key = value config file");
  cmd->add_flag("-q,--quiet", inv.quiet, "suppress progress lines");
  for (const auto& [flag, key] : kFlags) {
    cmd->add_option("--" + flag, inv.values[key], "override config key '" + key + "'");
  }
}

clms::ExperimentConfig load(const Invocation& inv) {
  clms::ConfigOverrides overrides;
  for (const auto& [key, value] : inv.values) {
    if (!value.empty()) overrides.emplace_back(key, value);
  }
  if (inv.config_path.empty()) return clms::parse_config("", "<flags>", overrides);
  return clms::parse_config_file(inv.config_path, overrides);
}

void emit(const clms::ExperimentConfig& cfg, const std::vector<clms::NamedTable>& tables) {
  for (const auto& path : clms::write_tables(cfg.output_dir, tables)) {
    std::cout << "wrote " << path.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained LMS mean-square performance: theory vs Monte Carlo"};
  app.require_subcommand(1);

  Invocation inv;
  auto* fig1 = app.add_subcommand("fig1", "MSD versus iteration for several step sizes");
  auto* fig2 = app.add_subcommand("fig2", "steady-state MSD versus noise variance");
  auto* fig3 = app.add_subcommand("fig3", "steady-state misadjustment versus step size");
  auto* custom = app.add_subcommand("custom", "steady-state summary over an eta x mu grid");
  auto* validate = app.add_subcommand("validate", "print derived model diagnostics");
  for (auto* cmd : {fig1, fig2, fig3, custom, validate}) add_common(cmd, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    const auto cfg = load(inv);
    clms::Progress progress;
    if (!inv.quiet) progress = [](const std::string& line) { std::cerr << line << '\n'; };

    if (*validate) {
      std::cout << clms::validate_report(cfg);
    } else if (*fig1) {
      emit(cfg, clms::run_fig1(cfg, progress));
    } else if (*fig2) {
      emit(cfg, {clms::run_fig2(cfg, progress)});
    } else if (*fig3) {
      emit(cfg, {clms::run_fig3(cfg, progress)});
    } else if (*custom) {
      emit(cfg, {clms::run_custom(cfg, progress)});
    }
  } catch (const clms::InstabilityError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kUnstable;
  } catch (const clms::EnsembleError& e) {
    std::cerr << "ensemble failure: " << e.what() << '\n';
    return kEnsemble;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
