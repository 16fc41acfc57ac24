#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clms/scenario.hpp"

namespace clms {

/// A step size given either absolutely or as a multiple of mu_max.
struct StepSize {
  double value = 0.0;
  bool relative = false;

  double resolve(double mu_max) const { return relative ? value * mu_max : value; }
  std::string text() const;
};

enum class InitialWeights { min_norm, optimum };  // w_0 = q or w_0 = g

/// Explicit ground truth; replaces the seeded random scenario when present.
struct ExplicitScenario {
  Vector h;
  Matrix R;
  Matrix C;
  Vector f;
};

struct ExperimentConfig {
  std::uint64_t seed = 42;                 // scenario generator seed
  std::optional<std::uint64_t> mc_seed;    // Monte Carlo master seed, defaults to seed
  int L = 7;
  int K = 3;
  std::optional<std::vector<double>> eta;  // per-command defaults when unset
  std::optional<std::vector<StepSize>> mu;
  std::size_t runs = 10'000;
  std::optional<std::size_t> iters;        // unset: "auto"
  std::size_t ss_window = 1'000;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;
  InitialWeights init = InitialWeights::min_norm;
  std::optional<ExplicitScenario> scenario;

  std::uint64_t monte_carlo_seed() const { return mc_seed.value_or(seed); }
};

/// (key, value) pairs from the command line; applied after the file.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses flat "key = value" lines ('#' starts a comment). Errors carry the
/// source name and line, or the flag name for overrides.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const ConfigOverrides& overrides = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const ConfigOverrides& overrides = {});

/// Serializes a spec as config lines (L, K, eta, h, R, C, f), column-major.
std::string spec_to_config(const SystemSpec& spec);

/// The spec a config describes, with the given noise variance.
SystemSpec scenario_from_config(const ExperimentConfig& config, double eta);

}  // namespace clms
