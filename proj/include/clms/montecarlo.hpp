#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "clms/scenario.hpp"

namespace clms {

enum class StreamRole : std::uint64_t { input = 1, noise = 2 };

/// Seed for the (run, role) substream of a master seed. Runs draw from
/// disjoint, order-independent streams so any execution order replays.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run, StreamRole role);

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() { return normal_(engine_); }
  void fill(Vector& out) {
    for (auto& v : out) v = normal_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// x = factor * z with z standard normal; factor is spd_sqrt(R).
Vector sample_input(const Matrix& factor, GaussianStream& rng);

struct RunTrace {
  std::vector<double> deviation;   // ||w_n - g||^2 for n = 0..iters (truncated on divergence)
  std::vector<double> apriori_sq;  // (y_n - w_{n-1}^T x_n)^2 for n = 1..iters
  std::optional<std::size_t> diverged_at;
  double max_constraint_violation = 0.0;  // max_n ||C^T w_n - f||_inf
};

RunTrace simulate_run(const SystemSpec& spec, const DerivedModel& model, double mu,
                      std::size_t iters, GaussianStream& input_rng, GaussianStream& noise_rng,
                      const std::optional<Vector>& w0 = std::nullopt);

struct RunConfig {
  std::size_t runs = 10'000;
  std::size_t iters = 0;
  std::size_t ss_window = 1'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;               // 0: hardware concurrency
  std::optional<Vector> initial_weights;  // defaults to q
};

struct EnsembleStats {
  std::vector<double> msd;     // length iters + 1
  std::vector<double> msd_se;  // standard error of each msd entry
  double msd_ss = 0.0;
  double mse_ss = 0.0;         // mean a priori squared error over the window
  double zeta_emp = 0.0;
  std::size_t completed = 0;
  std::size_t diverged = 0;
  double max_constraint_violation = 0.0;
};

/// Averages independent runs. Reduction order is fixed by run index, so the
/// result is bitwise identical for any thread count.
EnsembleStats ensemble_msd_curve(const SystemSpec& spec, const DerivedModel& model, double mu,
                                 const RunConfig& config);

}  // namespace clms
