#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "clms/scenario.hpp"

namespace clms {

struct Sample {
  Vector x;
  double y = 0.0;
  double v = 0.0;  // drawn noise, diagnostics only
};

struct FilterState {
  Vector w;
  std::size_t n = 0;
};

/// Any |w_i| beyond this marks a run as diverged.
inline constexpr double kDivergenceThreshold = 1e100;

/// w_0 = q, the minimum-norm feasible point.
FilterState init_state(const DerivedModel& model);

/// One CLMS update, w <- P [w + mu (y - w^T x) x] + q.
FilterState clms_step(const FilterState& state, const Sample& sample, double mu,
                      const DerivedModel& model);

struct FilterRun {
  std::vector<double> deviation;  // ||w_n - g||^2 after sample n
  std::optional<std::size_t> diverged_at;
};

FilterRun run_filter(const DerivedModel& model, std::span<const Sample> samples, double mu);

/// In-place stepper for hot loops; keeps its scratch buffer between calls.
class ClmsFilter {
 public:
  ClmsFilter(const DerivedModel& model, double mu, const Vector& w0);
  explicit ClmsFilter(const DerivedModel& model, double mu)
      : ClmsFilter(model, mu, model.q) {}

  /// Applies one update and returns the a priori error y - w_{n-1}^T x.
  double step(const Vector& x, double y);

  const Vector& weights() const { return w_; }
  std::size_t iteration() const { return n_; }
  double deviation_sq() const { return (w_ - model_->g).squaredNorm(); }
  bool diverged() const;

 private:
  const DerivedModel* model_;
  double mu_;
  Vector w_;
  Vector scratch_;
  std::size_t n_ = 0;
};

}  // namespace clms
