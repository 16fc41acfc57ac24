#include "clms/filter.hpp"

#include <cmath>

#include "clms/errors.hpp"

namespace clms {

FilterState init_state(const DerivedModel& model) {
  return FilterState{model.q, 0};
}

ClmsFilter::ClmsFilter(const DerivedModel& model, double mu, const Vector& w0)
    : model_(&model), mu_(mu), w_(w0), scratch_(w0.size()) {
  if (w0.size() != model.P.rows()) throw ShapeError("initial weights have the wrong length");
}

double ClmsFilter::step(const Vector& x, double y) {
  const double err = y - w_.dot(x);
  scratch_ = w_;
  scratch_.noalias() += (mu_ * err) * x;
  w_.noalias() = model_->P * scratch_;
  w_ += model_->q;
  ++n_;
  return err;
}

bool ClmsFilter::diverged() const {
  return !w_.allFinite() || w_.cwiseAbs().maxCoeff() > kDivergenceThreshold;
}

FilterState clms_step(const FilterState& state, const Sample& sample, double mu,
                      const DerivedModel& model) {
  const auto L = model.P.rows();
  if (state.w.size() != L || sample.x.size() != L) {
    throw ShapeError("clms_step: vector lengths do not match the model order");
  }
  if (!sample.x.allFinite() || !std::isfinite(sample.y)) {
    throw DataError("clms_step: sample contains non-finite values");
  }
  ClmsFilter stepper(model, mu, state.w);
  stepper.step(sample.x, sample.y);
  return FilterState{stepper.weights(), state.n + 1};
}

FilterRun run_filter(const DerivedModel& model, std::span<const Sample> samples, double mu) {
  FilterRun out;
  out.deviation.reserve(samples.size());
  ClmsFilter stepper(model, mu);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const auto& s = samples[n];
    if (!s.x.allFinite() || !std::isfinite(s.y)) {
      throw DataError("run_filter: sample contains non-finite values");
    }
    stepper.step(s.x, s.y);
    if (stepper.diverged()) {
      out.diverged_at = n;
      break;
    }
    out.deviation.push_back(stepper.deviation_sq());
  }
  return out;
}

}  // namespace clms
