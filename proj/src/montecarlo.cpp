#include "clms/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "clms/errors.hpp"
#include "clms/filter.hpp"

namespace clms {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kReductionChunks = 64;

struct Partial {
  std::vector<double> sum;
  std::vector<double> sumsq;
  double apriori_sum = 0.0;
  std::size_t completed = 0;
  std::size_t diverged = 0;
  double max_violation = 0.0;
};

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run, StreamRole role) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ run);
  return splitmix64(h ^ static_cast<std::uint64_t>(role));
}

Vector sample_input(const Matrix& factor, GaussianStream& rng) {
  Vector z(factor.cols());
  rng.fill(z);
  return factor * z;
}

RunTrace simulate_run(const SystemSpec& spec, const DerivedModel& model, double mu,
                      std::size_t iters, GaussianStream& input_rng, GaussianStream& noise_rng,
                      const std::optional<Vector>& w0) {
  const Matrix factor = spd_sqrt(spec.R);
  const double noise_sd = std::sqrt(spec.eta);
  const Matrix Ct = spec.C.transpose();

  ClmsFilter filter(model, mu, w0 ? *w0 : model.q);
  RunTrace trace;
  trace.deviation.reserve(iters + 1);
  trace.apriori_sq.reserve(iters);
  trace.deviation.push_back(filter.deviation_sq());
  trace.max_constraint_violation = (Ct * filter.weights() - spec.f).cwiseAbs().maxCoeff();

  Vector z(spec.L);
  Vector x(spec.L);
  for (std::size_t n = 1; n <= iters; ++n) {
    input_rng.fill(z);
    x.noalias() = factor * z;
    const double v = noise_sd * noise_rng.next();
    const double y = x.dot(spec.h) + v;
    const double err = filter.step(x, y);
    if (filter.diverged()) {
      trace.diverged_at = n;
      return trace;
    }
    trace.apriori_sq.push_back(err * err);
    trace.deviation.push_back(filter.deviation_sq());
    trace.max_constraint_violation = std::max(
        trace.max_constraint_violation, (Ct * filter.weights() - spec.f).cwiseAbs().maxCoeff());
  }
  return trace;
}

EnsembleStats ensemble_msd_curve(const SystemSpec& spec, const DerivedModel& model, double mu,
                                 const RunConfig& config) {
  if (config.runs < 1) throw ArgumentError("ensemble needs at least one run");
  if (config.ss_window > config.iters) {
    std::ostringstream msg;
    msg << "ss_window (" << config.ss_window << ") exceeds iters (" << config.iters << ")";
    throw ArgumentError(msg.str());
  }
  const std::size_t len = config.iters + 1;
  const std::size_t chunk = (config.runs + kReductionChunks - 1) / kReductionChunks;
  const std::size_t n_chunks = (config.runs + chunk - 1) / chunk;
  std::vector<Partial> partials(n_chunks);

  auto work_chunk = [&](std::size_t c) {
    Partial& p = partials[c];
    p.sum.assign(len, 0.0);
    p.sumsq.assign(len, 0.0);
    const std::size_t first = c * chunk;
    const std::size_t last = std::min(config.runs, first + chunk);
    for (std::size_t run = first; run < last; ++run) {
      GaussianStream in(substream_seed(config.seed, run, StreamRole::input));
      GaussianStream noise(substream_seed(config.seed, run, StreamRole::noise));
      const auto trace =
          simulate_run(spec, model, mu, config.iters, in, noise, config.initial_weights);
      if (trace.diverged_at) {
        ++p.diverged;
        continue;
      }
      ++p.completed;
      for (std::size_t n = 0; n < len; ++n) {
        const double d = trace.deviation[n];
        p.sum[n] += d;
        p.sumsq[n] += d * d;
      }
      double window = 0.0;
      for (std::size_t n = config.iters - config.ss_window; n < config.iters; ++n) {
        window += trace.apriori_sq[n];
      }
      p.apriori_sum += window;
      p.max_violation = std::max(p.max_violation, trace.max_constraint_violation);
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) work_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) work_chunk(c);
      });
    }
  }

  EnsembleStats out;
  std::vector<double> sum(len, 0.0);
  std::vector<double> sumsq(len, 0.0);
  double apriori_sum = 0.0;
  for (const auto& p : partials) {
    for (std::size_t n = 0; n < len; ++n) {
      sum[n] += p.sum[n];
      sumsq[n] += p.sumsq[n];
    }
    apriori_sum += p.apriori_sum;
    out.completed += p.completed;
    out.diverged += p.diverged;
    out.max_constraint_violation = std::max(out.max_constraint_violation, p.max_violation);
  }
  if (out.completed == 0) {
    std::ostringstream msg;
    msg << "all " << out.diverged << " runs diverged at mu=" << mu;
    throw EnsembleError(msg.str());
  }

  const double count = static_cast<double>(out.completed);
  out.msd.resize(len);
  out.msd_se.assign(len, 0.0);
  for (std::size_t n = 0; n < len; ++n) {
    out.msd[n] = sum[n] / count;
    if (out.completed > 1) {
      const double var = std::max(0.0, (sumsq[n] - count * out.msd[n] * out.msd[n]) / (count - 1.0));
      out.msd_se[n] = std::sqrt(var / count);
    }
  }
  // Every run starts from the same w_0; keep its deviation free of summation rounding.
  const Vector& w0 = config.initial_weights ? *config.initial_weights : model.q;
  out.msd[0] = (w0 - model.g).squaredNorm();
  out.msd_se[0] = 0.0;

  if (config.ss_window > 0) {
    double window = 0.0;
    for (std::size_t n = len - config.ss_window; n < len; ++n) window += out.msd[n];
    out.msd_ss = window / static_cast<double>(config.ss_window);
    out.mse_ss = apriori_sum / (count * static_cast<double>(config.ss_window));
    // Undefined without a noise floor; reported as zero.
    const double sigma2 = model.min_mse();
    out.zeta_emp = sigma2 > 0.0 ? (out.mse_ss - sigma2) / sigma2 : 0.0;
  } else {
    out.msd_ss = out.msd.back();
  }
  return out;
}

}  // namespace clms
