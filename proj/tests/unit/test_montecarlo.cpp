#include <doctest.h>

#include <set>

#include "clms/errors.hpp"
#include "clms/montecarlo.hpp"
#include "clms/theory.hpp"
#include "test_util.hpp"

using namespace clms;

namespace {

Matrix sample_covariance(const Matrix& factor, int draws, std::uint64_t seed) {
  GaussianStream s(seed);
  Matrix acc = Matrix::Zero(factor.rows(), factor.rows());
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_input(factor, s);
    acc += x * x.transpose();
  }
  return acc / draws;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("substreams are distinct per run and role") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t run = 0; run < 1000; ++run) {
    seen.insert(substream_seed(42, run, StreamRole::input));
    seen.insert(substream_seed(42, run, StreamRole::noise));
  }
  CHECK(seen.size() == 2000);
  CHECK(substream_seed(42, 3, StreamRole::input) == substream_seed(42, 3, StreamRole::input));
  CHECK(substream_seed(42, 3, StreamRole::input) != substream_seed(43, 3, StreamRole::input));
}

TEST_CASE("identity covariance sampling") {
  const Matrix cov = sample_covariance(Matrix::Identity(3, 3), 100'000, 1);
  CHECK((cov - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("diagonal covariance sampling") {
  Matrix R = Matrix::Zero(2, 2);
  R(0, 0) = 4.0;
  R(1, 1) = 1.0;
  const Matrix cov = sample_covariance(spd_sqrt(R), 100'000, 2);
  CHECK(std::abs(cov(0, 0) / 4.0 - 1.0) < 0.03);
  CHECK(std::abs(cov(1, 1) - 1.0) < 0.03);
}

TEST_CASE("zero factor gives zero input") {
  GaussianStream s(3);
  for (int k = 0; k < 10; ++k) CHECK(sample_input(Matrix::Zero(4, 4), s).isZero(0.0));
}

TEST_CASE("simulate_run: noiseless feasible optimum decays") {
  auto spec = clms::testing::make_feasible(random_scenario(11, 7, 3));
  spec.eta = 0.0;
  const auto m = derive_model(spec);
  GaussianStream in(1), noise(2);
  const auto t = simulate_run(spec, m, 0.1 * stability_max_step(m), 2000, in, noise);
  REQUIRE(t.deviation.size() == 2001);
  CHECK(t.apriori_sq.size() == 2000);
  CHECK(t.deviation.back() < t.deviation.front());
  CHECK(t.max_constraint_violation < 1e-9);
}

TEST_CASE("simulate_run replays exactly") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.1 * stability_max_step(m);
  GaussianStream a_in(5), a_noise(6), b_in(5), b_noise(6);
  const auto a = simulate_run(spec, m, mu, 500, a_in, a_noise);
  const auto b = simulate_run(spec, m, mu, 500, b_in, b_noise);
  CHECK(a.deviation == b.deviation);
  CHECK(a.apriori_sq == b.apriori_sq);
}

TEST_CASE("single run lands within an order of magnitude of the theory") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.05 * stability_max_step(m);
  const Vector d0 = m.q - m.g;
  const auto settle = iterations_to_steady_state(m, d0, mu);
  REQUIRE(settle);
  const std::size_t iters = 2 * *settle + 1000;
  GaussianStream in(substream_seed(1, 0, StreamRole::input));
  GaussianStream noise(substream_seed(1, 0, StreamRole::noise));
  const auto t = simulate_run(spec, m, mu, iters, in, noise);
  double tail = 0.0;
  for (std::size_t n = iters - 999; n <= iters; ++n) tail += t.deviation[n];
  tail /= 1000.0;
  const double ss = steady_state_msd(m, mu);
  CHECK(tail > ss / 10.0);
  CHECK(tail < ss * 10.0);
}

TEST_CASE("ensemble of one run is that run") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.1 * stability_max_step(m);
  RunConfig rc;
  rc.runs = 1;
  rc.iters = 300;
  rc.ss_window = 100;
  rc.seed = 9;
  const auto stats = ensemble_msd_curve(spec, m, mu, rc);
  GaussianStream in(substream_seed(9, 0, StreamRole::input));
  GaussianStream noise(substream_seed(9, 0, StreamRole::noise));
  const auto t = simulate_run(spec, m, mu, 300, in, noise);
  CHECK(stats.msd == t.deviation);
  CHECK(stats.completed == 1);
  CHECK(stats.msd[0] == (m.q - m.g).squaredNorm());
}

TEST_CASE("ensemble is bitwise deterministic across thread counts") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.1 * stability_max_step(m);
  RunConfig rc;
  rc.runs = 257;
  rc.iters = 400;
  rc.ss_window = 100;
  rc.threads = 1;
  const auto one = ensemble_msd_curve(spec, m, mu, rc);
  rc.threads = 4;
  const auto four = ensemble_msd_curve(spec, m, mu, rc);
  CHECK(one.msd == four.msd);
  CHECK(one.msd_se == four.msd_se);
  CHECK(one.zeta_emp == four.zeta_emp);
  CHECK(one.msd[0] == (m.q - m.g).squaredNorm());
  CHECK(one.max_constraint_violation < 1e-9);
  for (double v : one.msd) CHECK(std::isfinite(v));
}

TEST_CASE("a priori error at the optimum has the minimum MSE") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const Matrix factor = spd_sqrt(spec.R);
  GaussianStream in(21), noise(22);
  double acc = 0.0;
  const int draws = 100'000;
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_input(factor, in);
    const double y = x.dot(spec.h) + std::sqrt(spec.eta) * noise.next();
    const double err = y - m.g.dot(x);
    acc += err * err;
  }
  CHECK(std::abs(acc / draws / m.min_mse() - 1.0) < 0.02);
}

TEST_CASE("ensemble steady state tracks the theory") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.1 * stability_max_step(m);
  const auto settle = iterations_to_steady_state(m, m.q - m.g, mu);
  REQUIRE(settle);
  RunConfig rc;
  rc.runs = 400;
  rc.iters = std::max(2 * *settle, *settle + 1000);
  const auto stats = ensemble_msd_curve(spec, m, mu, rc);
  const double gap_db = 10 * std::log10(stats.msd_ss / steady_state_msd(m, mu));
  CHECK(std::abs(gap_db) < 1.0);
  CHECK(stats.diverged == 0);
}

TEST_CASE("diverging ensembles and bad configs") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  RunConfig rc;
  rc.runs = 3;
  rc.iters = 10'000;
  rc.ss_window = 10;
  CHECK_THROWS_AS(ensemble_msd_curve(spec, m, 10.0 * stability_max_step(m), rc), EnsembleError);
  rc.ss_window = 20'000;
  CHECK_THROWS_AS(ensemble_msd_curve(spec, m, 0.01, rc), ArgumentError);
  rc.runs = 0;
  rc.ss_window = 10;
  CHECK_THROWS_AS(ensemble_msd_curve(spec, m, 0.01, rc), ArgumentError);
}

}  // TEST_SUITE
