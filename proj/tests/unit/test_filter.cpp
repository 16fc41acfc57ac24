#include <doctest.h>

#include "clms/errors.hpp"
#include "clms/filter.hpp"
#include "clms/montecarlo.hpp"
#include "clms/theory.hpp"
#include "test_util.hpp"

using namespace clms;
using clms::testing::axis_spec;
using clms::testing::gaussian_vector;

namespace {

std::vector<Sample> draw_samples(const SystemSpec& spec, std::size_t n, std::uint64_t seed) {
  GaussianStream in(seed);
  GaussianStream noise(seed + 1);
  const Matrix factor = spd_sqrt(spec.R);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Sample s;
    s.x = sample_input(factor, in);
    s.v = std::sqrt(spec.eta) * noise.next();
    s.y = s.x.dot(spec.h) + s.v;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_SUITE("clms-filter") {

TEST_CASE("init_state starts at q") {
  const auto spec = axis_spec(3, 0.25);
  const auto m = derive_model(spec);
  const auto st = init_state(m);
  CHECK(st.n == 0);
  CHECK(st.w(0) == doctest::Approx(0.25));
  CHECK(st.w(1) == 0.0);
  CHECK(st.w(2) == 0.0);

  const auto rspec = random_scenario(7, 7, 3);
  const auto rm = derive_model(rspec);
  const auto rs = init_state(rm);
  CHECK((rspec.C.transpose() * rs.w - rspec.f).cwiseAbs().maxCoeff() < 1e-12);
  // The transient theory curve opens at ||q - g||^2.
  const Vector d0 = rs.w - rm.g;
  CHECK(transient_msd_curve(rm, d0, 0.01, 0)[0] == d0.squaredNorm());
}

TEST_CASE("mu = 0 leaves a feasible w unchanged") {
  const auto spec = random_scenario(8, 7, 3);
  const auto m = derive_model(spec);
  std::mt19937_64 rng(1);
  FilterState st{m.q + m.P * gaussian_vector(rng, 7), 3};
  Sample s{gaussian_vector(rng, 7), 0.4, 0.0};
  const auto next = clms_step(st, s, 0.0, m);
  CHECK((next.w - st.w).norm() < 1e-12);
  CHECK(next.n == 4);
}

TEST_CASE("zero a priori error leaves a feasible w unchanged") {
  const auto spec = random_scenario(9, 7, 3);
  const auto m = derive_model(spec);
  std::mt19937_64 rng(2);
  FilterState st{m.q + m.P * gaussian_vector(rng, 7), 0};
  Sample s{gaussian_vector(rng, 7), 0.0, 0.0};
  s.y = st.w.dot(s.x);
  CHECK((clms_step(st, s, 0.3, m).w - st.w).norm() < 1e-12);
}

TEST_CASE("hand-evaluated single step, L=2, K=1") {
  SystemSpec spec;
  spec.L = 2;
  spec.K = 1;
  spec.R = Matrix::Identity(2, 2);
  spec.C = (Matrix(2, 1) << 1, 0).finished();
  spec.f = Vector::Constant(1, 1.0);
  spec.h = Vector::Zero(2);
  const auto m = derive_model(spec);

  // Scalar recomputation: e = y - w.x, u = w + mu e x, w' = P u + q.
  const double w1 = 1, w2 = 0, x1 = 1, x2 = 1, y = 2, mu = 0.1;
  const double err = y - (w1 * x1 + w2 * x2);
  const double u1 = w1 + mu * err * x1, u2 = w2 + mu * err * x2;
  const double expect1 = 0.0 * u1 + 1.0, expect2 = u2 + 0.0;
  CHECK(err == 1.0);
  CHECK(u1 == doctest::Approx(1.1));

  const auto next = clms_step(FilterState{(Vector(2) << w1, w2).finished(), 0},
                              Sample{(Vector(2) << x1, x2).finished(), y, 0.0}, mu, m);
  CHECK(next.w(0) == doctest::Approx(expect1).epsilon(1e-15));
  CHECK(next.w(1) == doctest::Approx(expect2).epsilon(1e-15));
  CHECK(next.w(0) == doctest::Approx(1.0));
  CHECK(next.w(1) == doctest::Approx(0.1));
}

TEST_CASE("clms_step rejects non-finite samples and bad shapes") {
  const auto m = derive_model(random_scenario(1, 4, 1));
  auto st = init_state(m);
  Sample s{Vector::Ones(4), std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS_AS(clms_step(st, s, 0.1, m), DataError);
  s.y = 1.0;
  s.x(2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(clms_step(st, s, 0.1, m), DataError);
  s.x = Vector::Ones(3);
  CHECK_THROWS_AS(clms_step(st, s, 0.1, m), ShapeError);
}

TEST_CASE("run_filter on no samples is empty") {
  const auto m = derive_model(random_scenario(1, 7, 3));
  const auto r = run_filter(m, {}, 0.01);
  CHECK(r.deviation.empty());
  CHECK_FALSE(r.diverged_at);
}

TEST_CASE("noiseless feasible optimum: deviation decays to zero") {
  auto spec = clms::testing::make_feasible(random_scenario(3, 7, 3));
  spec.eta = 0.0;
  const auto m = derive_model(spec);
  const double mu = 0.2 * stability_max_step(m);
  const auto samples = draw_samples(spec, 60'000, 77);
  const auto r = run_filter(m, samples, mu);
  REQUIRE(r.deviation.size() == samples.size());
  CHECK(r.deviation.back() < 1e-20);
  CHECK(r.deviation.back() < (m.q - m.g).squaredNorm());
}

TEST_CASE("constraints and the projection identity hold along a run") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const double mu = 0.3 * stability_max_step(m);
  auto st = init_state(m);
  double worst_constraint = 0.0, worst_projection = 0.0;
  for (const auto& s : draw_samples(spec, 5'000, 5)) {
    st = clms_step(st, s, mu, m);
    const Vector d = st.w - m.g;
    worst_constraint = std::max(worst_constraint, (spec.C.transpose() * st.w - spec.f).cwiseAbs().maxCoeff());
    worst_projection = std::max(worst_projection, (m.P * d - d).cwiseAbs().maxCoeff());
  }
  CHECK(worst_constraint < 1e-9);
  CHECK(worst_projection < 1e-9);
}

TEST_CASE("weight update and deviation recursion agree step by step") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = random_scenario(seed, 6, 2);
    const auto m = derive_model(spec);
    const double mu = 0.5 * stability_max_step(m);
    FilterState st{m.q + m.P * gaussian_vector(rng, 6), 0};
    for (int k = 0; k < 50; ++k) {
      Sample s{gaussian_vector(rng, 6), 0.0, 0.1 * gaussian_vector(rng, 1)(0)};
      s.y = s.x.dot(spec.h) + s.v;
      const Vector d = st.w - m.g;
      const Vector Px = m.P * s.x;
      const Vector d_next = d - mu * Px * Px.dot(d) + mu * Px * s.x.dot(m.e) + mu * s.v * Px;
      st = clms_step(st, s, mu, m);
      CHECK((st.w - m.g - d_next).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("a step far beyond the stability bound is flagged as diverged") {
  const auto spec = random_scenario(42, 7, 3);
  const auto m = derive_model(spec);
  const auto r = run_filter(m, draw_samples(spec, 10'000, 3), 10.0 * stability_max_step(m));
  REQUIRE(r.diverged_at);
  CHECK(*r.diverged_at < 10'000);
  CHECK(r.deviation.size() == *r.diverged_at);
}

}  // TEST_SUITE
