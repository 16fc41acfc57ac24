#include "clms/theory.hpp"

#include <cmath>
#include <sstream>

#include "clms/errors.hpp"

namespace clms {

double stability_max_step(const DerivedModel& model) {
  return 2.0 / (2.0 * model.lambda_max() + model.trace_Z());
}

std::vector<double> recursion_eigenvalues(const DerivedModel& model, double mu) {
  const double tz = model.trace_Z();
  std::vector<double> rho;
  rho.reserve(model.lambdas.size());
  for (double l : model.lambdas) {
    rho.push_back(1.0 - 2.0 * mu * l + mu * mu * tz * l + 2.0 * mu * mu * l * l);
  }
  return rho;
}

Matrix build_M(const DerivedModel& model, double mu) {
  const auto L = model.L();
  const Matrix& Z = model.Z;
  return Matrix::Identity(L, L) - 2.0 * mu * Z + mu * mu * model.trace_Z() * Z +
         2.0 * mu * mu * Z * Z;
}

Matrix fourth_moment(const Matrix& R, const Matrix& P) {
  if (R.rows() != R.cols() || P.rows() != P.cols() || R.rows() != P.rows()) {
    throw ArgumentError("fourth_moment: R and P must be square and of equal order");
  }
  const double tz = (P * R * P).trace();
  return tz * R + 2.0 * R * P * R;
}

Matrix build_F(const DerivedModel& model, double mu) {
  const auto L = model.L();
  const Matrix& R = model.R;
  const Matrix A = (Matrix::Identity(L, L) - mu * R) * model.P;
  const Matrix RP = R * model.P;
  Matrix F = kron(A, A);
  F.noalias() += (mu * mu) * vec_of(R) * vec_of(model.Z).transpose();
  F.noalias() += (mu * mu) * kron(RP, RP);
  return F;
}

double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error("spectral_radius: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_mean_square_stable(const DerivedModel& model, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) return false;
  return spectral_radius(build_F(model, mu)) < 1.0;
}

void require_mean_square_stable(const DerivedModel& model, double mu) {
  if (is_mean_square_stable(model, mu)) return;
  const double mu_max = stability_max_step(model);
  std::ostringstream msg;
  msg << "step size mu=" << mu << " is not mean-square stable (spectral radius of F >= 1"
      << " or mu <= 0); analytic bound mu_max=" << mu_max;
  throw InstabilityError(msg.str(), mu, mu_max);
}

std::vector<double> transient_msd_curve(const DerivedModel& model, const Vector& d0, double mu,
                                        std::size_t n_iters) {
  const auto L = model.L();
  if (d0.size() != L) throw ShapeError("transient_msd_curve: d0 has the wrong length");
  const Matrix F = build_F(model, mu);
  const Vector z = vec_of(model.Z);
  const double drive = mu * mu * model.min_mse();

  std::vector<double> curve;
  curve.reserve(n_iters + 1);
  Vector u = vec_of(Matrix::Identity(L, L));  // F^k vec{I}
  Vector next(u.size());
  double series = 0.0;                        // sum_{i<k} vec{Z}^T F^i vec{I}
  for (std::size_t n = 0;; ++n) {
    curve.push_back(weighted_sq_norm_vec(d0, u) + drive * series);
    if (n == n_iters) break;
    series += z.dot(u);
    next.noalias() = F * u;
    u.swap(next);
  }
  return curve;
}

namespace {

// mu^2 vec{Z}^T (I - F)^{-1} rhs
double lifted_steady_state(const DerivedModel& model, double mu, const Vector& rhs) {
  require_mean_square_stable(model, mu);
  const Matrix F = build_F(model, mu);
  const Matrix IminusF = Matrix::Identity(F.rows(), F.cols()) - F;
  return mu * mu * vec_of(model.Z).dot(lin_solve(IminusF, rhs));
}

}  // namespace

double steady_state_msd(const DerivedModel& model, double mu) {
  const auto L = model.L();
  return model.min_mse() * lifted_steady_state(model, mu, vec_of(Matrix::Identity(L, L)));
}

double misadjustment_direct(const DerivedModel& model, double mu) {
  return lifted_steady_state(model, mu, vec_of(model.R));
}

double misadjustment_eigen(const DerivedModel& model, double mu) {
  if (!(mu > 0.0)) throw DomainError("misadjustment_eigen: mu must be positive");
  if (mu * model.lambda_max() >= 1.0) {
    std::ostringstream msg;
    msg << "misadjustment_eigen: mu*lambda_max = " << mu * model.lambda_max() << " >= 1";
    throw DomainError(msg.str());
  }
  double s = 0.0;
  for (double l : model.lambdas) s += mu * l / (1.0 - mu * l);
  if (!(2.0 - s > 0.0)) {
    std::ostringstream msg;
    msg << "misadjustment_eigen: denominator 2 - S = " << 2.0 - s << " is not positive";
    throw DomainError(msg.str());
  }
  return s / (2.0 - s);
}

MisadjustmentBounds misadjustment_bounds(const DerivedModel& model, double mu) {
  const double tz = model.trace_Z();
  auto bound = [&](double lambda, const char* which) {
    const double den = 2.0 - mu * (tz + 2.0 * lambda);
    if (!(den > 0.0)) {
      std::ostringstream msg;
      msg << "misadjustment_bounds: " << which << " denominator " << den << " is not positive";
      throw DomainError(msg.str());
    }
    return mu * tz / den;
  };
  return {bound(model.lambda_min(), "lower"), bound(model.lambda_max(), "upper")};
}

std::optional<std::size_t> iterations_to_steady_state(const DerivedModel& model, const Vector& d0,
                                                      double mu, double rel_tol,
                                                      std::size_t max_iters) {
  const auto L = model.L();
  const double ss = steady_state_msd(model, mu);
  const Matrix F = build_F(model, mu);
  const Vector z = vec_of(model.Z);
  const double drive = mu * mu * model.min_mse();

  Vector u = vec_of(Matrix::Identity(L, L));
  Vector next(u.size());
  double series = 0.0;
  const double start = d0.squaredNorm();
  const double target = ss > 0.0 ? rel_tol * ss : rel_tol * start;
  for (std::size_t n = 0; n <= max_iters; ++n) {
    const double msd = weighted_sq_norm_vec(d0, u) + drive * series;
    if (std::abs(msd - ss) <= target) return n;
    series += z.dot(u);
    next.noalias() = F * u;
    u.swap(next);
  }
  return std::nullopt;
}

TheoryPrediction predict(const DerivedModel& model, const Vector& d0, double mu,
                         std::size_t n_iters) {
  require_mean_square_stable(model, mu);
  TheoryPrediction p;
  p.mu = mu;
  p.mu_max = stability_max_step(model);
  p.stable = true;
  p.msd_curve = transient_msd_curve(model, d0, mu, n_iters);
  p.msd_ss = steady_state_msd(model, mu);
  p.zeta_direct = misadjustment_direct(model, mu);
  try {
    p.zeta_eigen = misadjustment_eigen(model, mu);
  } catch (const DomainError&) {
  }
  try {
    const auto b = misadjustment_bounds(model, mu);
    p.zeta_min = b.lower;
    p.zeta_max = b.upper;
  } catch (const DomainError&) {
  }
  return p;
}

}  // namespace clms
