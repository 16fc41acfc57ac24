#pragma once

// Closed-form mean-square performance of CLMS under independent Gaussian
// inputs: stability range, transient and steady-state MSD, misadjustment.

#include <cstddef>
#include <optional>
#include <vector>

#include "clms/scenario.hpp"

namespace clms {

/// 2 / (2 lambda_max + tr{Z}); a sufficient bound for mean-square stability.
double stability_max_step(const DerivedModel& model);

/// rho_i = 1 - 2 mu lambda_i + mu^2 tr{Z} lambda_i + 2 mu^2 lambda_i^2 for each
/// nonzero eigenvalue of Z, in the same (descending lambda) order.
std::vector<double> recursion_eigenvalues(const DerivedModel& model, double mu);

/// M = I - 2 mu Z + mu^2 tr{Z} Z + 2 mu^2 Z^2.
Matrix build_M(const DerivedModel& model, double mu);

/// E[x x^T P x x^T] for x ~ N(0, R): tr{PRP} R + 2 R P R.
Matrix fourth_moment(const Matrix& R, const Matrix& P);

/// The L^2 x L^2 map with F vec{S} = vec{T}, T the one-step image of the
/// weighting matrix S:
///   F = (I - mu R)P (x) (I - mu R)P + mu^2 vec{R} vec{Z}^T + mu^2 RP (x) RP.
Matrix build_F(const DerivedModel& model, double mu);

double spectral_radius(const Matrix& m);

/// Throws InstabilityError unless mu > 0 and the spectral radius of F is
/// below one.
void require_mean_square_stable(const DerivedModel& model, double mu);
bool is_mean_square_stable(const DerivedModel& model, double mu);

/// E||d_n||^2 for n = 0..n_iters starting from deviation d0 (0-based, so the
/// result has n_iters + 1 entries and element 0 is ||d0||^2).
std::vector<double> transient_msd_curve(const DerivedModel& model, const Vector& d0, double mu,
                                        std::size_t n_iters);

double steady_state_msd(const DerivedModel& model, double mu);

/// Misadjustment from the lifted recursion: mu^2 vec{Z}^T (I - F)^{-1} vec{R}.
double misadjustment_direct(const DerivedModel& model, double mu);

/// Misadjustment from the spectrum of Z: S / (2 - S), S = sum mu l / (1 - mu l).
/// Throws DomainError when mu lambda_max >= 1 or S >= 2.
double misadjustment_eigen(const DerivedModel& model, double mu);

struct MisadjustmentBounds {
  double lower;
  double upper;
};

/// mu tr{Z} / (2 - mu (tr{Z} + 2 lambda)), lambda the smallest and largest
/// nonzero eigenvalue of Z. Throws DomainError for a non-positive denominator.
MisadjustmentBounds misadjustment_bounds(const DerivedModel& model, double mu);

/// Smallest n at which the transient curve is within rel_tol of the steady
/// state. Gives up (returns nullopt) after max_iters.
std::optional<std::size_t> iterations_to_steady_state(const DerivedModel& model, const Vector& d0,
                                                      double mu, double rel_tol = 1e-3,
                                                      std::size_t max_iters = 10'000'000);

struct TheoryPrediction {
  double mu = 0.0;
  double mu_max = 0.0;
  bool stable = false;
  std::vector<double> msd_curve;
  double msd_ss = 0.0;
  double zeta_direct = 0.0;
  std::optional<double> zeta_eigen;  // empty outside its validity domain
  std::optional<double> zeta_min;
  std::optional<double> zeta_max;
};

/// Bundles every prediction for one step size. Throws InstabilityError for an
/// unstable mu.
TheoryPrediction predict(const DerivedModel& model, const Vector& d0, double mu,
                         std::size_t n_iters);

}  // namespace clms
