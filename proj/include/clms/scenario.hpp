#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clms/linalg.hpp"

namespace clms {

/// Ground-truth constrained identification problem: y = x^T h + v with
/// x ~ N(0, R), v ~ N(0, eta), and weights constrained by C^T w = f.
struct SystemSpec {
  int L = 0;
  int K = 0;
  Vector h;
  Matrix R;
  double eta = 0.0;
  Matrix C;
  Vector f;
};

/// Static quantities derived from a SystemSpec.
struct DerivedModel {
  Matrix P;  // projector onto the null space of C^T
  Vector q;  // minimum-norm feasible point
  Vector g;  // optimal constrained weights
  Vector e;  // h - g
  Matrix Z;  // P R P
  std::vector<double> lambdas;  // the L-K nonzero eigenvalues of Z, descending
  Matrix R;    // input covariance, copied from the spec
  double eta = 0.0;  // noise variance, copied from the spec

  int L() const { return static_cast<int>(P.rows()); }
  double trace_Z() const { return Z.trace(); }
  double lambda_max() const { return lambdas.front(); }
  double lambda_min() const { return lambdas.back(); }
  /// e^T R e + eta, the minimum achievable mean-square a priori error.
  double min_mse() const;
};

struct Violation {
  std::string invariant;
  double residual;
  std::string detail;
};

inline constexpr double kZeroEigenvalueRelTol = 1e-9;
inline constexpr double kDefaultEta = 1e-2;

std::vector<Violation> validate_spec(const SystemSpec& spec);

/// Throws SpecError naming the first failed invariant.
DerivedModel derive_model(const SystemSpec& spec);

/// Seeded random scenario: unit-norm h, Gaussian full-rank C, unit-norm f,
/// R = A^T A + 0.1 I rescaled to trace L.
SystemSpec random_scenario(std::uint64_t seed, int L, int K, double eta = kDefaultEta);

std::string describe(const std::vector<Violation>& violations);

}  // namespace clms
