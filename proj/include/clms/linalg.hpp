#pragma once

// Small dense real linear algebra used by the rest of the library.
// Matrices are Eigen column-major, so vec{} stacks columns exactly as the
// Kronecker identities below assume.

#include <Eigen/Dense>

#include <vector>

namespace clms {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kConditionCutoff = 1e12;

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization: element k*rows + i is m(i,k).
Vector vec_of(const Matrix& m);

/// Inverse of vec_of for a rows x cols target.
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

/// b^T A b, with the weight given either as a matrix or as vec{A}.
double weighted_sq_norm(const Vector& b, const Matrix& weight);
double weighted_sq_norm_vec(const Vector& b, const Vector& vec_weight);

struct SymEig {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

/// Throws ShapeError for non-square input, SymmetryError when
/// ||s - s^T||_F exceeds kSymmetryTolerance * ||s||_F.
void require_symmetric(const Matrix& s);

SymEig sym_eig(const Matrix& s);

/// Lower-triangular Cholesky factor G with G G^T = s.
Matrix spd_sqrt(const Matrix& s);

/// Solves a x = b. Throws SingularError when the LU condition estimate
/// exceeds kConditionCutoff.
Vector lin_solve(const Matrix& a, const Vector& b);
Matrix lin_solve(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);

}  // namespace clms
