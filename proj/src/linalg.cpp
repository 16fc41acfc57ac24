#include "clms/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "clms/errors.hpp"

namespace clms {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec_of(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) {
    std::ostringstream msg;
    msg << "unvec: cannot reshape length " << v.size() << " into " << rows << "x" << cols;
    throw ShapeError(msg.str());
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double weighted_sq_norm(const Vector& b, const Matrix& weight) {
  return b.dot(weight * b);
}

double weighted_sq_norm_vec(const Vector& b, const Vector& vec_weight) {
  const auto n = b.size();
  return weighted_sq_norm(b, Eigen::Map<const Matrix>(vec_weight.data(), n, n));
}

void require_symmetric(const Matrix& s) {
  if (s.rows() != s.cols()) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << s.rows() << "x" << s.cols();
    throw ShapeError(msg.str());
  }
  const double scale = std::max(s.norm(), std::numeric_limits<double>::min());
  const double asym = (s - s.transpose()).norm();
  if (asym > kSymmetryTolerance * scale) {
    std::ostringstream msg;
    msg << "matrix is not symmetric: ||S - S^T||_F / ||S||_F = " << asym / scale;
    throw SymmetryError(msg.str());
  }
}

SymEig sym_eig(const Matrix& s) {
  require_symmetric(s);
  // Eigen only reads the lower triangle; feed it the symmetric part.
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition did not converge");
  }
  const auto n = s.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::ranges::sort(order, [&](auto a, auto b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  SymEig out;
  out.values.reserve(order.size());
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values.push_back(solver.eigenvalues()(src));
    out.vectors.col(k) = solver.eigenvectors().col(src);
  }
  return out;
}

Matrix spd_sqrt(const Matrix& s) {
  require_symmetric(s);
  Eigen::LLT<Matrix> llt(0.5 * (s + s.transpose()));
  if (llt.info() != Eigen::Success) {
    throw DefinitenessError("matrix is not positive-definite (Cholesky hit a non-positive pivot)");
  }
  return llt.matrixL();
}

namespace {

Eigen::PartialPivLU<Matrix> factor(const Matrix& a, Eigen::Index rhs_rows) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << "lin_solve: coefficient matrix is " << a.rows() << "x" << a.cols();
    throw ShapeError(msg.str());
  }
  if (rhs_rows != a.rows()) {
    std::ostringstream msg;
    msg << "lin_solve: right-hand side has " << rhs_rows << " rows, expected " << a.rows();
    throw ShapeError(msg.str());
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond * kConditionCutoff > 1.0)) {
    std::ostringstream msg;
    msg << "lin_solve: matrix is singular or ill-conditioned (condition estimate "
        << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()) << ")";
    throw SingularError(msg.str());
  }
  return lu;
}

}  // namespace

Vector lin_solve(const Matrix& a, const Vector& b) {
  return factor(a, b.rows()).solve(b);
}

Matrix lin_solve(const Matrix& a, const Matrix& b) {
  return factor(a, b.rows()).solve(b);
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace clms
