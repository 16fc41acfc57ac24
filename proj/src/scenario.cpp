#include "clms/scenario.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "clms/errors.hpp"

namespace clms {

double DerivedModel::min_mse() const {
  return weighted_sq_norm(e, R) + eta;
}

namespace {

void add(std::vector<Violation>& out, std::string invariant, double residual, std::string detail) {
  out.push_back({std::move(invariant), residual, std::move(detail)});
}

}  // namespace

std::vector<Violation> validate_spec(const SystemSpec& spec) {
  std::vector<Violation> out;
  const auto L = spec.L;
  const auto K = spec.K;

  if (K < 1) add(out, "K >= 1", K, "need at least one constraint");
  if (K >= L) add(out, "K < L", K - L, "constraint count must be below the filter order");
  if (L < 1) {
    add(out, "L >= 1", L, "filter order must be positive");
    return out;
  }

  bool shapes_ok = true;
  auto shape = [&](bool ok, const char* what) {
    if (!ok) {
      add(out, what, 0.0, "dimension mismatch");
      shapes_ok = false;
    }
  };
  shape(spec.h.size() == L, "h has length L");
  shape(spec.R.rows() == L && spec.R.cols() == L, "R is L x L");
  shape(spec.C.rows() == L && spec.C.cols() == K && K >= 1, "C is L x K");
  shape(spec.f.size() == K && K >= 1, "f has length K");
  if (!shapes_ok) return out;

  if (!spec.h.allFinite() || !spec.R.allFinite() || !spec.C.allFinite() || !spec.f.allFinite() ||
      !std::isfinite(spec.eta)) {
    add(out, "entries finite", 0.0, "NaN or Inf in spec");
    return out;
  }
  if (spec.eta < 0.0) add(out, "eta >= 0", spec.eta, "noise variance must be non-negative");

  const double scale = std::max(spec.R.norm(), std::numeric_limits<double>::min());
  const double asym = (spec.R - spec.R.transpose()).norm() / scale;
  if (asym > kSymmetryTolerance) {
    add(out, "R symmetric", asym, "relative Frobenius asymmetry");
  } else {
    const double lo = sym_eig(spec.R).values.back();
    if (!(lo > 0.0)) {
      std::ostringstream msg;
      msg << "most negative eigenvalue " << lo;
      add(out, "R positive-definite", lo, msg.str());
    }
  }

  if (K >= 1 && K < L) {
    Eigen::JacobiSVD<Matrix> svd(spec.C);
    const auto& sv = svd.singularValues();
    const double ratio = sv(sv.size() - 1) / std::max(sv(0), std::numeric_limits<double>::min());
    if (!(ratio * std::sqrt(kConditionCutoff) > 1.0)) {
      std::ostringstream msg;
      msg << "smallest/largest singular value of C = " << ratio;
      add(out, "C full column rank", ratio, msg.str());
    }
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream msg;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) msg << "; ";
    msg << violations[i].invariant << " violated (" << violations[i].detail
        << ", residual " << violations[i].residual << ")";
  }
  return msg.str();
}

DerivedModel derive_model(const SystemSpec& spec) {
  if (auto bad = validate_spec(spec); !bad.empty()) {
    throw SpecError("invalid system spec: " + describe(bad));
  }
  const auto L = spec.L;
  const Matrix& C = spec.C;
  const Matrix CtC = C.transpose() * C;

  DerivedModel m;
  m.P = Matrix::Identity(L, L) - C * lin_solve(CtC, Matrix(C.transpose()));
  m.P = 0.5 * (m.P + m.P.transpose());
  m.q = C * lin_solve(CtC, spec.f);

  const Matrix RinvC = lin_solve(spec.R, C);
  const Matrix CtRinvC = C.transpose() * RinvC;
  m.g = spec.h + RinvC * lin_solve(CtRinvC, Vector(spec.f - C.transpose() * spec.h));
  m.e = spec.h - m.g;

  m.R = spec.R;
  m.eta = spec.eta;
  m.Z = m.P * spec.R * m.P;
  m.Z = 0.5 * (m.Z + m.Z.transpose());
  const auto eig = sym_eig(m.Z);
  const double cut = kZeroEigenvalueRelTol * eig.values.front();
  for (double v : eig.values) {
    if (v > cut) m.lambdas.push_back(v);
  }
  if (static_cast<int>(m.lambdas.size()) != L - spec.K) {
    std::ostringstream msg;
    msg << "Z has " << m.lambdas.size() << " nonzero eigenvalues, expected " << L - spec.K;
    throw SpecError(msg.str());
  }
  return m;
}

SystemSpec random_scenario(std::uint64_t seed, int L, int K, double eta) {
  if (L < 2 || K < 1 || K >= L) {
    std::ostringstream msg;
    msg << "random_scenario needs 1 <= K < L, got L=" << L << " K=" << K;
    throw ArgumentError(msg.str());
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ArgumentError("eta must be finite and >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
    return out;
  };

  SystemSpec s;
  s.L = L;
  s.K = K;
  s.eta = eta;
  s.h = gaussian(L, 1).col(0);
  s.h /= s.h.norm();

  // Gaussian C is full rank with probability one; redraw on the measure-zero miss.
  for (;;) {
    s.C = gaussian(L, K);
    Eigen::JacobiSVD<Matrix> svd(s.C);
    const auto& sv = svd.singularValues();
    if (sv(K - 1) > 1e-6 * sv(0)) break;
  }
  s.f = gaussian(K, 1).col(0);
  s.f /= s.f.norm();

  const Matrix A = gaussian(L, L);
  s.R = A.transpose() * A + 0.1 * Matrix::Identity(L, L);
  s.R = 0.5 * (s.R + s.R.transpose());
  s.R *= static_cast<double>(L) / s.R.trace();
  return s;
}

}  // namespace clms
