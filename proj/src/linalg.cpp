#include "krein/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krein {

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double hermitian_residual(const Matrix& m) { return op_norm(m - m.adjoint()); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.size() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_hermitian_eigenvalue(const Matrix& h) {
  RealVector ev = hermitian_eigenvalues(h);
  return ev.size() ? ev(0) : std::numeric_limits<double>::infinity();
}

double max_hermitian_eigenvalue(const Matrix& h) {
  RealVector ev = hermitian_eigenvalues(h);
  return ev.size() ? ev(ev.size() - 1) : -std::numeric_limits<double>::infinity();
}

NullSpace null_space(const Matrix& m, double slack) {
  NullSpace out;
  const Index n = m.cols();
  if (n == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double sigma1 = out.singular_values.size() ? out.singular_values(0) : 0.0;
  out.threshold = static_cast<double>(std::max(m.rows(), n)) *
                  std::numeric_limits<double>::epsilon() * sigma1 * slack;
  Index rank = 0;
  for (Index k = 0; k < out.singular_values.size(); ++k) {
    const double s = out.singular_values(k);
    if (s > out.threshold) ++rank;
    if (out.threshold > 0.0 && s > out.threshold / 10.0 && s < out.threshold * 10.0)
      out.ill_conditioned = true;
  }
  if (sigma1 == 0.0) rank = 0;
  out.basis = svd.matrixV().rightCols(n - rank);
  return out;
}

Matrix range_basis(const Matrix& m, Index rank) {
  if (rank == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(rank);
}

Matrix shifted_power(const Matrix& m, Complex shift, int power) {
  const Matrix shifted = m - shift * Matrix::Identity(m.rows(), m.cols());
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < power; ++k) out = out * shifted;
  return out;
}

}  // namespace krein
