#include "krein/core.hpp"

#include <algorithm>
#include <string>

namespace krein {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::BoundaryCollision: return "boundary_collision";
    case ErrorKind::ClusterSeparation: return "cluster_separation";
    case ErrorKind::QuadratureNonConvergence: return "quadrature_non_convergence";
    case ErrorKind::SampleRangeCollapse: return "sample_range_collapse";
    case ErrorKind::NotInSpectrum: return "not_in_spectrum";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

FundamentalSymmetry FundamentalSymmetry::from_matrix(const Matrix& j, const Tolerances& tol) {
  if (j.rows() != j.cols() || j.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "fundamental symmetry must be a non-empty square matrix");
  FundamentalSymmetry s;
  s.j_ = j;
  const Index n = j.rows();
  s.hermitian_residual_ = krein::hermitian_residual(j);
  s.involution_residual_ = op_norm(j * j - Matrix::Identity(n, n));
  const double bound = tol.structure_tol(op_norm(j));
  if (s.hermitian_residual_ > bound)
    throw Error(ErrorKind::InvalidInput,
                "J is not Hermitian: |J - J*| = " + std::to_string(s.hermitian_residual_));
  if (s.involution_residual_ > bound)
    throw Error(ErrorKind::InvalidInput,
                "J is not involutive: |J^2 - I| = " + std::to_string(s.involution_residual_));

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(j));
  // ascending: -1 block first, so reverse to put positive directions first
  const RealVector& ev = es.eigenvalues();
  s.p_ = static_cast<int>((ev.array() > 0.0).count());
  s.q_ = static_cast<int>(n) - s.p_;
  s.w_ = es.eigenvectors().rowwise().reverse();

  bool diagonal = true;
  for (Index r = 0; r < n && diagonal; ++r)
    for (Index c = 0; c < n; ++c) {
      const Complex expect = r != c ? Complex(0.0) : Complex(r < s.p_ ? 1.0 : -1.0);
      if (j(r, c) != expect) {
        diagonal = false;
        break;
      }
    }
  if (diagonal) s.w_ = Matrix::Identity(n, n);
  s.signature_form_ = diagonal;
  return s;
}

FundamentalSymmetry FundamentalSymmetry::from_signature(int positive, int negative) {
  if (positive < 0 || negative < 0 || positive + negative == 0)
    throw Error(ErrorKind::InvalidInput, "signature (p, q) needs p, q >= 0 and p + q > 0");
  FundamentalSymmetry s;
  const Index n = positive + negative;
  s.j_ = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) s.j_(k, k) = k < positive ? 1.0 : -1.0;
  s.w_ = Matrix::Identity(n, n);
  s.p_ = positive;
  s.q_ = negative;
  s.signature_form_ = true;
  return s;
}

KreinOperator::KreinOperator(Matrix a, FundamentalSymmetry j, const Tolerances& tol)
    : a_(std::move(a)), j_(std::move(j)), tol_(tol) {
  if (a_.rows() != a_.cols())
    throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square");
  if (a_.rows() != j_.dimension())
    throw Error(ErrorKind::DimensionMismatch,
                "operator is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()) +
                    " but J is " + std::to_string(j_.dimension()) + "-dimensional");
  norm_ = op_norm(a_);
  residual_ = hermitian_residual(j_.matrix() * a_);
  certified_ = residual_ <= tol_.structure_tol(norm_);
}

void KreinOperator::require_selfadjoint(std::string_view operation) const {
  if (!certified_)
    throw Error(ErrorKind::Precondition,
                std::string(operation) + " needs a J-self-adjoint operator; |JA - (JA)*| = " +
                    std::to_string(residual_));
}

Matrix krein_adjoint(const Matrix& a, const FundamentalSymmetry& j) {
  if (a.rows() != j.dimension() || a.cols() != j.dimension())
    throw Error(ErrorKind::DimensionMismatch, "krein_adjoint: dimensions of A and J differ");
  return j.matrix() * a.adjoint() * j.matrix();
}

Matrix krein_adjoint(const KreinOperator& a) { return krein_adjoint(a.matrix(), a.symmetry()); }

SelfAdjointCheck is_selfadjoint(const KreinOperator& a, double tol) {
  return {a.selfadjoint_residual() <= tol, a.selfadjoint_residual(), tol};
}

SelfAdjointCheck is_selfadjoint(const KreinOperator& a) {
  return is_selfadjoint(a, a.tolerances().structure_tol(a.norm()));
}

Complex inner(const Vector& x, const Vector& y, const FundamentalSymmetry& j) {
  if (x.size() != j.dimension() || y.size() != j.dimension())
    throw Error(ErrorKind::DimensionMismatch, "inner: vector length differs from dim J");
  return y.dot(j.matrix() * x);  // Eigen's dot conjugates the left operand
}

Matrix gram_restriction(const FundamentalSymmetry& j, const Matrix& q, const Tolerances& tol) {
  if (q.rows() != j.dimension())
    throw Error(ErrorKind::DimensionMismatch, "gram_restriction: basis rows differ from dim J");
  const Index k = q.cols();
  const double residual = op_norm(q.adjoint() * q - Matrix::Identity(k, k));
  if (residual > tol.structure_tol(1.0))
    throw Error(ErrorKind::InvalidInput,
                "gram_restriction: basis is not orthonormal, |Q*Q - I| = " + std::to_string(residual));
  return q.adjoint() * j.matrix() * q;
}

}  // namespace krein
