#pragma once

#include <optional>
#include <string_view>

#include "krein/errors.hpp"
#include "krein/linalg.hpp"
#include "krein/tolerances.hpp"

namespace krein {

/// An involutive, Euclidean-Hermitian matrix J defining [x, y] = (Jx, y).
///
/// Two construction routes: an explicit matrix (validated against
/// J = J* and J^2 = I) or a signature (p, q) meaning diag(I_p, -I_q).
/// Either way the object also carries a unitary W with
/// J = W diag(I_p, -I_q) W*, which block-splitting code relies on.
class FundamentalSymmetry {
 public:
  static FundamentalSymmetry from_matrix(const Matrix& j, const Tolerances& tol = {});
  static FundamentalSymmetry from_signature(int positive, int negative);

  const Matrix& matrix() const { return j_; }
  Index dimension() const { return j_.rows(); }

  /// Unitary W, positive directions first.
  const Matrix& diagonalizer() const { return w_; }
  int positive_index() const { return p_; }
  int negative_index() const { return q_; }
  bool is_signature_form() const { return signature_form_; }

  /// |J - J*| and |J^2 - I| measured at construction.
  double hermitian_residual() const { return hermitian_residual_; }
  double involution_residual() const { return involution_residual_; }

 private:
  FundamentalSymmetry() = default;

  Matrix j_;
  Matrix w_;
  int p_ = 0;
  int q_ = 0;
  bool signature_form_ = false;
  double hermitian_residual_ = 0.0;
  double involution_residual_ = 0.0;
};

/// A square matrix A paired with a fundamental symmetry. Construction never
/// fails on structure: the J-self-adjointness residual |JA - (JA)*| is
/// measured and the certified flag recorded, so callers that need a
/// J-self-adjoint operator call require_selfadjoint().
class KreinOperator {
 public:
  KreinOperator(Matrix a, FundamentalSymmetry j, const Tolerances& tol = {});

  const Matrix& matrix() const { return a_; }
  const FundamentalSymmetry& symmetry() const { return j_; }
  const Matrix& j() const { return j_.matrix(); }
  Index dimension() const { return a_.rows(); }

  double norm() const { return norm_; }
  bool selfadjoint_certified() const { return certified_; }
  double selfadjoint_residual() const { return residual_; }
  const Tolerances& tolerances() const { return tol_; }

  /// JA, Hermitian whenever the operator is certified.
  Matrix gram_operator() const { return j_.matrix() * a_; }

  void require_selfadjoint(std::string_view operation) const;

 private:
  Matrix a_;
  FundamentalSymmetry j_;
  Tolerances tol_;
  double norm_ = 0.0;
  double residual_ = 0.0;
  bool certified_ = false;
};

/// A+ = J A* J.
Matrix krein_adjoint(const Matrix& a, const FundamentalSymmetry& j);
Matrix krein_adjoint(const KreinOperator& a);

struct SelfAdjointCheck {
  bool selfadjoint = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

SelfAdjointCheck is_selfadjoint(const KreinOperator& a, double tol);
SelfAdjointCheck is_selfadjoint(const KreinOperator& a);

/// [x, y] = (Jx, y) = y* J x.
Complex inner(const Vector& x, const Vector& y, const FundamentalSymmetry& j);

/// Q* J Q for a Euclidean-orthonormal Q.
Matrix gram_restriction(const FundamentalSymmetry& j, const Matrix& q,
                        const Tolerances& tol = {});

}  // namespace krein
