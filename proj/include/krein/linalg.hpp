#pragma once

#include <complex>

#include <Eigen/Dense>

namespace krein {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Spectral (Euclidean operator) norm.
double op_norm(const Matrix& m);

/// Smallest singular value.
double min_singular_value(const Matrix& m);

/// |M - M*| in the spectral norm.
double hermitian_residual(const Matrix& m);

Matrix hermitian_part(const Matrix& m);

/// Ascending eigenvalues of the Hermitian part of h.
RealVector hermitian_eigenvalues(const Matrix& h);
double min_hermitian_eigenvalue(const Matrix& h);
double max_hermitian_eigenvalue(const Matrix& h);

struct NullSpace {
  Matrix basis;                // orthonormal columns
  RealVector singular_values;  // descending
  double threshold = 0.0;
  // some singular value lies within a factor 10 of the threshold
  bool ill_conditioned = false;
};

/// Numerical null space: singular values sigma_k <= n * eps * sigma_1 * slack
/// are treated as zero.
NullSpace null_space(const Matrix& m, double slack);

/// Orthonormal basis of the dominant rank-dimensional left singular subspace.
Matrix range_basis(const Matrix& m, Index rank);

/// (m - shift I)^power.
Matrix shifted_power(const Matrix& m, Complex shift, int power);

}  // namespace krein
