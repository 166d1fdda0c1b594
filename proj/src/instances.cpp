#include "krein/instances.hpp"

#include <cmath>
#include <random>

namespace krein {

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::RandomNonnegative: return "random_nonnegative";
    case InstanceKind::RandomGeneric: return "random_generic";
    case InstanceKind::JordanAtZero: return "jordan_at_zero";
    case InstanceKind::BlockDiagonalPair: return "block_diagonal_pair";
    case InstanceKind::SturmLiouville: return "sturm_liouville";
  }
  return "unknown";
}

InstanceKind instance_kind_from_string(std::string_view name) {
  for (auto k : {InstanceKind::RandomNonnegative, InstanceKind::RandomGeneric, InstanceKind::JordanAtZero,
                 InstanceKind::BlockDiagonalPair, InstanceKind::SturmLiouville})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::InvalidInput, "unknown instance kind '" + std::string(name) + "'");
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Matrix gaussian(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) m(r, c) = Complex(normal_(rng_), normal_(rng_)) / std::sqrt(2.0);
    return m;
  }

  Matrix hermitian(Index n) {
    const Matrix g = gaussian(n, n);
    return (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
  }

  Matrix unitary(Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Index k = 0; k < n; ++k) {
      const Complex d = r(k, k);
      if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return q;
  }

  // PSD with the given kernel dimension; eigenvalues on the range are at
  // least floor.
  Matrix psd(Index n, Index kernel, double floor) {
    const Index rank = n - kernel;
    if (rank == 0) return Matrix::Zero(n, n);
    const Matrix b = gaussian(rank, n) / std::sqrt(static_cast<double>(n));
    Matrix h = b.adjoint() * b;
    if (floor > 0.0) {
      const Matrix q = range_basis(b.adjoint(), rank);
      h += floor * q * q.adjoint();
    }
    return hermitian_part(h);
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

Matrix signature_matrix(Index p, Index q) {
  Matrix j = Matrix::Zero(p + q, p + q);
  for (Index k = 0; k < p + q; ++k) j(k, k) = k < p ? 1.0 : -1.0;
  return j;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

int positive_index(const InstanceSpec& spec, Sampler& s, int n, int lo) {
  if (spec.positive_dimension >= 0) {
    if (spec.positive_dimension > n)
      throw Error(ErrorKind::InvalidInput, "positive_dimension exceeds the dimension");
    return spec.positive_dimension;
  }
  return s.uniform(lo, n - lo);
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
  const int n = spec.dimension;
  if (n < 2) throw Error(ErrorKind::InvalidInput, "instances need dimension >= 2");
  Sampler s(spec.seed);
  Matrix j, a;
  std::optional<Matrix> v;

  switch (spec.kind) {
    case InstanceKind::RandomNonnegative: {
      if (spec.kernel_dimension < 0 || spec.kernel_dimension > n)
        throw Error(ErrorKind::InvalidInput, "kernel_dimension out of range");
      const int p = positive_index(spec, s, n, 1);
      j = signature_matrix(p, n - p);
      a = j * s.psd(n, spec.kernel_dimension, spec.eigenvalue_floor);
      if (spec.perturbation_scale > 0.0) v = spec.perturbation_scale * (j * s.hermitian(n));
      break;
    }
    case InstanceKind::RandomGeneric: {
      const int p = positive_index(spec, s, n, 1);
      j = signature_matrix(p, n - p);
      a = j * s.hermitian(n);
      if (spec.perturbation_scale > 0.0) v = spec.perturbation_scale * (j * s.hermitian(n));
      break;
    }
    case InstanceKind::JordanAtZero: {
      const int k = spec.block_size;
      if (k < 1 || k > n) throw Error(ErrorKind::InvalidInput, "block_size must lie in [1, dimension]");
      Matrix nil = Matrix::Zero(k, k), flip = Matrix::Zero(k, k);
      for (int i = 0; i + 1 < k; ++i) nil(i, i + 1) = 1.0;
      for (int i = 0; i < k; ++i) flip(i, k - 1 - i) = 1.0;
      j = flip;
      a = nil;
      if (n > k) {
        const int r = n - k;
        const int p = spec.positive_dimension >= 0 ? std::min(spec.positive_dimension, r) : s.uniform(0, r);
        const Matrix jr = signature_matrix(p, r - p);
        j = block_diag(j, jr);
        a = block_diag(a, jr * s.psd(r, 0, 0.5));
      }
      break;
    }
    case InstanceKind::BlockDiagonalPair: {
      const int p = positive_index(spec, s, n, 1);
      const int q = n - p;
      j = signature_matrix(p, q);
      a = block_diag(s.psd(p, 0, spec.eigenvalue_floor), -s.psd(q, 0, spec.eigenvalue_floor));
      Matrix vm(n, n);
      const Matrix v0 = spec.coupling_scale * s.gaussian(p, q) / std::sqrt(static_cast<double>(n));
      vm << s.hermitian(p), v0, -v0.adjoint(), s.hermitian(q);
      v = spec.perturbation_scale * vm;
      break;
    }
    case InstanceKind::SturmLiouville: {
      const double c = spec.sign_change;
      if (!(c > -1.0 && c < 1.0)) throw Error(ErrorKind::InvalidInput, "sign_change must lie in (-1, 1)");
      if (!spec.potential.empty() && spec.potential.size() != 1 &&
          spec.potential.size() != static_cast<std::size_t>(n))
        throw Error(ErrorKind::InvalidInput, "potential needs 0, 1 or dimension samples");
      const double h = 2.0 / (n + 1);
      Matrix k = Matrix::Zero(n, n);
      j = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const double x = -1.0 + (i + 1) * h;
        const double q = spec.potential.empty() ? 0.0 : spec.potential[spec.potential.size() == 1 ? 0 : i];
        k(i, i) = 2.0 / (h * h) + q;
        if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1.0 / (h * h);
        j(i, i) = x >= c ? 1.0 : -1.0;
      }
      a = j * k;
      break;
    }
  }

  if (spec.mix_basis) {
    const Matrix w = s.unitary(n);
    j = hermitian_part(w.adjoint() * j * w);
    a = w.adjoint() * a * w;
    if (v) v = w.adjoint() * *v * w;
  }
  return Instance{spec, FundamentalSymmetry::from_matrix(j), a, v};
}

}  // namespace krein
