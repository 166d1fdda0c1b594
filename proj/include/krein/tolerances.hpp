#pragma once

namespace krein {

/// Tolerance coefficients. Every check is relative: the coefficient is
/// multiplied by the scale noted beside it before comparison.
struct Tolerances {
  double structure = 1e-10;   // x (1 + |input|)
  double cluster = 1e-7;      // x (1 + |A|)
  double sign = 1e-8;         // Gram of an orthonormal basis; x (1 + |A|) for Q*JAQ
  double projection = 1e-9;   // x (1 + |P|)^2
  double tau = 1e-7;          // x (1 + tau)
  double margin = 10.0;       // enclosure band width, in cluster tolerances
  double rank = 1e3;          // sigma_k > n * eps * sigma_1 * rank
  int quadrature_points = 64;
  int quadrature_max_points = 1024;

  double structure_tol(double norm) const { return structure * (1.0 + norm); }
  double cluster_tol(double norm) const { return cluster * (1.0 + norm); }
  double projection_tol(double proj_norm) const {
    return projection * (1.0 + proj_norm) * (1.0 + proj_norm);
  }
  double operator_sign_tol(double norm) const { return sign * (1.0 + norm); }
  double tau_tol(double tau_value) const { return tau * (1.0 + tau_value); }
};

}  // namespace krein
