#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krein/regions.hpp"
#include "krein/spectral.hpp"

namespace krein {

enum class Outcome { Pass, Fail, Indeterminate };

std::string_view to_string(Outcome outcome);

/// Pass beats nothing, Indeterminate beats Pass, Fail beats everything.
Outcome combine(Outcome a, Outcome b);

struct ConditionResult {
  Outcome outcome = Outcome::Pass;
  std::string note;
};

struct PointClassification {
  double value = 0.0;
  SignType type = SignType::Critical;
  double min_gram_eigenvalue = 0.0;
  double max_gram_eigenvalue = 0.0;
  int algebraic_multiplicity = 0;
};

/// Non-negativity verdict. The direct test ([Af, f] >= 0 iff JA is positive
/// semidefinite) is always present; the spectral conditions are filled in by
/// the spectral characterisations and cross-checked against it.
struct NonnegVerdict {
  Outcome outcome = Outcome::Pass;
  bool is_nonnegative = false;
  bool uniformly_positive = false;
  double min_gram_eig = 0.0;       // smallest eigenvalue of JA
  double lower_bound_gamma = 0.0;  // [Af, f] >= gamma |f|^2

  bool spectral = false;  // conditions below were evaluated
  ConditionResult spectrum;         // real spectrum, half-line sign types
  ConditionResult growth_infinity;  // order-2 template at infinity
  ConditionResult growth_zero;      // order 2 at zero and the ker A^2 Gram test
  ConditionResult regular_zero;     // zero is a regular critical point
  std::vector<PointClassification> points;
  std::optional<GrowthReport> zero_growth;
  std::optional<GrowthReport> infinity_growth;
  std::vector<int> kernel_dims;     // dim ker A^k, k = 1, 2, 3
  RealVector kernel_gram_eigenvalues;  // eigenvalues of Q*JAQ on ker A^2
  std::vector<std::pair<double, double>> zero_profile;
  bool direct_agrees = true;
};

/// [Af, f] >= 0 via the smallest eigenvalue of JA.
NonnegVerdict direct_nonnegativity(const KreinOperator& a);

/// Non-negativity from the spectrum, the resolvent growth at zero and
/// infinity, and a Gram test of [A., .] on ker A^2.
NonnegVerdict spectral_nonnegativity(const KreinOperator& a);
NonnegVerdict spectral_nonnegativity(const SpectralDecomposition& d);

/// Same decision with the zero condition read as a root-vector Gram test,
/// the regularity of zero recorded with a projection-norm profile.
NonnegVerdict root_vector_nonnegativity(const KreinOperator& a);
NonnegVerdict root_vector_nonnegativity(const SpectralDecomposition& d);

enum class SimilarityBlock { NonRealSpectrum, SignType, KernelChain };

std::string_view to_string(SimilarityBlock block);

struct SimilarityResult {
  bool constructed = false;
  std::vector<SimilarityBlock> blocking;
  Matrix j_a;     // new fundamental symmetry
  Matrix metric;  // G = J J_A
  double min_metric_eigenvalue = 0.0;
  double metric_hermitian_residual = 0.0;
  double selfadjoint_residual = 0.0;  // |GA - (GA)*|
  double tolerance = 0.0;
  std::vector<int> kernel_dims;
};

/// Hilbert-space metric G in which A is self-adjoint, when one exists.
SimilarityResult hilbert_similarity(const KreinOperator& a);
SimilarityResult hilbert_similarity(const SpectralDecomposition& d);

struct LocalDecomposition {
  Matrix e_inf;
  Matrix basis_b;    // orthonormal basis of (I - E_inf)H
  Matrix basis_inf;  // orthonormal basis of E_inf H
  Matrix a_b;        // compression in basis_b
  Matrix a_inf;      // compression in basis_inf
  Matrix gram_b;     // [., .] in basis_b
  Matrix gram_inf;   // [., .] in basis_inf
  std::string neighborhood;
  ConditionResult projection;        // E_inf idempotent and [.,.]-self-adjoint
  ConditionResult bounded_part;      // sigma(A_b) in closure(U)
  ConditionResult nonnegative_part;  // A_inf non-negative
  ConditionResult resolvent_part;    // U in rho(A_inf)
  Outcome outcome = Outcome::Pass;
};

/// A = diag(A_b, A_inf) relative to E_inf = E(real line outside U).
LocalDecomposition local_decomposition(const KreinOperator& a, const Neighborhood& u);
LocalDecomposition local_decomposition(const SpectralDecomposition& d, const Neighborhood& u);

struct NeighborhoodCheck {
  double dilation = 1.0;
  Outcome outcome = Outcome::Pass;
  std::string note;
};

struct LocalNonnegReport {
  Outcome outcome = Outcome::Pass;
  ConditionResult spectrum;
  ConditionResult growth_infinity;
  ConditionResult growth_zero;
  std::vector<PointClassification> points;
  std::vector<NeighborhoodCheck> neighborhoods;
  bool cross_consistent = true;
};

/// Non-negativity over the extended plane minus K, decided from the spectrum
/// outside K and the resolvent growth, then cross-checked by splitting A over
/// dilations of K.
LocalNonnegReport local_nonnegativity(const KreinOperator& a, const EnclosureRegion& k);
LocalNonnegReport local_nonnegativity(const SpectralDecomposition& d, const EnclosureRegion& k);

struct GammaBound {
  double gamma = 0.0;
  Matrix metric;          // Gram matrix of the assembled Hilbert norm
  double worst_margin = 0.0;  // min over samples of [Af,f] - gamma |f|_new^2
  int samples = 0;
  bool verified = false;
};

/// gamma = -|A_b| measured in a fundamental decomposition adapted to E_inf.
GammaBound lower_bound_gamma(const KreinOperator& a, const LocalDecomposition& l,
                             int samples = 200, std::uint64_t seed = 7);

}  // namespace krein
