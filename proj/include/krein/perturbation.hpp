#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krein/characterization.hpp"
#include "krein/regions.hpp"

namespace krein {

/// V = [[V+, V0], [-V0*, V-]] relative to the fundamental decomposition of J.
struct BlockPerturbation {
  Matrix v_plus;
  Matrix v_minus;
  Matrix v_zero;  // H- -> H+
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double norm_zero = 0.0;
  double structure_residual = 0.0;  // |reassembled - W* V W|
};

/// Blocks of V in the basis diagonalising J (positive directions first).
BlockPerturbation split_blocks(const KreinOperator& v);

enum class TauRoute { ProjectorDifference, ResolventQuadrature };

struct TauResult {
  double tau = 1.0;                 // |J~| from the projector route
  Matrix j_tilde;                   // E(R+) - E(R-)
  Matrix j_tilde_quadrature;        // resolvent-integral route
  double tau_quadrature = 1.0;
  double cross_residual = 0.0;      // |J~_proj - J~_quad|
  double involution_residual = 0.0; // |J~^2 - I| for the quadrature route
  int quadrature_nodes = 0;
  double zero_gap = 0.0;            // distance from 0 to the spectrum
};

/// J~ = E(R+) - E(R-) for a non-negative A with 0 in its resolvent set, by a
/// projector route and an independent Gauss-Legendre route through the
/// resolvent integral; tau = |J~|.
TauResult compute_tau(const KreinOperator& a);
TauResult compute_tau(const SpectralDecomposition& d);

/// Which enclosure rule produced a certificate.
enum class EnclosureRule {
  BlockDiagonal,       // A diagonal in the fundamental decomposition of J
  SpectralSkew,        // general non-negative A, bounded V, radius (1+tau)/2 |V|
  RelativeBound,       // ball-union envelope from (a, b)
  RelativeBoundRefined,
};

std::string_view to_string(EnclosureRule rule);

struct Violation {
  Complex eigenvalue;
  std::string reason;
};

struct EigenvalueVerdict {
  Complex value;
  bool inside = false;
  bool indeterminate = false;
  SignType type = SignType::Critical;
  double boundary_distance = 0.0;
};

struct EnclosureCertificate {
  EnclosureRule rule = EnclosureRule::BlockDiagonal;
  EnclosureRegion region;
  Outcome outcome = Outcome::Pass;
  bool verified = false;
  bool unperturbed_nonnegative_sum = false;  // V >= 0 shortcut taken
  std::vector<Violation> violations;
  std::vector<EigenvalueVerdict> eigenvalues;
  int indeterminate = 0;
  double smallest_boundary_gap = 0.0;  // min |signed distance| over eigenvalues outside K
  std::optional<LocalNonnegReport> local;
  std::string infinity_regular_note;
};

/// Checks sigma(A+V) against K: non-real eigenvalues inside, real eigenvalues
/// outside carry the sign type of their half-line, with a margin band around
/// the boundary reported as indeterminate.
EnclosureCertificate verify_enclosure(const KreinOperator& sum, const EnclosureRegion& k);
EnclosureCertificate verify_enclosure(const SpectralDecomposition& sum, const EnclosureRegion& k);

/// Capsule dist(z, [-|V+|, |V-|]) <= |V0| for A block-diagonal in J's
/// fundamental decomposition.
EnclosureCertificate block_diagonal_region(const KreinOperator& a, const KreinOperator& v);

/// Capsule dist(z, [-d, d]) <= (1+tau)/2 |V| with d = -(1+tau)/2 min sigma(JV),
/// or a direct non-negativity certificate when JV >= 0.
EnclosureCertificate spectral_skew_region(const KreinOperator& a, const KreinOperator& v,
                                          const TauResult& tau);

struct RelativeBoundFit {
  double a = 0.0;
  double b = 0.0;
  double certificate = 0.0;  // min eig of 2aI + bA*A - (1+tau)tau V*V
};

/// Minimal a for each b such that (1+tau)tau|Vf|^2 <= 2a|f|^2 + b|Af|^2.
std::vector<RelativeBoundFit> fit_relative_bound(const KreinOperator& a, const KreinOperator& v,
                                                 const TauResult& tau,
                                                 const std::vector<double>& b_grid);

struct BallUnionOptions {
  bool unbounded_nu = false;  // use gamma = sqrt((1+tau)a/(2tau)) regardless of nu
  bool want_refined = true;
};

/// Plain envelope and, when tau > 1 and b < (tau-1)/(2tau), the refined one.
std::vector<EnclosureCertificate> relative_bound_regions(const KreinOperator& a,
                                                         const KreinOperator& v,
                                                         const TauResult& tau,
                                                         const RelativeBoundFit& bound,
                                                         BallUnionOptions options = {});

/// Region parameters only, no verification.
EnclosureRegion relative_bound_region(double tau, double nu, const RelativeBoundFit& bound,
                                      bool refined, bool unbounded_nu = false);

/// inf [Vf, f] over the unit sphere, i.e. the smallest eigenvalue of JV.
double numerical_range_bottom(const KreinOperator& v);

}  // namespace krein
