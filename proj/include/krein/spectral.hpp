#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "krein/core.hpp"

namespace krein {

enum class SignType { PositiveType, NegativeType, Critical, NonReal };

std::string_view to_string(SignType type);

/// One group of numerically coincident eigenvalues together with its Riesz
/// projection.
struct EigenCluster {
  Complex value;                 // representative (real part only when real)
  std::vector<Complex> members;  // computed eigenvalues in the group
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
  double radius = 0.0;           // max distance of a member from value
  bool is_real = false;
  Matrix projection;
  std::optional<std::size_t> conjugate;  // partner cluster for non-real values
  int quadrature_points = 0;             // 0 when the projection is trivially I
  double idempotency_residual = 0.0;
};

/// Eigen-structure of a J-self-adjoint matrix: clusters, Riesz projections
/// and the tolerances that produced them. Immutable once built.
class SpectralDecomposition {
 public:
  SpectralDecomposition(KreinOperator op, std::vector<EigenCluster> clusters,
                        double cluster_tol);

  const KreinOperator& op() const { return op_; }
  const std::vector<EigenCluster>& clusters() const { return clusters_; }
  double cluster_tolerance() const { return cluster_tol_; }

  /// Cluster whose disc (radius + cluster tolerance) contains z.
  std::optional<std::size_t> find_cluster(Complex z) const;

  /// Distance from z to the nearest computed eigenvalue.
  double distance_to_spectrum(Complex z) const;

  /// Distance from z to the nearest eigenvalue outside the given cluster.
  double gap_excluding(Complex z, std::optional<std::size_t> cluster) const;

  std::vector<Complex> eigenvalues() const;
  bool spectrum_is_real() const;

  /// Sum of the projections of clusters selected by the predicate; exactly I
  /// when every cluster is selected and exactly 0 when none is.
  Matrix sum_projections(const std::function<bool(const EigenCluster&)>& select) const;

  /// max |sum P - I|, max |P^2 - P|, max |JP - (JP)*| over real clusters and
  /// conjugate pairs, max |PA - AP|.
  double completeness_residual() const;

 private:
  KreinOperator op_;
  std::vector<EigenCluster> clusters_;
  double cluster_tol_;
};

SpectralDecomposition decompose(const KreinOperator& a);
SpectralDecomposition decompose(const KreinOperator& a, double cluster_tol);

/// Finite union of real intervals, endpoints possibly infinite.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double x) const;
  bool is_point() const { return lo == hi && lo_closed && hi_closed; }
};

struct SpectralSet {
  std::vector<Interval> intervals;
  bool include_infinity = false;

  static SpectralSet whole_line();                // extended real line
  static SpectralSet none();
  static SpectralSet positive();                  // (0, inf)
  static SpectralSet negative();                  // (-inf, 0)
  static SpectralSet point(double x);             // {x}
  static SpectralSet closed(double lo, double hi);
  static SpectralSet outside(double r);           // extended line minus [-r, r]

  bool contains(double x) const;
};

/// E(Delta): sum of Riesz projections of the real clusters inside Delta.
/// Throws BoundaryCollision when an eigenvalue sits within the cluster
/// tolerance of a finite endpoint (point sets excepted).
Matrix spectral_function(const SpectralDecomposition& d, const SpectralSet& delta);

struct SignClassification {
  SignType type = SignType::Critical;
  double value = 0.0;
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
  RealVector root_gram_eigenvalues;       // Gram on the root subspace
  RealVector eigenspace_gram_eigenvalues; // Gram on ker(A - value)
};

/// Sign type of a real eigenvalue.
SignClassification classify_real_point(const SpectralDecomposition& d, double lambda);

struct RootSubspaces {
  std::array<Matrix, 3> bases;  // ker(A-l), ker(A-l)^2, ker(A-l)^3
  std::array<int, 3> dims{};
  std::array<double, 3> thresholds{};
  bool ill_conditioned = false;
};

RootSubspaces root_subspaces(const KreinOperator& a, double lambda);

/// Dimensions of ker (A - lambda)^k for k = 1, 2, ... until the chain
/// stabilises (or max_power). The size of the largest Jordan block is the
/// number of strict increases.
struct KernelChain {
  std::vector<int> dims;
  bool ill_conditioned = false;
  int largest_block() const;
};

KernelChain kernel_chain(const Matrix& a, Complex lambda, int max_power, double rank_slack);

/// |(A - lambda)^-1|, refusing points closer than the cluster tolerance to the
/// spectrum.
double resolvent_norm(const SpectralDecomposition& d, Complex lambda);
double resolvent_norm(const KreinOperator& a, Complex lambda);

/// No spectrum check; 1 / sigma_min(A - lambda).
double resolvent_norm_unchecked(const Matrix& a, Complex lambda);

struct GrowthSample {
  Complex lambda;
  double norm;
};

struct DirectionBound {
  double angle;       // ray direction in radians
  double constant_m;  // smallest M with |R| <= M |l|^2 / |Im l|^2 on the ray
};

struct GrowthReport {
  std::optional<double> point;   // nullopt: the point at infinity
  double estimated_order = 0.0;  // fitted log-log slope
  int algebraic_order = 1;       // largest Jordan block at the point
  double constant_m = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  bool point_in_spectrum = false;
  std::vector<GrowthSample> samples;
  std::vector<DirectionBound> directions;  // only at infinity
};

/// Resolvent growth profile at a finite real point or at infinity
/// (point == nullopt).
GrowthReport growth_order_at(const SpectralDecomposition& d, std::optional<double> point,
                             int decades = 3);

enum class ProfileCenter { Zero, Infinity };

/// (radius, |E|) pairs: E([-r, r]) around zero or E(R \ [-r, r]) around
/// infinity.
std::vector<std::pair<double, double>> projection_norm_profile(
    const SpectralDecomposition& d, ProfileCenter center, const std::vector<double>& radii);

}  // namespace krein
