#include "krein/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gsl/gsl_integration.h>

namespace krein {

namespace {

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

void require_nonnegative(const KreinOperator& a, std::string_view what) {
  a.require_selfadjoint(what);
  const NonnegVerdict v = direct_nonnegativity(a);
  if (!v.is_nonnegative)
    throw Error(ErrorKind::Precondition, std::string(what) + " needs a non-negative A; min eig of JA is " +
                                             num(v.min_gram_eig));
}

}  // namespace

std::string_view to_string(EnclosureRule rule) {
  switch (rule) {
    case EnclosureRule::BlockDiagonal: return "5.1";
    case EnclosureRule::SpectralSkew: return "5.3";
    case EnclosureRule::RelativeBound: return "5.4";
    case EnclosureRule::RelativeBoundRefined: return "5.4r";
  }
  return "unknown";
}

BlockPerturbation split_blocks(const KreinOperator& v) {
  const FundamentalSymmetry& j = v.symmetry();
  const Matrix& w = j.diagonalizer();
  const Matrix vw = w.adjoint() * v.matrix() * w;
  const Index p = j.positive_index();
  const Index q = j.negative_index();
  BlockPerturbation b;
  b.v_plus = vw.topLeftCorner(p, p);
  b.v_minus = vw.bottomRightCorner(q, q);
  b.v_zero = vw.topRightCorner(p, q);
  b.norm_plus = op_norm(b.v_plus);
  b.norm_minus = op_norm(b.v_minus);
  b.norm_zero = op_norm(b.v_zero);
  Matrix re(p + q, p + q);
  re << b.v_plus, b.v_zero, -b.v_zero.adjoint(), b.v_minus;
  b.structure_residual = op_norm(re - vw);
  return b;
}

TauResult compute_tau(const KreinOperator& a) { return compute_tau(decompose(a)); }

TauResult compute_tau(const SpectralDecomposition& d) {
  const KreinOperator& op = d.op();
  require_nonnegative(op, "tau");
  TauResult r;
  r.zero_gap = d.distance_to_spectrum(0.0);
  if (r.zero_gap <= 10.0 * d.cluster_tolerance())
    throw Error(ErrorKind::Precondition,
                "tau needs 0 in the resolvent set; nearest eigenvalue is " + num(r.zero_gap) + " from 0");

  r.j_tilde = spectral_function(d, SpectralSet::positive()) - spectral_function(d, SpectralSet::negative());
  r.tau = op_norm(r.j_tilde);

  // (1/pi) int_0^inf (A + it)^-1 + (A - it)^-1 dt with t = tan(theta):
  // the integrand becomes 2 (Ac + is)^-1 A (Ac - is)^-1 on (0, pi/2), kept in
  // factored form since A^2 c^2 + s^2 squares the condition number. Its poles
  // sit at tan(theta) = +-i lambda, so the panels are graded geometrically in
  // t from the zero gap up to |A|.
  const Index n = op.dimension();
  const Matrix& am = op.matrix();
  const Matrix id = Matrix::Identity(n, n);
  const Complex i_unit(0.0, 1.0);
  std::vector<double> breaks{0.0};
  for (double t = 0.125 * r.zero_gap; t < 4.0 * (1.0 + op.norm()); t *= 2.0) breaks.push_back(std::atan(t));
  breaks.push_back(std::numbers::pi / 2.0);

  Matrix previous;
  constexpr int kMaxPanelNodes = 512;
  for (int nodes = 16; nodes <= kMaxPanelNodes; nodes *= 2) {
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)),
        gsl_integration_glfixed_table_free);
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
      for (int i = 0; i < nodes; ++i) {
        double theta = 0.0, weight = 0.0;
        gsl_integration_glfixed_point(breaks[p], breaks[p + 1], static_cast<std::size_t>(i), &theta, &weight,
                                      table.get());
        const double c = std::cos(theta), s = std::sin(theta);
        const Matrix left = (am * c + id * (i_unit * s)).partialPivLu().solve(am);
        const Matrix right = (am * c - id * (i_unit * s)).partialPivLu().inverse();
        sum += weight * left * right;
      }
    Matrix jq = (2.0 / std::numbers::pi) * sum;
    const double norm = op_norm(jq);
    const double involution = op_norm(jq * jq - id);
    const bool settled = previous.size() > 0 && op_norm(jq - previous) <= 1e-9 * (1.0 + norm);
    r.j_tilde_quadrature = jq;
    r.quadrature_nodes = nodes * static_cast<int>(breaks.size() - 1);
    r.involution_residual = involution;
    if (involution <= 1e-10 * (1.0 + norm) * (1.0 + norm) && settled) {
      r.tau_quadrature = norm;
      r.cross_residual = op_norm(r.j_tilde - r.j_tilde_quadrature);
      return r;
    }
    previous = std::move(jq);
  }
  throw Error(ErrorKind::QuadratureNonConvergence,
              "resolvent integral for J~ did not settle with " + std::to_string(kMaxPanelNodes) +
                  " Gauss-Legendre nodes on each of " + std::to_string(breaks.size() - 1) +
                  " panels; |J~^2 - I| = " + num(r.involution_residual));
}

double numerical_range_bottom(const KreinOperator& v) {
  v.require_selfadjoint("numerical range");
  return min_hermitian_eigenvalue(v.gram_operator());
}

EnclosureCertificate verify_enclosure(const KreinOperator& sum, const EnclosureRegion& k) {
  return verify_enclosure(decompose(sum), k);
}

EnclosureCertificate verify_enclosure(const SpectralDecomposition& d, const EnclosureRegion& k) {
  const KreinOperator& op = d.op();
  const double band = op.tolerances().margin * d.cluster_tolerance();
  EnclosureCertificate cert;
  cert.region = k;
  cert.smallest_boundary_gap = std::numeric_limits<double>::infinity();
  cert.local = local_nonnegativity(d, k);

  const auto zero = d.find_cluster(0.0);
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    EigenvalueVerdict v;
    v.value = c.value;
    v.boundary_distance = k.signed_distance(c.value);
    v.inside = v.boundary_distance <= 0.0;
    v.type = c.is_real ? classify_real_point(d, c.value.real()).type : SignType::NonReal;
    if (std::abs(v.boundary_distance) <= band + c.radius) {
      v.indeterminate = true;
      ++cert.indeterminate;
    } else if (!v.inside) {
      cert.smallest_boundary_gap = std::min(cert.smallest_boundary_gap, v.boundary_distance);
      if (!c.is_real) {
        cert.violations.push_back({c.value, "non-real eigenvalue outside K"});
      } else if (zero && *zero == i) {
        if (cert.local->growth_zero.outcome == Outcome::Fail)
          cert.violations.push_back({c.value, "0 outside K: " + cert.local->growth_zero.note});
        else if (cert.local->growth_zero.outcome == Outcome::Indeterminate) {
          v.indeterminate = true;
          ++cert.indeterminate;
        }
      } else if (c.value.real() > 0.0 && v.type != SignType::PositiveType) {
        cert.violations.push_back({c.value, "positive eigenvalue outside K is " + std::string(to_string(v.type))});
      } else if (c.value.real() < 0.0 && v.type != SignType::NegativeType) {
        cert.violations.push_back({c.value, "negative eigenvalue outside K is " + std::string(to_string(v.type))});
      }
    }
    cert.eigenvalues.push_back(v);
  }

  if (!cert.violations.empty())
    cert.outcome = Outcome::Fail;
  else if (cert.indeterminate > 0 || cert.local->outcome != Outcome::Pass)
    cert.outcome = Outcome::Indeterminate;
  else
    cert.outcome = Outcome::Pass;
  cert.verified = cert.outcome == Outcome::Pass;

  double radius = 0.0;
  for (const auto& c : d.clusters()) radius = std::max(radius, std::abs(c.value) + c.radius);
  std::ostringstream note;
  note << "infinity is not a singular critical point of A+V (finite dimension)";
  std::vector<double> radii;
  for (double f : {2.0, 4.0}) radii.push_back(f * (radius + 1.0));
  try {
    for (const auto& [r, e] : projection_norm_profile(d, ProfileCenter::Infinity, radii))
      note << "; |E(R \\ [-" << num(r) << ", " << num(r) << "])| = " << num(e);
  } catch (const Error&) {
  }
  cert.infinity_regular_note = note.str();
  return cert;
}

EnclosureCertificate block_diagonal_region(const KreinOperator& a, const KreinOperator& v) {
  a.require_selfadjoint("block-diagonal rule");
  v.require_selfadjoint("block-diagonal rule");
  if (a.dimension() != v.dimension())
    throw Error(ErrorKind::DimensionMismatch, "A and V have different dimensions");
  const BlockPerturbation ab = split_blocks(a);
  if (ab.norm_zero > a.tolerances().structure_tol(a.norm()))
    throw Error(ErrorKind::Precondition,
                "A is not block-diagonal in the fundamental decomposition of J (off-diagonal norm " +
                    num(ab.norm_zero) + "); use the spectral-skew rule (5.3) or the relative-bound rule (5.4)");
  require_nonnegative(a, "block-diagonal rule");
  const BlockPerturbation vb = split_blocks(v);
  const EnclosureRegion k = EnclosureRegion::capsule(-vb.norm_plus, vb.norm_minus, vb.norm_zero);
  EnclosureCertificate cert = verify_enclosure(KreinOperator(a.matrix() + v.matrix(), a.symmetry(), a.tolerances()), k);
  cert.rule = EnclosureRule::BlockDiagonal;
  return cert;
}

EnclosureCertificate spectral_skew_region(const KreinOperator& a, const KreinOperator& v,
                                          const TauResult& tau) {
  require_nonnegative(a, "spectral-skew rule");
  v.require_selfadjoint("spectral-skew rule");
  if (a.dimension() != v.dimension())
    throw Error(ErrorKind::DimensionMismatch, "A and V have different dimensions");
  const KreinOperator sum(a.matrix() + v.matrix(), a.symmetry(), a.tolerances());
  const double nu = numerical_range_bottom(v);
  if (nu >= 0.0) {
    EnclosureCertificate cert = verify_enclosure(sum, EnclosureRegion::empty());
    cert.rule = EnclosureRule::SpectralSkew;
    cert.unperturbed_nonnegative_sum = true;
    if (!direct_nonnegativity(sum).is_nonnegative) {
      cert.violations.push_back({0.0, "J(A+V) is not positive semidefinite although JV is"});
      cert.outcome = Outcome::Fail;
      cert.verified = false;
    }
    return cert;
  }
  const double half = (1.0 + tau.tau) / 2.0;
  const double dd = -half * nu;
  const EnclosureRegion k = EnclosureRegion::capsule(-dd, dd, half * v.norm());
  EnclosureCertificate cert = verify_enclosure(sum, k);
  cert.rule = EnclosureRule::SpectralSkew;
  return cert;
}

std::vector<RelativeBoundFit> fit_relative_bound(const KreinOperator& a, const KreinOperator& v,
                                                 const TauResult& tau, const std::vector<double>& b_grid) {
  if (a.dimension() != v.dimension())
    throw Error(ErrorKind::DimensionMismatch, "A and V have different dimensions");
  const double t = tau.tau;
  const Matrix vv = (1.0 + t) * t * (v.matrix().adjoint() * v.matrix());
  const Matrix aa = a.matrix().adjoint() * a.matrix();
  const Index n = a.dimension();
  std::vector<RelativeBoundFit> out;
  for (double b : b_grid) {
    if (!(b >= 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidInput, "b must lie in [0, 1), got " + num(b));
    RelativeBoundFit f;
    f.b = b;
    f.a = std::max(0.0, max_hermitian_eigenvalue(vv - b * aa) / 2.0);
    f.certificate = min_hermitian_eigenvalue(2.0 * f.a * Matrix::Identity(n, n) + b * aa - vv);
    out.push_back(f);
  }
  return out;
}

namespace {

bool tau_is_one(double tau) {
  Tolerances tol;
  return tau <= 1.0 + tol.tau_tol(1.0);
}

bool refined_eligible(double tau, double b) { return !tau_is_one(tau) && b < (tau - 1.0) / (2.0 * tau); }

}  // namespace

EnclosureRegion relative_bound_region(double tau, double nu, const RelativeBoundFit& bound, bool refined,
                                      bool unbounded_nu) {
  if (refined && tau_is_one(tau))
    throw Error(ErrorKind::Precondition,
                "refined relative-bound region needs tau > 1; with tau = 1 the condition b < (tau-1)/(2tau) = 0 "
                "cannot hold");
  if (refined && !refined_eligible(tau, bound.b))
    throw Error(ErrorKind::Precondition, "refined relative-bound region needs b < (tau-1)/(2tau) = " +
                                             num((tau - 1.0) / (2.0 * tau)) + ", got b = " + num(bound.b));
  if (nu >= 0.0 && !unbounded_nu) return EnclosureRegion::empty();
  if (bound.a == 0.0) return EnclosureRegion::capsule(0.0, 0.0, 0.0);
  const double root = std::sqrt((1.0 + tau) * bound.a / (2.0 * tau));
  const double gamma = unbounded_nu ? root : std::min(root, (1.0 + tau) * std::abs(nu) / 2.0);
  if (!refined) return EnclosureRegion::ball_union(gamma, bound.a, bound.b);
  const double scale = (1.0 + tau) / (2.0 * tau * (1.0 - bound.b));
  return EnclosureRegion::ball_union(gamma, scale * bound.a, scale * bound.b);
}

std::vector<EnclosureCertificate> relative_bound_regions(const KreinOperator& a, const KreinOperator& v,
                                                         const TauResult& tau, const RelativeBoundFit& bound,
                                                         BallUnionOptions options) {
  require_nonnegative(a, "relative-bound rule");
  v.require_selfadjoint("relative-bound rule");
  if (a.dimension() != v.dimension())
    throw Error(ErrorKind::DimensionMismatch, "A and V have different dimensions");
  if (!(bound.b >= 0.0 && bound.b < 1.0))
    throw Error(ErrorKind::Precondition, "relative bound needs b in [0, 1)");
  const double scale = (1.0 + tau.tau) * tau.tau * v.norm() * v.norm() + bound.b * a.norm() * a.norm();
  if (bound.certificate < -a.tolerances().sign * (1.0 + scale))
    throw Error(ErrorKind::Precondition,
                "relative bound (a, b) is infeasible: certificate eigenvalue " + num(bound.certificate));

  const SpectralDecomposition sum = decompose(KreinOperator(a.matrix() + v.matrix(), a.symmetry(), a.tolerances()));
  const double nu = numerical_range_bottom(v);
  std::vector<EnclosureCertificate> out;
  auto emit = [&](bool refined) {
    EnclosureCertificate cert =
        verify_enclosure(sum, relative_bound_region(tau.tau, nu, bound, refined, options.unbounded_nu));
    cert.rule = refined ? EnclosureRule::RelativeBoundRefined : EnclosureRule::RelativeBound;
    cert.unperturbed_nonnegative_sum = nu >= 0.0 && !options.unbounded_nu;
    out.push_back(std::move(cert));
  };
  emit(false);
  if (options.want_refined && refined_eligible(tau.tau, bound.b) && !(nu >= 0.0 && !options.unbounded_nu))
    emit(true);
  return out;
}

}  // namespace krein
