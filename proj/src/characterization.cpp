#include "krein/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace krein {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

Outcome combine(Outcome a, Outcome b) {
  if (a == Outcome::Fail || b == Outcome::Fail) return Outcome::Fail;
  if (a == Outcome::Indeterminate || b == Outcome::Indeterminate) return Outcome::Indeterminate;
  return Outcome::Pass;
}

std::string_view to_string(SimilarityBlock block) {
  switch (block) {
    case SimilarityBlock::NonRealSpectrum: return "non_real_spectrum";
    case SimilarityBlock::SignType: return "sign_type";
    case SimilarityBlock::KernelChain: return "kernel_chain";
  }
  return "unknown";
}

namespace {

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::string num(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

void add_note(ConditionResult& c, Outcome o, const std::string& note) {
  c.outcome = combine(c.outcome, o);
  if (!c.note.empty()) c.note += "; ";
  c.note += note;
}

PointClassification point_of(const SignClassification& s) {
  PointClassification p;
  p.value = s.value;
  p.type = s.type;
  p.algebraic_multiplicity = s.algebraic_multiplicity;
  if (s.root_gram_eigenvalues.size()) {
    p.min_gram_eigenvalue = s.root_gram_eigenvalues.minCoeff();
    p.max_gram_eigenvalue = s.root_gram_eigenvalues.maxCoeff();
  }
  return p;
}

bool type_matches_half_line(const PointClassification& p) {
  return p.value > 0.0 ? p.type == SignType::PositiveType : p.type == SignType::NegativeType;
}

std::optional<GrowthReport> growth_with_fallback(const SpectralDecomposition& d, double point) {
  for (int decades = 3; decades >= 1; --decades) {
    try {
      return growth_order_at(d, point, decades);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SampleRangeCollapse) throw;
    }
  }
  return std::nullopt;
}

ConditionResult infinity_condition(const SpectralDecomposition& d, std::optional<GrowthReport>& report) {
  ConditionResult c;
  report = growth_order_at(d, std::nullopt, 3);
  const bool finite = std::isfinite(report->constant_m);
  if (!finite || report->estimated_order > 2.2)
    add_note(c, Outcome::Fail,
             "resolvent at infinity exceeds the order-2 template (fitted order " +
                 num(report->estimated_order) + ")");
  else
    add_note(c, Outcome::Pass, "order-2 template holds with M = " + num(report->constant_m));
  return c;
}

struct ZeroCondition {
  ConditionResult result;
  std::optional<GrowthReport> growth;
  std::vector<int> kernel_dims;
  RealVector gram;
  bool growth_failed = false;
};

// Growth of order <= 2 at zero and [Af, f] >= 0 on ker A^2.
ZeroCondition zero_condition(const SpectralDecomposition& d) {
  ZeroCondition z;
  const KreinOperator& op = d.op();
  const Tolerances& tol = op.tolerances();
  const RootSubspaces rs = root_subspaces(op, 0.0);
  z.kernel_dims.assign(rs.dims.begin(), rs.dims.end());
  const auto idx = d.find_cluster(Complex(0.0, 0.0));
  if (!idx) {
    add_note(z.result, Outcome::Pass, "0 is in the resolvent set");
    z.growth = growth_with_fallback(d, 0.0);
    return z;
  }

  const EigenCluster& c = d.clusters()[*idx];
  const KernelChain chain = kernel_chain(op.matrix(), 0.0, c.algebraic_multiplicity + 1, tol.rank);
  const int block = chain.largest_block();
  z.growth = growth_with_fallback(d, 0.0);
  if (block > 2) {
    z.growth_failed = true;
    add_note(z.result, Outcome::Fail,
             "largest Jordan block at 0 has size " + std::to_string(block) +
                 ", so the resolvent grows like |Im l|^-" + std::to_string(block));
  } else {
    add_note(z.result, Outcome::Pass, "largest Jordan block at 0 has size " + std::to_string(block));
  }
  if (chain.ill_conditioned)
    add_note(z.result, Outcome::Indeterminate, "rank decision for the kernel chain is ill-conditioned");
  if (z.growth && std::abs(z.growth->estimated_order - std::max(block, 1)) > 0.5)
    add_note(z.result, Outcome::Indeterminate,
             "log-log growth estimate " + num(z.growth->estimated_order) +
                 " disagrees with the Jordan structure");
  if (!z.growth) add_note(z.result, Outcome::Pass, "growth samples unavailable (eigenvalue scatter)");

  const Matrix& q = rs.bases[1];
  if (q.cols() > 0) {
    z.gram = hermitian_eigenvalues(q.adjoint() * op.gram_operator() * q);
    const double bound = -tol.operator_sign_tol(op.norm());
    if (z.gram.minCoeff() < bound)
      add_note(z.result, Outcome::Fail,
               "[Af, f] takes the value " + num(z.gram.minCoeff()) + " on the unit sphere of ker A^2");
    else
      add_note(z.result, Outcome::Pass, "[Af, f] >= 0 on ker A^2");
  }
  return z;
}

struct SpectrumCondition {
  ConditionResult result;
  std::vector<PointClassification> points;
};

SpectrumCondition spectrum_condition(const SpectralDecomposition& d) {
  SpectrumCondition s;
  const auto zero = d.find_cluster(Complex(0.0, 0.0));
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    if (!c.is_real) {
      add_note(s.result, Outcome::Fail, "non-real eigenvalue " + num(c.value));
      continue;
    }
    const PointClassification p = point_of(classify_real_point(d, c.value.real()));
    s.points.push_back(p);
    if (zero && *zero == i) continue;
    if (!type_matches_half_line(p))
      add_note(s.result, Outcome::Fail,
               "eigenvalue " + num(p.value) + " is " + std::string(to_string(p.type)));
  }
  if (s.result.note.empty()) s.result.note = "real spectrum, sign types match their half-lines";
  return s;
}

NonnegVerdict characterize(const SpectralDecomposition& d, bool root_vector_form) {
  NonnegVerdict v = direct_nonnegativity(d.op());
  v.spectral = true;
  SpectrumCondition sc = spectrum_condition(d);
  v.spectrum = sc.result;
  v.points = std::move(sc.points);
  v.growth_infinity = infinity_condition(d, v.infinity_growth);
  ZeroCondition zc = zero_condition(d);
  v.growth_zero = zc.result;
  v.zero_growth = std::move(zc.growth);
  v.kernel_dims = std::move(zc.kernel_dims);
  v.kernel_gram_eigenvalues = std::move(zc.gram);

  v.regular_zero.outcome = Outcome::Pass;
  v.regular_zero.note = "no singular critical points in finite dimension";
  if (root_vector_form) {
    const auto zero = d.find_cluster(Complex(0.0, 0.0));
    const double reach = zero ? d.clusters()[*zero].radius + 2.0 * d.cluster_tolerance() : 0.0;
    const double gap = d.gap_excluding(Complex(0.0, 0.0), zero);
    std::vector<double> radii;
    if (std::isfinite(gap)) {
      for (double f : {0.5, 0.25, 0.125})
        if (f * gap > reach) radii.push_back(f * gap);
    } else {
      radii = {1.0};
    }
    try {
      v.zero_profile = projection_norm_profile(d, ProfileCenter::Zero, radii);
      v.regular_zero.note += "; |E([-e, e])| bounded on the sampled radii";
    } catch (const Error& e) {
      v.regular_zero.note += std::string("; profile unavailable: ") + e.what();
    }
  }

  v.outcome = combine(combine(v.spectrum.outcome, v.growth_infinity.outcome), v.growth_zero.outcome);
  if (v.outcome != Outcome::Indeterminate)
    v.direct_agrees = (v.outcome == Outcome::Pass) == v.is_nonnegative;
  return v;
}

}  // namespace

NonnegVerdict direct_nonnegativity(const KreinOperator& a) {
  a.require_selfadjoint("non-negativity test");
  const Tolerances& tol = a.tolerances();
  NonnegVerdict v;
  v.min_gram_eig = min_hermitian_eigenvalue(a.gram_operator());
  v.lower_bound_gamma = v.min_gram_eig;
  v.is_nonnegative = v.min_gram_eig >= -tol.operator_sign_tol(a.norm());
  v.uniformly_positive = v.is_nonnegative && min_singular_value(a.matrix()) > tol.cluster_tol(a.norm());
  v.outcome = v.is_nonnegative ? Outcome::Pass : Outcome::Fail;
  return v;
}

NonnegVerdict spectral_nonnegativity(const KreinOperator& a) { return spectral_nonnegativity(decompose(a)); }
NonnegVerdict spectral_nonnegativity(const SpectralDecomposition& d) { return characterize(d, false); }

NonnegVerdict root_vector_nonnegativity(const KreinOperator& a) {
  return root_vector_nonnegativity(decompose(a));
}
NonnegVerdict root_vector_nonnegativity(const SpectralDecomposition& d) { return characterize(d, true); }

SimilarityResult hilbert_similarity(const KreinOperator& a) { return hilbert_similarity(decompose(a)); }

SimilarityResult hilbert_similarity(const SpectralDecomposition& d) {
  const KreinOperator& op = d.op();
  const Tolerances& tol = op.tolerances();
  const Index n = op.dimension();
  SimilarityResult r;

  const auto zero = d.find_cluster(Complex(0.0, 0.0));
  if (!d.spectrum_is_real()) r.blocking.push_back(SimilarityBlock::NonRealSpectrum);
  bool sign_ok = true;
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    if (!c.is_real || (zero && *zero == i)) continue;
    if (!type_matches_half_line(point_of(classify_real_point(d, c.value.real())))) sign_ok = false;
  }
  if (!sign_ok) r.blocking.push_back(SimilarityBlock::SignType);
  if (zero) {
    const KernelChain chain =
        kernel_chain(op.matrix(), 0.0, d.clusters()[*zero].algebraic_multiplicity + 1, tol.rank);
    r.kernel_dims = chain.dims;
    if (chain.dims.size() >= 2 && chain.dims[1] != chain.dims[0])
      r.blocking.push_back(SimilarityBlock::KernelChain);
  }
  if (!r.blocking.empty()) return r;

  auto side = [&](int sign) {
    std::size_t i = 0;
    return d.sum_projections([&](const EigenCluster& c) {
      const bool at_zero = zero && *zero == i++;
      return c.is_real && !at_zero && c.value.real() * sign > 0.0;
    });
  };
  Matrix j_zero = Matrix::Zero(n, n);
  if (zero) {
    const EigenCluster& c = d.clusters()[*zero];
    const Matrix q = range_basis(c.projection, c.algebraic_multiplicity);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(q.adjoint() * op.j() * q));
    const RealVector signs = es.eigenvalues().unaryExpr([](double x) { return x < 0.0 ? -1.0 : 1.0; });
    const Matrix s = es.eigenvectors() * signs.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    j_zero = q * s * q.adjoint() * c.projection;
  }
  r.j_a = side(1) - side(-1) + j_zero;
  r.metric = op.j() * r.j_a;
  r.metric_hermitian_residual = hermitian_residual(r.metric);
  r.min_metric_eigenvalue = min_hermitian_eigenvalue(r.metric);
  r.selfadjoint_residual = hermitian_residual(r.metric * op.matrix());
  const double g_norm = op_norm(r.metric);
  r.tolerance = tol.projection_tol(g_norm) * (1.0 + op.norm());
  r.constructed = r.min_metric_eigenvalue > tol.sign && r.metric_hermitian_residual <= r.tolerance &&
                  r.selfadjoint_residual <= r.tolerance;
  return r;
}

LocalDecomposition local_decomposition(const KreinOperator& a, const Neighborhood& u) {
  return local_decomposition(decompose(a), u);
}

LocalDecomposition local_decomposition(const SpectralDecomposition& d, const Neighborhood& u) {
  const KreinOperator& op = d.op();
  const Tolerances& tol = op.tolerances();
  const double ctol = d.cluster_tolerance();
  const Index n = op.dimension();
  LocalDecomposition l;
  l.neighborhood = u.describe();

  if (!u.is_empty() && std::abs(u.signed_distance(0.0)) <= ctol)
    throw Error(ErrorKind::BoundaryCollision, "0 lies on the boundary of U");
  std::vector<bool> outside(d.clusters().size(), false);
  int m_inf = 0;
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    const double sd = u.signed_distance(c.value);
    if (std::abs(sd) <= c.radius + ctol)
      throw Error(ErrorKind::BoundaryCollision, "eigenvalue " + num(c.value) + " lies on the boundary of U");
    if (sd > 0.0) {
      if (!c.is_real)
        throw Error(ErrorKind::Precondition,
                    "non-real eigenvalue " + num(c.value) + " lies outside U, so A is not non-negative " +
                        "over any region missing it");
      outside[i] = true;
      m_inf += c.algebraic_multiplicity;
    }
  }
  std::size_t k = 0;
  l.e_inf = d.sum_projections([&](const EigenCluster&) { return outside[k++]; });
  const Matrix id = Matrix::Identity(n, n);
  l.basis_inf = range_basis(l.e_inf, m_inf);
  l.basis_b = range_basis(id - l.e_inf, n - m_inf);
  const Matrix& am = op.matrix();
  l.a_b = l.basis_b.adjoint() * am * l.basis_b;
  l.a_inf = l.basis_inf.adjoint() * am * l.basis_inf;
  l.gram_b = l.basis_b.adjoint() * op.j() * l.basis_b;
  l.gram_inf = l.basis_inf.adjoint() * op.j() * l.basis_inf;

  const double ptol = tol.projection_tol(op_norm(l.e_inf));
  const double idem = op_norm(l.e_inf * l.e_inf - l.e_inf);
  const double sa = hermitian_residual(op.j() * l.e_inf);
  if (idem <= ptol && sa <= ptol)
    add_note(l.projection, Outcome::Pass, "E_inf idempotent and [.,.]-self-adjoint");
  else
    add_note(l.projection, Outcome::Fail,
             "E_inf residuals |E^2 - E| = " + num(idem) + ", |JE - (JE)*| = " + num(sa));

  auto eigs = [](const Matrix& m) {
    std::vector<Complex> out;
    if (m.rows() == 0) return out;
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
  };
  // eigenvalues of a defective block scatter by about eps^(1/k), so the
  // margin widens with the largest cluster radius
  double scatter = 0.0;
  for (const auto& c : d.clusters()) scatter = std::max(scatter, c.radius);
  const double margin = ctol + scatter;
  l.bounded_part.outcome = Outcome::Pass;
  l.bounded_part.note = "sigma(A_b) in closure(U)";
  for (const Complex& z : eigs(l.a_b))
    if (u.signed_distance(z) > margin) {
      add_note(l.bounded_part, Outcome::Fail, "A_b has eigenvalue " + num(z) + " outside closure(U)");
    }
  if (l.basis_inf.cols() > 0) {
    const double g = min_hermitian_eigenvalue(l.basis_inf.adjoint() * op.gram_operator() * l.basis_inf);
    if (g >= -tol.operator_sign_tol(op.norm()))
      add_note(l.nonnegative_part, Outcome::Pass, "A_inf non-negative");
    else
      add_note(l.nonnegative_part, Outcome::Fail, "A_inf compressed Gram has eigenvalue " + num(g));
  } else {
    add_note(l.nonnegative_part, Outcome::Pass, "A_inf acts on the zero space");
  }
  l.resolvent_part.outcome = Outcome::Pass;
  l.resolvent_part.note = "U in rho(A_inf)";
  for (const Complex& z : eigs(l.a_inf))
    if (u.signed_distance(z) < -margin)
      add_note(l.resolvent_part, Outcome::Fail, "A_inf has eigenvalue " + num(z) + " inside U");

  l.outcome = combine(combine(l.projection.outcome, l.bounded_part.outcome),
                      combine(l.nonnegative_part.outcome, l.resolvent_part.outcome));
  return l;
}

LocalNonnegReport local_nonnegativity(const KreinOperator& a, const EnclosureRegion& k) {
  return local_nonnegativity(decompose(a), k);
}

LocalNonnegReport local_nonnegativity(const SpectralDecomposition& d, const EnclosureRegion& k) {
  const KreinOperator& op = d.op();
  const double ctol = d.cluster_tolerance();
  const double band = op.tolerances().margin * ctol;
  LocalNonnegReport r;
  std::vector<Complex> offending;

  const auto zero = d.find_cluster(Complex(0.0, 0.0));
  r.spectrum.outcome = Outcome::Pass;
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    const double sd = k.signed_distance(c.value);
    if (!c.is_real) {
      if (sd > band + c.radius) {
        add_note(r.spectrum, Outcome::Fail, "non-real eigenvalue " + num(c.value) + " outside K");
        offending.push_back(c.value);
      } else if (sd > -band - c.radius) {
        add_note(r.spectrum, Outcome::Indeterminate, "non-real eigenvalue " + num(c.value) + " on the margin of K");
      }
      continue;
    }
    const PointClassification p = point_of(classify_real_point(d, c.value.real()));
    r.points.push_back(p);
    if (zero && *zero == i) continue;
    if (std::abs(sd) <= band + c.radius) {
      add_note(r.spectrum, Outcome::Indeterminate, "eigenvalue " + num(p.value) + " on the margin of K");
    } else if (sd > 0.0 && !type_matches_half_line(p)) {
      add_note(r.spectrum, Outcome::Fail,
               "eigenvalue " + num(p.value) + " outside K is " + std::string(to_string(p.type)));
      offending.push_back(c.value);
    }
  }
  if (r.spectrum.note.empty()) r.spectrum.note = "spectrum outside K is real and correctly typed";

  std::optional<GrowthReport> inf_report;
  r.growth_infinity = infinity_condition(d, inf_report);

  const double sd0 = k.signed_distance(0.0);
  if (sd0 < -band) {
    r.growth_zero.note = "0 lies in K";
  } else {
    ZeroCondition zc = zero_condition(d);
    r.growth_zero = zc.result;
    if (zc.result.outcome == Outcome::Fail) {
      if (sd0 <= band) {
        r.growth_zero.outcome = Outcome::Indeterminate;
        r.growth_zero.note += "; 0 is on the margin of K";
      } else {
        offending.push_back(0.0);
      }
    }
  }
  r.outcome = combine(combine(r.spectrum.outcome, r.growth_infinity.outcome), r.growth_zero.outcome);

  std::vector<Complex> offending_outside_last;
  for (double f : {1.5, 1.2, 1.05}) {
    NeighborhoodCheck check;
    check.dilation = f;
    const Neighborhood u = k.has_interior() ? Neighborhood::interior(dilate(k, f)) : Neighborhood::discs({});
    if (!u.is_empty() && std::abs(u.signed_distance(0.0)) <= ctol) {
      check.outcome = Outcome::Indeterminate;
      check.note = "0 on the boundary of U, skipped";
      r.neighborhoods.push_back(check);
      continue;
    }
    try {
      const LocalDecomposition l = local_decomposition(d, u);
      check.outcome = l.outcome;
      check.note = l.outcome == Outcome::Pass ? "decomposition valid" : "decomposition clause failed";
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Precondition) {
        check.outcome = Outcome::Fail;
      } else if (e.kind() == ErrorKind::BoundaryCollision) {
        check.outcome = Outcome::Indeterminate;
      } else {
        throw;
      }
      check.note = e.what();
    }
    if (f == 1.05)
      for (const Complex& z : offending)
        if (!u.contains(z)) offending_outside_last.push_back(z);
    r.neighborhoods.push_back(check);
  }

  if (r.outcome == Outcome::Pass) {
    r.cross_consistent = std::none_of(r.neighborhoods.begin(), r.neighborhoods.end(),
                                      [](const NeighborhoodCheck& c) { return c.outcome == Outcome::Fail; });
  } else if (r.outcome == Outcome::Fail) {
    const bool all_pass = std::all_of(r.neighborhoods.begin(), r.neighborhoods.end(),
                                      [](const NeighborhoodCheck& c) { return c.outcome == Outcome::Pass; });
    r.cross_consistent = !(all_pass && !offending_outside_last.empty());
  }
  if (!r.cross_consistent) r.outcome = combine(r.outcome, Outcome::Indeterminate);
  return r;
}

GammaBound lower_bound_gamma(const KreinOperator& a, const LocalDecomposition& l, int samples,
                             std::uint64_t seed) {
  const Index n = a.dimension();
  const Tolerances& tol = a.tolerances();
  auto j_orthonormal = [&](const Matrix& q) {
    if (q.cols() == 0) return Matrix(n, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(q.adjoint() * a.j() * q));
    const RealVector scale = es.eigenvalues().unaryExpr([](double x) { return 1.0 / std::sqrt(std::abs(x)); });
    return Matrix(q * es.eigenvectors() * scale.cast<Complex>().asDiagonal());
  };
  const Matrix bb = j_orthonormal(l.basis_b);
  const Matrix bi = j_orthonormal(l.basis_inf);
  Matrix basis(n, n);
  basis << bb, bi;
  const Matrix inv = basis.partialPivLu().inverse();
  const Matrix coords = inv * a.matrix() * basis;  // block diagonal in (b, inf)
  const Index kb = bb.cols();

  GammaBound g;
  g.gamma = kb > 0 ? -op_norm(coords.topLeftCorner(kb, kb)) : 0.0;
  g.metric = inv.adjoint() * inv;
  g.samples = samples;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double slack = tol.operator_sign_tol(a.norm()) * (1.0 + op_norm(basis) * op_norm(basis)) *
                       (1.0 + op_norm(coords));
  g.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int s = 0; s < samples; ++s) {
    Vector f(n);
    for (Index i = 0; i < n; ++i) f(i) = Complex(normal(rng), normal(rng));
    const double form = (f.adjoint() * a.gram_operator() * f)(0).real();
    const double norm_new = (inv * f).squaredNorm();
    const double margin = (form - g.gamma * norm_new) / norm_new;
    g.worst_margin = std::min(g.worst_margin, margin);
    if (margin < -slack) ok = false;
  }
  g.verified = ok;
  return g;
}

}  // namespace krein
