#include "krein/report.hpp"

#include "krein/io.hpp"

namespace krein {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"re", re}, {"im", im}};
}

json real_vector_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json spectrum_json(const SpectralDecomposition& d) {
  json clusters = json::array();
  for (const auto& c : d.clusters()) {
    json members = json::array();
    for (const Complex& z : c.members) members.push_back(complex_json(z));
    clusters.push_back({{"value", complex_json(c.value)},
                        {"real", c.is_real},
                        {"algebraic_multiplicity", c.algebraic_multiplicity},
                        {"geometric_multiplicity", c.geometric_multiplicity},
                        {"radius", c.radius},
                        {"members", members},
                        {"quadrature_points", c.quadrature_points},
                        {"idempotency_residual", c.idempotency_residual}});
  }
  return {{"cluster_tolerance", d.cluster_tolerance()},
          {"completeness_residual", d.completeness_residual()},
          {"clusters", clusters}};
}

void to_json(json& j, const ConditionResult& c) {
  j = {{"outcome", to_string(c.outcome)}, {"note", c.note}};
}

void to_json(json& j, const PointClassification& p) {
  j = {{"value", p.value},
       {"type", to_string(p.type)},
       {"algebraic_multiplicity", p.algebraic_multiplicity},
       {"min_gram_eigenvalue", p.min_gram_eigenvalue},
       {"max_gram_eigenvalue", p.max_gram_eigenvalue}};
}

void to_json(json& j, const SignClassification& s) {
  j = {{"value", s.value},
       {"type", to_string(s.type)},
       {"algebraic_multiplicity", s.algebraic_multiplicity},
       {"geometric_multiplicity", s.geometric_multiplicity},
       {"root_gram_eigenvalues", real_vector_json(s.root_gram_eigenvalues)},
       {"eigenspace_gram_eigenvalues", real_vector_json(s.eigenspace_gram_eigenvalues)}};
}

void to_json(json& j, const GrowthReport& g) {
  json samples = json::array();
  for (const auto& s : g.samples) samples.push_back({{"lambda", complex_json(s.lambda)}, {"norm", s.norm}});
  json directions = json::array();
  for (const auto& d : g.directions) directions.push_back({{"angle", d.angle}, {"constant_m", d.constant_m}});
  j = {{"point", g.point ? json(*g.point) : json("infinity")},
       {"estimated_order", g.estimated_order},
       {"algebraic_order", g.algebraic_order},
       {"constant_m", g.constant_m},
       {"y_min", g.y_min},
       {"y_max", g.y_max},
       {"point_in_spectrum", g.point_in_spectrum},
       {"samples", samples}};
  if (!g.point) j["directions"] = directions;
}

void to_json(json& j, const NonnegVerdict& v) {
  j = {{"outcome", to_string(v.outcome)},
       {"is_nonnegative", v.is_nonnegative},
       {"uniformly_positive", v.uniformly_positive},
       {"min_gram_eig", v.min_gram_eig},
       {"lower_bound_gamma", v.lower_bound_gamma}};
  if (!v.spectral) return;
  json profile = json::array();
  for (const auto& [r, e] : v.zero_profile) profile.push_back({r, e});
  j["conditions"] = {{"spectrum", v.spectrum},
                     {"growth_infinity", v.growth_infinity},
                     {"growth_zero", v.growth_zero},
                     {"regular_zero", v.regular_zero}};
  j["points"] = v.points;
  j["kernel_dims"] = v.kernel_dims;
  j["kernel_gram_eigenvalues"] = real_vector_json(v.kernel_gram_eigenvalues);
  j["zero_growth"] = v.zero_growth ? json(*v.zero_growth) : json(nullptr);
  j["infinity_growth"] = v.infinity_growth ? json(*v.infinity_growth) : json(nullptr);
  j["zero_profile"] = profile;
  j["direct_agrees"] = v.direct_agrees;
}

void to_json(json& j, const SimilarityResult& s) {
  json blocking = json::array();
  for (auto b : s.blocking) blocking.push_back(to_string(b));
  j = {{"constructed", s.constructed}, {"blocking", blocking}, {"kernel_dims", s.kernel_dims}};
  if (s.j_a.size()) {
    j["j_a"] = matrix_json(s.j_a);
    j["metric"] = matrix_json(s.metric);
    j["min_metric_eigenvalue"] = s.min_metric_eigenvalue;
    j["metric_hermitian_residual"] = s.metric_hermitian_residual;
    j["selfadjoint_residual"] = s.selfadjoint_residual;
    j["tolerance"] = s.tolerance;
  }
}

void to_json(json& j, const LocalDecomposition& l) {
  j = {{"outcome", to_string(l.outcome)},
       {"neighborhood", l.neighborhood},
       {"dim_bounded", l.basis_b.cols()},
       {"dim_infinity", l.basis_inf.cols()},
       {"projection", l.projection},
       {"bounded_part", l.bounded_part},
       {"nonnegative_part", l.nonnegative_part},
       {"resolvent_part", l.resolvent_part}};
}

void to_json(json& j, const NeighborhoodCheck& c) {
  j = {{"dilation", c.dilation}, {"outcome", to_string(c.outcome)}, {"note", c.note}};
}

void to_json(json& j, const LocalNonnegReport& r) {
  j = {{"outcome", to_string(r.outcome)},
       {"spectrum", r.spectrum},
       {"growth_infinity", r.growth_infinity},
       {"growth_zero", r.growth_zero},
       {"points", r.points},
       {"neighborhoods", r.neighborhoods},
       {"cross_consistent", r.cross_consistent}};
}

void to_json(json& j, const GammaBound& g) {
  j = {{"gamma", g.gamma}, {"worst_margin", g.worst_margin}, {"samples", g.samples}, {"verified", g.verified}};
}

void to_json(json& j, const TauResult& t) {
  j = {{"tau", t.tau},
       {"tau_quadrature", t.tau_quadrature},
       {"cross_residual", t.cross_residual},
       {"involution_residual", t.involution_residual},
       {"quadrature_nodes", t.quadrature_nodes},
       {"zero_gap", t.zero_gap},
       {"j_tilde", matrix_json(t.j_tilde)}};
}

void to_json(json& j, const BlockPerturbation& b) {
  j = {{"norm_plus", b.norm_plus},
       {"norm_minus", b.norm_minus},
       {"norm_zero", b.norm_zero},
       {"structure_residual", b.structure_residual}};
}

void to_json(json& j, const RelativeBoundFit& f) {
  j = {{"a", f.a}, {"b", f.b}, {"certificate", f.certificate}};
}

void to_json(json& j, const EnclosureCertificate& c) {
  json violations = json::array();
  for (const auto& v : c.violations)
    violations.push_back({{"eigenvalue", complex_json(v.eigenvalue)}, {"reason", v.reason}});
  json eigenvalues = json::array();
  for (const auto& e : c.eigenvalues)
    eigenvalues.push_back({{"value", complex_json(e.value)},
                           {"location", e.indeterminate ? "margin" : (e.inside ? "inside" : "outside")},
                           {"type", to_string(e.type)},
                           {"boundary_distance", e.boundary_distance}});
  j = {{"rule", to_string(c.rule)},
       {"region", region_to_json(c.region)},
       {"outcome", to_string(c.outcome)},
       {"verified", c.verified},
       {"nonnegative_sum", c.unperturbed_nonnegative_sum},
       {"violations", violations},
       {"eigenvalues", eigenvalues},
       {"indeterminate", c.indeterminate},
       {"smallest_boundary_gap", c.smallest_boundary_gap},
       {"local", c.local ? json(*c.local) : json(nullptr)},
       {"infinity_regular_note", c.infinity_regular_note}};
}

void to_json(json& j, const SelfAdjointCheck& c) {
  j = {{"selfadjoint", c.selfadjoint}, {"residual", c.residual}, {"tolerance", c.tolerance}};
}

}  // namespace krein
