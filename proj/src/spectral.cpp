#include "krein/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace krein {

std::string_view to_string(SignType type) {
  switch (type) {
    case SignType::PositiveType: return "PositiveType";
    case SignType::NegativeType: return "NegativeType";
    case SignType::Critical: return "Critical";
    case SignType::NonReal: return "NonReal";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> computed_eigenvalues(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::QuadratureNonConvergence, "eigenvalue solver did not converge");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  // fixed order so clustering and reports do not depend on solver output order
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

using Group = std::vector<std::size_t>;  // indices into the eigenvalue list

Complex group_mean(const std::vector<Complex>& ev, const Group& g) {
  Complex s = 0.0;
  for (auto i : g) s += ev[i];
  return s / static_cast<double>(g.size());
}

double group_distance(const std::vector<Complex>& ev, const Group& a, const Group& b) {
  double d = kInf;
  for (auto i : a)
    for (auto j : b) d = std::min(d, std::abs(ev[i] - ev[j]));
  return d;
}

std::vector<Group> single_linkage(const std::vector<Complex>& ev, const std::vector<Group>& start,
                                  double radius) {
  std::vector<Group> groups = start;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < groups.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j)
        if (group_distance(ev, groups[i], groups[j]) <= radius) {
          groups[i].insert(groups[i].end(), groups[j].begin(), groups[j].end());
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
  }
  return groups;
}

// A set of m computed eigenvalues is one numerical eigenvalue when
// (A - mean)^m has an m-dimensional numerical kernel.
bool coalesces(const Matrix& a, const std::vector<Complex>& ev, const Group& g, double slack) {
  const int m = static_cast<int>(g.size());
  const NullSpace ns = null_space(shifted_power(a, group_mean(ev, g), m), slack);
  return ns.basis.cols() >= m;
}

Group flatten(const std::vector<Group>& parts, const std::vector<std::size_t>& pick) {
  Group out;
  for (auto p : pick) out.insert(out.end(), parts[p].begin(), parts[p].end());
  std::sort(out.begin(), out.end());
  return out;
}

// Splits a coarse group of fine clusters into Jordan-consistent clusters.
std::vector<Group> resolve_coarse_group(const Matrix& a, const std::vector<Complex>& ev,
                                        std::vector<Group> parts, double slack) {
  std::vector<Group> out;
  while (!parts.empty()) {
    if (parts.size() == 1) {
      out.push_back(parts.front());
      break;
    }
    std::vector<std::size_t> all(parts.size());
    std::iota(all.begin(), all.end(), 0);
    if (coalesces(a, ev, flatten(parts, all), slack)) {
      out.push_back(flatten(parts, all));
      break;
    }
    // Largest subset of the form {seed and its nearest neighbours} that coalesces.
    std::vector<std::size_t> best;
    for (std::size_t seed = 0; seed < parts.size(); ++seed) {
      std::vector<std::size_t> order = all;
      const Complex c = group_mean(ev, parts[seed]);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(group_mean(ev, parts[x]) - c) < std::abs(group_mean(ev, parts[y]) - c);
      });
      for (std::size_t k = parts.size() - 1; k >= 2 && k > best.size(); --k) {
        std::vector<std::size_t> pick(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        if (coalesces(a, ev, flatten(parts, pick), slack)) {
          best = pick;
          break;
        }
      }
    }
    if (best.empty()) {
      out.insert(out.end(), parts.begin(), parts.end());
      break;
    }
    out.push_back(flatten(parts, best));
    std::sort(best.begin(), best.end(), std::greater<>());
    for (auto b : best) parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(b));
  }
  return out;
}

Matrix contour_projection(const Matrix& a, Complex center, double radius, int points) {
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < points; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.5) / points;
    const Complex w = radius * std::polar(1.0, theta);
    const Matrix shifted = (center + w) * id - a;
    p += w * shifted.partialPivLu().solve(id);
  }
  return p / static_cast<double>(points);
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(KreinOperator op, std::vector<EigenCluster> clusters,
                                             double cluster_tol)
    : op_(std::move(op)), clusters_(std::move(clusters)), cluster_tol_(cluster_tol) {}

std::optional<std::size_t> SpectralDecomposition::find_cluster(Complex z) const {
  std::optional<std::size_t> best;
  double best_d = kInf;
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    const double d = std::abs(z - clusters_[i].value);
    if (d <= clusters_[i].radius + cluster_tol_ && d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

double SpectralDecomposition::distance_to_spectrum(Complex z) const {
  return gap_excluding(z, std::nullopt);
}

double SpectralDecomposition::gap_excluding(Complex z, std::optional<std::size_t> cluster) const {
  double d = kInf;
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    if (cluster && *cluster == i) continue;
    for (const Complex& m : clusters_[i].members) d = std::min(d, std::abs(z - m));
  }
  return d;
}

std::vector<Complex> SpectralDecomposition::eigenvalues() const {
  std::vector<Complex> out;
  for (const auto& c : clusters_) out.insert(out.end(), c.members.begin(), c.members.end());
  return out;
}

bool SpectralDecomposition::spectrum_is_real() const {
  return std::all_of(clusters_.begin(), clusters_.end(), [](const EigenCluster& c) { return c.is_real; });
}

Matrix SpectralDecomposition::sum_projections(
    const std::function<bool(const EigenCluster&)>& select) const {
  const Index n = op_.dimension();
  std::size_t chosen = 0;
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& c : clusters_)
    if (select(c)) {
      sum += c.projection;
      ++chosen;
    }
  if (chosen == clusters_.size()) return Matrix::Identity(n, n);
  if (chosen == 0) return Matrix::Zero(n, n);
  return sum;
}

double SpectralDecomposition::completeness_residual() const {
  const Index n = op_.dimension();
  const Matrix& a = op_.matrix();
  const Matrix& j = op_.j();
  Matrix sum = Matrix::Zero(n, n);
  double worst = 0.0;
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    const Matrix& p = clusters_[i].projection;
    sum += p;
    worst = std::max(worst, op_norm(p * p - p));
    worst = std::max(worst, op_norm(p * a - a * p));
    if (clusters_[i].is_real) {
      worst = std::max(worst, hermitian_residual(j * p));
    } else if (clusters_[i].conjugate && *clusters_[i].conjugate > i) {
      worst = std::max(worst, hermitian_residual(j * (p + clusters_[*clusters_[i].conjugate].projection)));
    }
  }
  return std::max(worst, op_norm(sum - Matrix::Identity(n, n)));
}

SpectralDecomposition decompose(const KreinOperator& a) {
  return decompose(a, a.tolerances().cluster_tol(a.norm()));
}

SpectralDecomposition decompose(const KreinOperator& a, double cluster_tol) {
  a.require_selfadjoint("decompose");
  const Tolerances& tol = a.tolerances();
  const Matrix& m = a.matrix();
  const std::vector<Complex> ev = computed_eigenvalues(m);

  std::vector<Group> singles(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) singles[i] = {i};
  const std::vector<Group> fine = single_linkage(ev, singles, cluster_tol);

  // Defective eigenvalues scatter by about eps^(1/k); regroup fine clusters
  // that are close on a coarse scale when the kernel ranks confirm it.
  const double coarse = 1e-3 * (1.0 + a.norm());
  std::vector<Group> groups;
  {
    std::vector<std::size_t> parent(fine.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (std::size_t i = 0; i < fine.size(); ++i)
      for (std::size_t j = i + 1; j < fine.size(); ++j)
        if (group_distance(ev, fine[i], fine[j]) <= coarse) parent[root(i)] = root(j);
    std::vector<std::vector<std::size_t>> sets;
    std::vector<std::size_t> slot(fine.size(), fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const std::size_t r = root(i);
      if (slot[r] == fine.size()) {
        slot[r] = sets.size();
        sets.emplace_back();
      }
      sets[slot[r]].push_back(i);
    }
    for (const auto& s : sets) {
      std::vector<Group> parts;
      for (auto i : s) parts.push_back(fine[i]);
      for (auto& g : resolve_coarse_group(m, ev, std::move(parts), tol.rank)) groups.push_back(std::move(g));
    }
  }

  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      const double d = group_distance(ev, groups[i], groups[j]);
      if (d <= 4.0 * cluster_tol)
        throw Error(ErrorKind::ClusterSeparation,
                    "eigenvalues " + std::to_string(std::abs(group_mean(ev, groups[i]))) + " and " +
                        std::to_string(std::abs(group_mean(ev, groups[j]))) +
                        " (moduli) are " + std::to_string(d) +
                        " apart, within 4 cluster tolerances, and do not form one eigenvalue");
    }

  std::vector<EigenCluster> clusters;
  for (const auto& g : groups) {
    EigenCluster c;
    const Complex mean = group_mean(ev, g);
    c.is_real = std::abs(mean.imag()) <= cluster_tol;
    c.value = c.is_real ? Complex(mean.real(), 0.0) : mean;
    for (auto i : g) {
      c.members.push_back(ev[i]);
      c.radius = std::max(c.radius, std::abs(ev[i] - c.value));
    }
    c.algebraic_multiplicity = static_cast<int>(g.size());
    const NullSpace ns = null_space(m - c.value * Matrix::Identity(m.rows(), m.cols()), tol.rank);
    c.geometric_multiplicity =
        std::clamp(static_cast<int>(ns.basis.cols()), 1, c.algebraic_multiplicity);
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& x, const EigenCluster& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].is_real) continue;
    double best = kInf;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i || clusters[j].is_real) continue;
      const double d = std::abs(clusters[j].value - std::conj(clusters[i].value));
      if (d <= clusters[i].radius + clusters[j].radius + cluster_tol && d < best) {
        best = d;
        clusters[i].conjugate = j;
      }
    }
  }

  const Index n = m.rows();
  if (clusters.size() == 1) {
    clusters.front().projection = Matrix::Identity(n, n);
  } else {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      EigenCluster& c = clusters[i];
      double gap = kInf;
      for (std::size_t j = 0; j < clusters.size(); ++j)
        if (j != i)
          for (const Complex& z : clusters[j].members) gap = std::min(gap, std::abs(z - c.value));
      if (gap <= c.radius)
        throw Error(ErrorKind::ClusterSeparation,
                    "no circle separates the eigenvalue cluster at " + std::to_string(c.value.real()) +
                        (c.is_real ? "" : " + i" + std::to_string(c.value.imag())) +
                        " from the rest of the spectrum");
      const double rho = std::sqrt(std::max(c.radius, 1e-2 * gap) * gap);
      int points = tol.quadrature_points;
      while (true) {
        Matrix p = contour_projection(m, c.value, rho, points);
        const double residual = op_norm(p * p - p);
        if (residual < tol.projection_tol(op_norm(p))) {
          c.projection = std::move(p);
          c.quadrature_points = points;
          c.idempotency_residual = residual;
          break;
        }
        if (points >= tol.quadrature_max_points)
          throw Error(ErrorKind::QuadratureNonConvergence,
                      "Riesz projection not idempotent after " + std::to_string(points) +
                          " quadrature points, |P^2 - P| = " + std::to_string(residual));
        points *= 2;
      }
    }
  }
  return SpectralDecomposition(a, std::move(clusters), cluster_tol);
}

bool Interval::contains(double x) const {
  const bool above = x > lo || (lo_closed && x == lo);
  const bool below = x < hi || (hi_closed && x == hi);
  return above && below;
}

SpectralSet SpectralSet::whole_line() { return {{{-kInf, kInf}}, true}; }
SpectralSet SpectralSet::none() { return {}; }
SpectralSet SpectralSet::positive() { return {{{0.0, kInf}}, false}; }
SpectralSet SpectralSet::negative() { return {{{-kInf, 0.0}}, false}; }
SpectralSet SpectralSet::point(double x) { return {{{x, x, true, true}}, false}; }
SpectralSet SpectralSet::closed(double lo, double hi) { return {{{lo, hi, true, true}}, false}; }
SpectralSet SpectralSet::outside(double r) {
  return {{{-kInf, -r}, {r, kInf}}, true};
}

bool SpectralSet::contains(double x) const {
  return std::any_of(intervals.begin(), intervals.end(), [x](const Interval& i) { return i.contains(x); });
}

Matrix spectral_function(const SpectralDecomposition& d, const SpectralSet& delta) {
  const double tol = d.cluster_tolerance();
  std::vector<bool> chosen(d.clusters().size(), false);
  for (std::size_t i = 0; i < d.clusters().size(); ++i) {
    const EigenCluster& c = d.clusters()[i];
    if (!c.is_real) continue;
    const double x = c.value.real();
    const double reach = c.radius + tol;
    for (const Interval& iv : delta.intervals) {
      if (iv.is_point()) {
        if (std::abs(x - iv.lo) <= reach) chosen[i] = true;
        continue;
      }
      for (double e : {iv.lo, iv.hi})
        if (std::isfinite(e) && std::abs(x - e) <= reach)
          throw Error(ErrorKind::BoundaryCollision,
                      "eigenvalue " + std::to_string(x) + " lies on the boundary point " +
                          std::to_string(e) + " of the spectral set");
      if (iv.contains(x)) chosen[i] = true;
    }
  }
  std::size_t k = 0;
  return d.sum_projections([&](const EigenCluster&) { return chosen[k++]; });
}

namespace {

RealVector gram_eigenvalues_on(const FundamentalSymmetry& j, const Matrix& q) {
  if (q.cols() == 0) return RealVector();
  return hermitian_eigenvalues(q.adjoint() * j.matrix() * q);
}

}  // namespace

SignClassification classify_real_point(const SpectralDecomposition& d, double lambda) {
  const auto idx = d.find_cluster(Complex(lambda, 0.0));
  if (!idx)
    throw Error(ErrorKind::NotInSpectrum, std::to_string(lambda) + " is not a computed eigenvalue");
  const EigenCluster& c = d.clusters()[*idx];
  SignClassification out;
  out.value = c.value.real();
  out.algebraic_multiplicity = c.algebraic_multiplicity;
  out.geometric_multiplicity = c.geometric_multiplicity;
  if (!c.is_real) {
    out.type = SignType::NonReal;
    return out;
  }
  const KreinOperator& op = d.op();
  const Tolerances& tol = op.tolerances();
  const Matrix q = range_basis(c.projection, c.algebraic_multiplicity);
  out.root_gram_eigenvalues = gram_eigenvalues_on(op.symmetry(), q);
  const Index n = op.dimension();
  const NullSpace ns = null_space(op.matrix() - out.value * Matrix::Identity(n, n), tol.rank);
  out.eigenspace_gram_eigenvalues = gram_eigenvalues_on(op.symmetry(), ns.basis);

  const RealVector& g = out.root_gram_eigenvalues;
  if (g.size() && g.minCoeff() > tol.sign)
    out.type = SignType::PositiveType;
  else if (g.size() && g.maxCoeff() < -tol.sign)
    out.type = SignType::NegativeType;
  else
    out.type = SignType::Critical;
  return out;
}

RootSubspaces root_subspaces(const KreinOperator& a, double lambda) {
  RootSubspaces out;
  for (int k = 0; k < 3; ++k) {
    const NullSpace ns = null_space(shifted_power(a.matrix(), lambda, k + 1), a.tolerances().rank);
    out.bases[k] = ns.basis;
    out.dims[k] = static_cast<int>(ns.basis.cols());
    out.thresholds[k] = ns.threshold;
    out.ill_conditioned = out.ill_conditioned || ns.ill_conditioned;
  }
  return out;
}

int KernelChain::largest_block() const {
  int blocks = 0;
  int prev = 0;
  for (int d : dims) {
    if (d > prev) ++blocks;
    prev = d;
  }
  return blocks;
}

KernelChain kernel_chain(const Matrix& a, Complex lambda, int max_power, double rank_slack) {
  KernelChain out;
  int prev = 0;
  for (int k = 1; k <= max_power; ++k) {
    const NullSpace ns = null_space(shifted_power(a, lambda, k), rank_slack);
    const int dim = static_cast<int>(ns.basis.cols());
    out.ill_conditioned = out.ill_conditioned || ns.ill_conditioned;
    out.dims.push_back(dim);
    if (dim == prev) break;
    prev = dim;
  }
  return out;
}

double resolvent_norm_unchecked(const Matrix& a, Complex lambda) {
  const double s = min_singular_value(a - lambda * Matrix::Identity(a.rows(), a.cols()));
  return s > 0.0 ? 1.0 / s : kInf;
}

double resolvent_norm(const SpectralDecomposition& d, Complex lambda) {
  const double dist = d.distance_to_spectrum(lambda);
  if (dist <= d.cluster_tolerance())
    throw Error(ErrorKind::Precondition, "resolvent requested at distance " + std::to_string(dist) +
                                             " from the spectrum");
  return resolvent_norm_unchecked(d.op().matrix(), lambda);
}

double resolvent_norm(const KreinOperator& a, Complex lambda) {
  const double tol = a.tolerances().cluster_tol(a.norm());
  double dist = kInf;
  for (const Complex& z : computed_eigenvalues(a.matrix())) dist = std::min(dist, std::abs(z - lambda));
  if (dist <= tol)
    throw Error(ErrorKind::Precondition, "resolvent requested at distance " + std::to_string(dist) +
                                             " from the spectrum");
  return resolvent_norm_unchecked(a.matrix(), lambda);
}

namespace {

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

constexpr int kSamplesPerDecade = 8;

}  // namespace

GrowthReport growth_order_at(const SpectralDecomposition& d, std::optional<double> point, int decades) {
  if (decades < 1) throw Error(ErrorKind::InvalidInput, "growth fit needs at least one decade");
  const Matrix& a = d.op().matrix();
  const double norm = d.op().norm();
  const int count = kSamplesPerDecade * decades + 1;
  GrowthReport out;
  out.point = point;

  if (!point) {
    const double r0 = 2.0 * (1.0 + norm);
    out.y_min = r0;
    out.y_max = r0 * std::pow(10.0, decades);
    const double pi = std::numbers::pi;
    const std::vector<double> angles = {pi / 2,      pi / 3,      pi / 4,       pi / 6,     pi / 12,
                                        2 * pi / 3,  3 * pi / 4,  5 * pi / 6,   11 * pi / 12};
    std::vector<double> xs, ys;
    for (double theta : angles) {
      DirectionBound bound{theta, 0.0};
      for (int k = 0; k < count; ++k) {
        const double r = r0 * std::pow(10.0, static_cast<double>(k) / kSamplesPerDecade);
        const Complex lambda = std::polar(r, theta);
        const double rn = resolvent_norm_unchecked(a, lambda);
        const double im = lambda.imag();
        bound.constant_m = std::max(bound.constant_m, rn * im * im / (r * r));
        if (theta == pi / 2) {
          out.samples.push_back({lambda, rn});
          xs.push_back(std::log(r));
          ys.push_back(std::log(rn));
        }
      }
      out.constant_m = std::max(out.constant_m, bound.constant_m);
      out.directions.push_back(bound);
    }
    // |R(iy)| ~ M y^(m-2) on the imaginary axis for the order-m template
    out.estimated_order = 2.0 + fit_slope(xs, ys);
    out.algebraic_order = 1;
    return out;
  }

  const double x0 = *point;
  const auto idx = d.find_cluster(Complex(x0, 0.0));
  double gap;
  double floor = 10.0 * d.cluster_tolerance();
  if (idx) {
    const EigenCluster& c = d.clusters()[*idx];
    out.point_in_spectrum = true;
    gap = d.gap_excluding(Complex(x0, 0.0), idx);
    if (!std::isfinite(gap)) gap = 1.0 + norm;
    floor += 5.0 * c.radius;
    const KernelChain chain =
        kernel_chain(a, Complex(x0, 0.0), c.algebraic_multiplicity + 1, d.op().tolerances().rank);
    out.algebraic_order = std::max(1, chain.largest_block());
  } else {
    gap = d.distance_to_spectrum(Complex(x0, 0.0));
    if (!std::isfinite(gap)) gap = 1.0 + norm;
    out.algebraic_order = 1;
  }
  out.y_max = 0.2 * gap;
  out.y_min = out.y_max * std::pow(10.0, -decades);
  if (out.y_min < floor)
    throw Error(ErrorKind::SampleRangeCollapse,
                "growth fit at " + std::to_string(x0) + " needs y down to " +
                    std::to_string(out.y_min) + " but eigenvalue scatter limits it to " +
                    std::to_string(floor));
  std::vector<double> xs, ys;
  for (int k = 0; k < count; ++k) {
    const double y = out.y_max * std::pow(10.0, -static_cast<double>(k) / kSamplesPerDecade);
    const Complex lambda(x0, y);
    const double rn = resolvent_norm_unchecked(a, lambda);
    out.samples.push_back({lambda, rn});
    xs.push_back(std::log(1.0 / y));
    ys.push_back(std::log(rn));
    out.constant_m = std::max(out.constant_m, rn * std::pow(y, out.algebraic_order));
  }
  out.estimated_order = fit_slope(xs, ys);
  return out;
}

std::vector<std::pair<double, double>> projection_norm_profile(const SpectralDecomposition& d,
                                                               ProfileCenter center,
                                                               const std::vector<double>& radii) {
  std::vector<std::pair<double, double>> out;
  for (double r : radii) {
    const SpectralSet set =
        center == ProfileCenter::Zero ? SpectralSet::closed(-r, r) : SpectralSet::outside(r);
    out.emplace_back(r, op_norm(spectral_function(d, set)));
  }
  return out;
}

}  // namespace krein
