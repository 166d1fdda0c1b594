#include <random>

#include <gtest/gtest.h>

#include "krein/instances.hpp"
#include "krein/perturbation.hpp"

using namespace krein;

namespace {

FundamentalSymmetry sig11() { return FundamentalSymmetry::from_signature(1, 1); }

KreinOperator op2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return KreinOperator(m, sig11());
}

KreinOperator diag_2_m2() { return op2(2.0, 0.0, 0.0, -2.0); }
KreinOperator hand() { return op2(5.0 / 3, 4.0 / 3, -4.0 / 3, -5.0 / 3); }
KreinOperator skew(double v) { return op2(0.0, v, -v, 0.0); }

KreinOperator sum(const KreinOperator& a, const KreinOperator& v) {
  return KreinOperator(a.matrix() + v.matrix(), a.symmetry());
}

// every grid point of `inner` also lies in `outer`
bool grid_subset(const EnclosureRegion& inner, const EnclosureRegion& outer, double extent) {
  for (int i = -80; i <= 80; ++i)
    for (int m = -80; m <= 80; ++m) {
      const Complex z(extent * i / 80.0, extent * m / 80.0);
      if (inner.contains(z) && !outer.contains(z)) return false;
    }
  return true;
}

bool grid_strict_subset(const EnclosureRegion& inner, const EnclosureRegion& outer, double extent) {
  if (!grid_subset(inner, outer, extent)) return false;
  for (int i = -80; i <= 80; ++i)
    for (int m = -80; m <= 80; ++m) {
      const Complex z(extent * i / 80.0, extent * m / 80.0);
      if (outer.contains(z) && !inner.contains(z)) return true;
    }
  return false;
}

Instance nonneg_instance(std::uint64_t seed, int n, double floor) {
  InstanceSpec spec;
  spec.kind = InstanceKind::RandomNonnegative;
  spec.seed = seed;
  spec.dimension = n;
  spec.eigenvalue_floor = floor;
  spec.perturbation_scale = 0.3;
  spec.mix_basis = seed % 2 == 0;
  return generate(spec);
}

}  // namespace

TEST(SplitBlocks, Examples) {
  const auto b = split_blocks(skew(2.5));
  EXPECT_NEAR(b.norm_plus, 0.0, 1e-15);
  EXPECT_NEAR(b.norm_minus, 0.0, 1e-15);
  EXPECT_NEAR(b.norm_zero, 2.5, 1e-14);

  const auto diag = split_blocks(op2(1.0, 0.0, 0.0, -3.0));
  EXPECT_EQ(diag.norm_zero, 0.0);
  EXPECT_NEAR(diag.norm_minus, 3.0, 1e-14);

  const auto id = split_blocks(op2(1.0, 0.0, 0.0, 1.0));
  EXPECT_NEAR(id.norm_plus, 1.0, 1e-15);
  EXPECT_NEAR(id.norm_minus, 1.0, 1e-15);
  EXPECT_LT(id.structure_residual, 1e-14);
}

TEST(SplitBlocks, ReassemblesUnderMixedBasis) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = nonneg_instance(seed * 2, 6, 0.0);
    ASSERT_TRUE(inst.v.has_value());
    const auto b = split_blocks(KreinOperator(*inst.v, inst.j));
    EXPECT_LT(b.structure_residual, 1e-12);
    EXPECT_LT(hermitian_residual(b.v_plus), 1e-12);
    EXPECT_LT(hermitian_residual(b.v_minus), 1e-12);
  }
}

TEST(BlockDiagonalRegion, SkewFamilyVerifies) {
  for (int k = 1; k <= 12; ++k) {
    const double v = 0.25 * k;
    const auto cert = block_diagonal_region(diag_2_m2(), skew(v));
    const auto& c = std::get<Capsule>(cert.region.variant());
    EXPECT_NEAR(c.r, v, 1e-14);
    EXPECT_NEAR(c.p, 0.0, 1e-14);
    EXPECT_TRUE(cert.verified) << "v = " << v;
    EXPECT_TRUE(cert.violations.empty());
    // characteristic polynomial l^2 = 4 - v^2
    for (const auto& e : cert.eigenvalues) {
      if (v < 2.0)
        EXPECT_NEAR(std::abs(e.value.real()), std::sqrt(4.0 - v * v), 1e-7);
      else if (v > 2.0)
        EXPECT_NEAR(std::abs(e.value.imag()), std::sqrt(v * v - 4.0), 1e-7);
    }
  }
}

TEST(BlockDiagonalRegion, TypedEigenvaluesOutside) {
  const auto cert = block_diagonal_region(diag_2_m2(), skew(1.0));
  ASSERT_EQ(cert.eigenvalues.size(), 2u);
  for (const auto& e : cert.eigenvalues) {
    EXPECT_FALSE(e.inside);
    EXPECT_EQ(e.type, e.value.real() > 0 ? SignType::PositiveType : SignType::NegativeType);
  }
  const auto big = block_diagonal_region(diag_2_m2(), skew(3.0));
  for (const auto& e : big.eigenvalues) EXPECT_TRUE(e.inside);
}

TEST(BlockDiagonalRegion, ZeroPerturbationGivesPoint) {
  const auto cert = block_diagonal_region(diag_2_m2(), skew(0.0));
  EXPECT_FALSE(cert.region.has_interior());
  EXPECT_TRUE(cert.verified);
}

TEST(BlockDiagonalRegion, RefusesCoupledOperator) {
  try {
    block_diagonal_region(hand(), skew(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Tau, Examples) {
  const auto d = compute_tau(diag_2_m2());
  EXPECT_NEAR(d.tau, 1.0, 1e-12);
  EXPECT_LT(op_norm(d.j_tilde - sig11().matrix()), 1e-12);

  const auto h = compute_tau(hand());
  EXPECT_NEAR(h.tau, 3.0, 1e-9);
  EXPECT_LT(op_norm(h.j_tilde - hand().matrix()), 1e-9);
  EXPECT_LT(h.cross_residual, 1e-7 * 4.0);

  Matrix pd(3, 3);
  pd << 3.0, 1.0, 0.0, 1.0, 2.0, 0.5, 0.0, 0.5, 1.0;
  const auto hilbert = compute_tau(KreinOperator(pd, FundamentalSymmetry::from_signature(3, 0)));
  EXPECT_NEAR(hilbert.tau, 1.0, 1e-12);
  EXPECT_LT(op_norm(hilbert.j_tilde - Matrix::Identity(3, 3)), 1e-12);
}

TEST(Tau, RefusesSingularOrIndefinite) {
  Matrix a = Matrix::Zero(2, 2), j = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  j(0, 1) = j(1, 0) = 1.0;
  EXPECT_THROW(compute_tau(KreinOperator(a, FundamentalSymmetry::from_matrix(j))), Error);
  EXPECT_THROW(compute_tau(op2(-1.0, 0.0, 0.0, 1.0)), Error);
}

TEST(Tau, InvolutionProperties) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = nonneg_instance(seed, 3 + static_cast<int>(seed % 8), 0.3);
    const KreinOperator a(inst.a, inst.j);
    const auto t = compute_tau(a);
    const Index n = a.dimension();
    const double tol = 1e-9 * (1.0 + t.tau) * (1.0 + t.tau);
    EXPECT_LT(op_norm(t.j_tilde * t.j_tilde - Matrix::Identity(n, n)), tol);
    EXPECT_LT(hermitian_residual(inst.j.matrix() * t.j_tilde), tol);
    EXPECT_LT(op_norm(t.j_tilde * inst.a - inst.a * t.j_tilde), tol * (1.0 + a.norm()));
    EXPECT_GE(t.tau, 1.0 - 1e-12);
    EXPECT_LE(t.cross_residual, 1e-7 * (1.0 + t.tau));
    EXPECT_EQ(t.tau <= 1.0 + 1e-7, hermitian_residual(t.j_tilde) <= 1e-6) << "seed " << seed;
  }
}

TEST(SpectralSkewRegion, Examples) {
  const auto t1 = compute_tau(diag_2_m2());
  const auto cert = spectral_skew_region(diag_2_m2(), skew(1.0), t1);
  const auto& c = std::get<Capsule>(cert.region.variant());
  EXPECT_NEAR(c.p, -1.0, 1e-12);
  EXPECT_NEAR(c.q, 1.0, 1e-12);
  EXPECT_NEAR(c.r, 1.0, 1e-12);
  EXPECT_TRUE(cert.verified);

  // JV = diag(0.5, 0.25) >= 0
  const auto v = op2(0.5, 0.0, 0.0, -0.25);
  const auto psd = spectral_skew_region(diag_2_m2(), v, t1);
  EXPECT_TRUE(psd.unperturbed_nonnegative_sum);
  EXPECT_TRUE(psd.region.is_empty());
  EXPECT_TRUE(psd.verified);
  EXPECT_TRUE(direct_nonnegativity(sum(diag_2_m2(), v)).is_nonnegative);
}

TEST(SpectralSkewRegion, LargerTauGivesLargerCapsule) {
  const double eps = 0.05;
  const auto a = hand();
  const auto t3 = compute_tau(a);
  const auto wide = spectral_skew_region(a, skew(eps), t3);
  const auto narrow = spectral_skew_region(diag_2_m2(), skew(eps), compute_tau(diag_2_m2()));
  EXPECT_TRUE(wide.verified);
  EXPECT_TRUE(narrow.verified);
  EXPECT_NEAR(std::get<Capsule>(wide.region.variant()).r, 2.0 * eps, 1e-8);
  EXPECT_TRUE(grid_strict_subset(narrow.region, wide.region, 0.2));
}

TEST(RelativeBound, FitExamples) {
  const auto a = hand();
  const auto t = compute_tau(a);
  const auto fits = fit_relative_bound(a, skew(0.4), t, {0.0, 0.1, 0.3});
  ASSERT_EQ(fits.size(), 3u);
  EXPECT_NEAR(fits[0].a, (1 + t.tau) * t.tau * 0.16 / 2.0, 1e-9);
  for (const auto& f : fits) EXPECT_GE(f.certificate, -1e-8 * (1 + a.norm() * a.norm()));
  EXPECT_GE(fits[0].a, fits[1].a);
  EXPECT_GE(fits[1].a, fits[2].a);

  for (const auto& f : fit_relative_bound(a, skew(0.0), t, {0.0, 0.2})) EXPECT_EQ(f.a, 0.0);
}

TEST(RelativeBound, CertificatesOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = nonneg_instance(seed, 6, 0.3);
    const KreinOperator a(inst.a, inst.j), v(*inst.v, inst.j);
    const auto t = compute_tau(a);
    for (const auto& f : fit_relative_bound(a, v, t, {0.0, 0.05, 0.25, 0.5})) {
      const Index n = a.dimension();
      const Matrix m = 2.0 * f.a * Matrix::Identity(n, n) + f.b * inst.a.adjoint() * inst.a -
                       (1 + t.tau) * t.tau * inst.v->adjoint() * *inst.v;
      EXPECT_NEAR(min_hermitian_eigenvalue(m), f.certificate, 1e-8 * (1 + op_norm(m)));
      EXPECT_GE(f.certificate, -1e-8 * (1 + op_norm(m)));
    }
  }
}

TEST(RelativeBound, ZeroBMatchesCapsule) {
  for (const bool hilbert_like : {true, false}) {
    const auto a = hilbert_like ? diag_2_m2() : hand();
    const auto v = skew(0.3);
    const auto t = compute_tau(a);
    const auto capsule = spectral_skew_region(a, v, t);
    const auto fit = fit_relative_bound(a, v, t, {0.0}).front();
    const auto regions = relative_bound_regions(a, v, t, fit);
    const auto& match = t.tau > 1.0 + 1e-7 ? regions.back() : regions.front();
    EXPECT_EQ(match.rule, t.tau > 1.0 + 1e-7 ? EnclosureRule::RelativeBoundRefined : EnclosureRule::RelativeBound);
    const auto& b = std::get<BallUnion>(match.region.variant());
    const auto& c = std::get<Capsule>(capsule.region.variant());
    EXPECT_NEAR(b.gamma, c.q, 1e-9);
    EXPECT_NEAR(std::sqrt(b.c0), c.r, 1e-9);
    EXPECT_NEAR(b.c1, 0.0, 1e-15);
    for (const auto& r : regions) EXPECT_TRUE(r.verified);
  }
}

TEST(RelativeBound, RefinedInsidePlain) {
  const auto a = hand();
  const auto t = compute_tau(a);
  const auto v = skew(0.2);
  ASSERT_LT(numerical_range_bottom(v), 0.0);
  RelativeBoundFit fit = fit_relative_bound(a, v, t, {0.1}).front();
  const auto regions = relative_bound_regions(a, v, t, fit);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[0].rule, EnclosureRule::RelativeBound);
  EXPECT_EQ(regions[1].rule, EnclosureRule::RelativeBoundRefined);
  EXPECT_TRUE(grid_strict_subset(regions[1].region, regions[0].region, 1.0));
  EXPECT_TRUE(regions[0].verified);
  EXPECT_TRUE(regions[1].verified);
}

TEST(RelativeBound, RefinedRefusedAtTauOne) {
  RelativeBoundFit fit{0.5, 0.1, 0.0};
  try {
    relative_bound_region(1.0, -0.5, fit, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  EXPECT_NO_THROW(relative_bound_region(1.0, -0.5, fit, false));
}

TEST(RelativeBound, ZeroPerturbation) {
  const auto a = hand();
  const auto t = compute_tau(a);
  const auto fit = fit_relative_bound(a, skew(0.0), t, {0.0}).front();
  const auto regions = relative_bound_regions(a, skew(0.0), t, fit);
  ASSERT_FALSE(regions.empty());
  EXPECT_FALSE(regions.front().region.has_interior());
  EXPECT_TRUE(regions.front().verified);
}

TEST(RelativeBound, GammaFormula) {
  RelativeBoundFit fit{0.5, 0.2, 0.0};
  const auto plain = std::get<BallUnion>(relative_bound_region(3.0, -0.1, fit, false).variant());
  EXPECT_NEAR(plain.gamma, std::min(std::sqrt(4.0 * 0.5 / 6.0), 2.0 * 0.1), 1e-15);
  EXPECT_DOUBLE_EQ(plain.c0, 0.5);
  EXPECT_DOUBLE_EQ(plain.c1, 0.2);
  const auto unbounded = std::get<BallUnion>(relative_bound_region(3.0, -0.1, fit, false, true).variant());
  EXPECT_NEAR(unbounded.gamma, std::sqrt(4.0 * 0.5 / 6.0), 1e-15);
  const auto refined = std::get<BallUnion>(relative_bound_region(3.0, -0.1, fit, true).variant());
  EXPECT_NEAR(refined.c0, 4.0 * 0.5 / (6.0 * 0.8), 1e-15);
  EXPECT_NEAR(refined.c1, 4.0 * 0.2 / (6.0 * 0.8), 1e-15);
}

TEST(NumericalRange, BottomMatchesSampledInfimum) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = nonneg_instance(seed, 4, 0.0);
    const KreinOperator v(*inst.v, inst.j);
    const double nu = numerical_range_bottom(v);
    double sampled = 1e300;
    for (int s = 0; s < 20000; ++s) {
      Vector f(4);
      for (Index i = 0; i < 4; ++i) f(i) = Complex(g(rng), g(rng));
      f.normalize();
      const double val = inner(*inst.v * f, f, inst.j).real();
      EXPECT_GE(val, nu - 1e-12);
      sampled = std::min(sampled, val);
    }
    EXPECT_LT(sampled - nu, 0.1 * (1.0 + v.norm()));
  }
}

TEST(VerifyEnclosure, BoundingBallAlwaysVerifies) {
  const auto s = sum(hand(), skew(0.7));
  double radius = 0.0;
  for (const Complex& z : decompose(s).eigenvalues()) radius = std::max(radius, std::abs(z));
  const auto cert = verify_enclosure(s, EnclosureRegion::capsule(0.0, 0.0, 1.5 * radius + 1.0));
  EXPECT_TRUE(cert.verified);
  for (const auto& e : cert.eigenvalues) EXPECT_TRUE(e.inside);
}

TEST(VerifyEnclosure, ShrunkRegionReportsViolation) {
  // v = 6: eigenvalues +-i sqrt(32) ~ 5.66 inside r = 6 but outside r = 5.4
  const auto s = sum(diag_2_m2(), skew(6.0));
  EXPECT_TRUE(verify_enclosure(s, EnclosureRegion::capsule(0.0, 0.0, 6.0)).verified);
  const auto shrunk = verify_enclosure(s, EnclosureRegion::capsule(0.0, 0.0, 0.9 * 6.0));
  EXPECT_FALSE(shrunk.verified);
  EXPECT_EQ(shrunk.outcome, Outcome::Fail);
  EXPECT_EQ(shrunk.violations.size(), 2u);
}

TEST(VerifyEnclosure, EigenvalueInMarginBandIsIndeterminate) {
  // v = 1 gives eigenvalues +-sqrt3; a capsule with r = sqrt3 puts them on the boundary
  const auto s = sum(diag_2_m2(), skew(1.0));
  const auto cert = verify_enclosure(s, EnclosureRegion::capsule(0.0, 0.0, std::sqrt(3.0)));
  EXPECT_EQ(cert.outcome, Outcome::Indeterminate);
  EXPECT_EQ(cert.indeterminate, 2);
  EXPECT_TRUE(cert.violations.empty());
}

TEST(Regions, ScalingPerturbationNeverShrinks) {
  const auto a = hand();
  const auto t = compute_tau(a);
  EnclosureRegion prev_capsule = spectral_skew_region(a, skew(0.1), t).region;
  EnclosureRegion prev_ball = relative_bound_regions(a, skew(0.1), t,
                                                     fit_relative_bound(a, skew(0.1), t, {0.2}).front())
                                  .front()
                                  .region;
  for (double v : {0.2, 0.4}) {
    const auto capsule = spectral_skew_region(a, skew(v), t).region;
    const auto ball =
        relative_bound_regions(a, skew(v), t, fit_relative_bound(a, skew(v), t, {0.2}).front()).front().region;
    EXPECT_TRUE(grid_subset(prev_capsule, capsule, 3.0));
    EXPECT_TRUE(grid_subset(prev_ball, ball, 3.0));
    prev_capsule = capsule;
    prev_ball = ball;
  }
}
