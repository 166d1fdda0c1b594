#include <random>

#include <gtest/gtest.h>

#include "krein/characterization.hpp"
#include "krein/instances.hpp"
#include "oracles.hpp"

using namespace krein;

namespace {

Matrix flip2() {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = j(1, 0) = 1.0;
  return j;
}

KreinOperator make(const Matrix& a, const Matrix& j) {
  return KreinOperator(a, FundamentalSymmetry::from_matrix(j));
}

KreinOperator diag_op(std::vector<double> a, std::vector<double> j) {
  Matrix am = Matrix::Zero(a.size(), a.size()), jm = am;
  for (std::size_t i = 0; i < a.size(); ++i) {
    am(i, i) = a[i];
    jm(i, i) = j[i];
  }
  return make(am, jm);
}

Matrix signature() { return FundamentalSymmetry::from_signature(1, 1).matrix(); }

KreinOperator nilpotent(double sign) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = sign;
  return make(a, flip2());
}

KreinOperator jordan3() {
  const auto found = oracle::jordan3_search();
  Matrix j = Matrix::Zero(3, 3);
  j(0, 2) = j(1, 1) = j(2, 0) = 1.0;
  return make(found.front().cast<double>().cast<Complex>(), j);
}

// diag(2, -2, N) with N = [[0,-1],[0,0]] against J = diag(1, -1, flip)
KreinOperator block_example(double scale = 1.0) {
  Matrix a = Matrix::Zero(4, 4), j = Matrix::Zero(4, 4);
  a(0, 0) = 2.0;
  a(1, 1) = -2.0;
  a(2, 3) = -scale;
  j(0, 0) = 1.0;
  j(1, 1) = -1.0;
  j(2, 3) = j(3, 2) = 1.0;
  return make(a, j);
}

Instance random_instance(std::uint64_t seed, bool nonnegative, int n) {
  InstanceSpec spec;
  spec.kind = nonnegative ? InstanceKind::RandomNonnegative : InstanceKind::RandomGeneric;
  spec.seed = seed;
  spec.dimension = n;
  spec.perturbation_scale = 0.0;
  spec.mix_basis = seed % 3 == 0;
  return generate(spec);
}

}  // namespace

TEST(DirectNonnegativity, Examples) {
  const auto nil = direct_nonnegativity(nilpotent(1.0));
  EXPECT_TRUE(nil.is_nonnegative);
  EXPECT_FALSE(nil.uniformly_positive);

  const auto d = direct_nonnegativity(diag_op({2, -2}, {1, -1}));
  EXPECT_TRUE(d.is_nonnegative);
  EXPECT_TRUE(d.uniformly_positive);
  EXPECT_NEAR(d.min_gram_eig, 2.0, 1e-14);

  const auto neg = direct_nonnegativity(diag_op({-1, 1}, {1, -1}));
  EXPECT_FALSE(neg.is_nonnegative);
  EXPECT_EQ(neg.outcome, Outcome::Fail);
}

TEST(SpectralNonnegativity, NilpotentPasses) {
  const auto v = spectral_nonnegativity(nilpotent(1.0));
  EXPECT_EQ(v.outcome, Outcome::Pass);
  EXPECT_EQ(v.spectrum.outcome, Outcome::Pass);
  EXPECT_EQ(v.growth_infinity.outcome, Outcome::Pass);
  EXPECT_EQ(v.growth_zero.outcome, Outcome::Pass);
  EXPECT_TRUE(v.direct_agrees);
  EXPECT_EQ(v.kernel_dims, (std::vector<int>{1, 2, 2}));
}

TEST(SpectralNonnegativity, JordanBlockOfSizeThreeFails) {
  const auto v = spectral_nonnegativity(jordan3());
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_EQ(v.growth_zero.outcome, Outcome::Fail);
  EXPECT_FALSE(v.is_nonnegative);
  EXPECT_TRUE(v.direct_agrees);
}

TEST(SpectralNonnegativity, DiagonalPasses) {
  const auto v = spectral_nonnegativity(diag_op({2, -2}, {1, -1}));
  EXPECT_EQ(v.outcome, Outcome::Pass);
  ASSERT_EQ(v.points.size(), 2u);
  for (const auto& p : v.points)
    EXPECT_EQ(p.type, p.value > 0 ? SignType::PositiveType : SignType::NegativeType);
}

TEST(SpectralNonnegativity, NonRealSpectrumFails) {
  Matrix a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const auto v = spectral_nonnegativity(make(a, signature()));
  EXPECT_EQ(v.spectrum.outcome, Outcome::Fail);
  EXPECT_EQ(v.outcome, Outcome::Fail);
}

TEST(RootVectorNonnegativity, Examples) {
  EXPECT_EQ(root_vector_nonnegativity(nilpotent(1.0)).outcome, Outcome::Pass);

  const auto flipped = root_vector_nonnegativity(nilpotent(-1.0));
  EXPECT_EQ(flipped.outcome, Outcome::Fail);
  EXPECT_EQ(flipped.growth_zero.outcome, Outcome::Fail);
  ASSERT_EQ(flipped.kernel_gram_eigenvalues.size(), 2);
  EXPECT_NEAR(flipped.kernel_gram_eigenvalues.minCoeff(), -1.0, 1e-10);

  Matrix h(3, 3);
  h << 2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0;
  const auto psd = root_vector_nonnegativity(make(h, Matrix::Identity(3, 3)));
  EXPECT_EQ(psd.outcome, Outcome::Pass);
  EXPECT_EQ(psd.kernel_dims[0], psd.kernel_dims[1]);
  EXPECT_FALSE(psd.zero_profile.empty());
}

TEST(RootVectorNonnegativity, GramOnKerA2AloneMissesJordanThree) {
  // J = flip with a Jordan chain of length 3: the Gram test on ker A^2 is
  // non-negative, so the growth order is what rules the operator out.
  const auto a = jordan3();
  const auto v = root_vector_nonnegativity(a);
  EXPECT_GE(v.kernel_gram_eigenvalues.minCoeff(), -1e-8);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_FALSE(direct_nonnegativity(a).is_nonnegative);
}

TEST(SpectralNonnegativity, AgreesWithDirectTestOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = random_instance(seed, seed % 2 == 0, 2 + static_cast<int>(seed % 9));
    const KreinOperator a(inst.a, inst.j);
    const auto spec = spectral_nonnegativity(a);
    const auto root = root_vector_nonnegativity(a);
    EXPECT_EQ(spec.is_nonnegative, direct_nonnegativity(a).is_nonnegative);
    EXPECT_NE(spec.outcome, Outcome::Indeterminate) << "seed " << seed;
    EXPECT_TRUE(spec.direct_agrees) << "seed " << seed;
    EXPECT_TRUE(root.direct_agrees) << "seed " << seed;
  }
}

TEST(KernelChain, BlockAtMostTwoStabilisesAtSquare) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InstanceSpec spec;
    spec.kind = seed % 2 ? InstanceKind::RandomNonnegative : InstanceKind::JordanAtZero;
    spec.seed = seed;
    spec.dimension = 7;
    spec.kernel_dimension = 2;
    spec.block_size = 2;
    spec.perturbation_scale = 0.0;
    spec.mix_basis = true;
    const auto inst = generate(spec);
    const auto chain = kernel_chain(inst.a, 0.0, 4, 1e3);
    ASSERT_LE(chain.largest_block(), 2);
    ASSERT_GE(chain.dims.size(), 2u);
    const auto r = root_subspaces(KreinOperator(inst.a, inst.j), 0.0);
    EXPECT_EQ(r.dims[2], r.dims[1]) << "seed " << seed;
  }
}

TEST(KernelGram, MatchesSequenceSampling) {
  // [A f_n, f_n] / |f_n|^2 along f_n = q + r/n approaches [Aq, q] for q in
  // ker A^2, so the infimum over sequences is the smallest Gram eigenvalue.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (double sign : {1.0, -1.0}) {
    const auto a = nilpotent(sign);
    const auto v = spectral_nonnegativity(a);
    const double gram_min = v.kernel_gram_eigenvalues.minCoeff();
    double sampled = 1e300;
    for (int trial = 0; trial < 400; ++trial) {
      Vector q(2), r(2);
      q << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      r << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      q.normalize();
      double last = 0.0;
      for (int n = 1; n <= 4096; n *= 2) {
        const Vector f = q + r / double(n);
        last = inner(a.matrix() * f, f, a.symmetry()).real() / f.squaredNorm();
      }
      sampled = std::min(sampled, last);
    }
    EXPECT_NEAR(sampled, gram_min, 5e-2);
    EXPECT_EQ(sampled >= -1e-3, v.growth_zero.outcome == Outcome::Pass);
  }
}

TEST(ResolventBound, NonnegativeInstancesStayBelowBound) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0), y(1e-3, 1.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    InstanceSpec spec;
    spec.kind = InstanceKind::RandomNonnegative;
    spec.seed = seed;
    spec.dimension = 6;
    spec.kernel_dimension = static_cast<int>(seed % 3);
    spec.perturbation_scale = 0.0;
    const auto inst = generate(spec);
    const KreinOperator a(inst.a, inst.j);
    const double gram = op_norm(a.gram_operator());
    for (int s = 0; s < 50; ++s) {
      const Complex l(2.0 * a.norm() * u(rng), y(rng));
      EXPECT_LE(resolvent_norm_unchecked(inst.a, l), oracle::nonnegative_resolvent_bound(gram, l) * (1 + 1e-9));
    }
  }
}

TEST(ResolventBound, InfinityEstimateFromInverse) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0.01, 3.13), mag(1.01, 50.0), u(-1.0, 1.0), y(1e-3, 1.0);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    InstanceSpec spec;
    spec.kind = InstanceKind::RandomNonnegative;
    spec.seed = seed;
    spec.dimension = 5;
    spec.eigenvalue_floor = 0.2;
    spec.perturbation_scale = 0.0;
    const auto inst = generate(spec);
    const Matrix inv = inst.a.inverse();
    // feasible C for |(A^-1 - mu)^-1| <= C / |Im mu|^2 near zero
    double c = 0.0;
    for (int s = 0; s < 400; ++s) {
      const Complex mu(u(rng), y(rng));
      c = std::max(c, resolvent_norm_unchecked(inv, mu) * std::norm(mu.imag()));
    }
    c = std::max(c, op_norm(inst.j.matrix() * inv) + 1.0);
    for (int s = 0; s < 100; ++s) {
      const Complex l = std::polar(mag(rng), ang(rng));
      const double bound = (c + 1.0) * std::norm(l) / (l.imag() * l.imag());
      EXPECT_LE(resolvent_norm_unchecked(inst.a, l), bound);
    }
  }
}

TEST(Similarity, DiagonalGivesIdentityMetric) {
  const auto s = hilbert_similarity(diag_op({2, -2}, {1, -1}));
  ASSERT_TRUE(s.constructed);
  EXPECT_LT(op_norm(s.j_a - signature()), 1e-12);
  EXPECT_LT(op_norm(s.metric - Matrix::Identity(2, 2)), 1e-12);
}

TEST(Similarity, HandExampleMetric) {
  Matrix a(2, 2);
  a << 5.0 / 3, 4.0 / 3, -4.0 / 3, -5.0 / 3;
  const auto op = make(a, signature());
  const auto s = hilbert_similarity(op);
  ASSERT_TRUE(s.constructed);
  EXPECT_LT(op_norm(s.j_a - a), 1e-9);
  const RealVector eig = hermitian_eigenvalues(s.metric);
  EXPECT_NEAR(eig(0), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(eig(1), 3.0, 1e-9);
  EXPECT_LT(hermitian_residual(s.metric * a), 1e-9);
}

TEST(Similarity, RefusalsNameTheirCause) {
  const auto nil = hilbert_similarity(nilpotent(1.0));
  EXPECT_FALSE(nil.constructed);
  EXPECT_EQ(nil.blocking, std::vector<SimilarityBlock>{SimilarityBlock::KernelChain});

  Matrix rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  const auto nonreal = hilbert_similarity(make(rot, signature()));
  EXPECT_FALSE(nonreal.constructed);
  EXPECT_EQ(nonreal.blocking.front(), SimilarityBlock::NonRealSpectrum);

  const auto wrong_sign = hilbert_similarity(diag_op({-1, 1}, {1, -1}));
  EXPECT_FALSE(wrong_sign.constructed);
  EXPECT_EQ(wrong_sign.blocking, std::vector<SimilarityBlock>{SimilarityBlock::SignType});
}

TEST(Similarity, SemisimpleKernelIsAllowed) {
  const auto s = hilbert_similarity(diag_op({0, 0, 2, -2}, {1, -1, 1, -1}));
  ASSERT_TRUE(s.constructed);
  EXPECT_GT(s.min_metric_eigenvalue, 0.0);
  EXPECT_LE(s.selfadjoint_residual, s.tolerance);
}

TEST(Similarity, RandomSemisimpleNonnegative) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    InstanceSpec spec;
    spec.kind = InstanceKind::RandomNonnegative;
    spec.seed = seed;
    spec.dimension = 8;
    spec.eigenvalue_floor = 0.1;
    spec.perturbation_scale = 0.0;
    spec.mix_basis = true;
    const auto inst = generate(spec);
    const auto s = hilbert_similarity(KreinOperator(inst.a, inst.j));
    ASSERT_TRUE(s.constructed) << "seed " << seed;
    EXPECT_GT(min_hermitian_eigenvalue(s.metric), 0.0);
    EXPECT_LE(hermitian_residual(s.metric * inst.a), s.tolerance);
  }
}

TEST(LocalDecomposition, BlockExampleUnitBall) {
  const auto l = local_decomposition(block_example(), Neighborhood::discs({{Complex(0, 0), 1.0}}));
  EXPECT_EQ(l.outcome, Outcome::Pass);
  EXPECT_EQ(l.a_b.rows(), 2);
  EXPECT_EQ(l.a_inf.rows(), 2);
  EXPECT_NEAR(op_norm(l.a_b), 1.0, 1e-10);  // similar to N
  EXPECT_LT(op_norm(l.a_b * l.a_b), 1e-10);
  const RealVector ev = hermitian_eigenvalues(l.a_inf);
  EXPECT_NEAR(std::abs(ev(0)), 2.0, 1e-10);
  EXPECT_NEAR(std::abs(ev(1)), 2.0, 1e-10);
}

TEST(LocalDecomposition, LargeBallAbsorbsEverything) {
  const auto l = local_decomposition(block_example(), Neighborhood::discs({{Complex(0, 0), 3.0}}));
  EXPECT_EQ(l.outcome, Outcome::Pass);
  EXPECT_EQ(l.a_b.rows(), 4);
  EXPECT_EQ(l.a_inf.rows(), 0);
}

TEST(LocalDecomposition, NonnegativeOperatorWithSmallBall) {
  const auto a = diag_op({2, -2, 0.5}, {1, -1, 1});
  const auto l = local_decomposition(a, Neighborhood::discs({{Complex(0.5, 0), 0.25}}));
  EXPECT_EQ(l.outcome, Outcome::Pass);
  EXPECT_EQ(l.a_b.rows(), 1);
  EXPECT_EQ(l.a_inf.rows(), 2);
}

TEST(LocalDecomposition, NonRealOutsideNeighborhoodRefused) {
  Matrix rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  const auto op = make(rot, signature());
  try {
    local_decomposition(op, Neighborhood::discs({{Complex(0, 0), 0.5}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(LowerBoundGamma, BlockExample) {
  const auto a = block_example();
  const auto l = local_decomposition(a, Neighborhood::discs({{Complex(0, 0), 1.0}}));
  const auto g = lower_bound_gamma(a, l);
  EXPECT_NEAR(g.gamma, -1.0, 1e-9);
  EXPECT_TRUE(g.verified);
  EXPECT_GT(g.samples, 0);

  const auto a3 = block_example(3.0);
  const auto g3 = lower_bound_gamma(a3, local_decomposition(a3, Neighborhood::discs({{Complex(0, 0), 1.0}})));
  EXPECT_NEAR(g3.gamma, -3.0, 1e-9);
}

TEST(LowerBoundGamma, NonnegativeOperatorHasZero) {
  const auto a = diag_op({2, -2}, {1, -1});
  const auto l = local_decomposition(a, Neighborhood::discs({}));
  const auto g = lower_bound_gamma(a, l);
  EXPECT_EQ(g.gamma, 0.0);
  EXPECT_TRUE(g.verified);
}

TEST(LocalNonnegativity, BlockExampleUnitBall) {
  const auto r = local_nonnegativity(block_example(), EnclosureRegion::capsule(0.0, 0.0, 1.0));
  EXPECT_EQ(r.outcome, Outcome::Pass);
  EXPECT_TRUE(r.cross_consistent);
  EXPECT_EQ(r.neighborhoods.size(), 3u);
}

TEST(LocalNonnegativity, EmptyRegionReducesToGlobalTest) {
  for (double sign : {1.0, -1.0}) {
    const auto a = nilpotent(sign);
    EXPECT_EQ(local_nonnegativity(a, EnclosureRegion::empty()).outcome,
              spectral_nonnegativity(a).outcome);
  }
}

TEST(LocalNonnegativity, NonRealPairOutsideRegionFails) {
  Matrix rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  const auto op = make(rot, signature());
  const auto r = local_nonnegativity(op, EnclosureRegion::capsule(0.0, 0.0, 0.5));
  EXPECT_EQ(r.outcome, Outcome::Fail);
  EXPECT_EQ(r.spectrum.outcome, Outcome::Fail);
  EXPECT_EQ(local_nonnegativity(op, EnclosureRegion::capsule(0.0, 0.0, 2.0)).outcome, Outcome::Pass);
}
