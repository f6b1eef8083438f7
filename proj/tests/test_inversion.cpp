#include "fixtures.hpp"

#include <decomp/inversion.hpp>
#include <decomp/oracle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace decomp;
using decomp::testing::figure1_sample;
using decomp::testing::figure_grid;
using decomp::testing::normal_model;

TEST(FftGrid, SpacingRelationAndNodes)
{
  for (std::size_t n : { 2u, 64u, 16384u, 65536u })
    for (double eta : { 0.001, 0.01, 0.37 }) {
      const FftGrid g(n, eta);
      const double target = 2.0 * std::numbers::pi / static_cast<double>(n);
      EXPECT_NEAR(g.delta() * g.eta(), target, 1e-14 * target);
      EXPECT_EQ(g.x(n / 2), 0.0);
      EXPECT_NEAR(g.x(0), -0.5 * static_cast<double>(n) * g.delta(), 1e-12);
      EXPECT_EQ(g.v(0), 0.0);
      EXPECT_EQ(g.nearest_index(0.0), n / 2);
    }
  const FftGrid g = figure_grid();
  EXPECT_TRUE(g.covers(0.14));
  EXPECT_FALSE(FftGrid(512, 0.01).covers(0.14));
  EXPECT_EQ(g.x(g.nearest_index(1.0)), g.x(g.nearest_index(1.0 + 0.2 * g.delta())));
  EXPECT_EQ(g.nearest_index(1e9), g.size() - 1);
  EXPECT_EQ(g.nearest_index(-1e9), 0u);
  EXPECT_THROW(FftGrid(1000, 0.01), InvalidArgument);
  EXPECT_THROW(FftGrid(1, 0.01), InvalidArgument);
  EXPECT_THROW(FftGrid(1024, 0.0), InvalidArgument);
}

TEST(SimpsonWeights, PrintedFormula)
{
  const auto w = simpson_weights(4, 0.3);
  const double expected[] = { 0.1, 0.4, 0.2, 0.4 };
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(w[i], expected[i], 1e-15);
  EXPECT_THROW(simpson_weights(5, 0.3), InvalidArgument);
}

TEST(SimpsonWeights, SumClosedForm)
{
  // sum_j (eta/3)(3 + (-1)^j - [j = 1]) = eta (N - 1/3) for even N, since
  // sum (-1)^j vanishes
  for (std::size_t n : { 2u, 4u, 10u, 1024u, 16384u }) {
    const double eta = 0.01;
    double sum = 0.0;
    for (double v : simpson_weights(n, eta))
      sum += v;
    EXPECT_NEAR(sum, eta * (static_cast<double>(n) - 1.0 / 3.0), 1e-12 * n * eta) << n;
    // against (N - 1) eta, the length of [0, (N-1) eta], the excess is 2 eta / 3
    EXPECT_NEAR(sum - (static_cast<double>(n) - 1.0) * eta, 2.0 * eta / 3.0, 1e-12 * n) << n;
  }
}

TEST(InvertHalf, ZeroInZeroOut)
{
  const FftGrid g(64, 0.1);
  for (const auto& v : invert_half(std::vector<complex>(64), g, 0.3))
    EXPECT_EQ(v, complex(0.0, 0.0));
  EXPECT_THROW(invert_half(std::vector<complex>(32), g, 0.3), InvalidArgument);
}

TEST(InvertHalf, MatchesNaiveDft)
{
  const std::size_t n = 16;
  const FftGrid g(n, 0.25);
  RandomStream rng(8);
  std::vector<complex> psi(n);
  for (auto& p : psi)
    p = { rng.normal(), rng.normal() };
  const double lambda = 0.3;
  const auto w = simpson_weights(n, g.eta());
  const auto fast = invert_half(psi, g, lambda);
  for (std::size_t u = 0; u < n; ++u) {
    complex sum{ 0.0, 0.0 };
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * u) / n;
      const complex phase = std::exp(complex(0.0, g.v(j) * n * g.delta() / 2.0));
      sum += std::polar(1.0, angle) * phase * psi[j] * w[j];
    }
    sum /= 2.0 * std::numbers::pi * lambda;
    EXPECT_LT(std::abs(fast[u] - sum), 1e-12) << u;
  }
}

TEST(InvertHalf, GaussianInversion)
{
  const FftGrid g = figure_grid();
  const double lambda = 0.3;
  std::vector<complex> psi(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    psi[j] = lambda * std::exp(-0.5 * g.v(j) * g.v(j));
  const auto f1 = invert_half(psi, g, lambda);
  double worst = 0.0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    const double x = g.x(u);
    if (std::abs(x) <= 4.0)
      worst = std::max(worst, std::abs(2.0 * f1[u].real() -
                                       std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi)));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(InvertHalf, SecondHalfIsConjugate)
{
  const FftGrid g(256, 0.05);
  RandomStream rng(4);
  std::vector<complex> psi(g.size()), psi2(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    psi[j] = { rng.normal(), rng.normal() };
    psi2[j] = std::conj(psi[j]);
  }
  const auto a = invert_half(psi, g, 0.3);
  const auto b = invert_second_half(psi2, g, 0.3);
  for (std::size_t u = 0; u < g.size(); ++u)
    EXPECT_LT(std::abs(b[u] - std::conj(a[u])), 1e-12);
}

TEST(BuildPsi, AnalyticCurveGivesLambdaPhiF)
{
  const auto m = normal_model();
  const FreqGrid grid = FreqGrid::from_zero(0.01, 2000);
  std::vector<complex> smoothed(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    smoothed[k] = phi_g(m, grid[k]);
  const auto psi = build_psi(0.3, smoothed);
  for (std::size_t k = 0; k < grid.size(); ++k)
    ASSERT_LT(std::abs(psi[k] - 0.3 * phi_f(m.jump(), grid[k])), 1e-10) << k;
}

TEST(BuildPsi, ZeroSmoothedGivesZero)
{
  std::vector<complex> smoothed(50);
  smoothed[0] = 1.0;
  const auto psi = build_psi(0.3, smoothed);
  EXPECT_NEAR(psi[0].real(), 0.3, 1e-15);
  for (std::size_t k = 1; k < psi.size(); ++k)
    EXPECT_EQ(psi[k], complex(0.0, 0.0));
  EXPECT_THROW(build_psi(0.0, smoothed), InvalidArgument);
}

TEST(BuildPsi, FigureSampleStartsAtLambda)
{
  const Sample s = figure1_sample();
  const auto smoothed = smoothed_cf(s.z, wand_kernel(), 0.14, FreqGrid::from_zero(0.01, 714));
  const auto psi = build_psi(0.3, smoothed);
  EXPECT_NEAR(psi[0].real(), 0.3, 1e-12);
  EXPECT_EQ(psi[0].imag(), 0.0);
}

TEST(EstimateDensity, FigureOneBasics)
{
  const Sample s = figure1_sample();
  const Estimate est = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid());
  EXPECT_EQ(est.size(), 16384u);
  EXPECT_EQ(est.seed, 1u);
  EXPECT_EQ(est.n, 1000u);
  EXPECT_EQ(est.kernel_id, "wand");
  EXPECT_FALSE(est.zero_fallback);
  EXPECT_FALSE(est.truncation_applied);
  EXPECT_FALSE(est.imag_residue.has_value());
  const double f0 = est.values[est.grid.nearest_index(0.0)];
  EXPECT_NEAR(f0, 1.0 / std::sqrt(2.0 * std::numbers::pi), 0.08);
}

TEST(EstimateDensity, ExplicitSecondHalfValidatesShortcut)
{
  const Sample s = figure1_sample();
  EstimateOptions opts;
  opts.explicit_second_half = true;
  const Estimate est = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid(), opts);
  ASSERT_TRUE(est.imag_residue && est.shortcut_discrepancy);
  EXPECT_LT(*est.imag_residue, 1e-9);
  EXPECT_LT(*est.shortcut_discrepancy, 1e-9);
  const Estimate plain = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid());
  EXPECT_EQ(plain.values, est.values);
}

TEST(EstimateDensity, RecurrenceMatchesDirectEcf)
{
  const Sample s = figure1_sample();
  EstimateOptions direct;
  direct.ecf_method = EcfMethod::direct;
  const Estimate a = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid(), direct);
  const Estimate b = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid());
  double worst = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u)
    worst = std::max(worst, std::abs(a.values[u] - b.values[u]));
  EXPECT_LT(worst, 1e-12);
}

TEST(EstimateDensity, GridConvergence)
{
  // doubling N at fixed N eta keeps delta and hence the spatial nodes
  const Sample s = figure1_sample();
  const FftGrid base = figure_grid();
  const FftGrid fine(2 * base.size(), base.eta() / 2.0);
  ASSERT_NEAR(fine.delta(), base.delta(), 1e-15);
  const Estimate a = estimate_density(s, 0.3, wand_kernel(), 0.14, base);
  const Estimate b = estimate_density(s, 0.3, wand_kernel(), 0.14, fine);
  const std::size_t shift = base.size() / 2;
  double worst = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (std::abs(a.x(u)) > 5.0)
      continue;
    ASSERT_NEAR(b.x(u + shift), a.x(u), 1e-12);
    worst = std::max(worst, std::abs(a.values[u] - b.values[u + shift]));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(EstimateDensity, TruncationClamps)
{
  const Sample s = figure1_sample();
  for (double alpha : { 0.5, 0.01, 1e-4 }) {
    EstimateOptions opts;
    opts.truncation = truncation_level(s.size(), alpha);
    const Estimate est = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid(), opts);
    EXPECT_TRUE(est.truncation_applied);
    for (double v : est.values)
      ASSERT_LE(std::abs(v), *opts.truncation);
  }
  EXPECT_NEAR(truncation_level(1000, 0.5), 31.6227766016838, 1e-12);
  // a level below the peak actually clips, and leaves the rest untouched
  const Estimate raw = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid());
  EstimateOptions low;
  low.truncation = 0.2;
  const Estimate clipped = estimate_density(s, 0.3, wand_kernel(), 0.14, figure_grid(), low);
  std::size_t changed = 0;
  for (std::size_t u = 0; u < raw.size(); ++u) {
    EXPECT_EQ(clipped.values[u], std::clamp(raw.values[u], -0.2, 0.2));
    changed += clipped.values[u] != raw.values[u];
  }
  EXPECT_GT(changed, 0u);
  EXPECT_THROW(truncation_level(1000, 0.0), InvalidArgument);
}

TEST(EstimateDensity, ZeroFallback)
{
  // one observation at pi: the curve 1 + (e^2 - 1) e^{i pi t} phi_w(h t) passes
  // through 0 at t = 1 when phi_w(h) = 1 / (e^2 - 1)
  const double lambda = 2.0;
  const double h = std::sqrt(1.0 - std::cbrt(1.0 / std::expm1(lambda)));
  const double z[] = { std::numbers::pi };
  const FftGrid grid(1024, 0.01);
  ASSERT_EQ(grid.v(100), 1.0);
  const Estimate est = estimate_density(z, lambda, wand_kernel(), h, grid);
  EXPECT_TRUE(est.zero_fallback);
  for (double v : est.values)
    ASSERT_EQ(v, 0.0);
}

TEST(EstimateDensity, CoarseGridThrows)
{
  RandomStream rng(1);
  const Sample s =
    sample_until_n_nonzero(CompoundPoissonModel(5.0, JumpDensity::bimodal_mixture()), 1000, rng);
  EXPECT_THROW(estimate_density(s, 5.0, wand_kernel(), 0.14, FftGrid(64, 0.5)),
               GridTooCoarseError);
}

TEST(EstimateDensity, SmallLambdaMatchesKde)
{
  RandomStream rng(11);
  const Sample s = sample_until_n_nonzero(normal_model(0.01), 1000, rng);
  const Estimate est = estimate_density(s, 0.01, wand_kernel(), 0.3, figure_grid());
  double worst = 0.0;
  for (std::size_t u = 0; u < est.size(); ++u)
    if (std::abs(est.x(u)) <= 4.0)
      worst = std::max(worst, std::abs(est.values[u] -
                                       kernel_density_estimate(s.z, wand_kernel(), 0.3, est.x(u))));
  EXPECT_LT(worst, 2e-2);
}

TEST(EstimateDensity, Preconditions)
{
  const Sample s = figure1_sample(1, 50);
  const auto k = wand_kernel();
  const FftGrid g = figure_grid();
  EXPECT_THROW(estimate_density(std::span<const double>{}, 0.3, k, 0.14, g), InvalidArgument);
  EXPECT_THROW(estimate_density(s, 0.0, k, 0.14, g), InvalidArgument);
  EXPECT_THROW(estimate_density(s, 0.3, k, 0.0, g), InvalidArgument);
  EXPECT_THROW(estimate_density(s, 0.3, k, 0.14, FftGrid(256, 0.01)), InvalidArgument);
  EstimateOptions bad;
  bad.truncation = -1.0;
  EXPECT_THROW(estimate_density(s, 0.3, k, 0.14, g, bad), InvalidArgument);
}
