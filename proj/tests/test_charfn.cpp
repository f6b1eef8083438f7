#include "fixtures.hpp"

#include <decomp/charfn.hpp>
#include <decomp/model.hpp>
#include <decomp/statistics.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace decomp;
using decomp::testing::figure1_sample;
using decomp::testing::normal_model;

namespace {

double
max_abs_diff(const std::vector<complex>& a, const std::vector<complex>& b)
{
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

} // namespace

TEST(FreqGrid, Construction)
{
  const auto g = FreqGrid::symmetric(0.5, 4);
  EXPECT_EQ(g.size(), 9u);
  EXPECT_EQ(g[0], -2.0);
  EXPECT_EQ(g[4], 0.0);
  EXPECT_EQ(g.back(), 2.0);
  const double pts[] = { 1.0, 1.25, 1.5, 1.75 };
  const auto p = FreqGrid::from_points(pts);
  EXPECT_EQ(p.step(), 0.25);
  const double bad[] = { 0.0, 1.0, 2.5 };
  EXPECT_THROW(FreqGrid::from_points(bad), InvalidArgument);
  EXPECT_THROW(FreqGrid(0.0, 0.0, 3), InvalidArgument);
  EXPECT_THROW(FreqGrid(0.0, 1.0, 0), InvalidArgument);
}

TEST(EmpiricalCf, SinglePoint)
{
  const double z[] = { 0.7 };
  const auto grid = FreqGrid::symmetric(0.37, 50);
  for (auto method : { EcfMethod::direct, EcfMethod::recurrence }) {
    const auto phi = empirical_cf(z, grid, method);
    for (std::size_t k = 0; k < grid.size(); ++k)
      EXPECT_LT(std::abs(phi[k] - std::polar(1.0, grid[k] * 0.7)), 1e-14);
  }
}

TEST(EmpiricalCf, OneAtOrigin)
{
  const Sample s = figure1_sample();
  const auto phi = empirical_cf(s.z, FreqGrid::symmetric(0.1, 10));
  EXPECT_EQ(phi[10], complex(1.0, 0.0));
  EXPECT_THROW(empirical_cf({}, FreqGrid::symmetric(0.1, 10)), InvalidArgument);
}

TEST(EmpiricalCf, MatchesNaiveDoubleLoop)
{
  const Sample s = figure1_sample();
  const auto grid = FreqGrid::from_zero(0.01, 3000); // spans 2.5 re-anchor intervals
  std::vector<complex> naive(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    complex sum{ 0.0, 0.0 };
    for (double z : s.z)
      sum += std::exp(complex(0.0, grid[k] * z));
    naive[k] = sum / static_cast<double>(s.size());
  }
  EXPECT_LT(max_abs_diff(empirical_cf(s.z, grid, EcfMethod::direct), naive), 1e-12);
  EXPECT_LT(max_abs_diff(empirical_cf(s.z, grid, EcfMethod::recurrence), naive), 1e-12);
}

TEST(EmpiricalCf, ConjugateSymmetry)
{
  const Sample s = figure1_sample();
  for (double t : { 0.013, 0.5, 1.7, 7.14, 33.0, 99.9 }) {
    const complex plus = empirical_cf(s.z, FreqGrid(t, 1.0, 1))[0];
    const complex minus = empirical_cf(s.z, FreqGrid(-t, 1.0, 1))[0];
    EXPECT_LT(std::abs(minus - std::conj(plus)), 1e-15) << t;
  }
}

TEST(BinnedCf, ExactWhenPointsSitOnNodes)
{
  std::vector<double> z;
  for (int k = 0; k < 200; ++k)
    z.push_back(-2.0 + 0.02 * ((k * 37) % 201)); // nodes of a 201-point grid on [-2, 2]
  z.push_back(-2.0);
  z.push_back(2.0);
  const auto grid = FreqGrid::symmetric(0.1, 300);
  const auto exact = empirical_cf(z, grid);
  const auto binned = binned_empirical_cf(z, grid, 201);
  EXPECT_LT(max_abs_diff(exact, binned), 1e-12);
}

TEST(BinnedCf, FigureSampleAccuracy)
{
  const Sample s = figure1_sample();
  const auto b4096 = linear_bin(s.z, 4096);
  double total = 0.0;
  for (double w : b4096.weights)
    total += w;
  EXPECT_NEAR(total, 1000.0, 1e-9);

  // within the tent-binning bound everywhere on |t| <= 100
  const auto wide = FreqGrid::symmetric(0.05, 2000);
  const auto exact = empirical_cf(s.z, wide);
  const auto coarse = binned_empirical_cf(s.z, wide, 4096);
  for (std::size_t k = 0; k < wide.size(); ++k)
    ASSERT_LE(std::abs(coarse[k] - exact[k]),
              binned_cf_error_bound(wide[k], b4096.binwidth) + 1e-13)
      << wide[k];

  // 1e-4 holds for 4096 bins up to |t| = 50, and for 16384 bins up to |t| = 100
  const auto mid = FreqGrid::symmetric(0.05, 1000);
  EXPECT_LT(max_abs_diff(binned_empirical_cf(s.z, mid, 4096), empirical_cf(s.z, mid)), 1e-4);
  EXPECT_LT(max_abs_diff(binned_empirical_cf(s.z, wide, 16384), exact), 1e-4);
}

TEST(BinnedCf, OneAtOriginAndValidation)
{
  const Sample s = figure1_sample();
  for (std::size_t bins : { 16u, 100u, 4096u })
    EXPECT_EQ(binned_empirical_cf(s.z, FreqGrid::symmetric(0.5, 3), bins)[3], complex(1.0, 0.0));
  EXPECT_THROW(linear_bin(s.z, 8), InvalidArgument);
  const double same[] = { 1.0, 1.0 };
  EXPECT_THROW(linear_bin(same, 32), InvalidArgument);
}

TEST(SmoothedCf, KernelCutoffAndOrigin)
{
  const Sample s = figure1_sample();
  const double h = 0.14;
  const auto grid = FreqGrid::symmetric(0.01, 1000);
  const auto sm = smoothed_cf(s.z, wand_kernel(), h, grid);
  const auto raw = empirical_cf(s.z, grid);
  EXPECT_EQ(sm[1000], complex(1.0, 0.0));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double damp = wand::phi(h * grid[k]);
    if (std::abs(grid[k]) >= 1.0 / h)
      ASSERT_EQ(sm[k], complex(0.0, 0.0)) << grid[k];
    ASSERT_LE(std::abs(sm[k]), damp + 1e-15);
    ASSERT_LE(damp, 1.0);
    ASSERT_LT(std::abs(sm[k] - raw[k] * damp), 1e-12);
  }
  EXPECT_THROW(smoothed_cf(s.z, wand_kernel(), 0.0, grid), InvalidArgument);
}

TEST(SmoothedCf, VanishingBandwidthRecoversEmpiricalCf)
{
  const Sample s = figure1_sample();
  const auto grid = FreqGrid::symmetric(0.25, 40);
  const auto raw = empirical_cf(s.z, grid);
  const auto sm = smoothed_cf(s.z, wand_kernel(), 1e-8, grid);
  EXPECT_LT(max_abs_diff(sm, raw), 1e-10);
}

TEST(EmpiricalCf, ConsistencyImprovesWithN)
{
  const auto m = normal_model();
  const auto grid = FreqGrid::symmetric(0.05, 200);
  std::vector<double> medians;
  for (std::size_t n : { 100u, 1000u, 10000u }) {
    std::vector<double> sups;
    for (std::size_t r = 0; r < 20; ++r) {
      RandomStream rng = RandomStream::derive(31, r);
      const Sample s = sample_until_n_nonzero(m, n, rng);
      const auto phi = empirical_cf(s.z, grid, EcfMethod::recurrence);
      double sup = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        sup = std::max(sup, std::abs(phi[k] - phi_g(m, grid[k])));
      sups.push_back(sup);
    }
    medians.push_back(stats::median(sups));
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}
