#include "fixtures.hpp"

#include <decomp/dlog.hpp>
#include <decomp/model.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace decomp;
using decomp::testing::mixture_model;
using decomp::testing::normal_model;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<complex>
model_curve(const CompoundPoissonModel& m, double step, std::size_t size)
{
  std::vector<complex> path(size);
  for (std::size_t k = 0; k < size; ++k)
    path[k] = std::expm1(m.lambda()) * phi_g(m, step * static_cast<double>(k)) + 1.0;
  path[0] = { std::exp(m.lambda()), 0.0 };
  return path;
}

//! Jumps concentrated near 3, so Im phi_f swings through +-1 and lambda = 4
//! drives the curve e^{lambda phi_f} several times around the origin.
CompoundPoissonModel
winding_model()
{
  return CompoundPoissonModel(4.0, JumpDensity::normal_mixture({ { 3.0, 0.01, 1.0 } }));
}

void
expect_exp_inverse(const std::vector<complex>& path, const DLogResult& r)
{
  for (std::size_t k = 0; k < path.size(); ++k)
    ASSERT_LT(std::abs(std::exp(r.values[k]) - path[k]), 1e-10 * std::abs(path[k])) << k;
}

} // namespace

TEST(DistinguishedLog, ConstantPositivePath)
{
  const std::vector<complex> path(100, complex(std::exp(0.3), 0.0));
  const auto r = distinguished_log(path);
  for (const auto& v : r.values) {
    EXPECT_NEAR(v.real(), 0.3, 1e-15);
    EXPECT_EQ(v.imag(), 0.0);
  }
  EXPECT_EQ(r.winding, 0);
}

TEST(DistinguishedLog, UnitCircleLoopWindsOnce)
{
  const std::size_t m = 1000;
  std::vector<complex> path(m + 1);
  for (std::size_t k = 0; k <= m; ++k)
    path[k] = std::polar(1.0, two_pi * static_cast<double>(k) / m);
  path[0] = 1.0;
  const auto r = distinguished_log(path);
  EXPECT_NEAR(r.values.back().real(), 0.0, 1e-12);
  EXPECT_NEAR(r.values.back().imag(), two_pi, 1e-12);
  EXPECT_NEAR(std::log(path.back()).imag(), 0.0, 1e-12);
  EXPECT_EQ(r.winding, 1);
  EXPECT_NEAR(r.max_phase_step, two_pi / m, 1e-12);
  expect_exp_inverse(path, r);
}

TEST(DistinguishedLog, PrincipalBranchBelowLogTwo)
{
  for (const auto& m : { normal_model(), mixture_model(), normal_model(0.69) }) {
    const auto path = model_curve(m, 0.01, 5001);
    const auto r = distinguished_log(path);
    for (std::size_t k = 0; k < path.size(); ++k)
      ASSERT_LT(std::abs(r.values[k] - std::log(path[k])), 1e-12) << k;
    expect_exp_inverse(path, r);
  }
}

TEST(DistinguishedLog, DeparturesFromPrincipalBranchAboveLogTwo)
{
  const auto m = winding_model();
  ASSERT_GT(m.lambda(), std::log(2.0));
  const auto path = model_curve(m, 0.001, 10001);
  const auto r = distinguished_log(path);
  std::size_t differing = 0;
  for (std::size_t k = 0; k < path.size(); ++k)
    differing += std::abs(r.values[k] - std::log(path[k])) > 1.0;
  EXPECT_GT(differing, 0u);
  expect_exp_inverse(path, r);
  // the distinguished log of e^{lambda phi_f} is lambda phi_f itself
  for (std::size_t k = 0; k < path.size(); ++k)
    ASSERT_LT(std::abs(r.values[k] - m.lambda() * phi_f(m.jump(), 0.001 * k)), 1e-10) << k;
}

TEST(DistinguishedLog, ConjugationEquivariance)
{
  const auto path = model_curve(winding_model(), 0.001, 10001);
  std::vector<complex> conj_path(path.size());
  for (std::size_t k = 0; k < path.size(); ++k)
    conj_path[k] = std::conj(path[k]);
  const auto a = distinguished_log(path);
  const auto b = distinguished_log(conj_path);
  for (std::size_t k = 0; k < path.size(); ++k)
    ASSERT_LT(std::abs(b.values[k] - std::conj(a.values[k])), 1e-12) << k;
  EXPECT_EQ(a.winding, -b.winding);
}

TEST(DistinguishedLog, RefinementStability)
{
  const auto m = winding_model();
  const auto coarse = distinguished_log(model_curve(m, 0.002, 5001));
  const auto fine = distinguished_log(model_curve(m, 0.001, 10001));
  for (std::size_t k = 0; k < coarse.values.size(); ++k)
    ASSERT_LT(std::abs(coarse.values[k] - fine.values[2 * k]), 1e-9) << k;
}

TEST(DistinguishedLog, ZeroPathIsReported)
{
  std::vector<complex> path;
  for (int k = 0; k <= 20; ++k)
    path.emplace_back(1.0 - 0.1 * k, 0.0);
  path[10] = 0.0;
  try {
    distinguished_log(path);
    FAIL() << "expected ZeroPathError";
  } catch (const ZeroPathError& e) {
    EXPECT_EQ(e.index(), 10u);
  }
  path[10] = 1e-9;
  EXPECT_THROW(distinguished_log(path), ZeroPathError);
  EXPECT_THROW(distinguished_log(path, 1e-6), ZeroPathError);
}

TEST(DistinguishedLog, CoarseGridIsReported)
{
  std::vector<complex> path;
  for (int k = 0; k < 10; ++k)
    path.push_back(std::polar(1.0, 2.0 * k));
  path[0] = 1.0;
  try {
    distinguished_log(path);
    FAIL() << "expected GridTooCoarseError";
  } catch (const GridTooCoarseError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_NEAR(e.phase_step(), 2.0, 1e-12);
    EXPECT_NE(std::string(e.what()).find("refine the frequency grid"), std::string::npos);
  }
}

TEST(DistinguishedLog, InputValidation)
{
  EXPECT_THROW(distinguished_log(std::vector<complex>{}), InvalidArgument);
  EXPECT_THROW(distinguished_log(std::vector<complex>{ { -1.0, 0.0 } }), InvalidArgument);
  EXPECT_THROW(distinguished_log(std::vector<complex>{ { 1.0, 0.1 } }), InvalidArgument);
  EXPECT_THROW(distinguished_log(std::vector<complex>{ { 1.0, 0.0 } }, 0.0), InvalidArgument);

  ComplexPath shifted{ FreqGrid(0.5, 0.1, 2), { 1.0, 1.0 } };
  EXPECT_THROW(distinguished_log(shifted), InvalidArgument);
  ComplexPath mismatched{ FreqGrid::from_zero(0.1, 3), { 1.0, 1.0 } };
  EXPECT_THROW(distinguished_log(mismatched), InvalidArgument);
  ComplexPath ok{ FreqGrid::from_zero(0.1, 2), { 2.0, 2.0 } };
  EXPECT_NEAR(distinguished_log(ok).values[1].real(), std::log(2.0), 1e-15);
}
