#pragma once

#include "errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace decomp {

//! A kernel w paired with its characteristic function phi_w.
//!
//! phi_w must vanish outside [-1, 1]; the estimator integrates over
//! [-1/h, 1/h] on that assumption. `check_kernel` verifies it numerically.
class Kernel
{
public:
  using Fn = std::function<double(double)>;

  Kernel(std::string id, Fn w, Fn phi_w, unsigned order, double second_moment)
    : id_(std::move(id))
    , w_(std::move(w))
    , phi_w_(std::move(phi_w))
    , order_(order)
    , second_moment_(second_moment)
  {
    if (!w_ || !phi_w_)
      throw InvalidArgument("kernel needs both w and phi_w");
    if (order_ == 0)
      throw InvalidArgument("kernel order must be positive");
  }

  double w(double u) const { return w_(u); }
  double phi_w(double t) const { return phi_w_(t); }
  double operator()(double u) const { return w_(u); }

  const std::string& id() const { return id_; }
  unsigned order() const { return order_; }
  //! sigma^2 = int u^2 w(u) du.
  double second_moment() const { return second_moment_; }

private:
  std::string id_;
  Fn w_;
  Fn phi_w_;
  unsigned order_;
  double second_moment_;
};

namespace wand {

inline constexpr double series_threshold = 0.5;

inline double
phi(double t)
{
  if (std::abs(t) >= 1.0)
    return 0.0;
  const double s = 1.0 - t * t;
  return s * s * s;
}

//! (48 t (t^2 - 15) cos t - 144 (2 t^2 - 5) sin t) / (pi t^7).
inline double
w_closed(double t)
{
  const double t2 = t * t;
  const double t7 = t2 * t2 * t2 * t;
  return (48.0 * t * (t2 - 15.0) * std::cos(t) -
          144.0 * (2.0 * t2 - 5.0) * std::sin(t)) /
         (std::numbers::pi * t7);
}

//! Maclaurin series of w: (1/pi) sum_k (-1)^k t^{2k}/(2k)! m_k with
//! m_k = int_0^1 s^{2k} (1 - s^2)^3 ds.
inline double
w_series(double t)
{
  const double t2 = t * t;
  double term_power = 1.0; // (-1)^k t^{2k} / (2k)!
  double sum = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double j = 2.0 * k;
    const double moment =
      1.0 / (j + 1.0) - 3.0 / (j + 3.0) + 3.0 / (j + 5.0) - 1.0 / (j + 7.0);
    const double term = term_power * moment;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum))
      break;
    term_power *= -t2 / ((j + 1.0) * (j + 2.0));
  }
  return sum / std::numbers::pi;
}

inline double
w(double t)
{
  return std::abs(t) < series_threshold ? w_series(t) : w_closed(t);
}

} // namespace wand

//! The order-2 kernel with phi_w(t) = (1 - t^2)^3 on [-1, 1] and sigma^2 = 6.
inline Kernel
wand_kernel()
{
  return Kernel("wand", wand::w, wand::phi, 2, 6.0);
}

namespace detail {

//! Integral of f over [-R, R] by 30-point Gauss-Legendre panels of width
//! `panel`. R should be a multiple of the panel width.
template <class F>
double
integrate_symmetric_range(F&& f, double radius, double panel)
{
  using boost::math::quadrature::gauss;
  const auto panels = static_cast<long>(std::llround(radius / panel));
  double sum = 0.0;
  for (long k = -panels; k < panels; ++k) {
    const double a = k * panel;
    sum += gauss<double, 30>::integrate(f, a, a + panel);
  }
  return sum;
}

template <class F>
double
integrate_range(F&& f, double a, double b, double panel)
{
  using boost::math::quadrature::gauss;
  const auto panels = std::max<long>(1, std::lround((b - a) / panel));
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (long k = 0; k < panels; ++k)
    sum += gauss<double, 30>::integrate(f, a + k * width, a + (k + 1) * width);
  return sum;
}

} // namespace detail

//! int w(u)^2 du by Parseval, (1/2pi) int_{-1}^{1} phi_w(t)^2 dt.
inline double
kernel_square_integral(const Kernel& k)
{
  return detail::integrate_range(
           [&](double t) {
             const double p = k.phi_w(t);
             return p * p;
           },
           -1.0,
           1.0,
           0.25) /
         (2.0 * std::numbers::pi);
}

struct KernelCheck
{
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool passed;
};

struct KernelReport
{
  std::string kernel_id;
  double beta;
  std::vector<KernelCheck> checks;

  bool passed() const
  {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) {
      return c.passed;
    });
  }

  const KernelCheck* find(const std::string& name) const
  {
    for (const auto& c : checks)
      if (c.name == name)
        return &c;
    return nullptr;
  }
};

//! Integration radius and panel width for real-line kernel integrals. The
//! radius is a multiple of pi so oscillating tails like cos(u)/u^2 cut off
//! at a zero of their antiderivative's leading term.
struct KernelQuadrature
{
  double radius = 1000.0 * std::numbers::pi;
  double panel = std::numbers::pi / 2.0;
};

//! Numerically verifies the kernel conditions: normalization, vanishing
//! moments up to order-1, the cached second moment, symmetry, boundedness,
//! the support and smoothness of phi_w, finiteness of int |u|^beta |w| and
//! decay of |u w(u)|. Never throws on a failed check; inspect the report.
inline KernelReport
check_kernel(const Kernel& k, double beta, KernelQuadrature quad = {})
{
  if (!(beta > 0.0))
    throw InvalidArgument("beta must be positive");
  KernelReport report{ k.id(), beta, {} };
  auto add = [&](std::string name, double value, double expected, double tol) {
    const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol;
    report.checks.push_back({ std::move(name), value, expected, tol, ok });
  };
  auto add_bool = [&](std::string name, double value, bool ok) {
    report.checks.push_back({ std::move(name), value, 0.0, 0.0, ok });
  };
  auto line_integral = [&](auto&& f) {
    return detail::integrate_symmetric_range(f, quad.radius, quad.panel);
  };

  add("integral", line_integral([&](double u) { return k.w(u); }), 1.0, 1e-8);
  for (unsigned j = 1; j < k.order(); ++j) {
    const double m =
      line_integral([&](double u) { return std::pow(u, j) * k.w(u); });
    add("moment_" + std::to_string(j), m, 0.0, 1e-6);
  }
  add("second_moment",
      line_integral([&](double u) { return u * u * k.w(u); }),
      k.second_moment(),
      1e-4);
  // time-domain square integral against the Parseval route
  add("square_integral",
      line_integral([&](double u) {
        const double wu = k.w(u);
        return wu * wu;
      }),
      kernel_square_integral(k),
      1e-6);

  double asym = 0.0;
  double sup = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double u = 0.01 * i;
    const double wu = k.w(u);
    asym = std::max(asym, std::abs(wu - k.w(-u)));
    sup = std::max(sup, std::abs(wu));
  }
  add("symmetry", asym, 0.0, 1e-12 * std::max(1.0, sup));
  add_bool("bounded", sup, std::isfinite(sup));

  add("phi_at_zero", k.phi_w(0.0), 1.0, 1e-12);
  double outside = 0.0;
  for (double eps : { 0.0, 1e-6, 1.0 })
    outside = std::max(
      { outside, std::abs(k.phi_w(1.0 + eps)), std::abs(k.phi_w(-1.0 - eps)) });
  add("phi_support", outside, 0.0, 0.0);

  // One-sided difference quotients at the support edge; a kink in phi_w
  // (continuous but not C^1) shows up as an O(1) quotient.
  const double eps = 1e-4;
  const double edge_slope =
    std::max(std::abs(k.phi_w(1.0 - eps) - k.phi_w(1.0)) / eps,
             std::abs(k.phi_w(-1.0 + eps) - k.phi_w(-1.0)) / eps);
  add("phi_c1_at_edge", edge_slope, 0.0, 1e-3);

  // int |u|^beta |w| over doubling shells [R, 2R]. A tail decaying like
  // |u|^-p gives shell ratios 2^(beta + 1 - p), so convergence shows up as a
  // ratio bounded away from 1.
  std::array<double, 5> shells{};
  double radius = 50.0;
  for (auto& s : shells) {
    auto f = [&](double u) { return std::pow(std::abs(u), beta) * std::abs(k.w(u)); };
    s = detail::integrate_range(f, radius, 2.0 * radius, 0.25) +
        detail::integrate_range(
          [&](double u) { return f(-u); }, radius, 2.0 * radius, 0.25);
    radius *= 2.0;
  }
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < shells.size(); ++i)
    worst_ratio = std::max(worst_ratio,
                           shells[i - 1] > 0.0 ? shells[i] / shells[i - 1]
                                               : std::numeric_limits<double>::infinity());
  add_bool("beta_moment_tail", worst_ratio, worst_ratio < 0.98);

  // sup |u w(u)| over the same shells must decrease.
  double previous = std::numeric_limits<double>::infinity();
  double first = 0.0;
  bool decreasing = true;
  radius = 50.0;
  for (int shell = 0; shell < 5; ++shell) {
    double m = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double u = radius * (1.0 + i / 4000.0);
      m = std::max({ m, std::abs(u * k.w(u)), std::abs(u * k.w(-u)) });
    }
    if (shell == 0)
      first = m;
    decreasing = decreasing && m < previous;
    previous = m;
    radius *= 2.0;
  }
  add_bool("u_w_decay", first > 0.0 ? previous / first : 0.0, decreasing);

  return report;
}

} // namespace decomp
