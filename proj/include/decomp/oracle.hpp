#pragma once

#include "dlog.hpp"
#include "errors.hpp"
#include "inversion.hpp"
#include "kernel.hpp"
#include "model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace decomp {

//! Slow-path quadrature of the estimator integral. Shares only the
//! distinguished logarithm with the FFT pipeline.
struct QuadratureSpec
{
  enum class Rule
  {
    trapezoid,
    simpson
  };

  Rule rule = Rule::simpson;
  //! Initial node density over [-1/h, 1/h]; at least 2^10 nodes in total.
  double points_per_unit = 128.0;
  double rtol = 1e-8;
  int max_refinements = 12;
  double min_modulus = default_min_modulus;
};

//! Direct quadrature of
//!   (1/2 pi lambda) Re int_{-1/h}^{1/h} e^{-itx} Log((e^l - 1) phi_emp(t) phi_w(ht) + 1) dt
//! on its own uniform grid, halving the spacing until two successive levels
//! agree to `rtol` at every requested x.
class DirectInversion
{
public:
  DirectInversion(std::span<const double> z,
                  double lambda,
                  const Kernel& kernel,
                  double h,
                  QuadratureSpec spec = {})
    : z_(z.begin(), z.end())
    , lambda_(lambda)
    , kernel_(kernel)
    , h_(h)
    , spec_(spec)
  {
    if (z_.empty())
      throw InvalidArgument("direct inversion of an empty sample");
    if (!(lambda > 0.0) || !(h > 0.0))
      throw InvalidArgument("lambda and h must be positive");
    if (!(spec.rtol > 0.0))
      throw InvalidArgument("rtol must be positive");
    const double total = 2.0 / h * spec.points_per_unit;
    intervals_ = std::max<std::size_t>(512, static_cast<std::size_t>(std::ceil(total / 2.0)));
    intervals_ += intervals_ % 2;
    sample_level(intervals_, {}, {});
  }

  std::vector<double> evaluate(std::span<const double> xs)
  {
    auto previous = integrate(xs);
    for (int level = 0; level < spec_.max_refinements; ++level) {
      refine();
      auto current = integrate(xs);
      bool converged = true;
      for (std::size_t i = 0; i < xs.size(); ++i)
        converged = converged && std::abs(current[i] - previous[i]) <=
                                   spec_.rtol * std::max(1.0, std::abs(current[i]));
      if (converged)
        return current;
      previous = std::move(current);
    }
    throw NonConvergenceError("direct inversion did not converge after " +
                              std::to_string(spec_.max_refinements) +
                              " refinements");
  }

  double evaluate(double x)
  {
    const double xs[] = { x };
    return evaluate(std::span<const double>(xs))[0];
  }

  std::size_t intervals() const { return intervals_; }

private:
  complex ecf(double t) const
  {
    complex sum{ 0.0, 0.0 };
    for (double zj : z_)
      sum += std::polar(1.0, t * zj);
    return sum / static_cast<double>(z_.size());
  }

  //! Builds the curve values at nodes t_k = k / (h intervals), reusing the
  //! even nodes from the previous level when given.
  void sample_level(std::size_t intervals,
                    const std::vector<complex>& old_pos,
                    const std::vector<complex>& old_neg)
  {
    const double step = 1.0 / (h_ * static_cast<double>(intervals));
    const double scale = std::expm1(lambda_);
    curve_pos_.assign(intervals + 1, {});
    curve_neg_.assign(intervals + 1, {});
    for (std::size_t k = 0; k <= intervals; ++k) {
      if (!old_pos.empty() && k % 2 == 0) {
        curve_pos_[k] = old_pos[k / 2];
        curve_neg_[k] = old_neg[k / 2];
        continue;
      }
      const double t = step * static_cast<double>(k);
      const double damp = kernel_.phi_w(h_ * t);
      curve_pos_[k] = scale * (k == 0 ? complex{ 1.0, 0.0 } : ecf(t)) * damp + 1.0;
      curve_neg_[k] = scale * (k == 0 ? complex{ 1.0, 0.0 } : ecf(-t)) * damp + 1.0;
    }
    log_pos_ = distinguished_log(std::span<const complex>(curve_pos_), spec_.min_modulus).values;
    log_neg_ = distinguished_log(std::span<const complex>(curve_neg_), spec_.min_modulus).values;
  }

  void refine()
  {
    const auto old_pos = curve_pos_;
    const auto old_neg = curve_neg_;
    intervals_ *= 2;
    sample_level(intervals_, old_pos, old_neg);
  }

  std::vector<double> integrate(std::span<const double> xs) const
  {
    const std::size_t m = intervals_;
    const double step = 1.0 / (h_ * static_cast<double>(m));
    std::vector<double> weights(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      if (spec_.rule == QuadratureSpec::Rule::trapezoid)
        weights[k] = (k == 0 || k == m) ? 0.5 * step : step;
      else
        weights[k] = (k == 0 || k == m) ? step / 3.0
                                        : (k % 2 == 1 ? 4.0 * step / 3.0 : 2.0 * step / 3.0);
    }
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      double sum = 0.0;
      for (std::size_t k = 0; k <= m; ++k) {
        const double t = step * static_cast<double>(k);
        // e^{-itx} Log(t) + e^{+itx} Log(-t), real part
        const complex e = std::polar(1.0, -t * x);
        sum += weights[k] * ((e * log_pos_[k]).real() + (std::conj(e) * log_neg_[k]).real());
      }
      out[i] = sum / (2.0 * std::numbers::pi * lambda_);
    }
    return out;
  }

  std::vector<double> z_;
  double lambda_;
  Kernel kernel_;
  double h_;
  QuadratureSpec spec_;
  std::size_t intervals_{ 0 };
  std::vector<complex> curve_pos_, curve_neg_;
  std::vector<complex> log_pos_, log_neg_;
};

inline double
direct_inversion(std::span<const double> z,
                 double lambda,
                 const Kernel& kernel,
                 double h,
                 double x,
                 QuadratureSpec spec = {})
{
  return DirectInversion(z, lambda, kernel, h, spec).evaluate(x);
}

inline std::vector<double>
direct_inversion(std::span<const double> z,
                 double lambda,
                 const Kernel& kernel,
                 double h,
                 std::span<const double> xs,
                 QuadratureSpec spec = {})
{
  return DirectInversion(z, lambda, kernel, h, spec).evaluate(xs);
}

//! Ordinary kernel density estimate (1/nh) sum_j w((x - z_j)/h), the
//! small-lambda limit of the decompounding estimator.
inline double
kernel_density_estimate(std::span<const double> z, const Kernel& kernel, double h, double x)
{
  if (z.empty())
    throw InvalidArgument("kernel density estimate of an empty sample");
  if (!(h > 0.0))
    throw InvalidArgument("bandwidth h must be positive");
  double sum = 0.0;
  for (double zj : z)
    sum += kernel.w((x - zj) / h);
  return sum / (static_cast<double>(z.size()) * h);
}

//! Leading variance term (1/nh) ((e^l - 1)^2 / l^2) g(x) int w^2.
inline double
asymptotic_variance(double lambda, double g_at_x, const Kernel& kernel, std::size_t n, double h)
{
  if (!(lambda > 0.0) || !(g_at_x > 0.0) || n == 0 || !(h > 0.0))
    throw InvalidArgument("asymptotic variance needs positive inputs");
  const double ratio = std::expm1(lambda) / lambda;
  return ratio * ratio * g_at_x * kernel_square_integral(kernel) /
         (static_cast<double>(n) * h);
}

//! Exact variance of the estimator linearized in the empirical cf:
//!   f_nh(x) - E ~ (1/(n lambda)) sum_j (psi_x(Z_j) - E psi_x(Z)),
//!   psi_x(z) = (1/2 pi) int_{-1/h}^{1/h} e^{it(z - x)} (e^l - 1) phi_w(ht)
//!              / ((e^l - 1) phi_g(t) + 1) dt,
//! so Var = Var_g[psi_x(Z)] / (n lambda^2). Unlike the leading variance term
//! it keeps the O(1/n) parts, which are not small for moderate h.
inline double
linearized_variance(const CompoundPoissonModel& model,
                    const Kernel& kernel,
                    std::size_t n,
                    double h,
                    double x,
                    std::size_t t_intervals = 1024)
{
  if (n == 0 || !(h > 0.0))
    throw InvalidArgument("linearized variance needs n > 0 and h > 0");
  if (!model.jump().has_convolution_powers())
    throw UnsupportedModelError("linearized variance needs a built-in model");
  t_intervals += t_intervals % 2;
  const double lambda = model.lambda();
  const double scale = std::expm1(lambda);
  const double dt = 1.0 / (h * static_cast<double>(t_intervals));
  std::vector<double> ts(t_intervals + 1), wts(t_intervals + 1);
  std::vector<complex> m(t_intervals + 1);
  complex mean_psi{ 0.0, 0.0 };
  for (std::size_t k = 0; k <= t_intervals; ++k) {
    ts[k] = dt * static_cast<double>(k);
    wts[k] = dt / 3.0 *
             ((k == 0 || k == t_intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0));
    const complex g = phi_g(model, ts[k]);
    m[k] = scale * kernel.phi_w(h * ts[k]) / (scale * g + 1.0);
    mean_psi += wts[k] * std::polar(1.0, -ts[k] * x) * m[k] * g;
  }
  // (1/pi) Re int_0^{1/h}, the negative half being the conjugate
  auto psi = [&](double z) {
    complex s{ 0.0, 0.0 };
    for (std::size_t k = 0; k <= t_intervals; ++k)
      s += wts[k] * std::polar(1.0, ts[k] * (z - x)) * m[k];
    return s.real() / std::numbers::pi;
  };
  const double e = mean_psi.real() / std::numbers::pi;

  // z range wide enough for g's tails
  const double m1 = model.jump().mean();
  const double m2 = model.jump().second_moment();
  const double positive = -std::expm1(-lambda);
  const double ez = lambda * m1 / positive;
  const double ez2 = (lambda * m2 + lambda * lambda * m1 * m1) / positive;
  const double sd = std::sqrt(std::max(ez2 - ez * ez, 1e-12));
  const double lo = std::min(x, ez) - 25.0 * sd;
  const double hi = std::max(x, ez) + 25.0 * sd;
  const double second = detail::integrate_range(
    [&](double z) {
      const double p = psi(z);
      return p * p * true_g_density(model, z);
    },
    lo, hi, std::min(1.0, 2.0 * h));
  return (second - e * e) / (static_cast<double>(n) * lambda * lambda);
}

enum class BiasQuadrature
{
  gauss_kronrod,
  sinh_sinh
};

//! Re int e^{-itx} t^2 phi_g(t) / ((e^l - 1) phi_g(t) + 1) dt over the real line.
inline double
bias_integral(const CompoundPoissonModel& model,
              double x,
              BiasQuadrature rule = BiasQuadrature::gauss_kronrod)
{
  const double scale = std::expm1(model.lambda());
  auto integrand = [&](double t) {
    const complex g = phi_g(model, t);
    return (std::polar(1.0, -t * x) * (t * t) * g / (scale * g + 1.0)).real();
  };
  double error = 0.0;
  double value = 0.0;
  using boost::math::quadrature::gauss_kronrod;
  if (rule == BiasQuadrature::gauss_kronrod && !model.jump().components().empty()) {
    // Gaussian-mixture phi_f: past T = 10 / sd_min the integrand is below
    // e^-50. On unit panels the integrand is smooth enough that one 61-point
    // Kronrod pass per panel is already at roundoff, with |K - G| as error.
    double sd_min = std::numeric_limits<double>::infinity();
    for (const auto& c : model.jump().components())
      sd_min = std::min(sd_min, std::sqrt(c.variance));
    const auto panels = static_cast<long>(std::ceil(10.0 / sd_min));
    for (long k = -panels; k < panels; ++k) {
      double e = 0.0;
      value += gauss_kronrod<double, 61>::integrate(integrand, static_cast<double>(k),
                                                    static_cast<double>(k + 1), 0, 0.0, &e);
      error += e;
    }
  } else if (rule == BiasQuadrature::gauss_kronrod) {
    // split at 0 so both halves map to a semi-infinite interval
    double e1 = 0.0;
    double e2 = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    value = gauss_kronrod<double, 61>::integrate(integrand, -inf, 0.0, 20, 1e-13, &e1) +
            gauss_kronrod<double, 61>::integrate(integrand, 0.0, inf, 20, 1e-13, &e2);
    error = e1 + e2;
  } else {
    boost::math::quadrature::sinh_sinh<double> integrator(12);
    value = integrator.integrate(integrand, 1e-13, &error);
  }
  if (!std::isfinite(value) || error > 1e-9 * std::max(1.0, std::abs(value)))
    throw NonConvergenceError("bias integral quadrature did not converge");
  return value;
}

//! Leading bias term for beta = 2:
//!   -h^2 sigma^2 (e^l - 1) / (4 pi l) * bias_integral(x),
//! with sigma^2 the kernel second moment.
inline double
leading_bias_beta2(const CompoundPoissonModel& model,
                   const Kernel& kernel,
                   double h,
                   double x,
                   BiasQuadrature rule = BiasQuadrature::gauss_kronrod)
{
  if (!(h >= 0.0))
    throw InvalidArgument("bandwidth must be nonnegative");
  if (h == 0.0)
    return 0.0;
  const double lambda = model.lambda();
  return -h * h * kernel.second_moment() * std::expm1(lambda) /
         (4.0 * std::numbers::pi * lambda) * bias_integral(model, x, rule);
}

class UndefinedResultError : public Error
{
public:
  using Error::Error;
};

//! Asymptotically MSE-optimal bandwidth at x for beta = 2.
inline double
optimal_bandwidth_beta2(const CompoundPoissonModel& model,
                        const Kernel& kernel,
                        double x,
                        std::size_t n)
{
  if (n == 0)
    throw InvalidArgument("n must be positive");
  const double inner = bias_integral(model, x);
  if (std::abs(inner) < 1e-12)
    throw UndefinedResultError("bias integral vanishes at x; optimal bandwidth undefined");
  const double sigma2 = kernel.second_moment();
  const double g = true_g_density(model, x);
  const double base = 4.0 * std::numbers::pi * std::numbers::pi * g *
                      kernel_square_integral(kernel) /
                      (sigma2 * sigma2 * inner * inner);
  return std::pow(base, 0.2) * std::pow(static_cast<double>(n), -0.2);
}

//! Trapezoid integral of (estimate - truth)^2 over the grid nodes with
//! lo <= x <= hi.
inline double
ise(const Estimate& est,
    const std::function<double(double)>& truth,
    double lo = -std::numeric_limits<double>::infinity(),
    double hi = std::numeric_limits<double>::infinity())
{
  double sum = 0.0;
  bool have_previous = false;
  double previous = 0.0;
  const double delta = est.grid.delta();
  for (std::size_t u = 0; u < est.size(); ++u) {
    const double x = est.x(u);
    if (x < lo || x > hi)
      continue;
    const double d = est.values[u] - truth(x);
    const double sq = d * d;
    if (have_previous)
      sum += 0.5 * delta * (previous + sq);
    previous = sq;
    have_previous = true;
  }
  return sum;
}

} // namespace decomp
