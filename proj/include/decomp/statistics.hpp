#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace decomp::stats {

inline double
mean(std::span<const double> v)
{
  if (v.empty())
    throw InvalidArgument("mean of an empty sequence");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

//! Unbiased sample variance.
inline double
variance(std::span<const double> v)
{
  if (v.size() < 2)
    throw InvalidArgument("variance needs at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v)
    ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

inline double
standard_error_of_mean(std::span<const double> v)
{
  return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

//! Large-sample standard error of the sample variance, sqrt((m4 - s^4) / R).
inline double
standard_error_of_variance(std::span<const double> v)
{
  const double m = mean(v);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : v) {
    const double d2 = (x - m) * (x - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double r = static_cast<double>(v.size());
  m2 /= r;
  m4 /= r;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / r);
}

inline double
median(std::vector<double> v)
{
  if (v.empty())
    throw InvalidArgument("median of an empty sequence");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1)
    return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

inline double
standard_normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

//! Weighted least-squares line through (x_i, y_i) with weights 1/var_i.
struct LineFit
{
  double slope;
  double intercept;
  double slope_std_error;
};

inline LineFit
weighted_line_fit(std::span<const double> x,
                  std::span<const double> y,
                  std::span<const double> var)
{
  if (x.size() != y.size() || x.size() != var.size() || x.size() < 2)
    throw InvalidArgument("line fit needs matching inputs of length >= 2");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / var[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / var[i];
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  const double slope = sxy / sxx;
  return { slope, ybar - slope * xbar, std::sqrt(1.0 / sxx) };
}

namespace detail {

// Matrix power with a separate decimal exponent so the entries stay finite.
inline void
matrix_power(const Eigen::MatrixXd& a, int exponent, Eigen::MatrixXd& out, int& out_exp)
{
  if (exponent == 1) {
    out = a;
    out_exp = 0;
    return;
  }
  Eigen::MatrixXd half;
  int half_exp = 0;
  matrix_power(a, exponent / 2, half, half_exp);
  out = half * half;
  out_exp = 2 * half_exp;
  if (exponent % 2 == 1)
    out = (a * out).eval();
  const int centre = static_cast<int>(out.rows() / 2);
  if (out(centre, centre) > 1e140) {
    out /= 1e140;
    out_exp += 140;
  }
}

} // namespace detail

//! P(D_n < d) for the one-sample Kolmogorov-Smirnov statistic with a fully
//! specified continuous null, by the Marsaglia-Tsang-Wang matrix method.
inline double
kolmogorov_cdf(double d, std::size_t n)
{
  if (n == 0)
    throw InvalidArgument("KS distribution needs n >= 1");
  if (d <= 0.0)
    return 0.0;
  if (d >= 1.0)
    return 1.0;
  const double nd = static_cast<double>(n) * d;
  const double s = nd * d;
  if (s > 7.24 || (s > 3.76 && n > 99))
    return 1.0 - 2.0 * std::exp(-(2.000071 + 0.331 / std::sqrt(static_cast<double>(n)) +
                                  1.409 / static_cast<double>(n)) *
                                s);
  const int k = static_cast<int>(nd) + 1;
  const int m = 2 * k - 1;
  const double hh = k - nd;
  Eigen::MatrixXd h(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      h(i, j) = i - j + 1 < 0 ? 0.0 : 1.0;
  for (int i = 0; i < m; ++i) {
    h(i, 0) -= std::pow(hh, i + 1);
    h(m - 1, i) -= std::pow(hh, m - i);
  }
  h(m - 1, 0) += 2.0 * hh - 1.0 > 0.0 ? std::pow(2.0 * hh - 1.0, m) : 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i - j + 1 > 0)
        for (int g = 1; g <= i - j + 1; ++g)
          h(i, j) /= g;
  Eigen::MatrixXd q;
  int q_exp = 0;
  detail::matrix_power(h, static_cast<int>(n), q, q_exp);
  double value = q(k - 1, k - 1);
  for (std::size_t i = 1; i <= n; ++i) {
    value = value * static_cast<double>(i) / static_cast<double>(n);
    if (value < 1e-140) {
      value *= 1e140;
      q_exp -= 140;
    }
  }
  return value * std::pow(10.0, q_exp);
}

struct KsResult
{
  double statistic;
  double p_value;
  std::size_t n;
};

//! One-sample KS test of `values` against the standard normal.
inline KsResult
ks_test_standard_normal(std::vector<double> values)
{
  if (values.empty())
    throw InvalidArgument("KS test of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = standard_normal_cdf(values[i]);
    d = std::max({ d, (i + 1) / n - f, f - i / n });
  }
  const double p = std::clamp(1.0 - kolmogorov_cdf(d, values.size()), 0.0, 1.0);
  return { d, p, values.size() };
}

} // namespace decomp::stats
