#pragma once

#include "errors.hpp"
#include "kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace decomp {

using complex = std::complex<double>;

//! Uniform frequency grid t_k = start + k * step, k = 0..size-1.
class FreqGrid
{
public:
  FreqGrid(double start, double step, std::size_t size)
    : start_(start)
    , step_(step)
    , size_(size)
  {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
      throw InvalidArgument("frequency grid spacing must be positive");
    if (size == 0)
      throw InvalidArgument("frequency grid must be nonempty");
  }

  //! v_j = step * j, j = 0..size-1.
  static FreqGrid from_zero(double step, std::size_t size)
  {
    return FreqGrid(0.0, step, size);
  }

  //! -half*step, ..., 0, ..., half*step.
  static FreqGrid symmetric(double step, std::size_t half)
  {
    return FreqGrid(-static_cast<double>(half) * step, step, 2 * half + 1);
  }

  //! Adopts explicit points after checking they are uniformly spaced.
  static FreqGrid from_points(std::span<const double> points)
  {
    if (points.size() < 2)
      throw InvalidArgument("need at least two points to infer a spacing");
    const double step = (points.back() - points.front()) / (points.size() - 1);
    if (!(step > 0.0))
      throw InvalidArgument("grid points must be strictly increasing");
    for (std::size_t k = 1; k < points.size(); ++k) {
      const double d = points[k] - points[k - 1];
      if (std::abs(d - step) > 1e-12 * step)
        throw InvalidArgument("grid points are not uniformly spaced");
    }
    return FreqGrid(points.front(), step, points.size());
  }

  double operator[](std::size_t k) const
  {
    return start_ + step_ * static_cast<double>(k);
  }
  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t size() const { return size_; }
  double back() const { return (*this)[size_ - 1]; }

  std::vector<double> points() const
  {
    std::vector<double> p(size_);
    for (std::size_t k = 0; k < size_; ++k)
      p[k] = (*this)[k];
    return p;
  }

private:
  double start_;
  double step_;
  std::size_t size_;
};

enum class EcfMethod
{
  //! cos/sin of every t * z_j.
  direct,
  //! e^{i(t+eta)z} = e^{itz} e^{i eta z}, re-anchored every 1024 steps.
  recurrence
};

inline constexpr std::size_t ecf_reanchor_interval = 1024;

namespace detail {

inline void
require_nonempty(std::span<const double> z)
{
  if (z.empty())
    throw InvalidArgument("empirical characteristic function of an empty sample");
}

//! sum_j weights_j e^{i t nodes_j} / total_weight for t on grid indices
//! [first, last).
inline void
weighted_exp_sum(std::span<const double> nodes,
                 std::span<const double> weights,
                 double total_weight,
                 const FreqGrid& grid,
                 std::size_t first,
                 std::size_t last,
                 EcfMethod method,
                 std::span<complex> out)
{
  const std::size_t n = nodes.size();
  if (method == EcfMethod::direct) {
    for (std::size_t k = first; k < last; ++k) {
      const double t = grid[k];
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = t * nodes[j];
        const double w = weights.empty() ? 1.0 : weights[j];
        re += w * std::cos(a);
        im += w * std::sin(a);
      }
      out[k] = { re / total_weight, im / total_weight };
    }
    return;
  }

  std::vector<double> cur_re(n), cur_im(n), step_re(n), step_im(n);
  for (std::size_t j = 0; j < n; ++j) {
    step_re[j] = std::cos(grid.step() * nodes[j]);
    step_im[j] = std::sin(grid.step() * nodes[j]);
  }
  for (std::size_t k = first; k < last; ++k) {
    if ((k - first) % ecf_reanchor_interval == 0) {
      const double t = grid[k];
      for (std::size_t j = 0; j < n; ++j) {
        cur_re[j] = std::cos(t * nodes[j]);
        cur_im[j] = std::sin(t * nodes[j]);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double r = cur_re[j] * step_re[j] - cur_im[j] * step_im[j];
        const double i = cur_re[j] * step_im[j] + cur_im[j] * step_re[j];
        cur_re[j] = r;
        cur_im[j] = i;
      }
    }
    double re = 0.0;
    double im = 0.0;
    if (weights.empty()) {
      for (std::size_t j = 0; j < n; ++j) {
        re += cur_re[j];
        im += cur_im[j];
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        re += weights[j] * cur_re[j];
        im += weights[j] * cur_im[j];
      }
    }
    out[k] = { re / total_weight, im / total_weight };
  }
}

inline void
pin_origin(const FreqGrid& grid, std::span<complex> out)
{
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid[k] == 0.0)
      out[k] = { 1.0, 0.0 };
}

} // namespace detail

//! phi_emp(t) = (1/n) sum_j e^{i t Z_j} on every grid point.
inline std::vector<complex>
empirical_cf(std::span<const double> z,
             const FreqGrid& grid,
             EcfMethod method = EcfMethod::direct)
{
  detail::require_nonempty(z);
  std::vector<complex> out(grid.size());
  detail::weighted_exp_sum(z, {}, static_cast<double>(z.size()), grid, 0,
                           grid.size(), method, out);
  detail::pin_origin(grid, out);
  return out;
}

//! Bound on |binned - exact| at frequency t for tent binning with node
//! spacing `binwidth`: the linear interpolant of e^{itz} between adjacent
//! nodes is off by at most (t * binwidth)^2 / 8.
inline double
binned_cf_error_bound(double t, double binwidth)
{
  const double a = t * binwidth;
  return a * a / 8.0;
}

struct BinnedSample
{
  std::vector<double> nodes;
  std::vector<double> weights;
  double binwidth;
};

//! Linear (tent) binning of z onto `bins` equispaced nodes spanning
//! [min z, max z]. Weights sum to n.
inline BinnedSample
linear_bin(std::span<const double> z, std::size_t bins)
{
  detail::require_nonempty(z);
  if (bins < 16)
    throw InvalidArgument("binned characteristic function needs at least 16 bins");
  const auto [lo_it, hi_it] = std::minmax_element(z.begin(), z.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo))
    throw InvalidArgument("cannot bin a degenerate sample (all values equal)");
  BinnedSample b;
  b.binwidth = (hi - lo) / static_cast<double>(bins - 1);
  b.nodes.resize(bins);
  b.weights.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k)
    b.nodes[k] = lo + b.binwidth * static_cast<double>(k);
  for (double x : z) {
    const double pos = (x - lo) / b.binwidth;
    auto left = static_cast<std::size_t>(std::floor(pos));
    left = std::min(left, bins - 2);
    const double frac = std::clamp(pos - static_cast<double>(left), 0.0, 1.0);
    b.weights[left] += 1.0 - frac;
    b.weights[left + 1] += frac;
  }
  return b;
}

//! Empirical characteristic function of the tent-binned sample. Error per
//! frequency is bounded by `binned_cf_error_bound(t, binwidth)`.
inline std::vector<complex>
binned_empirical_cf(std::span<const double> z,
                    const FreqGrid& grid,
                    std::size_t bins,
                    EcfMethod method = EcfMethod::direct)
{
  const BinnedSample b = linear_bin(z, bins);
  std::vector<complex> out(grid.size());
  detail::weighted_exp_sum(b.nodes, b.weights, static_cast<double>(z.size()),
                           grid, 0, grid.size(), method, out);
  detail::pin_origin(grid, out);
  return out;
}

//! phi_emp(t) phi_w(h t). The empirical part is only evaluated on the
//! contiguous index range where phi_w(h t) is nonzero.
inline std::vector<complex>
smoothed_cf(std::span<const double> z,
            const Kernel& kernel,
            double h,
            const FreqGrid& grid,
            EcfMethod method = EcfMethod::direct)
{
  detail::require_nonempty(z);
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidArgument("bandwidth must be positive");
  std::vector<double> damp(grid.size());
  std::size_t first = grid.size();
  std::size_t last = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    damp[k] = kernel.phi_w(h * grid[k]);
    if (damp[k] != 0.0) {
      first = std::min(first, k);
      last = k + 1;
    }
  }
  std::vector<complex> out(grid.size(), complex{ 0.0, 0.0 });
  if (first >= last)
    return out;
  detail::weighted_exp_sum(z, {}, static_cast<double>(z.size()), grid, first,
                           last, method, out);
  detail::pin_origin(grid, out);
  for (std::size_t k = 0; k < grid.size(); ++k)
    out[k] = damp[k] == 0.0 ? complex{ 0.0, 0.0 } : out[k] * damp[k];
  return out;
}

} // namespace decomp
