#pragma once

#include "charfn.hpp"
#include "dlog.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "model.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace decomp {

//! Frequency grid v_j = eta (j - 1), j = 1..N, and the spatial grid
//! x_u = -N delta / 2 + delta (u - 1) it induces through delta eta = 2 pi / N.
class FftGrid
{
public:
  FftGrid(std::size_t size, double eta)
    : size_(size)
    , eta_(eta)
  {
    if (size < 2 || !std::has_single_bit(size))
      throw InvalidArgument("FFT grid size N must be a power of 2");
    if (!(eta > 0.0) || !std::isfinite(eta))
      throw InvalidArgument("frequency spacing eta must be positive");
  }

  std::size_t size() const { return size_; }
  double eta() const { return eta_; }
  double delta() const
  {
    return 2.0 * std::numbers::pi / (static_cast<double>(size_) * eta_);
  }

  //! Zero-based: v(0) = 0.
  double v(std::size_t j) const { return eta_ * static_cast<double>(j); }
  //! Zero-based: x(N/2) = 0.
  double x(std::size_t u) const
  {
    return delta() * (static_cast<double>(u) - 0.5 * static_cast<double>(size_));
  }

  FreqGrid frequencies() const { return FreqGrid::from_zero(eta_, size_); }

  //! True when the frequency grid reaches the kernel cutoff 1/h.
  bool covers(double h) const
  {
    return static_cast<double>(size_ - 1) * eta_ >= 1.0 / h;
  }

  std::size_t nearest_index(double x) const
  {
    const double u = std::round(x / delta() + 0.5 * static_cast<double>(size_));
    return static_cast<std::size_t>(
      std::clamp(u, 0.0, static_cast<double>(size_ - 1)));
  }

private:
  std::size_t size_;
  double eta_;
};

struct Estimate
{
  FftGrid grid;
  std::vector<double> values;

  double lambda{ 0.0 };
  double h{ 0.0 };
  std::optional<double> truncation;
  std::string kernel_id;
  std::uint64_t seed{ 0 };
  std::size_t n{ 0 };
  bool truncation_applied{ false };
  bool zero_fallback{ false };

  //! Set only when both halves were inverted explicitly.
  std::optional<double> imag_residue;
  std::optional<double> shortcut_discrepancy;

  double x(std::size_t u) const { return grid.x(u); }
  std::size_t size() const { return values.size(); }
};

//! M_n = n^alpha.
inline double
truncation_level(std::size_t n, double alpha)
{
  if (!(alpha > 0.0))
    throw InvalidArgument("truncation exponent alpha must be positive");
  return std::pow(static_cast<double>(n), alpha);
}

//! psi(v_j) = Log((e^lambda - 1) smoothed_j + 1), the branch tracked along j.
inline std::vector<complex>
build_psi(double lambda,
          std::span<const complex> smoothed,
          double min_modulus = default_min_modulus)
{
  if (!(lambda > 0.0))
    throw InvalidArgument("lambda must be positive");
  const double scale = std::expm1(lambda);
  std::vector<complex> path(smoothed.size());
  for (std::size_t j = 0; j < smoothed.size(); ++j)
    path[j] = scale * smoothed[j] + 1.0;
  return distinguished_log(std::span<const complex>(path), min_modulus).values;
}

//! (eta/3)(3 + (-1)^j - [j = 1]) for j = 1..N, returned zero-based.
inline std::vector<double>
simpson_weights(std::size_t size, double eta)
{
  if (size == 0 || size % 2 != 0)
    throw InvalidArgument("Simpson weights need an even number of points");
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + 1;
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    const double kronecker = j == 1 ? 1.0 : 0.0;
    w[i] = eta / 3.0 * (3.0 + sign - kronecker);
  }
  return w;
}

namespace detail {

//! e^{i v_j N delta / 2} with v_j N delta / 2 = pi (j - 1), so the phase
//! factor is exactly (-1)^{j-1}.
inline double
half_grid_phase(std::size_t zero_based_j)
{
  return zero_based_j % 2 == 0 ? 1.0 : -1.0;
}

inline std::vector<complex>
weighted_summand(std::span<const complex> psi, const FftGrid& grid)
{
  if (psi.size() != grid.size())
    throw InvalidArgument("psi length must equal the FFT grid size");
  const auto weights = simpson_weights(grid.size(), grid.eta());
  std::vector<complex> a(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    a[j] = psi[j] * (half_grid_phase(j) * weights[j]);
  return a;
}

} // namespace detail

//! f^(1)(x_u) = (1/2 pi lambda) sum_j e^{-i 2pi (j-1)(u-1)/N} e^{i v_j N delta/2}
//! psi(v_j) w_j, with w_j the Simpson weights.
inline std::vector<complex>
invert_half(std::span<const complex> psi, const FftGrid& grid, double lambda)
{
  auto a = detail::weighted_summand(psi, grid);
  std::vector<complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, a);
  const double scale = 1.0 / (2.0 * std::numbers::pi * lambda);
  for (auto& v : out)
    v *= scale;
  return out;
}

//! f^(2)(x_u) = (1/2 pi lambda) sum_j e^{+i v_j x_u} psi2(v_j) w_j where psi2 is
//! built from phi_emp(-v_j). Only used to validate the f^(2) = conj(f^(1))
//! shortcut.
inline std::vector<complex>
invert_second_half(std::span<const complex> psi2, const FftGrid& grid, double lambda)
{
  auto a = detail::weighted_summand(psi2, grid);
  std::vector<complex> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, a);
  const double scale = 1.0 / (2.0 * std::numbers::pi * lambda);
  for (auto& v : out)
    v *= scale;
  return out;
}

struct EstimateOptions
{
  std::optional<double> truncation;
  double min_modulus = default_min_modulus;
  EcfMethod ecf_method = EcfMethod::recurrence;
  //! Invert f^(2) with its own FFT instead of using conj(f^(1)).
  bool explicit_second_half = false;
};

namespace detail {

//! Smoothed cf on the frequency grid with everything at or beyond 1/h set
//! to zero, and the psi it induces. Grid points past the cutoff lie outside
//! the integration range, so psi is zero there rather than the continued
//! logarithm (which would be 2 pi i * winding).
inline std::vector<complex>
psi_on_grid(std::span<const double> z,
            double lambda,
            const Kernel& kernel,
            double h,
            const FftGrid& grid,
            double direction,
            const EstimateOptions& opts)
{
  const double cutoff = 1.0 / h;
  std::size_t support = 0;
  while (support < grid.size() && grid.v(support) < cutoff)
    ++support;
  std::vector<complex> psi(grid.size(), complex{ 0.0, 0.0 });
  if (support == 0)
    return psi;
  std::vector<complex> smooth;
  if (direction > 0.0) {
    smooth = smoothed_cf(z, kernel, h, FreqGrid::from_zero(grid.eta(), support),
                         opts.ecf_method);
  } else {
    // phi_emp(-v_j) evaluated as its own sum over the mirrored sample
    std::vector<double> mirrored(z.begin(), z.end());
    for (auto& v : mirrored)
      v = -v;
    smooth = smoothed_cf(mirrored, kernel, h,
                         FreqGrid::from_zero(grid.eta(), support), opts.ecf_method);
  }
  const auto head = build_psi(lambda, smooth, opts.min_modulus);
  std::copy(head.begin(), head.end(), psi.begin());
  return psi;
}

} // namespace detail

//! The decompounding density estimate on the FFT spatial grid.
//!
//! Assembles f = f^(1) + f^(2) = 2 Re f^(1) and clamps to [-M_n, M_n] when a
//! truncation level is supplied. If the empirical curve comes within
//! `min_modulus` of zero the estimate is identically zero and
//! `zero_fallback` is set.
inline Estimate
estimate_density(std::span<const double> z,
                 double lambda,
                 const Kernel& kernel,
                 double h,
                 const FftGrid& grid,
                 const EstimateOptions& opts = {})
{
  if (z.empty())
    throw InvalidArgument("cannot estimate from an empty sample");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("lambda must be positive and finite");
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidArgument("bandwidth h must be positive");
  if (!grid.covers(h))
    throw InvalidArgument("frequency grid does not reach 1/h; need (N-1) eta >= 1/h");
  if (opts.truncation && !(*opts.truncation > 0.0))
    throw InvalidArgument("truncation level must be positive");

  Estimate est{ grid, std::vector<double>(grid.size(), 0.0) };
  est.lambda = lambda;
  est.h = h;
  est.truncation = opts.truncation;
  est.kernel_id = kernel.id();
  est.n = z.size();

  std::vector<complex> psi;
  std::vector<complex> psi2;
  try {
    psi = detail::psi_on_grid(z, lambda, kernel, h, grid, 1.0, opts);
    if (opts.explicit_second_half)
      psi2 = detail::psi_on_grid(z, lambda, kernel, h, grid, -1.0, opts);
  } catch (const ZeroPathError&) {
    est.zero_fallback = true;
    return est;
  }

  const auto first = invert_half(psi, grid, lambda);
  for (std::size_t u = 0; u < grid.size(); ++u)
    est.values[u] = 2.0 * first[u].real();

  if (opts.explicit_second_half) {
    const auto second = invert_second_half(psi2, grid, lambda);
    double imag = 0.0;
    double shortcut = 0.0;
    for (std::size_t u = 0; u < grid.size(); ++u) {
      const complex total = first[u] + second[u];
      imag = std::max(imag, std::abs(total.imag()));
      shortcut = std::max(shortcut, std::abs(total.real() - est.values[u]));
    }
    est.imag_residue = imag;
    est.shortcut_discrepancy = shortcut;
  }

  if (opts.truncation) {
    const double m = *opts.truncation;
    for (auto& v : est.values)
      v = std::clamp(v, -m, m);
    est.truncation_applied = true;
  }
  return est;
}

inline Estimate
estimate_density(const Sample& sample,
                 double lambda,
                 const Kernel& kernel,
                 double h,
                 const FftGrid& grid,
                 const EstimateOptions& opts = {})
{
  Estimate est = estimate_density(std::span<const double>(sample.z), lambda,
                                  kernel, h, grid, opts);
  est.seed = sample.seed;
  return est;
}

} // namespace decomp
