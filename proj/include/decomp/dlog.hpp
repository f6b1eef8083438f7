#pragma once

#include "charfn.hpp"
#include "errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace decomp {

inline constexpr double default_min_modulus = 1e-8;
//! Largest accepted phase change between consecutive samples.
inline constexpr double max_phase_increment = std::numbers::pi / 2.0;

//! A curve sampled on a grid starting at t = 0, e.g. (e^l - 1) phi(t) + 1.
struct ComplexPath
{
  FreqGrid grid;
  std::vector<complex> values;
};

struct DLogResult
{
  std::vector<complex> values;
  double max_phase_step{ 0.0 };
  //! Net turns about the origin: (Im values.back() - Arg path.back()) / 2pi.
  long winding{ 0 };
};

//! Continuous logarithm of a sampled path that starts on the positive real
//! axis. Each sample's imaginary part is its principal argument shifted by
//! the multiple of 2pi that keeps the branch continuous with its
//! predecessor, so no phase error accumulates along the path.
//!
//! Throws ZeroPathError when |z_k| < min_modulus and GridTooCoarseError when
//! consecutive samples differ in phase by more than pi/2.
inline DLogResult
distinguished_log(std::span<const complex> path,
                  double min_modulus = default_min_modulus)
{
  if (!(min_modulus > 0.0))
    throw InvalidArgument("min_modulus must be positive");
  if (path.empty())
    throw InvalidArgument("distinguished log of an empty path");
  const complex z0 = path.front();
  if (!(z0.real() > 0.0) || z0.imag() != 0.0)
    throw InvalidArgument("path must start on the positive real axis");
  if (z0.real() < min_modulus)
    throw ZeroPathError(0, z0.real());

  constexpr double two_pi = 2.0 * std::numbers::pi;
  DLogResult result;
  result.values.resize(path.size());
  result.values[0] = { std::log(z0.real()), 0.0 };
  double theta = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const complex z = path[k];
    const double modulus = std::abs(z);
    if (!(modulus >= min_modulus))
      throw ZeroPathError(k, modulus);
    const double step = std::arg(z * std::conj(path[k - 1]));
    if (std::abs(step) > max_phase_increment)
      throw GridTooCoarseError(k, step);
    result.max_phase_step = std::max(result.max_phase_step, std::abs(step));
    const double principal = std::arg(z);
    const double turns = std::round((theta + step - principal) / two_pi);
    theta = principal + two_pi * turns;
    result.values[k] = { std::log(modulus), theta };
  }
  result.winding = static_cast<long>(
    std::round((theta - std::arg(path.back())) / two_pi));
  return result;
}

inline DLogResult
distinguished_log(const ComplexPath& path, double min_modulus = default_min_modulus)
{
  if (path.grid.size() != path.values.size())
    throw InvalidArgument("path grid and values differ in length");
  if (path.grid.start() != 0.0)
    throw InvalidArgument("path grid must start at t = 0");
  return distinguished_log(std::span<const complex>(path.values), min_modulus);
}

} // namespace decomp
