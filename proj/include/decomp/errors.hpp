#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decomp {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Bad user input or a violated precondition.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

//! A compound-Poisson model on which the observation scheme cannot terminate.
class DegenerateModelError : public Error
{
public:
  using Error::Error;
};

//! The requested operation needs a closed form the jump density lacks.
class UnsupportedModelError : public Error
{
public:
  using Error::Error;
};

//! Quadrature or iteration failed to reach the requested tolerance.
class NonConvergenceError : public Error
{
public:
  using Error::Error;
};

//! The path passed within `min_modulus` of the origin at grid index `index`.
class ZeroPathError : public Error
{
public:
  ZeroPathError(std::size_t index, double modulus)
    : Error("path comes within " + std::to_string(modulus) +
            " of zero at grid index " + std::to_string(index))
    , index_(index)
    , modulus_(modulus)
  {}

  std::size_t index() const { return index_; }
  double modulus() const { return modulus_; }

private:
  std::size_t index_;
  double modulus_;
};

//! A phase increment exceeded the acceptance threshold; the grid must be refined.
class GridTooCoarseError : public Error
{
public:
  GridTooCoarseError(std::size_t index, double phase_step)
    : Error("phase increment " + std::to_string(phase_step) +
            " exceeds pi/2 at grid index " + std::to_string(index) +
            "; refine the frequency grid")
    , index_(index)
    , phase_step_(phase_step)
  {}

  std::size_t index() const { return index_; }
  double phase_step() const { return phase_step_; }

private:
  std::size_t index_;
  double phase_step_;
};

} // namespace decomp
