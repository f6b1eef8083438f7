#pragma once

#include "errors.hpp"
#include "random.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace decomp {

using complex = std::complex<double>;

struct NormalComponent
{
  double mean;
  double variance;
  double weight;
};

//! Density, characteristic function and sampler of the jump sizes Y.
//!
//! The built-ins (standard normal and finite normal mixtures) also know their
//! convolution powers in closed form, which `true_g_density` needs.
class JumpDensity
{
public:
  enum class Kind
  {
    standard_normal,
    normal_mixture,
    user
  };

  using DensityFn = std::function<double(double)>;
  using CharFn = std::function<complex(double)>;
  using SamplerFn = std::function<double(RandomStream&)>;

  static JumpDensity standard_normal()
  {
    JumpDensity d;
    d.kind_ = Kind::standard_normal;
    d.name_ = "normal";
    d.components_ = { { 0.0, 1.0, 1.0 } };
    return d;
  }

  static JumpDensity normal_mixture(std::vector<NormalComponent> components)
  {
    if (components.empty())
      throw InvalidArgument("normal mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
      if (!(c.variance > 0.0) || !std::isfinite(c.variance))
        throw InvalidArgument("mixture component variances must be positive");
      if (!(c.weight >= 0.0) || !std::isfinite(c.mean))
        throw InvalidArgument("mixture weights must be nonnegative");
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidArgument("mixture weights must sum to 1");
    JumpDensity d;
    d.kind_ = Kind::normal_mixture;
    d.name_ = "mixture";
    d.components_ = std::move(components);
    return d;
  }

  //! The two-component mixture used for the bimodal example: means 0 and 3/2,
  //! variances 1 and 1/9, weights 3/4 and 1/4.
  static JumpDensity bimodal_mixture()
  {
    return normal_mixture({ { 0.0, 1.0, 0.75 }, { 1.5, 1.0 / 9.0, 0.25 } });
  }

  static JumpDensity user(std::string name,
                          DensityFn density,
                          CharFn cf,
                          SamplerFn sampler)
  {
    if (!density || !cf || !sampler)
      throw InvalidArgument("user jump density needs density, cf and sampler");
    JumpDensity d;
    d.kind_ = Kind::user;
    d.name_ = std::move(name);
    d.density_ = std::move(density);
    d.cf_ = std::move(cf);
    d.sampler_ = std::move(sampler);
    return d;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<NormalComponent>& components() const { return components_; }
  bool has_convolution_powers() const { return kind_ != Kind::user; }

  double density(double x) const
  {
    if (kind_ == Kind::user)
      return density_(x);
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight * normal_pdf(x, c.mean, c.variance);
    return sum;
  }

  complex cf(double t) const
  {
    if (kind_ == Kind::user)
      return cf_(t);
    if (kind_ == Kind::standard_normal)
      return { std::exp(-0.5 * t * t), 0.0 };
    complex sum{ 0.0, 0.0 };
    for (const auto& c : components_)
      sum += c.weight * std::exp(complex(-0.5 * c.variance * t * t, c.mean * t));
    return sum;
  }

  double sample(RandomStream& rng) const
  {
    if (kind_ == Kind::user)
      return sampler_(rng);
    if (components_.size() == 1)
      return rng.normal(components_[0].mean, std::sqrt(components_[0].variance));
    const double u = rng.uniform();
    double cumulative = 0.0;
    const NormalComponent* pick = &components_.back();
    for (const auto& c : components_) {
      cumulative += c.weight;
      if (u < cumulative) {
        pick = &c;
        break;
      }
    }
    return rng.normal(pick->mean, std::sqrt(pick->variance));
  }

  //! Density of Y_1 + ... + Y_k for k >= 1.
  double convolution_power_density(unsigned k, double x) const
  {
    if (kind_ == Kind::user)
      throw UnsupportedModelError(
        "user-supplied jump density has no closed-form convolution powers");
    if (k == 0)
      throw InvalidArgument("convolution power must be at least 1");
    if (kind_ == Kind::standard_normal)
      return normal_pdf(x, 0.0, static_cast<double>(k));

    // multinomial expansion over the k-fold mixture
    std::vector<unsigned> counts(components_.size(), 0);
    double sum = 0.0;
    const double log_k_factorial = std::lgamma(k + 1.0);
    std::function<void(std::size_t, unsigned)> expand =
      [&](std::size_t idx, unsigned remaining) {
        if (idx + 1 == components_.size()) {
          counts[idx] = remaining;
          double log_w = log_k_factorial;
          double mean = 0.0;
          double var = 0.0;
          for (std::size_t i = 0; i < components_.size(); ++i) {
            const auto& c = components_[i];
            if (counts[i] > 0) {
              if (c.weight == 0.0)
                return;
              log_w += counts[i] * std::log(c.weight);
            }
            log_w -= std::lgamma(counts[i] + 1.0);
            mean += counts[i] * c.mean;
            var += counts[i] * c.variance;
          }
          sum += std::exp(log_w) * normal_pdf(x, mean, var);
          return;
        }
        for (unsigned c = 0; c <= remaining; ++c) {
          counts[idx] = c;
          expand(idx + 1, remaining - c);
        }
      };
    expand(0, k);
    return sum;
  }

  //! E[Y] and E[Y^2]; built-ins only.
  double mean() const
  {
    require_builtin();
    double m = 0.0;
    for (const auto& c : components_)
      m += c.weight * c.mean;
    return m;
  }

  double second_moment() const
  {
    require_builtin();
    double m = 0.0;
    for (const auto& c : components_)
      m += c.weight * (c.variance + c.mean * c.mean);
    return m;
  }

  static double normal_pdf(double x, double mean, double variance)
  {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / variance) /
           std::sqrt(2.0 * std::numbers::pi * variance);
  }

private:
  JumpDensity() = default;

  void require_builtin() const
  {
    if (kind_ == Kind::user)
      throw UnsupportedModelError("moments are only known for built-in densities");
  }

  Kind kind_{ Kind::standard_normal };
  std::string name_;
  std::vector<NormalComponent> components_;
  DensityFn density_;
  CharFn cf_;
  SamplerFn sampler_;
};

//! X = Y_1 + ... + Y_N with N ~ Poisson(lambda).
class CompoundPoissonModel
{
public:
  CompoundPoissonModel(double lambda, JumpDensity jump)
    : lambda_(lambda)
    , jump_(std::move(jump))
  {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw InvalidArgument("lambda must be positive and finite");
  }

  double lambda() const { return lambda_; }
  const JumpDensity& jump() const { return jump_; }

private:
  double lambda_;
  JumpDensity jump_;
};

//! The n nonzero observations Z_1..Z_n and what it took to collect them.
struct Sample
{
  std::vector<double> z;
  std::uint64_t zero_count{ 0 };
  std::uint64_t seed{ 0 };

  std::size_t size() const { return z.size(); }
  //! Total number of observations T_n, zeros included.
  std::uint64_t total_observations() const { return z.size() + zero_count; }
};

namespace detail {

//! Sequential-search inversion; exact and fast for the small intensities the
//! estimator targets.
inline unsigned
sample_poisson(double lambda, RandomStream& rng)
{
  if (lambda > 30.0) {
    std::poisson_distribution<unsigned> dist(lambda);
    return dist(rng);
  }
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cumulative = p;
  unsigned k = 0;
  while (u >= cumulative && k < 1000) {
    ++k;
    p *= lambda / k;
    cumulative += p;
  }
  return k;
}

} // namespace detail

inline double
sample_compound(const CompoundPoissonModel& model, RandomStream& rng)
{
  const unsigned count = detail::sample_poisson(model.lambda(), rng);
  double sum = 0.0;
  for (unsigned i = 0; i < count; ++i)
    sum += model.jump().sample(rng);
  return sum;
}

//! Draws X until `n` nonzero values have been observed. Only exact zeros are
//! discarded; with continuous jumps a nonzero sum is zero with probability 0.
inline Sample
sample_until_n_nonzero(const CompoundPoissonModel& model,
                       std::size_t n,
                       RandomStream& rng,
                       std::uint64_t max_draws = 1'000'000'000ULL)
{
  if (n == 0)
    throw InvalidArgument("sample size n must be at least 1");
  Sample sample;
  sample.seed = rng.seed();
  sample.z.reserve(n);
  std::uint64_t draws = 0;
  while (sample.z.size() < n) {
    if (++draws > max_draws)
      throw DegenerateModelError("exceeded " + std::to_string(max_draws) +
                                 " draws before collecting n nonzero values");
    const double x = sample_compound(model, rng);
    if (x == 0.0)
      ++sample.zero_count;
    else
      sample.z.push_back(x);
  }
  return sample;
}

inline complex
phi_f(const JumpDensity& jump, double t)
{
  return jump.cf(t);
}

//! Characteristic function of X given N > 0.
inline complex
phi_g(const CompoundPoissonModel& model, double t)
{
  const double lambda = model.lambda();
  return (std::exp(lambda * phi_f(model.jump(), t)) - 1.0) / std::expm1(lambda);
}

//! Density g of X given N > 0, summed over convolution powers until the
//! Poisson tail mass drops below `tail`.
inline double
true_g_density(const CompoundPoissonModel& model, double x, double tail = 1e-12)
{
  const double lambda = model.lambda();
  const double zero_mass = std::exp(-lambda);
  const double positive_mass = -std::expm1(-lambda);
  double p = zero_mass;
  double cumulative = zero_mass;
  double sum = 0.0;
  for (unsigned k = 1; k < 10000; ++k) {
    p *= lambda / k;
    cumulative += p;
    sum += p / positive_mass * model.jump().convolution_power_density(k, x);
    if (1.0 - cumulative < tail)
      break;
  }
  return sum;
}

} // namespace decomp
