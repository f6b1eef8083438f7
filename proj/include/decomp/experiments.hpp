#pragma once

#include "errors.hpp"
#include "inversion.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace decomp {

//! h = C n^-gamma.
struct BandwidthRule
{
  double C;
  double gamma;

  double operator()(std::size_t n) const
  {
    return C * std::pow(static_cast<double>(n), -gamma);
  }
};

//! Frozen gates. Each band was fixed from pilot runs of tools/pilot_bands.
namespace bands {

inline constexpr double variance_ratio_lower = 0.7;
inline constexpr double variance_ratio_upper = 1.3;
inline constexpr double mise_slope_lower = -1.1;
inline constexpr double mise_slope_upper = -0.5;
inline constexpr double bias_ratio_lower = 0.5;
inline constexpr double bias_ratio_upper = 1.5;
inline constexpr double ks_min_p_value = 0.01;
inline constexpr double bimodal_min_fraction = 0.8;
inline constexpr double mass_lower = 0.9;
inline constexpr double mass_upper = 1.1;
//! Largest figure-1 ISE on |x| <= 6 over 200 pilot replicates is 0.0043.
inline constexpr double figure1_ise_upper = 0.01;
//! Local maxima lower than this are tail ripple, not modes.
inline constexpr double mode_min_height = 0.05;
//! A mode must rise this far above the lowest point separating it from any
//! higher maximum.
inline constexpr double mode_min_prominence = 1e-3;

} // namespace bands

struct ExperimentConfig
{
  std::string name = "custom";
  CompoundPoissonModel model{ 0.3, JumpDensity::standard_normal() };
  Kernel kernel = wand_kernel();
  std::vector<std::size_t> n_list{ 1000 };
  BandwidthRule bandwidth{ 0.6, 0.2 };
  std::optional<double> truncation_alpha;
  std::size_t replicates = 100;
  std::uint64_t base_seed = 1;
  std::size_t grid_size = 16384;
  double eta = 0.01;
  std::vector<double> probes{ 0.0 };
  //! The n that single-n gates apply to; the first of n_list when unset.
  std::optional<std::size_t> reference_n;
  //! Bandwidth of the normality negative control.
  double control_h = 1.0;
  //! ISE is taken over |x| <= ise_radius.
  double ise_radius = 6.0;
  unsigned jobs = 1;

  void validate() const
  {
    if (n_list.empty())
      throw InvalidArgument("n_list must not be empty");
    for (auto n : n_list)
      if (n == 0)
        throw InvalidArgument("sample sizes must be positive");
    if (!(bandwidth.C > 0.0) || !std::isfinite(bandwidth.C))
      throw InvalidArgument("bandwidth constant C must be positive");
    if (!(bandwidth.gamma > 0.0 && bandwidth.gamma < 1.0))
      throw InvalidArgument("bandwidth exponent gamma must lie in (0, 1)");
    if (truncation_alpha && !(*truncation_alpha > 0.0))
      throw InvalidArgument("truncation exponent alpha must be positive");
    if (replicates < 2)
      throw InvalidArgument("need at least two replicates");
    if (probes.empty())
      throw InvalidArgument("need at least one probe point");
    if (reference_n &&
        std::find(n_list.begin(), n_list.end(), *reference_n) == n_list.end())
      throw InvalidArgument("reference_n must be one of n_list");
    if (!(control_h > 0.0))
      throw InvalidArgument("control_h must be positive");
    if (!(ise_radius > 0.0))
      throw InvalidArgument("ise_radius must be positive");
    const FftGrid g = grid();
    for (auto n : n_list)
      if (!g.covers(bandwidth(n)))
        throw InvalidArgument("grid does not reach 1/h for n = " + std::to_string(n) +
                              "; need (N-1) eta >= 1/h");
  }

  FftGrid grid() const { return FftGrid(grid_size, eta); }
  std::size_t reference() const { return reference_n.value_or(n_list.front()); }

  //! Everything that determines the results. `jobs` is left out on purpose.
  Metadata echo() const
  {
    auto join_n = [&] {
      std::string s;
      for (auto n : n_list)
        s += (s.empty() ? "" : ";") + std::to_string(n);
      return s;
    };
    auto join_x = [&] {
      std::string s;
      for (auto x : probes)
        s += (s.empty() ? "" : ";") + format_number(x);
      return s;
    };
    return {
      { "experiment", name },
      { "lambda", format_number(model.lambda()) },
      { "jump", model.jump().name() },
      { "kernel", kernel.id() },
      { "n_list", join_n() },
      { "reference_n", std::to_string(reference()) },
      { "bandwidth_C", format_number(bandwidth.C) },
      { "bandwidth_gamma", format_number(bandwidth.gamma) },
      { "truncation_alpha", truncation_alpha ? format_number(*truncation_alpha) : "off" },
      { "replicates", std::to_string(replicates) },
      { "seed", format_number(base_seed) },
      { "N", std::to_string(grid_size) },
      { "eta", format_number(eta) },
      { "probes", join_x() },
      { "control_h", format_number(control_h) },
      { "ise_radius", format_number(ise_radius) },
    };
  }
};

//! A Monte Carlo (or exact, std_error 0) quantity for one cell.
struct Statistic
{
  std::string name;
  std::size_t n;
  double h;
  double x;
  double value;
  double std_error;
  std::size_t replicates;
};

struct Verdict
{
  std::string name;
  double value;
  double lower;
  double upper;
  bool passed;
};

inline Verdict
band_verdict(std::string name, double value, double lower, double upper)
{
  const bool ok = std::isfinite(value) && value >= lower && value <= upper;
  return { std::move(name), value, lower, upper, ok };
}

struct ExperimentReport
{
  std::string experiment;
  Metadata config;
  std::vector<Statistic> statistics;
  std::vector<Verdict> verdicts;
  //! Wall time; kept out of to_text and to_csv so reports compare equal.
  double runtime_seconds = 0.0;

  bool passed() const
  {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
      return v.passed;
    });
  }

  const Statistic* find(const std::string& name, std::size_t n) const
  {
    for (const auto& s : statistics)
      if (s.name == name && s.n == n)
        return &s;
    return nullptr;
  }

  const Verdict* verdict(const std::string& name) const
  {
    for (const auto& v : verdicts)
      if (v.name == name)
        return &v;
    return nullptr;
  }

  std::string to_text() const
  {
    std::ostringstream os;
    os << "experiment " << experiment << '\n';
    for (const auto& [k, v] : config)
      os << "  " << k << " = " << v << '\n';
    char line[256];
    std::snprintf(line, sizeof line, "\n%-24s %7s %10s %8s %24s %24s %6s\n", "statistic",
                  "n", "h", "x", "value", "std_error", "reps");
    os << line;
    for (const auto& s : statistics) {
      std::snprintf(line, sizeof line, "%-24s %7zu %10.6g %8.4g %24.17g %24.17g %6zu\n",
                    s.name.c_str(), s.n, s.h, s.x, s.value, s.std_error, s.replicates);
      os << line;
    }
    std::snprintf(line, sizeof line, "\n%-32s %24s %12s %12s  %s\n", "verdict", "value",
                  "lower", "upper", "result");
    os << line;
    for (const auto& v : verdicts) {
      std::snprintf(line, sizeof line, "%-32s %24.17g %12.6g %12.6g  %s\n", v.name.c_str(),
                    v.value, v.lower, v.upper, v.passed ? "PASS" : "FAIL");
      os << line;
    }
    os << "\noverall " << (passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
  }

  std::string to_csv() const
  {
    std::ostringstream os;
    detail::write_metadata(os, config);
    os << "record,name,n,h,x,value,std_error,replicates,lower,upper,passed\n";
    for (const auto& s : statistics)
      os << "statistic," << s.name << ',' << s.n << ',' << format_number(s.h) << ','
         << format_number(s.x) << ',' << format_number(s.value) << ','
         << format_number(s.std_error) << ',' << s.replicates << ",,,\n";
    for (const auto& v : verdicts)
      os << "verdict," << v.name << ",,,," << format_number(v.value) << ",,,"
         << format_number(v.lower) << ',' << format_number(v.upper) << ','
         << (v.passed ? 1 : 0) << '\n';
    return os.str();
  }
};

//! Stream for replicate r of the cell with sample size n.
inline RandomStream
replicate_stream(std::uint64_t base_seed, std::size_t n, std::size_t r)
{
  const std::uint64_t cell = detail::splitmix64(base_seed ^ detail::splitmix64(n));
  return RandomStream::derive(cell, r);
}

struct ReplicateOutcome
{
  std::vector<double> probe_values;
  double ise = std::numeric_limits<double>::quiet_NaN();
  bool zero_fallback = false;
};

inline double
true_f(const CompoundPoissonModel& model, double x)
{
  return model.jump().density(x);
}

//! Grid node used for probe x; estimates are reported at grid nodes.
inline double
probe_node(const FftGrid& grid, double x)
{
  return grid.x(grid.nearest_index(x));
}

//! Replicates of one cell: sample n nonzero values, estimate with bandwidth
//! h, read the probes and optionally the ISE over |x| <= ise_radius.
inline std::vector<ReplicateOutcome>
run_cell(const ExperimentConfig& cfg, std::size_t n, double h, bool with_ise)
{
  const FftGrid grid = cfg.grid();
  if (!grid.covers(h))
    throw InvalidArgument("grid does not reach 1/h for h = " + format_number(h));
  std::vector<std::size_t> nodes;
  for (double x : cfg.probes)
    nodes.push_back(grid.nearest_index(x));
  EstimateOptions opts;
  if (cfg.truncation_alpha)
    opts.truncation = truncation_level(n, *cfg.truncation_alpha);

  return run_replicates(cfg.replicates, cfg.jobs, [&](std::size_t r) {
    RandomStream rng = replicate_stream(cfg.base_seed, n, r);
    const Sample s = sample_until_n_nonzero(cfg.model, n, rng);
    const Estimate est = estimate_density(s, cfg.model.lambda(), cfg.kernel, h, grid, opts);
    ReplicateOutcome out;
    out.zero_fallback = est.zero_fallback;
    for (auto u : nodes)
      out.probe_values.push_back(est.values[u]);
    if (with_ise)
      out.ise = ise(est, [&](double x) { return true_f(cfg.model, x); }, -cfg.ise_radius,
                    cfg.ise_radius);
    return out;
  });
}

namespace detail {

inline std::vector<double>
probe_column(const std::vector<ReplicateOutcome>& reps, std::size_t probe)
{
  std::vector<double> v;
  v.reserve(reps.size());
  for (const auto& r : reps)
    v.push_back(r.probe_values[probe]);
  return v;
}

inline std::size_t
zero_fallbacks(const std::vector<ReplicateOutcome>& reps)
{
  return static_cast<std::size_t>(std::count_if(
    reps.begin(), reps.end(), [](const ReplicateOutcome& r) { return r.zero_fallback; }));
}

} // namespace detail

//! MISE per n from grid ISE over replicates and the slope of log MISE
//! against log n.
inline ExperimentReport
mise_rate_sweep(const ExperimentConfig& cfg)
{
  cfg.validate();
  if (cfg.n_list.size() < 3)
    throw InvalidArgument("MISE sweep needs at least three sample sizes");
  ExperimentReport rep{ "mise", cfg.echo(), {}, {} };
  std::vector<double> log_n, log_mise, log_var, medians;
  for (auto n : cfg.n_list) {
    const double h = cfg.bandwidth(n);
    const auto reps = run_cell(cfg, n, h, true);
    std::vector<double> ises;
    for (const auto& r : reps)
      ises.push_back(r.ise);
    const double mise = stats::mean(ises);
    const double se = stats::standard_error_of_mean(ises);
    const std::size_t R = reps.size();
    rep.statistics.push_back({ "mise", n, h, 0.0, mise, se, R });
    // sqrt(pi/2) * se, the normal-theory standard error of a median
    const double med = stats::median(ises);
    rep.statistics.push_back({ "median_ise", n, h, 0.0, med, 1.2533 * se, R });
    rep.statistics.push_back(
      { "zero_fallbacks", n, h, 0.0, static_cast<double>(detail::zero_fallbacks(reps)), 0.0, R });
    log_n.push_back(std::log(static_cast<double>(n)));
    log_mise.push_back(std::log(mise));
    log_var.push_back((se / mise) * (se / mise));
    medians.push_back(med);
  }
  const auto fit = stats::weighted_line_fit(log_n, log_mise, log_var);
  rep.statistics.push_back(
    { "log_mise_slope", 0, 0.0, 0.0, fit.slope, fit.slope_std_error, cfg.replicates });
  rep.verdicts.push_back(
    band_verdict("mise_slope", fit.slope, bands::mise_slope_lower, bands::mise_slope_upper));
  double worst = 0.0;
  for (std::size_t i = 1; i < medians.size(); ++i)
    worst = std::max(worst, medians[i] / medians[i - 1]);
  rep.verdicts.push_back({ "median_ise_decreasing", worst, 0.0, 1.0, worst < 1.0 });
  return rep;
}

//! Monte Carlo variance of the estimate at the first probe against the
//! leading variance term, for every n. With a second probe, also checks that
//! the variance ordering follows g. The linearized variance, which keeps the
//! O(1/n) terms, is reported alongside for built-in models.
inline ExperimentReport
variance_check(const ExperimentConfig& cfg)
{
  cfg.validate();
  const FftGrid grid = cfg.grid();
  ExperimentReport rep{ "variance", cfg.echo(), {}, {} };
  std::vector<double> ratios;
  for (auto n : cfg.n_list) {
    const double h = cfg.bandwidth(n);
    const auto reps = run_cell(cfg, n, h, false);
    const std::size_t R = reps.size();
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
      const double x = probe_node(grid, cfg.probes[p]);
      const double g = true_g_density(cfg.model, x);
      if (!(g > 0.0))
        throw InvalidArgument("variance check needs g(x) > 0 at every probe");
      const auto values = detail::probe_column(reps, p);
      const double var = stats::variance(values);
      const double var_se = stats::standard_error_of_variance(values);
      const double asym = asymptotic_variance(cfg.model.lambda(), g, cfg.kernel, n, h);
      rep.statistics.push_back({ "mc_variance", n, h, x, var, var_se, R });
      rep.statistics.push_back({ "asymptotic_variance", n, h, x, asym, 0.0, R });
      rep.statistics.push_back({ "variance_ratio", n, h, x, var / asym, var_se / asym, R });
      if (cfg.model.jump().has_convolution_powers()) {
        const double lin = linearized_variance(cfg.model, cfg.kernel, n, h, x);
        rep.statistics.push_back({ "linearized_variance", n, h, x, lin, 0.0, R });
        rep.statistics.push_back({ "linearized_ratio", n, h, x, var / lin, var_se / lin, R });
      }
      if (p == 0) {
        ratios.push_back(var / asym);
        if (n == cfg.reference())
          rep.verdicts.push_back(band_verdict("variance_ratio_n" + std::to_string(n),
                                              var / asym, bands::variance_ratio_lower,
                                              bands::variance_ratio_upper));
      }
    }
    if (cfg.probes.size() >= 2 && n == cfg.reference()) {
      const double x0 = probe_node(grid, cfg.probes[0]);
      const double x1 = probe_node(grid, cfg.probes[1]);
      const double g0 = true_g_density(cfg.model, x0);
      const double g1 = true_g_density(cfg.model, x1);
      const double v0 = stats::variance(detail::probe_column(reps, 0));
      const double v1 = stats::variance(detail::probe_column(reps, 1));
      // positive when the variance ordering agrees with the g ordering
      const double agreement = (v0 - v1) * (g0 - g1);
      rep.verdicts.push_back({ "variance_follows_g", agreement, 0.0,
                               std::numeric_limits<double>::infinity(), agreement > 0.0 });
    }
  }
  if (ratios.size() >= 2) {
    const double first = std::abs(ratios.front() - 1.0);
    const double last = std::abs(ratios.back() - 1.0);
    rep.verdicts.push_back({ "variance_ratio_approaches_1", last - first,
                             -std::numeric_limits<double>::infinity(), 0.0, last <= first });
  }
  return rep;
}

//! Monte Carlo bias at the first probe against the leading bias term.
inline ExperimentReport
bias_check(const ExperimentConfig& cfg)
{
  cfg.validate();
  if (!cfg.model.jump().has_convolution_powers())
    throw UnsupportedModelError("bias check needs a built-in model");
  const FftGrid grid = cfg.grid();
  const double x = probe_node(grid, cfg.probes.front());
  const double f = true_f(cfg.model, x);
  ExperimentReport rep{ "bias", cfg.echo(), {}, {} };
  std::vector<double> median_bias;
  for (auto n : cfg.n_list) {
    const double h = cfg.bandwidth(n);
    const auto reps = run_cell(cfg, n, h, false);
    const std::size_t R = reps.size();
    const auto values = detail::probe_column(reps, 0);
    const double bias = stats::mean(values) - f;
    const double se = stats::standard_error_of_mean(values);
    const double med = stats::median(values) - f;
    const double lead = leading_bias_beta2(cfg.model, cfg.kernel, h, x);
    rep.statistics.push_back({ "mc_bias", n, h, x, bias, se, R });
    rep.statistics.push_back({ "median_bias", n, h, x, med, 1.2533 * se, R });
    rep.statistics.push_back({ "leading_bias", n, h, x, lead, 0.0, R });
    rep.statistics.push_back({ "bias_ratio", n, h, x, bias / lead, se / std::abs(lead), R });
    median_bias.push_back(std::abs(med));
    if (n == cfg.reference()) {
      rep.verdicts.push_back(band_verdict("bias_ratio_n" + std::to_string(n), bias / lead,
                                          bands::bias_ratio_lower, bands::bias_ratio_upper));
      const double agree = bias * lead;
      rep.verdicts.push_back({ "bias_sign_matches_n" + std::to_string(n), agree, 0.0,
                               std::numeric_limits<double>::infinity(), agree > 0.0 });
    }
  }
  if (median_bias.size() >= 2) {
    const double ratio = median_bias.back() / median_bias.front();
    rep.verdicts.push_back({ "abs_bias_decreasing", ratio, 0.0, 1.0, ratio < 1.0 });
  }
  return rep;
}

//! KS test of mean/SD-standardized estimates at the first probe, at the
//! reference n. The negative control reuses the same samples with the
//! bandwidth control_h and centers at the true f instead, so its bias shows.
inline ExperimentReport
normality_check(const ExperimentConfig& cfg)
{
  cfg.validate();
  const FftGrid grid = cfg.grid();
  const std::size_t n = cfg.reference();
  const double h = cfg.bandwidth(n);
  const double x = probe_node(grid, cfg.probes.front());
  ExperimentReport rep{ "normality", cfg.echo(), {}, {} };

  const auto reps = run_cell(cfg, n, h, false);
  const std::size_t R = reps.size();
  const auto values = detail::probe_column(reps, 0);
  const double mean = stats::mean(values);
  const double sd = std::sqrt(stats::variance(values));
  std::vector<double> standardized;
  for (double v : values)
    standardized.push_back((v - mean) / sd);
  const auto ks = stats::ks_test_standard_normal(standardized);
  rep.statistics.push_back({ "mc_mean", n, h, x, mean, stats::standard_error_of_mean(values), R });
  rep.statistics.push_back({ "mc_sd", n, h, x, sd, 0.0, R });
  rep.statistics.push_back({ "standardized_mean", n, h, x, stats::mean(standardized),
                             stats::standard_error_of_mean(standardized), R });
  rep.statistics.push_back({ "standardized_variance", n, h, x, stats::variance(standardized),
                             stats::standard_error_of_variance(standardized), R });
  rep.statistics.push_back({ "ks_statistic", n, h, x, ks.statistic, 0.0, R });
  rep.statistics.push_back({ "ks_p_value", n, h, x, ks.p_value, 0.0, R });
  rep.verdicts.push_back({ "ks_p_value", ks.p_value, bands::ks_min_p_value, 1.0,
                           ks.p_value > bands::ks_min_p_value });

  const double hc = cfg.control_h;
  const auto control = run_cell(cfg, n, hc, false);
  const auto cvalues = detail::probe_column(control, 0);
  const double csd = std::sqrt(stats::variance(cvalues));
  const double f = true_f(cfg.model, x);
  std::vector<double> raw;
  for (double v : cvalues)
    raw.push_back((v - f) / csd);
  const auto cks = stats::ks_test_standard_normal(raw);
  rep.statistics.push_back({ "control_ks_statistic", n, hc, x, cks.statistic, 0.0, R });
  rep.statistics.push_back({ "control_ks_p_value", n, hc, x, cks.p_value, 0.0, R });
  rep.verdicts.push_back({ "control_rejected", cks.p_value, 0.0, bands::ks_min_p_value,
                           cks.p_value <= bands::ks_min_p_value });
  return rep;
}

struct Mode
{
  double x;
  double height;
  double prominence;
};

//! Local maxima of the estimate on [lo, hi] with their prominence, i.e. how
//! far each stands above the lowest point on the way to a higher maximum (or
//! the interval end).
inline std::vector<Mode>
find_modes(const Estimate& est, double lo, double hi)
{
  std::vector<double> xs, vs;
  for (std::size_t u = 0; u < est.size(); ++u)
    if (est.x(u) >= lo && est.x(u) <= hi) {
      xs.push_back(est.x(u));
      vs.push_back(est.values[u]);
    }
  std::vector<Mode> modes;
  const std::size_t m = vs.size();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (!(vs[i] > vs[i - 1] && vs[i] >= vs[i + 1]))
      continue;
    double left = vs[i];
    for (std::size_t j = i; j-- > 0;) {
      left = std::min(left, vs[j]);
      if (vs[j] > vs[i])
        break;
    }
    double right = vs[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      right = std::min(right, vs[j]);
      if (vs[j] > vs[i])
        break;
    }
    modes.push_back({ xs[i], vs[i], vs[i] - std::max(left, right) });
  }
  return modes;
}

inline std::size_t
count_significant_modes(const Estimate& est, double lo = -4.0, double hi = 4.0)
{
  const auto modes = find_modes(est, lo, hi);
  return static_cast<std::size_t>(std::count_if(modes.begin(), modes.end(), [](const Mode& md) {
    return md.height >= bands::mode_min_height && md.prominence >= bands::mode_min_prominence;
  }));
}

//! Two significant maxima, hence a local minimum between them.
inline bool
is_bimodal(const Estimate& est, double lo = -4.0, double hi = 4.0)
{
  return count_significant_modes(est, lo, hi) == 2;
}

//! Trapezoid integral of the estimate (or its absolute value) over the
//! central half of the spatial grid, |x| <= N delta / 4. The outer half holds
//! the periodic image that the alternating quadrature weights leave at the
//! grid edges, which is not part of the density estimate.
inline double
central_mass(const Estimate& est, bool absolute = false)
{
  const double limit = 0.25 * static_cast<double>(est.grid.size()) * est.grid.delta();
  double sum = 0.0;
  bool have = false;
  double prev = 0.0;
  for (std::size_t u = 0; u < est.size(); ++u) {
    const double x = est.x(u);
    if (std::abs(x) > limit)
      continue;
    const double v = absolute ? std::abs(est.values[u]) : est.values[u];
    if (have)
      sum += 0.5 * est.grid.delta() * (prev + v);
    prev = v;
    have = true;
  }
  return sum;
}

enum class FigurePreset
{
  figure1,
  figure2
};

struct FigureConfig
{
  std::string name;
  CompoundPoissonModel model;
  Kernel kernel = wand_kernel();
  std::size_t n = 1000;
  double h = 0.14;
  std::size_t grid_size = 16384;
  double eta = 0.01;
  std::optional<double> truncation_alpha;
  std::uint64_t seed = 1;
  //! replicates for the bimodality frequency (figure2 only)
  std::size_t replicates = 20;
  unsigned jobs = 1;

  Metadata echo() const
  {
    return {
      { "experiment", name },
      { "lambda", format_number(model.lambda()) },
      { "jump", model.jump().name() },
      { "kernel", kernel.id() },
      { "n", std::to_string(n) },
      { "h", format_number(h) },
      { "N", std::to_string(grid_size) },
      { "eta", format_number(eta) },
      { "truncation_alpha", truncation_alpha ? format_number(*truncation_alpha) : "off" },
      { "seed", format_number(seed) },
      { "replicates", std::to_string(replicates) },
    };
  }
};

inline FigureConfig
figure_preset(FigurePreset which)
{
  if (which == FigurePreset::figure1)
    return { "figure1", CompoundPoissonModel(0.3, JumpDensity::standard_normal()) };
  FigureConfig cfg{ "figure2", CompoundPoissonModel(0.3, JumpDensity::bimodal_mixture()) };
  cfg.h = 0.1;
  return cfg;
}

struct FigureResult
{
  Estimate estimate;
  ExperimentReport report;
};

namespace detail {

inline Estimate
figure_estimate(const FigureConfig& cfg, RandomStream rng)
{
  const Sample s = sample_until_n_nonzero(cfg.model, cfg.n, rng);
  EstimateOptions opts;
  if (cfg.truncation_alpha)
    opts.truncation = truncation_level(cfg.n, *cfg.truncation_alpha);
  return estimate_density(s, cfg.model.lambda(), cfg.kernel, cfg.h,
                          FftGrid(cfg.grid_size, cfg.eta), opts);
}

} // namespace detail

//! One estimate from the sample drawn with RandomStream(seed), the same
//! sample `simulate --seed` writes, plus its report. figure2 also reports
//! the bimodal fraction over `replicates` further samples drawn from
//! RandomStream::derive(seed, r).
inline FigureResult
run_figure(const FigureConfig& cfg)
{
  if (!FftGrid(cfg.grid_size, cfg.eta).covers(cfg.h))
    throw InvalidArgument("grid does not reach 1/h");
  FigureResult out{ detail::figure_estimate(cfg, RandomStream(cfg.seed)),
                    { cfg.name, cfg.echo(), {}, {} } };
  const Estimate& est = out.estimate;
  auto& rep = out.report;
  const auto truth = [&](double x) { return true_f(cfg.model, x); };
  const double e = ise(est, truth, -6.0, 6.0);
  const double mass = central_mass(est);
  const double abs_mass = central_mass(est, true);
  rep.statistics.push_back({ "ise", cfg.n, cfg.h, 0.0, e, 0.0, 1 });
  rep.statistics.push_back({ "central_mass", cfg.n, cfg.h, 0.0, mass, 0.0, 1 });
  rep.statistics.push_back({ "central_abs_mass", cfg.n, cfg.h, 0.0, abs_mass, 0.0, 1 });
  rep.statistics.push_back({ "modes", cfg.n, cfg.h, 0.0,
                             static_cast<double>(count_significant_modes(est)), 0.0, 1 });
  rep.verdicts.push_back(band_verdict("central_mass", mass, bands::mass_lower, bands::mass_upper));
  rep.verdicts.push_back(
    band_verdict("central_abs_mass", abs_mass, bands::mass_lower, bands::mass_upper));
  if (cfg.name == "figure1")
    rep.verdicts.push_back(band_verdict("ise", e, 0.0, bands::figure1_ise_upper));

  if (cfg.name == "figure2") {
    const auto flags = run_replicates(cfg.replicates, cfg.jobs, [&](std::size_t r) {
      return is_bimodal(detail::figure_estimate(cfg, RandomStream::derive(cfg.seed, r))) ? 1 : 0;
    });
    std::vector<double> as_double(flags.begin(), flags.end());
    const double fraction = stats::mean(as_double);
    const double se = std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(flags.size()));
    rep.statistics.push_back({ "bimodal_fraction", cfg.n, cfg.h, 0.0, fraction, se, flags.size() });
    rep.verdicts.push_back(
      band_verdict("bimodal_fraction", fraction, bands::bimodal_min_fraction, 1.0));
  }
  return out;
}

//! Built-in experiment presets: mise, variance, bias, normality.
inline ExperimentConfig
experiment_preset(const std::string& name)
{
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "mise") {
    cfg.n_list = { 250, 1000, 4000 };
    cfg.replicates = 100;
    cfg.bandwidth = { 0.6, 0.2 };
    cfg.base_seed = 2025;
  } else if (name == "variance") {
    cfg.n_list = { 1000, 4000, 16000 };
    cfg.reference_n = 4000;
    cfg.replicates = 500;
    cfg.bandwidth = { 0.6, 0.2 };
    cfg.probes = { 0.0, 3.0 };
    cfg.base_seed = 2025;
  } else if (name == "bias") {
    // h(4000) = 0.2
    cfg.n_list = { 1000, 4000, 16000 };
    cfg.reference_n = 4000;
    cfg.replicates = 500;
    cfg.bandwidth = { 0.2 * std::pow(4000.0, 0.2), 0.2 };
    cfg.base_seed = 2025;
  } else if (name == "normality") {
    cfg.n_list = { 4000 };
    cfg.replicates = 500;
    cfg.bandwidth = { 0.6, 0.2 };
    cfg.base_seed = 2025;
  } else {
    throw InvalidArgument("unknown experiment preset '" + name +
                          "' (expected mise, variance, bias or normality)");
  }
  return cfg;
}

inline ExperimentReport
run_experiment(const ExperimentConfig& cfg, const std::string& kind)
{
  if (kind == "mise")
    return mise_rate_sweep(cfg);
  if (kind == "variance")
    return variance_check(cfg);
  if (kind == "bias")
    return bias_check(cfg);
  if (kind == "normality")
    return normality_check(cfg);
  throw InvalidArgument("unknown experiment '" + kind + "'");
}

} // namespace decomp
