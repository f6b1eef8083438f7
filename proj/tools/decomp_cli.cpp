// decomp: simulate compound Poisson samples, estimate the jump density,
// certify kernels, cross-check against the quadrature oracle, and run the
// Monte Carlo experiments.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 zero-fallback estimate, 4 experiment or check failure.

#include <decomp/experiments.hpp>
#include <decomp/io.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace decomp;

namespace {

enum Exit : int
{
  exit_ok = 0,
  exit_validation = 1,
  exit_numerical = 2,
  exit_zero_fallback = 3,
  exit_gate = 4,
};

std::string
normalize_key(std::string key)
{
  for (auto& c : key)
    if (c == '-')
      c = '_';
  return key;
}

//! Layered string settings: preset, then config file, then flags.
class Settings
{
public:
  explicit Settings(std::set<std::string> allowed)
    : allowed_(std::move(allowed))
  {}

  //! Applies one layer. Supplying h in a layer drops any (C, gamma) rule
  //! from the layers below, and the other way round.
  void overlay(const std::map<std::string, std::string>& layer, const std::string& origin)
  {
    const bool h = layer.count("h") > 0;
    const bool rule = layer.count("bandwidth_C") > 0 || layer.count("bandwidth_gamma") > 0;
    if (h && rule)
      throw InvalidArgument(origin + " gives both h and a (bandwidth_C, bandwidth_gamma) rule; "
                                     "supply exactly one");
    if (h) {
      values_.erase("bandwidth_C");
      values_.erase("bandwidth_gamma");
    }
    if (rule)
      values_.erase("h");
    for (const auto& [key, value] : layer) {
      if (!allowed_.count(key))
        throw InvalidArgument("unknown setting '" + key + "' in " + origin);
      values_[key] = value;
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& text(const std::string& key) const
  {
    auto it = values_.find(key);
    if (it == values_.end())
      throw InvalidArgument("missing required setting --" + flag(key));
    return it->second;
  }

  double real(const std::string& key) const
  {
    return parse_real(text(key), key);
  }

  std::uint64_t count(const std::string& key) const
  {
    const std::string& v = text(key);
    try {
      std::size_t used = 0;
      if (!v.empty() && v.front() == '-')
        throw std::invalid_argument("negative");
      const auto out = std::stoull(v, &used);
      if (used != v.size())
        throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      throw InvalidArgument("--" + flag(key) + " must be a nonnegative integer, got '" + v + "'");
    }
  }

  std::vector<double> reals(const std::string& key) const
  {
    std::vector<double> out;
    for (const auto& item : split(text(key)))
      out.push_back(parse_real(item, key));
    if (out.empty())
      throw InvalidArgument("--" + flag(key) + " must list at least one value");
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const
  {
    std::vector<std::size_t> out;
    for (const auto& v : reals(key)) {
      if (!(v >= 1.0) || v != std::floor(v))
        throw InvalidArgument("--" + flag(key) + " must list positive integers");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  }

  //! The effective settings minus paths and the job count, which do not
  //! change results.
  Metadata echo() const
  {
    static const std::set<std::string> skip{ "out", "in", "config", "jobs" };
    Metadata m;
    for (const auto& [key, value] : values_)
      if (!skip.count(key))
        m.push_back({ "config." + key, value });
    return m;
  }

  static std::string flag(std::string key)
  {
    for (auto& c : key)
      if (c == '_')
        c = '-';
    return key;
  }

private:
  static double parse_real(const std::string& v, const std::string& key)
  {
    try {
      std::size_t used = 0;
      const double out = std::stod(v, &used);
      if (used != v.size())
        throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      throw InvalidArgument("--" + flag(key) + " must be a number, got '" + v + "'");
    }
  }

  static std::vector<std::string> split(const std::string& v)
  {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, v.find(';') != std::string::npos ? ';' : ','))
      if (!detail::trim(item).empty())
        out.push_back(detail::trim(item));
    return out;
  }

  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
};

//! A subcommand with string-valued keyed flags collected for layering.
struct Command
{
  CLI::App* app = nullptr;
  std::set<std::string> keys;
  std::map<std::string, std::string> given;
  std::string positional;

  void key(const std::string& name, const std::string& help)
  {
    keys.insert(name);
    app->add_option_function<std::string>(
      "--" + Settings::flag(name), [this, name](const std::string& v) { given[name] = v; }, help);
  }

  Settings resolve(const std::map<std::string, std::string>& preset) const
  {
    Settings s(keys);
    s.overlay(preset, "preset");
    if (auto it = given.find("config"); it != given.end()) {
      std::ifstream in(it->second);
      if (!in)
        throw InvalidArgument("cannot open config file '" + it->second + "'");
      std::map<std::string, std::string> file;
      for (const auto& [k, v] : parse_config(in))
        file[normalize_key(k)] = v;
      s.overlay(file, "config file '" + it->second + "'");
    }
    s.overlay(given, "command line");
    return s;
  }
};

JumpDensity
jump_from(const std::string& name)
{
  if (name == "normal" || name == "standard_normal")
    return JumpDensity::standard_normal();
  if (name == "mixture" || name == "bimodal")
    return JumpDensity::bimodal_mixture();
  throw InvalidArgument("unknown jump density '" + name + "' (expected normal or mixture)");
}

Kernel
kernel_from(const std::string& name)
{
  if (name == "wand")
    return wand_kernel();
  throw InvalidArgument("unknown kernel '" + name + "' (expected wand)");
}

std::optional<double>
alpha_from(const Settings& s)
{
  if (!s.has("truncation_alpha") || s.text("truncation_alpha") == "off")
    return std::nullopt;
  const double a = s.real("truncation_alpha");
  if (!(a > 0.0))
    throw InvalidArgument("--truncation-alpha must be positive (or 'off')");
  return a;
}

//! Writes to --out, or stdout without one.
class Output
{
public:
  explicit Output(const Settings& s)
  {
    if (s.has("out")) {
      path_ = s.text("out");
      file_ = std::make_unique<std::ofstream>(path_);
      if (!*file_)
        throw InvalidArgument("cannot open output file '" + path_ + "'");
    }
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_file() const { return file_ != nullptr; }
  const std::string& path() const { return path_; }

  //! Where human-readable reports go: stdout unless stdout carries the data.
  std::ostream& report() { return file_ ? std::cout : std::cerr; }

  void finish()
  {
    stream().flush();
    if (!stream())
      throw InvalidArgument("failed writing output" + (path_.empty() ? "" : " '" + path_ + "'"));
  }

private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void
add_common(Command& c)
{
  c.key("seed", "random seed");
  c.key("config", "flat key = value config file");
  c.key("out", "output file (default stdout)");
  c.key("jobs", "worker threads for replicate pools");
}

unsigned
jobs_from(const Settings& s)
{
  if (!s.has("jobs"))
    return default_jobs();
  const auto j = s.count("jobs");
  if (j == 0)
    throw InvalidArgument("--jobs must be at least 1");
  return static_cast<unsigned>(j);
}

Sample
simulate_from(const Settings& s)
{
  const CompoundPoissonModel model(s.real("lambda"), jump_from(s.text("jump")));
  const auto n = s.count("n");
  if (n == 0)
    throw InvalidArgument("--n must be at least 1");
  RandomStream rng(s.has("seed") ? s.count("seed") : 1);
  return sample_until_n_nonzero(model, n, rng);
}

double
bandwidth_from(const Settings& s, std::size_t n)
{
  if (s.has("h")) {
    const double h = s.real("h");
    if (!(h > 0.0))
      throw InvalidArgument("--h must be positive");
    return h;
  }
  if (s.has("bandwidth_C") && s.has("bandwidth_gamma")) {
    const BandwidthRule rule{ s.real("bandwidth_C"), s.real("bandwidth_gamma") };
    if (!(rule.C > 0.0))
      throw InvalidArgument("--bandwidth-C must be positive");
    if (!(rule.gamma > 0.0 && rule.gamma < 1.0))
      throw InvalidArgument("--bandwidth-gamma must lie in (0, 1)");
    return rule(n);
  }
  throw InvalidArgument("supply exactly one of --h or both --bandwidth-C and --bandwidth-gamma");
}

FftGrid
grid_from(const Settings& s, double h)
{
  const auto N = s.count("N");
  const double eta = s.real("eta");
  const FftGrid grid(N, eta);
  if (!grid.covers(h)) {
    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "grid too short: (N-1) eta = %.6g < 1/h = %.6g; raise --N or --eta",
                  static_cast<double>(N - 1) * eta, 1.0 / h);
    throw InvalidArgument(msg);
  }
  return grid;
}

// --- simulate -------------------------------------------------------------

int
cmd_simulate(const Command& c)
{
  const Settings s = c.resolve({});
  const Sample sample = simulate_from(s);
  Output out(s);
  write_sample_csv(out.stream(), sample, s.echo());
  out.finish();
  return exit_ok;
}

// --- estimate -------------------------------------------------------------

int
cmd_estimate(const Command& c)
{
  const Settings s =
    c.resolve({ { "kernel", "wand" }, { "N", "16384" }, { "eta", "0.01" } });
  if (!s.has("lambda"))
    throw InvalidArgument("--lambda is required (the intensity is assumed known)");
  const double lambda = s.real("lambda");

  Sample sample;
  std::optional<JumpDensity> jump;
  if (s.has("in")) {
    std::ifstream in(s.text("in"));
    if (!in)
      throw InvalidArgument("cannot open sample file '" + s.text("in") + "'");
    sample = read_sample_csv(in).sample;
    if (sample.z.empty())
      throw InvalidArgument("sample file '" + s.text("in") + "' has no observations");
    if (s.has("jump"))
      jump = jump_from(s.text("jump"));
  } else {
    if (!s.has("jump") || !s.has("n"))
      throw InvalidArgument("give --in FILE, or --jump and --n to simulate the sample");
    sample = simulate_from(s);
    jump = jump_from(s.text("jump"));
  }

  const double h = bandwidth_from(s, sample.size());
  const FftGrid grid = grid_from(s, h);
  EstimateOptions opts;
  if (auto a = alpha_from(s))
    opts.truncation = truncation_level(sample.size(), *a);

  std::optional<Estimate> est;
  try {
    est = estimate_density(sample, lambda, kernel_from(s.text("kernel")), h, grid, opts);
  } catch (const GridTooCoarseError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "suggestion: --N " << 2 * grid.size() << " --eta "
              << format_number(grid.eta() / 2.0) << " (same frequency range, half the step)\n";
    return exit_numerical;
  }

  Output out(s);
  std::function<double(double)> truth;
  if (jump)
    truth = [&](double x) { return jump->density(x); };
  write_estimate_csv(out.stream(), *est, truth, s.echo());
  out.finish();
  if (est->zero_fallback) {
    std::cerr << "warning: the empirical curve came within " << format_number(opts.min_modulus)
              << " of zero; the estimate is identically zero\n";
    return exit_zero_fallback;
  }
  return exit_ok;
}

// --- check-kernel ---------------------------------------------------------

int
cmd_check_kernel(const Command& c)
{
  const Settings s = c.resolve({ { "beta", "2" } });
  const Kernel k = kernel_from(c.positional.empty() ? "wand" : c.positional);
  const KernelReport rep = check_kernel(k, s.real("beta"));
  Output out(s);
  auto& os = out.stream();
  os << "kernel " << rep.kernel_id << "  beta " << format_number(rep.beta) << '\n';
  char line[200];
  std::snprintf(line, sizeof line, "%-18s %24s %24s %10s  %s\n", "check", "value", "expected",
                "tolerance", "result");
  os << line;
  for (const auto& ch : rep.checks) {
    std::snprintf(line, sizeof line, "%-18s %24.17g %24.17g %10.3g  %s\n", ch.name.c_str(),
                  ch.value, ch.expected, ch.tolerance, ch.passed ? "PASS" : "FAIL");
    os << line;
  }
  os << "overall " << (rep.passed() ? "PASS" : "FAIL") << '\n';
  out.finish();
  return rep.passed() ? exit_ok : exit_gate;
}

// --- oracle-compare -------------------------------------------------------

std::map<std::string, std::string>
figure_settings(const std::string& name)
{
  if (name == "figure1")
    return { { "lambda", "0.3" }, { "jump", "normal" }, { "n", "1000" }, { "h", "0.14" },
             { "N", "16384" },    { "eta", "0.01" },    { "kernel", "wand" } };
  if (name == "figure2")
    return { { "lambda", "0.3" }, { "jump", "mixture" }, { "n", "1000" }, { "h", "0.1" },
             { "N", "16384" },    { "eta", "0.01" },     { "kernel", "wand" } };
  throw InvalidArgument("unknown configuration '" + name + "' (expected figure1 or figure2)");
}

int
cmd_oracle_compare(const Command& c)
{
  auto preset = figure_settings(c.positional.empty() ? "figure1" : c.positional);
  preset["seed"] = "42";
  preset["tolerance"] = "1e-6";
  preset["radius"] = "5";
  const Settings s = c.resolve(preset);
  const Sample sample = simulate_from(s);
  const double lambda = s.real("lambda");
  const double h = bandwidth_from(s, sample.size());
  const FftGrid grid = grid_from(s, h);
  const Kernel k = kernel_from(s.text("kernel"));
  const double tol = s.real("tolerance");
  const double radius = s.real("radius");

  const Estimate est = estimate_density(sample, lambda, k, h, grid);
  if (est.zero_fallback)
    throw ZeroPathError(0, 0.0);
  std::vector<double> xs;
  std::vector<std::size_t> nodes;
  for (std::size_t u = 0; u < grid.size(); ++u)
    if (std::abs(grid.x(u)) <= radius) {
      xs.push_back(grid.x(u));
      nodes.push_back(u);
    }
  DirectInversion oracle(sample.z, lambda, k, h);
  const auto ref = oracle.evaluate(xs);
  double worst = 0.0;
  double worst_x = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = std::abs(est.values[nodes[i]] - ref[i]);
    if (d > worst) {
      worst = d;
      worst_x = xs[i];
    }
  }

  Output out(s);
  auto& os = out.stream();
  for (const auto& [key, value] : s.echo())
    os << "# " << key << '=' << value << '\n';
  os << "x,fft,oracle,abs_diff\n";
  for (double x : { -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0 }) {
    const std::size_t u = grid.nearest_index(x);
    const auto it = std::find(nodes.begin(), nodes.end(), u);
    if (it == nodes.end())
      continue;
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    os << format_number(xs[i]) << ',' << format_number(est.values[u]) << ','
       << format_number(ref[i]) << ',' << format_number(std::abs(est.values[u] - ref[i])) << '\n';
  }
  os << "# nodes=" << xs.size() << " oracle_intervals=" << oracle.intervals() << '\n';
  os << "# max_abs_discrepancy=" << format_number(worst) << " at x=" << format_number(worst_x)
     << '\n';
  os << "# tolerance=" << format_number(tol) << ' ' << (worst < tol ? "PASS" : "FAIL") << '\n';
  out.finish();
  if (out.to_file())
    std::cout << "max-abs discrepancy " << format_number(worst) << " over " << xs.size()
              << " nodes with |x| <= " << format_number(radius) << ": "
              << (worst < tol ? "PASS" : "FAIL") << '\n';
  return worst < tol ? exit_ok : exit_gate;
}

// --- experiment -----------------------------------------------------------

std::map<std::string, std::string>
experiment_settings(const ExperimentConfig& cfg)
{
  auto join = [](const auto& v) {
    std::string s;
    for (const auto& x : v)
      s += (s.empty() ? "" : ",") + format_number(static_cast<double>(x));
    return s;
  };
  std::map<std::string, std::string> m{
    { "lambda", format_number(cfg.model.lambda()) },
    { "jump", cfg.model.jump().name() },
    { "kernel", cfg.kernel.id() },
    { "n_list", join(cfg.n_list) },
    { "bandwidth_C", format_number(cfg.bandwidth.C) },
    { "bandwidth_gamma", format_number(cfg.bandwidth.gamma) },
    { "truncation_alpha", cfg.truncation_alpha ? format_number(*cfg.truncation_alpha) : "off" },
    { "replicates", std::to_string(cfg.replicates) },
    { "seed", format_number(cfg.base_seed) },
    { "N", std::to_string(cfg.grid_size) },
    { "eta", format_number(cfg.eta) },
    { "probes", join(cfg.probes) },
    { "control_h", format_number(cfg.control_h) },
    { "ise_radius", format_number(cfg.ise_radius) },
  };
  if (cfg.reference_n)
    m["reference_n"] = std::to_string(*cfg.reference_n);
  return m;
}

int
run_figure_command(const std::string& name, const Command& c)
{
  const FigurePreset which =
    name == "figure1" ? FigurePreset::figure1 : FigurePreset::figure2;
  FigureConfig cfg = figure_preset(which);
  auto preset = figure_settings(name);
  preset["seed"] = format_number(cfg.seed);
  preset["replicates"] = std::to_string(cfg.replicates);
  preset["truncation_alpha"] = "off";
  const Settings s = c.resolve(preset);

  cfg.model = CompoundPoissonModel(s.real("lambda"), jump_from(s.text("jump")));
  cfg.kernel = kernel_from(s.text("kernel"));
  cfg.n = s.count("n");
  if (cfg.n == 0)
    throw InvalidArgument("--n must be at least 1");
  cfg.h = bandwidth_from(s, cfg.n);
  cfg.grid_size = s.count("N");
  cfg.eta = s.real("eta");
  grid_from(s, cfg.h);
  cfg.truncation_alpha = alpha_from(s);
  cfg.seed = s.count("seed");
  cfg.replicates = s.count("replicates");
  if (cfg.replicates == 0)
    throw InvalidArgument("--replicates must be at least 1");
  cfg.jobs = jobs_from(s);

  const auto start = std::chrono::steady_clock::now();
  const FigureResult res = run_figure(cfg);
  Output out(s);
  Metadata extra = cfg.echo();
  const auto more = s.echo();
  extra.insert(extra.end(), more.begin(), more.end());
  write_estimate_csv(out.stream(), res.estimate,
                     [&](double x) { return cfg.model.jump().density(x); }, extra);
  out.finish();
  out.report() << res.report.to_text();
  if (out.to_file()) {
    std::ofstream rep(out.path() + ".report.csv");
    rep << res.report.to_csv();
  }
  std::cerr << "runtime "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            << " s\n";
  return res.report.passed() ? exit_ok : exit_gate;
}

int
cmd_experiment(const Command& c)
{
  const std::string& name = c.positional;
  if (name == "figure1" || name == "figure2")
    return run_figure_command(name, c);

  ExperimentConfig cfg = experiment_preset(name);
  const Settings s = c.resolve(experiment_settings(cfg));
  cfg.model = CompoundPoissonModel(s.real("lambda"), jump_from(s.text("jump")));
  cfg.kernel = kernel_from(s.text("kernel"));
  cfg.n_list = s.counts("n_list");
  cfg.bandwidth = { s.real("bandwidth_C"), s.real("bandwidth_gamma") };
  cfg.truncation_alpha = alpha_from(s);
  cfg.replicates = s.count("replicates");
  cfg.base_seed = s.count("seed");
  cfg.grid_size = s.count("N");
  cfg.eta = s.real("eta");
  cfg.probes = s.reals("probes");
  cfg.reference_n = s.has("reference_n") ? std::optional<std::size_t>(s.count("reference_n"))
                                         : std::nullopt;
  cfg.control_h = s.real("control_h");
  cfg.ise_radius = s.real("ise_radius");
  cfg.jobs = jobs_from(s);

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep = run_experiment(cfg, name);
  rep.runtime_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Output out(s);
  out.stream() << rep.to_csv();
  out.finish();
  out.report() << rep.to_text();
  std::cerr << "runtime " << rep.runtime_seconds << " s\n";
  return rep.passed() ? exit_ok : exit_gate;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Kernel decompounding of discretely observed compound Poisson data" };
  // --h is the bandwidth, so help is long-form only
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  Command simulate{ app.add_subcommand("simulate", "draw a sample of n nonzero observations") };
  simulate.key("lambda", "Poisson intensity");
  simulate.key("jump", "jump density: normal | mixture");
  simulate.key("n", "number of nonzero observations");
  add_common(simulate);

  Command estimate{ app.add_subcommand("estimate", "estimate the jump density on the FFT grid") };
  estimate.key("in", "sample CSV (otherwise simulate from --jump, --n, --seed)");
  estimate.key("lambda", "Poisson intensity (required)");
  estimate.key("jump", "jump density; adds the f_true column");
  estimate.key("n", "sample size when simulating");
  estimate.key("h", "bandwidth");
  estimate.key("bandwidth_C", "bandwidth rule constant, h = C n^-gamma");
  estimate.key("bandwidth_gamma", "bandwidth rule exponent in (0, 1)");
  estimate.key("kernel", "kernel id (wand)");
  estimate.key("N", "FFT size, a power of 2");
  estimate.key("eta", "frequency spacing");
  estimate.key("truncation_alpha", "clamp at n^alpha, or off");
  add_common(estimate);

  Command kernel{ app.add_subcommand("check-kernel", "verify the kernel conditions") };
  kernel.app->add_option("kernel", kernel.positional, "kernel id (wand)");
  kernel.key("beta", "smoothness exponent for the moment-tail check");
  add_common(kernel);

  Command oracle{ app.add_subcommand("oracle-compare",
                                     "compare the FFT estimate with direct quadrature") };
  oracle.app->add_option("name", oracle.positional, "figure1 | figure2");
  for (const char* k : { "lambda", "jump", "n", "h", "bandwidth_C", "bandwidth_gamma", "kernel",
                         "N", "eta", "tolerance", "radius" })
    oracle.key(k, "override the preset");
  add_common(oracle);

  Command experiment{ app.add_subcommand("experiment", "run a named experiment") };
  experiment.app
    ->add_option("preset", experiment.positional,
                 "figure1 | figure2 | mise | variance | bias | normality")
    ->required();
  for (const char* k : { "lambda", "jump", "kernel", "n", "h", "n_list", "bandwidth_C",
                         "bandwidth_gamma", "truncation_alpha", "replicates", "N", "eta",
                         "probes", "reference_n", "control_h", "ise_radius" })
    experiment.key(k, "override the preset");
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  try {
    if (*simulate.app)
      return cmd_simulate(simulate);
    if (*estimate.app)
      return cmd_estimate(estimate);
    if (*kernel.app)
      return cmd_check_kernel(kernel);
    if (*oracle.app)
      return cmd_oracle_compare(oracle);
    if (*experiment.app) {
      // keys that only make sense for one experiment family
      const std::string& p = experiment.positional;
      const bool figure = p == "figure1" || p == "figure2";
      for (const char* k : { "n", "h" })
        if (!figure && experiment.given.count(k))
          throw InvalidArgument(std::string("--") + k + " applies to figure presets only");
      for (const char* k : { "n_list", "probes", "reference_n", "control_h", "ise_radius" })
        if (figure && experiment.given.count(k))
          throw InvalidArgument("--" + Settings::flag(k) + " does not apply to " + p);
      return cmd_experiment(experiment);
    }
  } catch (const GridTooCoarseError& e) {
    std::cerr << "error: " << e.what() << "\nsuggestion: double --N and halve --eta\n";
    return exit_numerical;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const ZeroPathError& e) {
    std::cerr << "error: the empirical curve reached zero: " << e.what() << '\n';
    return exit_numerical;
  } catch (const DegenerateModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  }
  return exit_validation;
}
