// Pilot runs behind the frozen gates in decomp::bands. Prints the raw
// numbers; the bands were chosen with margin around what this reports.
//
//   pilot_bands [--jobs J] [--seed S]

#include <decomp/experiments.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace decomp;

namespace {

void
figure1_ise(std::uint64_t seed, std::size_t replicates, unsigned jobs)
{
  auto cfg = figure_preset(FigurePreset::figure1);
  const FftGrid grid(cfg.grid_size, cfg.eta);
  const auto truth = [&](double x) { return cfg.model.jump().density(x); };
  const auto ises = run_replicates(replicates, jobs, [&](std::size_t r) {
    RandomStream rng = RandomStream::derive(seed, r);
    const Sample s = sample_until_n_nonzero(cfg.model, cfg.n, rng);
    const Estimate est = estimate_density(s, cfg.model.lambda(), cfg.kernel, cfg.h, grid);
    return ise(est, truth, -6.0, 6.0);
  });
  std::vector<double> sorted = ises;
  std::sort(sorted.begin(), sorted.end());
  std::printf("figure1 ISE over %zu replicates: mean %.5g median %.5g p99 %.5g max %.5g\n",
              replicates, stats::mean(ises), stats::median(ises),
              sorted[static_cast<std::size_t>(0.99 * (sorted.size() - 1))], sorted.back());
}

void
mode_counts(FigurePreset which, std::uint64_t seed, std::size_t replicates, unsigned jobs)
{
  auto cfg = figure_preset(which);
  const FftGrid grid(cfg.grid_size, cfg.eta);
  const auto counts = run_replicates(replicates, jobs, [&](std::size_t r) {
    RandomStream rng = RandomStream::derive(seed, r);
    const Sample s = sample_until_n_nonzero(cfg.model, cfg.n, rng);
    return count_significant_modes(
      estimate_density(s, cfg.model.lambda(), cfg.kernel, cfg.h, grid));
  });
  std::size_t two = 0;
  std::printf("%s significant modes:", cfg.name.c_str());
  for (auto c : counts) {
    std::printf(" %zu", c);
    two += c == 2;
  }
  std::printf("  (bimodal %zu/%zu)\n", two, replicates);
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "pilot runs for the frozen experiment gates" };
  unsigned jobs = default_jobs();
  std::uint64_t seed = 9001;
  bool figures_only = false;
  std::string only;
  app.add_option("--jobs", jobs);
  app.add_option("--seed", seed);
  app.add_flag("--figures-only", figures_only);
  app.add_option("--only", only, "run a single experiment preset");
  CLI11_PARSE(app, argc, argv);

  if (only.empty()) {
    figure1_ise(seed, 200, jobs);
    mode_counts(FigurePreset::figure1, seed, 100, jobs);
    mode_counts(FigurePreset::figure2, seed, 100, jobs);
  }
  if (figures_only)
    return 0;

  for (const std::string name : { "mise", "variance", "bias", "normality" }) {
    if (!only.empty() && name != only)
      continue;
    auto cfg = experiment_preset(name);
    cfg.base_seed = seed;
    cfg.jobs = jobs;
    const auto start = std::chrono::steady_clock::now();
    const auto rep = run_experiment(cfg, name);
    const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << rep.to_text();
    std::printf("runtime %.1f s\n\n", secs);
  }
  return 0;
}
