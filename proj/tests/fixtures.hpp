#pragma once

#include <decomp/inversion.hpp>
#include <decomp/model.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace decomp::testing {

inline CompoundPoissonModel
normal_model(double lambda = 0.3)
{
  return CompoundPoissonModel(lambda, JumpDensity::standard_normal());
}

inline CompoundPoissonModel
mixture_model(double lambda = 0.3)
{
  return CompoundPoissonModel(lambda, JumpDensity::bimodal_mixture());
}

//! The figure-1 sample: n = 1000 from RandomStream(seed).
inline Sample
figure1_sample(std::uint64_t seed = 1, std::size_t n = 1000)
{
  RandomStream rng(seed);
  return sample_until_n_nonzero(normal_model(), n, rng);
}

inline FftGrid
figure_grid()
{
  return FftGrid(16384, 0.01);
}

inline std::string
read_file(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

//! Runs the CLI with `args`, stdout and stderr redirected to files under
//! `dir`; returns the exit status.
inline int
run_cli(const std::string& args, const std::filesystem::path& dir, const std::string& tag = "cli")
{
  const std::string cmd = std::string("\"") + DECOMP_CLI_PATH + "\" " + args + " > \"" +
                          (dir / (tag + ".stdout")).string() + "\" 2> \"" +
                          (dir / (tag + ".stderr")).string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

//! A fresh scratch directory, removed on destruction.
class ScratchDir
{
public:
  explicit ScratchDir(const std::string& name)
    : path_(std::filesystem::temp_directory_path() /
            (name + "-" + std::to_string(::getpid())))
  {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
  std::filesystem::path path_;
};

} // namespace decomp::testing
