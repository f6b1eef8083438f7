#include "fixtures.hpp"

#include <decomp/io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace decomp;

TEST(Io, NumbersRoundTripExactly)
{
  for (double v : { 0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.14 })
    EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(std::uint64_t{ 18446744073709551615ULL }), "18446744073709551615");
}

TEST(Io, SampleRoundTrip)
{
  const Sample s = decomp::testing::figure1_sample(42, 200);
  std::stringstream ss;
  write_sample_csv(ss, s, { { "lambda", "0.3" } });
  const auto back = read_sample_csv(ss);
  EXPECT_EQ(back.sample.z, s.z);
  EXPECT_EQ(back.sample.zero_count, s.zero_count);
  EXPECT_EQ(back.sample.seed, 42u);
  EXPECT_EQ(back.metadata.at("lambda"), "0.3");
  EXPECT_EQ(back.metadata.at("n"), "200");
}

TEST(Io, SampleFormatErrors)
{
  std::istringstream bad_header("# n=1\nx\n1.0\n");
  EXPECT_THROW(read_sample_csv(bad_header), FormatError);
  std::istringstream bad_value("z\n1.0\nabc\n");
  EXPECT_THROW(read_sample_csv(bad_value), FormatError);
  std::istringstream trailing("z\n1.0x\n");
  EXPECT_THROW(read_sample_csv(trailing), FormatError);
  std::istringstream empty("# only metadata\n");
  EXPECT_THROW(read_sample_csv(empty), FormatError);
  std::istringstream negative("# zero_count=-3\nz\n1\n");
  EXPECT_THROW(read_sample_csv(negative), FormatError);
}

TEST(Io, EstimateRoundTrip)
{
  const FftGrid grid(64, 0.5);
  Estimate est{ grid, std::vector<double>(64) };
  for (std::size_t u = 0; u < 64; ++u)
    est.values[u] = std::sin(0.1 * u) / 3.0;
  est.lambda = 0.3;
  est.h = 0.14;
  est.kernel_id = "wand";
  est.seed = 9;
  est.n = 1000;
  est.truncation = 31.5;
  est.truncation_applied = true;
  std::stringstream ss;
  write_estimate_csv(ss, est, [](double x) { return x * x; });
  const auto t = read_estimate_csv(ss);
  EXPECT_EQ(t.f_hat, est.values);
  ASSERT_EQ(t.x.size(), 64u);
  for (std::size_t u = 0; u < 64; ++u) {
    EXPECT_EQ(t.x[u], grid.x(u));
    EXPECT_EQ(t.f_true[u], grid.x(u) * grid.x(u));
  }
  EXPECT_EQ(t.metadata.at("N"), "64");
  EXPECT_EQ(t.metadata.at("truncation"), "31.5");
  EXPECT_EQ(t.metadata.at("truncation_applied"), "1");
  EXPECT_EQ(t.metadata.at("zero_fallback"), "0");
  EXPECT_EQ(t.metadata.at("kernel"), "wand");
  EXPECT_EQ(std::stod(t.metadata.at("lambda")), 0.3);

  std::stringstream plain;
  est.truncation.reset();
  write_estimate_csv(plain, est);
  const auto p = read_estimate_csv(plain);
  EXPECT_TRUE(p.f_true.empty());
  EXPECT_EQ(p.metadata.at("truncation"), "off");
}

TEST(Io, EstimateFormatErrors)
{
  std::istringstream header("x,y\n1,2\n");
  EXPECT_THROW(read_estimate_csv(header), FormatError);
  std::istringstream columns("x,f_hat\n1,2,3\n");
  EXPECT_THROW(read_estimate_csv(columns), FormatError);
}

TEST(Io, ConfigParsing)
{
  std::istringstream in("# comment\nlambda = 0.3   # trailing\n\n  n=1000\nlambda = 0.5\n");
  const auto cfg = parse_config(in);
  EXPECT_EQ(cfg.size(), 2u);
  EXPECT_EQ(cfg.at("lambda"), "0.5");
  EXPECT_EQ(cfg.at("n"), "1000");
  std::istringstream no_eq("lambda 0.3\n");
  EXPECT_THROW(parse_config(no_eq), FormatError);
  std::istringstream no_key(" = 3\n");
  EXPECT_THROW(parse_config(no_key), FormatError);
}
