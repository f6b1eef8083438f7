#pragma once

#include "errors.hpp"
#include "inversion.hpp"
#include "model.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace decomp {

//! Ordered `# key=value` lines that precede a CSV header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

//! %.17g, so a value survives a text round trip bit for bit.
inline std::string
format_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string
format_number(std::uint64_t v)
{
  return std::to_string(v);
}

class FormatError : public Error
{
public:
  using Error::Error;
};

namespace detail {

inline std::string
trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline void
write_metadata(std::ostream& os, const Metadata& meta)
{
  for (const auto& [key, value] : meta)
    os << "# " << key << '=' << value << '\n';
}

inline double
parse_double(const std::string& text, const std::string& context)
{
  // strtod rather than stod: subnormal values (far density tails) are valid
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end == text.c_str())
    throw FormatError("not a number in " + context + ": '" + text + "'");
  if (*end != '\0')
    throw FormatError("trailing characters in " + context + ": '" + text + "'");
  return v;
}

inline std::uint64_t
parse_unsigned(const std::string& text, const std::string& context)
{
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() == '-')
      throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw FormatError("not a nonnegative integer in " + context + ": '" + text + "'");
  }
  if (used != text.size())
    throw FormatError("trailing characters in " + context + ": '" + text + "'");
  return v;
}

//! Reads `# key=value` lines, then the header; returns the header.
inline std::string
read_preamble(std::istream& is, std::map<std::string, std::string>& meta)
{
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() != '#')
      return line;
    const auto body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq != std::string::npos)
      meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  throw FormatError("missing CSV header");
}

} // namespace detail

//! Sample CSV: metadata (zero_count, seed, n, extra), header `z`, one value
//! per line.
inline void
write_sample_csv(std::ostream& os, const Sample& sample, const Metadata& extra = {})
{
  Metadata meta{ { "n", format_number(std::uint64_t{ sample.size() }) },
                 { "zero_count", format_number(sample.zero_count) },
                 { "seed", format_number(sample.seed) } };
  meta.insert(meta.end(), extra.begin(), extra.end());
  detail::write_metadata(os, meta);
  os << "z\n";
  for (double v : sample.z)
    os << format_number(v) << '\n';
}

struct SampleFile
{
  Sample sample;
  std::map<std::string, std::string> metadata;
};

inline SampleFile
read_sample_csv(std::istream& is)
{
  SampleFile out;
  const auto header = detail::read_preamble(is, out.metadata);
  if (header != "z")
    throw FormatError("sample CSV header must be 'z', got '" + header + "'");
  std::string line;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    line = detail::trim(line);
    if (line.empty())
      continue;
    out.sample.z.push_back(detail::parse_double(line, "sample row " + std::to_string(row)));
  }
  if (auto it = out.metadata.find("zero_count"); it != out.metadata.end())
    out.sample.zero_count = detail::parse_unsigned(it->second, "zero_count");
  if (auto it = out.metadata.find("seed"); it != out.metadata.end())
    out.sample.seed = detail::parse_unsigned(it->second, "seed");
  return out;
}

//! The metadata every estimate file carries.
inline Metadata
estimate_metadata(const Estimate& est)
{
  return {
    { "lambda", format_number(est.lambda) },
    { "h", format_number(est.h) },
    { "N", format_number(std::uint64_t{ est.grid.size() }) },
    { "eta", format_number(est.grid.eta()) },
    { "seed", format_number(est.seed) },
    { "kernel", est.kernel_id },
    { "truncation", est.truncation ? format_number(*est.truncation) : "off" },
    { "truncation_applied", est.truncation_applied ? "1" : "0" },
    { "zero_fallback", est.zero_fallback ? "1" : "0" },
    { "n", format_number(std::uint64_t{ est.n }) },
  };
}

//! Estimate CSV: header `x,f_hat`, plus `f_true` when `truth` is given.
inline void
write_estimate_csv(std::ostream& os,
                   const Estimate& est,
                   const std::function<double(double)>& truth = {},
                   const Metadata& extra = {})
{
  auto meta = estimate_metadata(est);
  meta.insert(meta.end(), extra.begin(), extra.end());
  detail::write_metadata(os, meta);
  os << (truth ? "x,f_hat,f_true\n" : "x,f_hat\n");
  for (std::size_t u = 0; u < est.size(); ++u) {
    const double x = est.x(u);
    os << format_number(x) << ',' << format_number(est.values[u]);
    if (truth)
      os << ',' << format_number(truth(x));
    os << '\n';
  }
}

struct EstimateTable
{
  std::map<std::string, std::string> metadata;
  std::vector<double> x;
  std::vector<double> f_hat;
  std::vector<double> f_true;
};

inline EstimateTable
read_estimate_csv(std::istream& is)
{
  EstimateTable out;
  const auto header = detail::read_preamble(is, out.metadata);
  bool with_truth = false;
  if (header == "x,f_hat,f_true")
    with_truth = true;
  else if (header != "x,f_hat")
    throw FormatError("unexpected estimate CSV header '" + header + "'");
  std::string line;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    line = detail::trim(line);
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (cells.size() != (with_truth ? 3u : 2u))
      throw FormatError("wrong column count in estimate row " + std::to_string(row));
    const std::string ctx = "estimate row " + std::to_string(row);
    out.x.push_back(detail::parse_double(cells[0], ctx));
    out.f_hat.push_back(detail::parse_double(cells[1], ctx));
    if (with_truth)
      out.f_true.push_back(detail::parse_double(cells[2], ctx));
  }
  return out;
}

//! Flat `key = value` config text. `#` starts a comment; later keys win.
inline std::map<std::string, std::string>
parse_config(std::istream& is)
{
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(row) + " is not 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty())
      throw FormatError("config line " + std::to_string(row) + " has an empty key");
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

} // namespace decomp
