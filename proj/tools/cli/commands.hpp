#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgpu/data.hpp"
#include "rgpu/evaluation.hpp"
#include "rgpu/parametric.hpp"
#include "rgpu/sampler.hpp"

namespace rgpu::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInvariantError = 3 };

struct SimulateOptions {
  std::string family = "gumbel";  // a parametric family, or "mixture"
  std::optional<double> tau;
  std::optional<double> param;
  bool rotated = false;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  MixtureSimConfig mixture;
  std::filesystem::path out;
  std::filesystem::path raw_out;  // mixture only; defaults to <out stem>.raw.csv
};

struct PseudoOptions {
  std::filesystem::path in;
  std::filesystem::path out;
};

struct FitOptions {
  std::filesystem::path data;
  std::string model = "negbinc";
  bool rotated = false;
  std::int64_t iterations = 20000;
  std::int64_t burn_in = 10000;
  std::int64_t thin = 1;
  std::uint64_t seed = 1;
  double concentration = 1.0;
  std::string theta_prior;  // empty: the family default
  std::filesystem::path out;
  std::filesystem::path log;  // defaults to <out>.log
};

struct LpsOptions {
  std::filesystem::path test;
  std::vector<std::filesystem::path> draws;
  /// "[rot-]family[:param]"; a missing param is fitted by maximum likelihood on `train`.
  std::vector<std::string> parametric;
  std::filesystem::path train;
  std::filesystem::path out;  // empty: stdout
};

struct PredictOptions {
  std::filesystem::path draws;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct DensityOptions {
  std::filesystem::path draws;
  std::size_t resolution = 100;
  std::filesystem::path out;
};

SamplerConfig sampler_config(const FitOptions& opts);
ParametricCopula parse_parametric(const std::string& spec, const CopulaSample* train);

void cmd_simulate(const SimulateOptions& opts, std::ostream& log);
void cmd_pseudo(const PseudoOptions& opts, std::ostream& log);
void cmd_fit(const FitOptions& opts, std::ostream& log);
std::vector<LpsReport> cmd_lps(const LpsOptions& opts, std::ostream& out);
void cmd_predict(const PredictOptions& opts, std::ostream& log);
void cmd_density(const DensityOptions& opts, std::ostream& log);

/// Parses argv, dispatches, and maps failures to exit codes:
/// 1 usage/parameter, 2 data validation, 3 internal invariant.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rgpu::cli
