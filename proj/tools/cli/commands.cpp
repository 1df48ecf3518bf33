#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "rgpu/data.hpp"
#include "rgpu/draw_file.hpp"
#include "rgpu/error.hpp"

namespace rgpu::cli {
namespace {

std::filesystem::path with_suffix(const std::filesystem::path& p, const std::string& suffix) {
  return p.string() + suffix;
}

void require_path(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw ParameterError(std::string(flag) + " is required");
}

template <typename Write>
void write_file(const std::filesystem::path& path, Write&& write) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot open '" + path.string() + "' for writing");
  write(f);
  if (!f) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace

SamplerConfig sampler_config(const FitOptions& opts) {
  const ModelSpec model{parse_family(opts.model), opts.rotated};
  SamplerConfig cfg = SamplerConfig::defaults_for(model);
  if (!opts.theta_prior.empty()) cfg.theta_prior = ThetaPrior::parse(opts.theta_prior);
  cfg.iterations = opts.iterations;
  cfg.burn_in = opts.burn_in;
  cfg.thin = opts.thin;
  cfg.seed = opts.seed;
  cfg.concentration = opts.concentration;
  cfg.validate();
  return cfg;
}

ParametricCopula parse_parametric(const std::string& spec, const CopulaSample* train) {
  std::string_view rest = spec;
  bool rotated = false;
  if (rest.starts_with("rot-")) {
    rotated = true;
    rest.remove_prefix(4);
  }
  const auto colon = rest.find(':');
  const CopulaFamily family = parse_copula_family(rest.substr(0, colon));
  if (colon != std::string_view::npos) {
    const std::string value(rest.substr(colon + 1));
    std::size_t used = 0;
    double param = 0.0;
    try {
      param = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ParameterError("bad parameter in '" + spec + "'");
    return ParametricCopula::make(family, param, rotated);
  }
  if (train == nullptr) throw ParameterError("'" + spec + "' has no parameter; pass --train to fit it");
  return fit_mle(family, *train, rotated).copula;
}

void cmd_simulate(const SimulateOptions& opts, std::ostream& log) {
  require_path(opts.out, "--out");
  if (opts.n < 1) throw ParameterError("--n must be >= 1");
  Rng rng(opts.seed);
  if (opts.family == "mixture") {
    const MixtureSample s = simulate_mixture(opts.mixture, opts.n, rng);
    const auto raw_path = opts.raw_out.empty()
                              ? opts.out.parent_path() / (opts.out.stem().string() + ".raw.csv")
                              : opts.raw_out;
    write_sample(opts.out, s.copula);
    write_raw(raw_path, s.raw);
    log << "wrote " << opts.n << " mixture rows to " << opts.out.string() << " and " << raw_path.string() << '\n';
    return;
  }
  const CopulaFamily family = parse_copula_family(opts.family);
  if (opts.tau.has_value() == opts.param.has_value()) throw ParameterError("give exactly one of --tau and --param");
  const double param = opts.tau ? tau_to_param(family, *opts.tau) : *opts.param;
  const auto copula = ParametricCopula::make(family, param, opts.rotated);
  write_sample(opts.out, sample(copula, opts.n, rng));
  log << "wrote " << opts.n << " rows of " << copula.label() << " to " << opts.out.string() << '\n';
}

void cmd_pseudo(const PseudoOptions& opts, std::ostream& log) {
  require_path(opts.in, "--in");
  require_path(opts.out, "--out");
  const RawSample raw = read_raw(opts.in);
  write_sample(opts.out, pseudo_observations(raw));
  log << "wrote " << raw.size() << " pseudo-observations to " << opts.out.string() << '\n';
}

void cmd_fit(const FitOptions& opts, std::ostream& log) {
  require_path(opts.data, "--data");
  require_path(opts.out, "--out");
  const SamplerConfig cfg = sampler_config(opts);
  const CopulaSample data = read_sample(opts.data);

  const auto start = std::chrono::steady_clock::now();
  const ChainResult result = run_chain(data, cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const DrawFileHeader header = DrawFileHeader::from_config(cfg);
  write_draws(opts.out, header, result.draws);

  const auto& d = result.diagnostics;
  const double mean_occupied =
      d.occupied_trace.empty() ? 0.0
                               : static_cast<double>(std::accumulate(d.occupied_trace.begin(), d.occupied_trace.end(),
                                                                     std::size_t{0})) /
                                     static_cast<double>(d.occupied_trace.size());
  double mean_theta = 0.0;
  for (const auto& draw : result.draws) mean_theta += draw.theta;
  if (!result.draws.empty()) mean_theta /= static_cast<double>(result.draws.size());

  std::ostringstream summary;
  summary << "data=" << opts.data.string() << '\n'
          << "n=" << data.size() << '\n'
          << "model=" << to_string(cfg.model.family) << '\n'
          << "rotated=" << (cfg.model.rotated ? 1 : 0) << '\n';
  for (const auto& [k, v] : header.fields) summary << k << '=' << v << '\n';
  summary << "draws=" << result.draws.size() << '\n'
          << "wall_time_s=" << seconds << '\n'
          << "atom_acceptance=" << d.atom_acceptance << '\n'
          << "theta_acceptance=" << d.theta_acceptance << '\n'
          << "atom_log_scale=" << d.final_atom_log_scale << '\n'
          << "theta_log_scale=" << d.final_theta_log_scale << '\n'
          << "final_occupied=" << d.final_occupied << '\n'
          << "final_components=" << d.final_components << '\n'
          << "max_components=" << d.max_components << '\n'
          << "mean_occupied=" << mean_occupied << '\n'
          << "mean_theta=" << mean_theta << '\n';
  const auto log_path = opts.log.empty() ? with_suffix(opts.out, ".log") : opts.log;
  write_file(log_path, [&](std::ostream& f) { f << summary.str(); });
  log << summary.str();
}

std::vector<LpsReport> cmd_lps(const LpsOptions& opts, std::ostream& out) {
  require_path(opts.test, "--test");
  if (opts.draws.empty() && opts.parametric.empty()) throw ParameterError("give at least one --draws or --parametric");
  const CopulaSample test = read_sample(opts.test);
  std::optional<CopulaSample> train;
  if (!opts.train.empty()) train = read_sample(opts.train);

  std::vector<LpsReport> reports;
  for (const auto& path : opts.draws) {
    const DrawFile file = read_draws(path);
    std::string label = std::string(to_string(file.header.model.family)) + (file.header.model.rotated ? "-rotated" : "");
    reports.push_back(lps(file.draws, file.header.model, test, label + ":" + path.filename().string()));
  }
  for (const auto& spec : opts.parametric) {
    const ParametricCopula c = parse_parametric(spec, train ? &*train : nullptr);
    reports.push_back(lps_parametric(c, test));
  }
  if (opts.out.empty()) {
    write_lps_reports(out, reports);
  } else {
    write_file(opts.out, [&](std::ostream& f) { write_lps_reports(f, reports); });
  }
  return reports;
}

void cmd_predict(const PredictOptions& opts, std::ostream& log) {
  require_path(opts.draws, "--draws");
  require_path(opts.out, "--out");
  const DrawFile file = read_draws(opts.draws);
  Rng rng(opts.seed);
  write_sample(opts.out, predictive_sample(file.draws, file.header.model, opts.n, rng));
  log << "wrote " << opts.n << " predictive points to " << opts.out.string() << '\n';
}

void cmd_density(const DensityOptions& opts, std::ostream& log) {
  require_path(opts.draws, "--draws");
  require_path(opts.out, "--out");
  const DrawFile file = read_draws(opts.draws);
  const DensityGrid grid = density_grid(file.draws, file.header.model, opts.resolution);
  write_file(opts.out, [&](std::ostream& f) { write_density_grid(f, grid); });
  log << "wrote " << opts.resolution << "x" << opts.resolution << " density grid to " << opts.out.string() << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random generalised-partition-of-unity copulas"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a copula sample");
  simulate->add_option("--family", sim.family, "frank|gumbel|clayton|joe|gaussian|mixture")->capture_default_str();
  simulate->add_option("--tau", sim.tau, "Kendall's tau (parametric families)");
  simulate->add_option("--param", sim.param, "Copula parameter (instead of --tau)");
  simulate->add_flag("--rotated", sim.rotated, "Rotate by 180 degrees");
  simulate->add_option("--n", sim.n, "Sample size")->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--weight", sim.mixture.weight, "Mixture: Clayton component weight")->capture_default_str();
  simulate->add_option("--clayton", sim.mixture.clayton, "Mixture: Clayton parameter")->capture_default_str();
  simulate->add_option("--correlation", sim.mixture.correlation, "Mixture: Gaussian correlation")->capture_default_str();
  simulate->add_option("--means", sim.mixture.means, "Mixture: mu11 mu12 mu21 mu22")->expected(4);
  simulate->add_option("--sds", sim.mixture.sds, "Mixture: s11 s12 s21 s22")->expected(4);
  simulate->add_option("--out", sim.out)->required();
  simulate->add_option("--raw-out", sim.raw_out, "Mixture: raw-scale companion CSV");

  PseudoOptions ps;
  auto* pseudo = app.add_subcommand("pseudo", "Rank-transform a raw two-column CSV");
  pseudo->add_option("--in", ps.in)->required();
  pseudo->add_option("--out", ps.out)->required();

  FitOptions fo;
  auto* fit = app.add_subcommand("fit", "Run the slice sampler and write posterior draws");
  fit->add_option("--data", fo.data)->required();
  fit->add_option("--model", fo.model, "negbinc|bernsteincbp")->capture_default_str();
  fit->add_flag("--rotated", fo.rotated, "Rotated kernels (lower-tail dependence)");
  fit->add_option("--iterations", fo.iterations)->capture_default_str();
  fit->add_option("--burnin", fo.burn_in)->capture_default_str();
  fit->add_option("--thin", fo.thin)->capture_default_str();
  fit->add_option("--seed", fo.seed)->capture_default_str();
  fit->add_option("--concentration", fo.concentration, "Dirichlet process M")->capture_default_str();
  fit->add_option("--theta-prior", fo.theta_prior, "gamma:a,b | geometric:q | uniform:lo,hi");
  fit->add_option("--out", fo.out, "Draw file")->required();
  fit->add_option("--log", fo.log, "Run log (default <out>.log)");

  LpsOptions lo;
  auto* lps_cmd = app.add_subcommand("lps", "Log-predictive scores on a test set");
  lps_cmd->add_option("--test", lo.test)->required();
  lps_cmd->add_option("--draws", lo.draws, "Draw files")->take_all();
  lps_cmd->add_option("--parametric", lo.parametric, "[rot-]family[:param]")->take_all();
  lps_cmd->add_option("--train", lo.train, "Training sample for parametric MLE");
  lps_cmd->add_option("--out", lo.out, "Report CSV (default stdout)");

  PredictOptions po;
  auto* predict = app.add_subcommand("predict", "Sample the posterior predictive");
  predict->add_option("--draws", po.draws)->required();
  predict->add_option("--n", po.n)->capture_default_str();
  predict->add_option("--seed", po.seed)->capture_default_str();
  predict->add_option("--out", po.out)->required();

  DensityOptions dopt;
  auto* density = app.add_subcommand("density", "Posterior-mean density on a grid");
  density->add_option("--draws", dopt.draws)->required();
  density->add_option("--resolution", dopt.resolution)->capture_default_str();
  density->add_option("--out", dopt.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (simulate->parsed()) cmd_simulate(sim, out);
    else if (pseudo->parsed()) cmd_pseudo(ps, out);
    else if (fit->parsed()) cmd_fit(fo, out);
    else if (lps_cmd->parsed()) cmd_lps(lo, out);
    else if (predict->parsed()) cmd_predict(po, out);
    else if (density->parsed()) cmd_density(dopt, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantError;
  }
  return kOk;
}

}  // namespace rgpu::cli
