#include "rgpu/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rgpu/error.hpp"
#include "rgpu/parametric.hpp"
#include "rgpu/partition.hpp"

namespace rgpu {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

// Splits "a,b" into exactly two fields.
bool split_pair(std::string_view line, std::string_view& a, std::string_view& b) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) return false;
  a = line.substr(0, comma);
  b = line.substr(comma + 1);
  return true;
}

std::string where(const std::string& source, std::size_t line) { return source + ":" + std::to_string(line) + ": "; }

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
    i = j + 1;
  }
  return rank;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void CopulaSample::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Point& p = rows[i];
    if (!std::isfinite(p.u) || !std::isfinite(p.v) || !is_interior(p.u) || !is_interior(p.v))
      throw DataError("row " + std::to_string(i + 1) + ": copula values must lie strictly inside (0, 1)");
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CopulaSample pseudo_observations(const RawSample& raw) {
  const std::size_t n = raw.size();
  if (n < 2) throw DataError("pseudo-observations need at least two rows");
  CopulaSample out;
  out.rows.resize(n);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = raw.rows[i][k];
      if (!std::isfinite(col[i])) throw DataError("row " + std::to_string(i + 1) + ": non-finite value");
    }
    if (std::all_of(col.begin(), col.end(), [&](double x) { return x == col.front(); }))
      throw DataError("column '" + raw.names[k] + "' is constant; ranks are undefined");
    const auto r = average_ranks(col);
    for (std::size_t i = 0; i < n; ++i) (k == 0 ? out.rows[i].u : out.rows[i].v) = r[i] / static_cast<double>(n + 1);
  }
  return out;
}

void MixtureSimConfig::validate() const {
  if (!(weight >= 0.0 && weight <= 1.0)) throw ParameterError("mixture weight must lie in [0, 1]");
  if (!(clayton > 0.0) || !std::isfinite(clayton)) throw ParameterError("clayton parameter must be positive");
  if (!(correlation > -1.0 && correlation < 1.0)) throw ParameterError("gaussian correlation must be in (-1, 1)");
  for (double s : sds)
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("mixture standard deviations must be positive");
  for (double m : means)
    if (!std::isfinite(m)) throw ParameterError("mixture means must be finite");
}

double MixtureSimConfig::marginal_cdf(int k, double x) const {
  const double first = normal_cdf((x - means[k]) / sds[k]);
  const double second = normal_cdf((x - means[2 + k]) / sds[2 + k]);
  return weight * first + (1.0 - weight) * second;
}

MixtureSample simulate_mixture(const MixtureSimConfig& config, std::size_t n, Rng& rng) {
  config.validate();
  if (n < 1) throw ParameterError("sample size must be >= 1");
  const ParametricCopula clayton{CopulaFamily::Clayton, config.clayton, false};
  const double rho = config.correlation;
  MixtureSample out;
  out.raw.rows.reserve(n);
  out.copula.rows.reserve(n);
  while (out.copula.size() < n) {
    double x1 = 0.0, x2 = 0.0;
    if (rng.uniform() < config.weight) {
      const Point p = sample_point(clayton, rng);
      x1 = config.means[0] + config.sds[0] * normal_quantile(p.u);
      x2 = config.means[1] + config.sds[1] * normal_quantile(p.v);
    } else {
      const double z1 = rng.normal();
      const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * rng.normal();
      x1 = config.means[2] + config.sds[2] * z1;
      x2 = config.means[3] + config.sds[3] * z2;
    }
    const Point c{config.marginal_cdf(0, x1), config.marginal_cdf(1, x2)};
    // A draw beyond ~8 sd rounds the CDF to 1; redraw rather than clamp.
    if (!is_interior(c.u) || !is_interior(c.v)) continue;
    out.raw.rows.push_back({x1, x2});
    out.copula.rows.push_back(c);
  }
  return out;
}

void write_sample(std::ostream& out, const CopulaSample& data) {
  out << "u,v\n";
  for (const Point& p : data.rows) out << format_double(p.u) << ',' << format_double(p.v) << '\n';
  if (!out) throw DataError("write failed");
}

void write_sample(const std::filesystem::path& path, const CopulaSample& data) {
  auto out = open_out(path);
  write_sample(out, data);
}

CopulaSample read_sample(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file, expected header 'u,v'");
  std::string_view a, b;
  if (!split_pair(line, a, b) || trim(a) != "u" || trim(b) != "v")
    throw DataError(where(source, 1) + "expected header 'u,v', found '" + std::string(trim(line)) + "'");
  CopulaSample out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Point p;
    if (!split_pair(line, a, b) || !parse_double(a, p.u) || !parse_double(b, p.v))
      throw DataError(where(source, lineno) + "malformed row '" + std::string(trim(line)) + "'");
    if (!is_interior(p.u) || !is_interior(p.v))
      throw DataError(where(source, lineno) + "values must lie strictly inside (0, 1)");
    out.rows.push_back(p);
  }
  return out;
}

CopulaSample read_sample(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_sample(in, path.string());
}

void write_raw(std::ostream& out, const RawSample& raw) {
  out << raw.names[0] << ',' << raw.names[1] << '\n';
  for (const auto& r : raw.rows) out << format_double(r[0]) << ',' << format_double(r[1]) << '\n';
  if (!out) throw DataError("write failed");
}

void write_raw(const std::filesystem::path& path, const RawSample& raw) {
  auto out = open_out(path);
  write_raw(out, raw);
}

RawSample read_raw(std::istream& in, const std::string& source) {
  RawSample raw;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::string_view a, b;
    if (!split_pair(line, a, b)) throw DataError(where(source, lineno) + "expected two comma-separated columns");
    std::array<double, 2> row{};
    const bool numeric = parse_double(a, row[0]) && parse_double(b, row[1]);
    if (!numeric) {
      if (!first) throw DataError(where(source, lineno) + "malformed row '" + std::string(trim(line)) + "'");
      raw.names = {std::string(trim(a)), std::string(trim(b))};
    } else {
      raw.rows.push_back(row);
    }
    first = false;
  }
  return raw;
}

RawSample read_raw(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_raw(in, path.string());
}

std::pair<CopulaSample, CopulaSample> split(const CopulaSample& data, std::size_t n_train) {
  if (n_train < 1 || n_train >= data.size())
    throw ParameterError("split needs 1 <= n_train < n (n = " + std::to_string(data.size()) + ")");
  CopulaSample train, test;
  train.rows.assign(data.rows.begin(), data.rows.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.rows.assign(data.rows.begin() + static_cast<std::ptrdiff_t>(n_train), data.rows.end());
  return {std::move(train), std::move(test)};
}

}  // namespace rgpu
