#include "rgpu/draw_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rgpu/data.hpp"
#include "rgpu/error.hpp"

namespace rgpu {
namespace {

constexpr std::string_view kMagic = "#rgpu-draws";

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, const std::string& source, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) fail(source, line, "not a number: '" + std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

DrawFileHeader parse_header(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string token;
  in >> token;
  if (token != kMagic) fail(source, 1, "missing '#rgpu-draws' header");
  DrawFileHeader h;
  bool have_model = false, have_version = false;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) fail(source, 1, "malformed header field '" + token + "'");
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    try {
      if (key == "version") {
        if (parse_number<int>(value, source, 1) != DrawFileHeader::kVersion)
          fail(source, 1, "unsupported draw file version " + value);
        have_version = true;
      } else if (key == "model") {
        h.model.family = parse_family(value);
        have_model = true;
      } else if (key == "rotated") {
        if (value != "0" && value != "1") fail(source, 1, "rotated must be 0 or 1");
        h.model.rotated = value == "1";
      } else {
        h.fields[key] = value;
      }
    } catch (const ParameterError& e) {
      fail(source, 1, e.what());
    }
  }
  if (!have_version) fail(source, 1, "header lacks version");
  if (!have_model) fail(source, 1, "header lacks model");
  return h;
}

}  // namespace

DrawFileHeader DrawFileHeader::from_config(const SamplerConfig& config) {
  DrawFileHeader h;
  h.model = config.model;
  h.fields["concentration"] = format_double(config.concentration);
  h.fields["seed"] = std::to_string(config.seed);
  h.fields["theta_prior"] = config.theta_prior.to_string();
  h.fields["iterations"] = std::to_string(config.iterations);
  h.fields["burnin"] = std::to_string(config.burn_in);
  h.fields["thin"] = std::to_string(config.thin);
  return h;
}

void write_draws(std::ostream& out, const DrawFileHeader& header, const std::vector<PosteriorDraw>& draws) {
  out << kMagic << " version=" << DrawFileHeader::kVersion << " model=" << to_string(header.model.family)
      << " rotated=" << (header.model.rotated ? 1 : 0);
  for (const auto& [k, v] : header.fields) {
    if (k.empty() || k.find_first_of("= \t\n") != std::string::npos || v.find_first_of(" \t\n") != std::string::npos)
      throw ParameterError("draw file header field '" + k + "' cannot be written");
    out << ' ' << k << '=' << v;
  }
  out << '\n';
  for (const auto& d : draws) {
    if (d.weights.size() != d.atoms.size()) throw InvariantError("draw has mismatched weights and atoms");
    out << d.iteration << ',' << format_double(d.theta);
    for (std::size_t s = 0; s < d.weights.size(); ++s)
      out << ',' << format_double(d.weights[s]) << ',' << format_double(d.atoms[s].y1) << ','
          << format_double(d.atoms[s].y2);
    out << '\n';
  }
  if (!out) throw DataError("failed writing draw file");
}

void write_draws(const std::filesystem::path& path, const DrawFileHeader& header,
                 const std::vector<PosteriorDraw>& draws) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_draws(out, header, draws);
}

DrawFile read_draws(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail(source, 1, "empty draw file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  DrawFile file;
  file.header = parse_header(line, source);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() < 2 || (fields.size() - 2) % 3 != 0)
      fail(source, lineno, "expected iteration,theta then (weight,y1,y2) triples");
    PosteriorDraw d;
    d.iteration = parse_number<std::int64_t>(fields[0], source, lineno);
    d.theta = parse_number<double>(fields[1], source, lineno);
    double total = 0.0;
    for (std::size_t k = 2; k < fields.size(); k += 3) {
      const double w = parse_number<double>(fields[k], source, lineno);
      const Atom a{parse_number<double>(fields[k + 1], source, lineno), parse_number<double>(fields[k + 2], source, lineno)};
      if (!(w > 0.0 && w <= 1.0)) fail(source, lineno, "weight outside (0, 1]");
      if (!is_interior(a.y1) || !is_interior(a.y2)) fail(source, lineno, "atom outside the open unit square");
      total += w;
      d.weights.push_back(w);
      d.atoms.push_back(a);
    }
    if (total > 1.0 + 1e-10) fail(source, lineno, "weights sum above 1");
    try {
      static_cast<void>(file.header.model.at(d.theta));
    } catch (const ParameterError& e) {
      fail(source, lineno, e.what());
    }
    file.draws.push_back(std::move(d));
  }
  return file;
}

DrawFile read_draws(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_draws(in, path.string());
}

}  // namespace rgpu
