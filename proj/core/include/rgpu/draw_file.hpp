#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rgpu/draw.hpp"
#include "rgpu/partition.hpp"
#include "rgpu/sampler.hpp"

namespace rgpu {

/// First line of a draw file:
///   #rgpu-draws version=1 model=negbinomial rotated=0 concentration=1 seed=7 ...
/// followed by one line per draw: iteration,theta,ρ1,y11,y12,ρ2,y21,y22,...
struct DrawFileHeader {
  static constexpr int kVersion = 1;

  ModelSpec model;
  /// Remaining key=value pairs (concentration, seed, prior, chain lengths), kept verbatim.
  std::map<std::string, std::string> fields;

  static DrawFileHeader from_config(const SamplerConfig& config);
};

struct DrawFile {
  DrawFileHeader header;
  std::vector<PosteriorDraw> draws;
};

void write_draws(std::ostream& out, const DrawFileHeader& header, const std::vector<PosteriorDraw>& draws);
void write_draws(const std::filesystem::path& path, const DrawFileHeader& header,
                 const std::vector<PosteriorDraw>& draws);
DrawFile read_draws(std::istream& in, const std::string& source = "<stream>");
DrawFile read_draws(const std::filesystem::path& path);

}  // namespace rgpu
