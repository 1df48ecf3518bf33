#pragma once

#include <cstdint>
#include <vector>

namespace rgpu {

/// Latent location (y1, y2) of one stick-breaking component, strictly inside the unit square.
struct Atom {
  double y1 = 0.5;
  double y2 = 0.5;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// One retained posterior draw: smoothing parameter, truncated stick weights, atoms.
struct PosteriorDraw {
  double theta = 1.0;
  std::vector<double> weights;
  std::vector<Atom> atoms;
  std::int64_t iteration = 0;

  friend bool operator==(const PosteriorDraw&, const PosteriorDraw&) = default;
};

}  // namespace rgpu
