#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "rgpu/sample.hpp"

namespace rgpu::test {

/// Two-sided one-sample Kolmogorov-Smirnov statistic against Uniform(0, 1).
inline double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - xs[i]);
    d = std::max(d, xs[i] - static_cast<double>(i) / n);
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline std::vector<double> column(const CopulaSample& s, int k) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& p : s.rows) out.push_back(k == 0 ? p.u : p.v);
  return out;
}

inline double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Standard error of the mean from non-overlapping batch means (autocorrelated chains).
inline double batch_means_se(const std::vector<double>& xs, std::size_t batches = 50) {
  const std::size_t len = xs.size() / batches;
  std::vector<double> bm;
  for (std::size_t b = 0; b < batches; ++b)
    bm.push_back(std::accumulate(xs.begin() + static_cast<std::ptrdiff_t>(b * len),
                                 xs.begin() + static_cast<std::ptrdiff_t>((b + 1) * len), 0.0) /
                 static_cast<double>(len));
  const double m = mean(bm);
  double ss = 0.0;
  for (double x : bm) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("rgpu_" + tag + "_" + std::to_string(std::rand()) + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace rgpu::test
