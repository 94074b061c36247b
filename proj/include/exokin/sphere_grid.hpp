#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace exokin {

/// Near-equal-area partition of the unit sphere: latitude bands of equal
/// polar height, each band split into azimuthal sectors proportional to
/// its area. Every bin has area within a few percent of 4*pi/target, so
/// the partition carries no pole bias.
class SphereBinning {
 public:
  explicit SphereBinning(int target_bins) {
    if (target_bins < 4) throw std::invalid_argument("SphereBinning: need >= 4 bins");
    const double ideal_area = 4.0 * std::numbers::pi / target_bins;
    const int n_bands =
        std::max(3, static_cast<int>(std::lround(std::numbers::pi / std::sqrt(ideal_area))));
    band_edges_.resize(n_bands + 1);
    for (int b = 0; b <= n_bands; ++b) {
      band_edges_[b] = std::numbers::pi * b / n_bands;
    }
    sectors_.resize(n_bands);
    offsets_.resize(n_bands + 1, 0);
    for (int b = 0; b < n_bands; ++b) {
      const double area =
          2.0 * std::numbers::pi * (std::cos(band_edges_[b]) - std::cos(band_edges_[b + 1]));
      sectors_[b] = std::max(1, static_cast<int>(std::lround(area / ideal_area)));
      offsets_[b + 1] = offsets_[b] + sectors_[b];
    }
  }

  int bin_count() const { return offsets_.back(); }
  int band_count() const { return static_cast<int>(sectors_.size()); }
  int sectors_in_band(int band) const { return sectors_[band]; }

  /// Polar-angle interval [lo, hi) of a band, radians from +z.
  std::pair<double, double> band_polar_range(int band) const {
    return {band_edges_[band], band_edges_[band + 1]};
  }

  int bin_index(const Eigen::Vector3d& unit_dir) const {
    const double polar = std::acos(std::clamp(unit_dir.z(), -1.0, 1.0));
    int band = static_cast<int>(polar / std::numbers::pi * band_count());
    band = std::clamp(band, 0, band_count() - 1);
    double az = std::atan2(unit_dir.y(), unit_dir.x());
    if (az < 0) az += 2.0 * std::numbers::pi;
    int sector = static_cast<int>(az / (2.0 * std::numbers::pi) * sectors_[band]);
    sector = std::clamp(sector, 0, sectors_[band] - 1);
    return offsets_[band] + sector;
  }

  struct BinCenter {
    double lat_deg;  // geodetic latitude, +90 at +z
    double lon_deg;  // [0, 360)
  };

  BinCenter center(int bin) const {
    int band = 0;
    while (band + 1 < static_cast<int>(offsets_.size()) && offsets_[band + 1] <= bin) ++band;
    const int sector = bin - offsets_[band];
    const double polar = 0.5 * (band_edges_[band] + band_edges_[band + 1]);
    const double lon = (sector + 0.5) / sectors_[band] * 360.0;
    return BinCenter{90.0 - polar * 180.0 / std::numbers::pi, lon};
  }

  /// Azimuth interval [lo, hi) in degrees of a bin's sector.
  std::pair<double, double> bin_lon_range(int bin) const {
    int band = 0;
    while (band + 1 < static_cast<int>(offsets_.size()) && offsets_[band + 1] <= bin) ++band;
    const int sector = bin - offsets_[band];
    const double w = 360.0 / sectors_[band];
    return {sector * w, (sector + 1) * w};
  }

  int band_of(int bin) const {
    int band = 0;
    while (band + 1 < static_cast<int>(offsets_.size()) && offsets_[band + 1] <= bin) ++band;
    return band;
  }

 private:
  std::vector<double> band_edges_;
  std::vector<int> sectors_;
  std::vector<int> offsets_;
};

}  // namespace exokin
