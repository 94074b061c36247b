#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "exokin/gh.hpp"
#include "exokin/sphere_grid.hpp"

namespace exokin {

/// Coverage map as CSV: one row per bin with its center and hit flag.
inline void write_coverage_csv(std::ostream& os, const SphereBinning& binning,
                               const CoverageResult& result) {
  os << "bin,lat_deg,lon_deg,covered\n";
  char buf[96];
  for (int b = 0; b < binning.bin_count(); ++b) {
    const auto c = binning.center(b);
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%d\n", b, c.lat_deg, c.lon_deg,
                  static_cast<int>(result.covered[static_cast<std::size_t>(b)]));
    os << buf;
  }
}

/// Equirectangular heatmap of the bin grid. Self-contained writer; the
/// plot only needs to exist and be well-formed.
inline void write_coverage_svg(std::ostream& os, const SphereBinning& binning,
                               const CoverageResult& result, const std::string& title) {
  const int w = 720, h = 360, legend = 28;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
     << (h + legend) << "\" viewBox=\"0 0 " << w << " " << (h + legend) << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << (h + legend)
     << "\" fill=\"#ffffff\"/>\n";
  char buf[256];
  for (int b = 0; b < binning.bin_count(); ++b) {
    const int band = binning.band_of(b);
    const auto [p_lo, p_hi] = binning.band_polar_range(band);
    const auto [lon_lo, lon_hi] = binning.bin_lon_range(b);
    const double y0 = p_lo / std::numbers::pi * h;
    const double y1 = p_hi / std::numbers::pi * h;
    const double x0 = lon_lo / 360.0 * w;
    const double x1 = lon_hi / 360.0 * w;
    const char* fill = result.covered[static_cast<std::size_t>(b)] ? "#2f9e77" : "#e8e8e8";
    std::snprintf(buf, sizeof(buf),
                  "  <rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\" "
                  "stroke=\"#ffffff\" stroke-width=\"0.3\"/>\n",
                  x0, y0, x1 - x0, y1 - y0, fill);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"8\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\">%s "
                "(coverage %.4f)</text>\n",
                h + 19, title.c_str(), result.fraction);
  os << buf;
  os << "</svg>\n";
}

}  // namespace exokin
