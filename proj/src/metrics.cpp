#include "ckf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "ckf/contour_io.hpp"

namespace ckf {

double dice(const Mask& a, const Mask& m) {
  if (a.width != m.width || a.height != m.height)
    throw Error(Errc::dimension_mismatch,
                "mask sizes " + std::to_string(a.width) + "x" +
                    std::to_string(a.height) + " vs " + std::to_string(m.width) +
                    "x" + std::to_string(m.height));
  std::size_t inter = 0, na = 0, nm = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const bool fa = a.pixels[i] != 0;
    const bool fm = m.pixels[i] != 0;
    na += fa;
    nm += fm;
    inter += (fa && fm);
  }
  if (na + nm == 0)
    throw Error(Errc::both_empty, "both masks are empty, Dice undefined");
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nm);
}

double hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& m,
                 double pixel_spacing_mm) {
  if (a.empty() || m.empty())
    throw Error(Errc::empty_contour, "hausdorff needs two non-empty point sets");
  auto directed_sq = [](const std::vector<Point2>& p, const std::vector<Point2>& q) {
    double worst = 0.0;
    for (const Point2& pp : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& qq : q) {
        const double dx = pp.x - qq.x;
        const double dy = pp.y - qq.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
      }
      if (best > worst) worst = best;
    }
    return worst;
  };
  const double d2 = std::max(directed_sq(a, m), directed_sq(m, a));
  return std::sqrt(d2) * pixel_spacing_mm;
}

double reliability(const std::vector<double>& dice_values, double threshold) {
  if (dice_values.empty())
    throw Error(Errc::empty_list, "reliability of an empty dice list");
  std::size_t above = 0;
  for (double v : dice_values) above += (v > threshold);
  return static_cast<double>(above) / static_cast<double>(dice_values.size());
}

void write_metrics_csv(const std::string& path,
                       const std::vector<FrameMetrics>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "frame,dice,hausdorff_mm\n";
  for (const FrameMetrics& r : rows)
    out << r.frame << ',' << format_double(r.dice) << ','
        << format_double(r.hausdorff_mm) << '\n';
}

void write_reliability_csv(const std::string& path,
                           const std::vector<double>& dice_values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "threshold,reliability\n";
  for (int i = 0; i <= 100; ++i) {
    const double d = static_cast<double>(i) / 100.0;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", d);
    out << buf << ',' << format_double(reliability(dice_values, d)) << '\n';
  }
}

}  // namespace ckf
