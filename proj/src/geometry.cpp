#include "ckf/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ckf {
namespace {

constexpr double kPi = std::numbers::pi;

// 8-neighbourhood in clockwise order (screen coordinates, y down),
// starting north.
constexpr std::array<std::array<int, 2>, 8> kMoore = {
    {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

int moore_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i)
    if (kMoore[i][0] == dx && kMoore[i][1] == dy) return i;
  return -1;
}

// Twice the signed shoelace area; positive = CCW in y-up convention.
double shoelace2(const std::vector<Point2>& pts) {
  double s = 0.0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    s += a.x * b.y - b.x * a.y;
  }
  return s;
}

}  // namespace

RawContour extract_boundary(const Mask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  if (w <= 0 || h <= 0 || mask.foreground_count() == 0)
    throw Error(Errc::empty_mask, "mask has no foreground pixels");

  // Label 8-connected components; keep the largest, ties broken by the
  // smaller (top, left) bounding-box corner.
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  int best = -1;
  std::size_t best_size = 0;
  std::pair<int, int> best_corner{0, 0};  // (min_y, min_x)
  int next_id = 0;
  std::vector<std::pair<int, int>> stack;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (!mask.foreground(sx, sy) || label[sy * static_cast<std::size_t>(w) + sx] >= 0)
        continue;
      const int id = next_id++;
      std::size_t size = 0;
      int min_x = sx, min_y = sy;
      stack.assign(1, {sx, sy});
      label[sy * static_cast<std::size_t>(w) + sx] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++size;
        min_x = std::min(min_x, cx);
        min_y = std::min(min_y, cy);
        for (const auto& d : kMoore) {
          const int nx = cx + d[0], ny = cy + d[1];
          if (!mask.in_bounds(nx, ny) || !mask.foreground(nx, ny)) continue;
          int& l = label[ny * static_cast<std::size_t>(w) + nx];
          if (l < 0) {
            l = id;
            stack.push_back({nx, ny});
          }
        }
      }
      const std::pair<int, int> corner{min_y, min_x};
      if (size > best_size || (size == best_size && corner < best_corner)) {
        best = id;
        best_size = size;
        best_corner = corner;
      }
    }
  }

  // Topmost-leftmost pixel of the winning component; its west neighbour is
  // guaranteed background, which seeds the backtrack.
  int sx = -1, sy = -1;
  for (int y = 0; y < h && sx < 0; ++y)
    for (int x = 0; x < w; ++x)
      if (label[y * static_cast<std::size_t>(w) + x] == best) {
        sx = x;
        sy = y;
        break;
      }

  auto fg = [&](int x, int y) {
    return mask.in_bounds(x, y) && label[y * static_cast<std::size_t>(w) + x] == best;
  };

  // Moore-neighbour tracing (radial sweep). State = (pixel, backtrack
  // direction); each state is visited at most once, which both terminates
  // the loop and closes the cycle without duplicating the start point.
  std::vector<Point2> pts;
  std::vector<bool> seen(static_cast<std::size_t>(w) * h * 8, false);
  int cx = sx, cy = sy;
  int bx = sx - 1, by = sy;
  for (;;) {
    const int bidx = moore_index(bx - cx, by - cy);
    const std::size_t state = (static_cast<std::size_t>(cy) * w + cx) * 8 + bidx;
    if (seen[state]) break;
    seen[state] = true;
    pts.push_back({static_cast<double>(cx), static_cast<double>(cy)});

    int found = -1;
    int px = bx, py = by;  // last background examined
    for (int step = 1; step <= 8; ++step) {
      const int idx = (bidx + step) % 8;
      const int nx = cx + kMoore[idx][0], ny = cy + kMoore[idx][1];
      if (fg(nx, ny)) {
        found = idx;
        break;
      }
      px = nx;
      py = ny;
    }
    if (found < 0) break;  // isolated single pixel
    bx = px;
    by = py;
    cx += kMoore[found][0];
    cy += kMoore[found][1];
  }

  std::set<std::pair<double, double>> distinct;
  for (const Point2& p : pts) distinct.insert({p.x, p.y});
  if (distinct.size() < 3)
    throw Error(Errc::degenerate_region,
                "component boundary has " + std::to_string(distinct.size()) +
                    " distinct pixels, need at least 3");

  if (shoelace2(pts) < 0.0) std::reverse(pts.begin() + 1, pts.end());
  return RawContour{std::move(pts)};
}

Point2 centroid(const RawContour& contour) {
  if (contour.points.empty())
    throw Error(Errc::empty_contour, "centroid of empty contour");
  double sx = 0.0, sy = 0.0;
  for (const Point2& p : contour.points) {
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(contour.points.size());
  return {sx / n, sy / n};
}

PolarPoint to_polar(Point2 p, Point2 origin) {
  const double dx = p.x - origin.x;
  const double dy = p.y - origin.y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) throw Error(Errc::zero_radius, "point coincides with origin");
  double theta = std::atan2(dy, dx);
  if (theta >= kPi) theta -= 2.0 * kPi;  // atan2 hits +pi exactly on the -x axis
  return {r, theta};
}

SampledContour resample_about(const std::vector<Point2>& points, Point2 origin,
                              int n_samples, ResampleReport* report) {
  if (n_samples < 3)
    throw Error(Errc::bad_config, "n_samples must be at least 3");
  const std::size_t m = points.size();
  if (m < 3)
    throw Error(Errc::degenerate_region, "need at least 3 points to resample");

  std::vector<double> rad(m), ang(m);
  for (std::size_t j = 0; j < m; ++j) {
    const PolarPoint pp = to_polar(points[j], origin);
    rad[j] = pp.r;
    ang[j] = pp.theta;
  }

  // Unwrap along the traversal, closing edge included; U[m] - U[0] is the
  // total winding about the origin. Negative winding means the polygon is
  // stored clockwise, so walk it backwards instead.
  auto unwrap = [&](std::vector<double>& u) {
    u.resize(m + 1);
    u[0] = ang[0];
    for (std::size_t j = 1; j <= m; ++j) {
      double d = ang[j % m] - ang[(j - 1) % m];
      while (d <= -kPi) d += 2.0 * kPi;
      while (d > kPi) d -= 2.0 * kPi;
      u[j] = u[j - 1] + d;
    }
  };
  std::vector<double> u;
  unwrap(u);
  if (u[m] < u[0]) {
    std::reverse(rad.begin(), rad.end());
    std::reverse(ang.begin(), ang.end());
    unwrap(u);
  }

  // The closing endpoint carries rounding from m unwrap steps, and the
  // targets are not an exact arithmetic progression either, so the tiling
  // can stop a few ulp short of a whole turn and drop a target sitting on
  // the seam. Snap the endpoint to the whole-turn mark and stretch the
  // final edge by a hair; a seam target claimed twice lands in one bin
  // with matching radii, which the per-bin reduction absorbs.
  const double turns = std::round((u[m] - u[0]) / (2.0 * kPi));
  if (turns != 0.0) u[m] = u[0] + 2.0 * kPi * turns + 1e-12;

  // Every target angle t = -pi + q*step (q ranging over all integers) that an
  // edge sweeps past yields one linearly interpolated crossing. Half-open
  // intervals ([A,B) forward, (B,A] backward) tile the unwrapped angle line,
  // so a vertex landing exactly on a target is claimed by exactly one edge.
  const double step = 2.0 * kPi / n_samples;
  std::vector<std::vector<double>> crossings(n_samples);
  auto target = [&](long q) { return -kPi + static_cast<double>(q) * step; };
  for (std::size_t e = 0; e < m; ++e) {
    const double a = u[e], b = u[e + 1];
    const double ra = rad[e], rb = rad[(e + 1) % m];
    if (a == b) continue;
    const bool forward = b > a;
    const double lo = forward ? a : b;
    long q = static_cast<long>(std::ceil((lo + kPi) / step));
    while (target(q - 1) >= lo) --q;  // fp guard: back up to the first target >= lo
    while (target(q) < lo) ++q;
    for (; target(q) < (forward ? b : a) || (!forward && target(q) == a); ++q) {
      const double t = target(q);
      if (forward) {
        if (t < a) continue;  // [a, b)
      } else {
        if (t <= b) continue;  // (b, a]
      }
      const double wgt = (t - a) / (b - a);
      const double rc = ra + wgt * (rb - ra);
      long bin = q % n_samples;
      if (bin < 0) bin += n_samples;
      crossings[static_cast<std::size_t>(bin)].push_back(rc);
    }
  }

  int multi = 0;
  SampledContour out;
  out.origin = origin;
  out.points.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    auto& c = crossings[static_cast<std::size_t>(i)];
    if (c.empty())
      throw Error(Errc::not_star_shaped,
                  "no boundary crossing in angular bin " + std::to_string(i) +
                      " (origin outside the contour?)");
    const auto [mn, mx] = std::minmax_element(c.begin(), c.end());
    if (*mx - *mn > 1e-6) ++multi;  // genuinely multi-valued, not fp duplicates
    const double t = -kPi + i * step;
    out.points[static_cast<std::size_t>(i)] = {origin.x + *mx * std::cos(t),
                                               origin.y + *mx * std::sin(t)};
  }
  if (4 * multi > n_samples)
    throw Error(Errc::not_star_shaped,
                std::to_string(multi) + " of " + std::to_string(n_samples) +
                    " angular bins are multi-valued");
  if (report) report->multi_valued_bins = multi;
  return out;
}

SampledContour resample_uniform(const RawContour& contour, int n_samples,
                                ResampleReport* report) {
  return resample_about(contour.points, centroid(contour), n_samples, report);
}

Mask mask_from_contour(const SampledContour& contour, int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error(Errc::bad_config, "canvas dimensions must be positive");
  const auto& pts = contour.points;
  if (pts.size() < 3)
    throw Error(Errc::degenerate_region, "polygon needs at least 3 vertices");

  bool any_inside = false;
  for (const Point2& p : pts)
    if (p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height) {
      any_inside = true;
      break;
    }
  if (!any_inside)
    throw Error(Errc::out_of_bounds, "every polygon vertex is off-canvas");

  // Even-odd scanline fill sampled at integer pixel centres. Edge crossings
  // use half-open y-spans and pixel spans are [ceil(x0), ceil(x1)) so that
  // shared edges and vertices never double-fill.
  Mask out(width, height, 0);
  std::vector<double> xs;
  const std::size_t m = pts.size();
  for (int iy = 0; iy < height; ++iy) {
    const double y = static_cast<double>(iy);
    xs.clear();
    for (std::size_t e = 0; e < m; ++e) {
      const Point2& a = pts[e];
      const Point2& b = pts[(e + 1) % m];
      if ((a.y <= y && y < b.y) || (b.y <= y && y < a.y))
        xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t t = 0; t + 1 < xs.size(); t += 2) {
      int ix0 = static_cast<int>(std::ceil(xs[t]));
      int ix1 = static_cast<int>(std::ceil(xs[t + 1])) - 1;
      ix0 = std::max(ix0, 0);
      ix1 = std::min(ix1, width - 1);
      for (int ix = ix0; ix <= ix1; ++ix) out.set(ix, iy, 255);
    }
  }
  return out;
}

}  // namespace ckf
