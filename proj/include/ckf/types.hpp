#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckf {

// Error codes for everything the library can refuse to do. One exception
// type carries the code plus a human-readable message with context
// (frame/point indices where applicable).
enum class Errc {
  empty_mask,
  degenerate_region,
  zero_radius,
  not_star_shaped,
  out_of_bounds,
  non_positive_rate,
  bad_frame_count,
  degenerate_scaling,
  not_positive_definite,
  singular_innovation,
  too_few_frames,
  dimension_mismatch,
  both_empty,
  empty_contour,
  empty_list,
  shape_mismatch,
  bad_config,
  io_error,
  bad_format,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

struct PolarPoint {
  double r = 0.0;      // radius, >= 0
  double theta = 0.0;  // angle in [-pi, pi)
};

// 8-bit single-channel image, row-major. Zero is background, anything
// else is foreground.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Mask() = default;
  Mask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint8_t v) {
    pixels[static_cast<std::size_t>(y) * width + x] = v;
  }
  bool foreground(int x, int y) const { return at(x, y) != 0; }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t p : pixels) n += (p != 0);
    return n;
  }
};

// Closed boundary polygon as traced from a mask: ordered pixel centres,
// CCW (positive shoelace area), at least 3 points. Adjacent points are
// 8-neighbours; points may repeat where the boundary folds back on itself.
struct RawContour {
  std::vector<Point2> points;
};

// Contour resampled at n uniform polar angles theta_i = -pi + i * 2pi/n
// about `origin`. points[i] = origin + r_i * (cos theta_i, sin theta_i).
struct SampledContour {
  std::vector<Point2> points;
  Point2 origin;
};

}  // namespace ckf
