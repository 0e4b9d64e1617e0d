#pragma once

#include "ckf/types.hpp"

namespace ckf {

// Boundary of the largest 8-connected foreground component, traced with
// Moore-neighbour tracing (radial sweep). Ties between equal-sized
// components break toward the smallest (top, left) bounding-box corner.
// Result is CCW and starts at the component's topmost-leftmost pixel.
//
// Throws: empty_mask if no foreground pixel, degenerate_region if the
// component yields fewer than 3 distinct boundary pixels.
RawContour extract_boundary(const Mask& mask);

// Arithmetic mean of the contour points.
Point2 centroid(const RawContour& contour);

// Polar coordinates of p about origin; theta in [-pi, pi).
// Throws zero_radius if p coincides with origin.
PolarPoint to_polar(Point2 p, Point2 origin);

struct ResampleReport {
  int multi_valued_bins = 0;  // bins where >1 crossing radius survived
};

// Resample a closed polygon at n_samples uniform polar angles about
// `origin`, linear interpolation in r over the unwrapped angle. Bins hit
// by several edges keep the largest radius (counted in the report);
// not_star_shaped fires if more than 25% of bins are multi-valued, or if
// any bin has no crossing at all (origin not inside / winding != 1).
SampledContour resample_about(const std::vector<Point2>& points, Point2 origin,
                              int n_samples, ResampleReport* report = nullptr);

// resample_about with origin = centroid(contour).
SampledContour resample_uniform(const RawContour& contour, int n_samples,
                                ResampleReport* report = nullptr);

// Rasterise the closed polygon with even-odd scanline filling. Pixel (ix, iy)
// is inside when its centre (ix, iy) is inside the polygon; spans are
// half-open so shared edges never double-fill. Geometry outside the canvas
// is clipped; out_of_bounds fires only when every vertex is off-canvas.
Mask mask_from_contour(const SampledContour& contour, int width, int height);

}  // namespace ckf
