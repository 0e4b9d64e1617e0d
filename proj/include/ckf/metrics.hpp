#pragma once

#include <string>
#include <vector>

#include "ckf/types.hpp"

namespace ckf {

// Dice overlap 2|A n M| / (|A| + |M|) over foreground pixels.
// Throws dimension_mismatch for unequal sizes, both_empty when neither mask
// has foreground.
double dice(const Mask& a, const Mask& m);

// Symmetric Hausdorff distance between two point sets, scaled by
// pixel_spacing_mm. Brute force over all pairs; this is the implementation,
// not an approximation. Throws empty_contour if either set is empty.
double hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& m,
                 double pixel_spacing_mm);

// Fraction of dice_values strictly above threshold. Throws empty_list.
double reliability(const std::vector<double>& dice_values, double threshold);

struct FrameMetrics {
  int frame = 0;
  double dice = 0.0;
  double hausdorff_mm = 0.0;
};

// CSV "frame,dice,hausdorff_mm", one row per frame, LF endings, %.17g floats.
void write_metrics_csv(const std::string& path,
                       const std::vector<FrameMetrics>& rows);

// CSV "threshold,reliability" on the grid 0.00..1.00 step 0.01.
void write_reliability_csv(const std::string& path,
                           const std::vector<double>& dice_values);

}  // namespace ckf
