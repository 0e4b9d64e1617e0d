#pragma once

#include <cstdint>
#include <vector>

#include "ckf/types.hpp"

namespace ckf {

// Harmonic contour generator: point i sits at angle theta_i = -pi + i*2pi/N
// around the canvas centre with radius base + amplitude*sin(omega*t + phase_i),
// sampled at t = k*dt over one cycle.
struct SynthConfig {
  int n_points = 60;
  int n_frames = 25;
  double heart_rate_bpm = 60.0;
  double base_radius_px = 30.0;
  double amplitude_px = 5.0;
  std::vector<double> phase_offsets;  // size n_points, or empty for all-zero
  double gaussian_sigma_px = 1.0;
  std::vector<int> outlier_frames = {8, 16};
  double outlier_magnitude_px = 8.0;
  std::uint64_t seed = 1;
  int canvas_width = 128;
  int canvas_height = 128;
};

struct SynthData {
  std::vector<std::vector<Point2>> truth;  // [point][frame]
  std::vector<std::vector<Point2>> noisy;  // same shape
  std::vector<Mask> masks;                 // truth rasterised per frame
};

// Noise-free position of point i at frame k. Valid for any k >= 0; frames
// k and k + n_frames coincide exactly (one cycle spans n_frames steps).
Point2 truth_point(const SynthConfig& cfg, int point_index, int frame_index);

// Deterministic in cfg.seed: same seed, same bytes. Gaussian displacements
// are drawn point-major ((dx, dy) per frame), then outlier frames get an
// extra radial outward push of outlier_magnitude_px on every point.
SynthData generate(const SynthConfig& cfg);

struct ScoreSummary {
  double rmse_filtered = 0.0;  // sqrt(mean squared 2D error) vs truth
  double rmse_noisy = 0.0;
  std::vector<double> tv_filtered;  // per-point total variation sum_k |p_k+1 - p_k|
  std::vector<double> tv_noisy;
  std::vector<double> dice_filtered;  // per-frame, rasterised vs truth mask
  std::vector<double> dice_noisy;
};

// Scores filtered and noisy tracks against the truth with identical
// machinery, so filtered == noisy gives identical columns.
ScoreSummary score(const std::vector<std::vector<Point2>>& filtered,
                   const std::vector<std::vector<Point2>>& noisy,
                   const SynthData& data, const SynthConfig& cfg);

}  // namespace ckf
