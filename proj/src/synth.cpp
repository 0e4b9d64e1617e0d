#include "ckf/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ckf/dynamics.hpp"
#include "ckf/geometry.hpp"
#include "ckf/metrics.hpp"

namespace ckf {
namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller on top of mt19937_64, written out so the stream is identical
// on every platform (std::normal_distribution is implementation-defined).
// Two 53-bit uniforms per variate; only the cosine branch is used.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    const double u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  double unit() {  // uniform on (0, 1]
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }
  std::mt19937_64 rng_;
};

void check(const SynthConfig& cfg) {
  if (cfg.n_points < 3)
    throw Error(Errc::bad_config, "n_points must be >= 3");
  if (cfg.n_frames < 2)
    throw Error(Errc::bad_config, "n_frames must be >= 2");
  if (!(cfg.heart_rate_bpm > 0.0))
    throw Error(Errc::bad_config, "heart_rate_bpm must be positive");
  if (!(cfg.base_radius_px > cfg.amplitude_px) || cfg.amplitude_px < 0.0)
    throw Error(Errc::bad_config, "need base_radius > amplitude >= 0");
  if (cfg.gaussian_sigma_px < 0.0)
    throw Error(Errc::bad_config, "gaussian_sigma_px must be >= 0");
  if (!cfg.phase_offsets.empty() &&
      cfg.phase_offsets.size() != static_cast<std::size_t>(cfg.n_points))
    throw Error(Errc::bad_config, "phase_offsets must be empty or one per point");
  if (cfg.canvas_width < 1 || cfg.canvas_height < 1)
    throw Error(Errc::bad_config, "canvas must be at least 1x1");
  for (int k : cfg.outlier_frames)
    if (k < 0 || k >= cfg.n_frames)
      throw Error(Errc::bad_config,
                  "outlier frame " + std::to_string(k) + " out of range");
}

}  // namespace

Point2 truth_point(const SynthConfig& cfg, int point_index, int frame_index) {
  const double omega = angular_frequency_init(cfg.heart_rate_bpm);
  const double dt = frame_interval(cfg.heart_rate_bpm, cfg.n_frames);
  const double theta = -kPi + point_index * 2.0 * kPi / cfg.n_points;
  const double phase =
      cfg.phase_offsets.empty() ? 0.0 : cfg.phase_offsets[point_index];
  const double t = frame_index * dt;
  const double r = cfg.base_radius_px + cfg.amplitude_px * std::sin(omega * t + phase);
  return {cfg.canvas_width / 2.0 + r * std::cos(theta),
          cfg.canvas_height / 2.0 + r * std::sin(theta)};
}

SynthData generate(const SynthConfig& cfg) {
  check(cfg);
  const int n = cfg.n_points;
  const int kframes = cfg.n_frames;

  SynthData data;
  data.truth.assign(n, std::vector<Point2>(kframes));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < kframes; ++k) data.truth[i][k] = truth_point(cfg, i, k);

  data.noisy = data.truth;
  GaussianStream gauss(cfg.seed);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < kframes; ++k) {
      const double dx = gauss.next();
      const double dy = gauss.next();
      data.noisy[i][k].x += cfg.gaussian_sigma_px * dx;
      data.noisy[i][k].y += cfg.gaussian_sigma_px * dy;
    }
  for (int k : cfg.outlier_frames)
    for (int i = 0; i < n; ++i) {
      const double theta = -kPi + i * 2.0 * kPi / n;
      data.noisy[i][k].x += cfg.outlier_magnitude_px * std::cos(theta);
      data.noisy[i][k].y += cfg.outlier_magnitude_px * std::sin(theta);
    }

  const Point2 centre{cfg.canvas_width / 2.0, cfg.canvas_height / 2.0};
  data.masks.reserve(kframes);
  for (int k = 0; k < kframes; ++k) {
    SampledContour frame;
    frame.origin = centre;
    frame.points.reserve(n);
    for (int i = 0; i < n; ++i) frame.points.push_back(data.truth[i][k]);
    data.masks.push_back(
        mask_from_contour(frame, cfg.canvas_width, cfg.canvas_height));
  }
  return data;
}

ScoreSummary score(const std::vector<std::vector<Point2>>& filtered,
                   const std::vector<std::vector<Point2>>& noisy,
                   const SynthData& data, const SynthConfig& cfg) {
  const std::size_t n = data.truth.size();
  const std::size_t kframes = n ? data.truth[0].size() : 0;
  auto check_shape = [&](const std::vector<std::vector<Point2>>& v,
                         const char* name) {
    if (v.size() != n)
      throw Error(Errc::shape_mismatch, std::string(name) + " point count");
    for (const auto& track : v)
      if (track.size() != kframes)
        throw Error(Errc::shape_mismatch, std::string(name) + " frame count");
  };
  check_shape(filtered, "filtered");
  check_shape(noisy, "noisy");
  if (data.masks.size() != kframes)
    throw Error(Errc::shape_mismatch, "mask count");

  ScoreSummary s;
  auto rmse = [&](const std::vector<std::vector<Point2>>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < kframes; ++k) {
        const Point2 d = v[i][k] - data.truth[i][k];
        acc += d.x * d.x + d.y * d.y;
      }
    return std::sqrt(acc / (static_cast<double>(n) * kframes));
  };
  s.rmse_filtered = rmse(filtered);
  s.rmse_noisy = rmse(noisy);

  auto tv = [&](const std::vector<std::vector<Point2>>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k + 1 < kframes; ++k)
        out[i] += norm(v[i][k + 1] - v[i][k]);
    return out;
  };
  s.tv_filtered = tv(filtered);
  s.tv_noisy = tv(noisy);

  auto frame_dice = [&](const std::vector<std::vector<Point2>>& v) {
    std::vector<double> out(kframes, 0.0);
    for (std::size_t k = 0; k < kframes; ++k) {
      SampledContour frame;
      frame.points.reserve(n);
      for (std::size_t i = 0; i < n; ++i) frame.points.push_back(v[i][k]);
      double cx = 0.0, cy = 0.0;
      for (const Point2& p : frame.points) {
        cx += p.x;
        cy += p.y;
      }
      frame.origin = {cx / static_cast<double>(n), cy / static_cast<double>(n)};
      const Mask m =
          mask_from_contour(frame, cfg.canvas_width, cfg.canvas_height);
      out[k] = dice(m, data.masks[k]);
    }
    return out;
  };
  s.dice_filtered = frame_dice(filtered);
  s.dice_noisy = frame_dice(noisy);
  return s;
}

}  // namespace ckf
