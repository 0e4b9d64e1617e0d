#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ckf/dynamics.hpp"
#include "ckf/synth.hpp"

using namespace ckf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("zero amplitude freezes the truth") {
  SynthConfig cfg;
  cfg.amplitude_px = 0.0;
  for (int i : {0, 17, 59}) {
    const Point2 p0 = truth_point(cfg, i, 0);
    for (int k = 1; k < cfg.n_frames; ++k) {
      const Point2 pk = truth_point(cfg, i, k);
      CHECK(pk.x == p0.x);
      CHECK(pk.y == p0.y);
    }
  }
}

TEST_CASE("zero noise reproduces the truth bitwise") {
  SynthConfig cfg;
  cfg.gaussian_sigma_px = 0.0;
  cfg.outlier_frames.clear();
  const SynthData data = generate(cfg);
  REQUIRE(data.noisy.size() == data.truth.size());
  for (std::size_t i = 0; i < data.truth.size(); ++i)
    for (std::size_t k = 0; k < data.truth[i].size(); ++k) {
      CHECK(data.noisy[i][k].x == data.truth[i][k].x);
      CHECK(data.noisy[i][k].y == data.truth[i][k].y);
    }
  REQUIRE(data.masks.size() == static_cast<std::size_t>(cfg.n_frames));
}

TEST_CASE("truth is periodic over one cycle") {
  SynthConfig cfg;
  cfg.n_frames = 25;
  for (int i : {0, 30, 59})
    for (int k = 0; k < cfg.n_frames; ++k) {
      const Point2 a = truth_point(cfg, i, k);
      const Point2 b = truth_point(cfg, i, k + cfg.n_frames);
      CHECK(std::abs(a.x - b.x) < 1e-9);
      CHECK(std::abs(a.y - b.y) < 1e-9);
    }
}

TEST_CASE("generation is deterministic in the seed") {
  SynthConfig cfg;
  const SynthData a = generate(cfg);
  const SynthData b = generate(cfg);
  for (std::size_t i = 0; i < a.noisy.size(); ++i)
    for (std::size_t k = 0; k < a.noisy[i].size(); ++k) {
      CHECK(a.noisy[i][k].x == b.noisy[i][k].x);
      CHECK(a.noisy[i][k].y == b.noisy[i][k].y);
    }
  for (std::size_t k = 0; k < a.masks.size(); ++k)
    CHECK(a.masks[k].pixels == b.masks[k].pixels);

  cfg.seed = 2;
  const SynthData c = generate(cfg);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.noisy.size() && !any_diff; ++i)
    for (std::size_t k = 0; k < a.noisy[i].size(); ++k)
      if (a.noisy[i][k].x != c.noisy[i][k].x) {
        any_diff = true;
        break;
      }
  CHECK(any_diff);
}

TEST_CASE("truth motion satisfies the oscillator recurrence") {
  SynthConfig cfg;
  cfg.phase_offsets.assign(cfg.n_points, 0.0);
  for (int i = 0; i < cfg.n_points; ++i)
    cfg.phase_offsets[static_cast<std::size_t>(i)] = 0.1 * i;

  const double omega = angular_frequency_init(cfg.heart_rate_bpm);
  const double dt = frame_interval(cfg.heart_rate_bpm, cfg.n_frames);
  const Eigen::Matrix3d f = transition_matrix(omega, dt);
  const double cx = cfg.canvas_width / 2.0;
  const double cy = cfg.canvas_height / 2.0;

  for (int i : {0, 7, 42}) {
    const double theta = -kPi + i * 2.0 * kPi / cfg.n_points;
    const double phase = cfg.phase_offsets[static_cast<std::size_t>(i)];
    for (int k = 0; k < cfg.n_frames; ++k) {
      const double t = k * dt;
      Eigen::Vector3d sx(cx + cfg.base_radius_px * std::cos(theta),
                         truth_point(cfg, i, k).x,
                         cfg.amplitude_px * std::cos(theta) * omega *
                             std::cos(omega * t + phase));
      Eigen::Vector3d sy(cy + cfg.base_radius_px * std::sin(theta),
                         truth_point(cfg, i, k).y,
                         cfg.amplitude_px * std::sin(theta) * omega *
                             std::cos(omega * t + phase));
      const Eigen::Vector3d nx = f * sx;
      const Eigen::Vector3d ny = f * sy;
      const Point2 want = truth_point(cfg, i, k + 1);
      CHECK(std::abs(nx[1] - want.x) < 1e-9);
      CHECK(std::abs(ny[1] - want.y) < 1e-9);
      // The propagated velocity matches the analytic derivative too.
      const double vx_next = cfg.amplitude_px * std::cos(theta) * omega *
                             std::cos(omega * (t + dt) + phase);
      CHECK(std::abs(nx[2] - vx_next) < 1e-9);
    }
  }
}

TEST_CASE("scoring the truth against itself is perfect") {
  SynthConfig cfg;
  cfg.n_points = 40;
  const SynthData data = generate(cfg);
  const ScoreSummary s = score(data.truth, data.truth, data, cfg);
  CHECK(s.rmse_filtered == 0.0);
  CHECK(s.rmse_noisy == 0.0);
  REQUIRE(s.dice_filtered.size() == static_cast<std::size_t>(cfg.n_frames));
  for (double d : s.dice_filtered) CHECK(d > 0.98);
  for (std::size_t k = 0; k < s.dice_filtered.size(); ++k)
    CHECK(s.dice_filtered[k] == s.dice_noisy[k]);
}

TEST_CASE("identical inputs produce identical score columns") {
  SynthConfig cfg;
  const SynthData data = generate(cfg);
  const ScoreSummary s = score(data.noisy, data.noisy, data, cfg);
  CHECK(s.rmse_filtered == s.rmse_noisy);
  REQUIRE(s.tv_filtered.size() == s.tv_noisy.size());
  for (std::size_t i = 0; i < s.tv_filtered.size(); ++i)
    CHECK(s.tv_filtered[i] == s.tv_noisy[i]);
  for (std::size_t k = 0; k < s.dice_filtered.size(); ++k)
    CHECK(s.dice_filtered[k] == s.dice_noisy[k]);
  CHECK(s.rmse_noisy > 0.0);
}

TEST_CASE("outlier frames carry the configured extra displacement") {
  SynthConfig cfg;  // outliers at frames 8 and 16, magnitude 8 px
  const SynthData data = generate(cfg);
  auto mean_displacement = [&](int frame) {
    double sum = 0.0;
    for (int i = 0; i < cfg.n_points; ++i)
      sum += norm(data.noisy[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(frame)] -
                  data.truth[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(frame)]);
    return sum / cfg.n_points;
  };
  const double quiet = mean_displacement(7);
  const double loud = mean_displacement(8);
  CHECK(loud > quiet + 4.0);
  CHECK(mean_displacement(16) > mean_displacement(15) + 4.0);
}

TEST_CASE("generator configuration validation") {
  auto expect_bad = [](SynthConfig cfg) {
    try {
      generate(cfg);
      FAIL("expected BadConfig");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_config);
    }
  };
  SynthConfig cfg;
  cfg.n_points = 2;
  expect_bad(cfg);

  cfg = SynthConfig{};
  cfg.n_frames = 1;
  expect_bad(cfg);

  cfg = SynthConfig{};
  cfg.amplitude_px = cfg.base_radius_px;
  expect_bad(cfg);

  cfg = SynthConfig{};
  cfg.outlier_frames = {25};
  expect_bad(cfg);

  cfg = SynthConfig{};
  cfg.phase_offsets = {0.0, 0.1};
  expect_bad(cfg);

  cfg = SynthConfig{};
  cfg.heart_rate_bpm = 0.0;
  expect_bad(cfg);
}
