#pragma once

#include <Eigen/Dense>

#include "ckf/types.hpp"

namespace ckf {

inline constexpr int kStateDim = 7;

using State7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;

// State layout, shared by both axes: [x_bar, x, x_dot, y_bar, y, y_dot, omega].
// x_bar/y_bar are the oscillation means the position relaxes around.
enum StateIndex : int {
  kMeanX = 0,
  kPosX = 1,
  kVelX = 2,
  kMeanY = 3,
  kPosY = 4,
  kVelY = 5,
  kOmega = 6,
};

struct NoiseParams {
  double q1 = 1e-3;       // process noise density on the oscillation mean
  double q2 = 1e-3;       // process noise density on the velocity
  double r = 1e-2;        // measurement noise variance per coordinate
  double omega_var = 1.0; // process variance on omega
};

struct SequenceMeta {
  double heart_rate_bpm = 0.0;
  int n_frames = 0;
  double pixel_spacing_mm = 1.0;
};

// omega_1 = 2*pi*HR/60. Throws non_positive_rate for HR <= 0.
double angular_frequency_init(double heart_rate_bpm);

// Frame interval for one full cycle split into n_frames: 60/(HR*K).
// Throws non_positive_rate / bad_frame_count.
double frame_interval(double heart_rate_bpm, int n_frames);

// Per-axis transition over [x_bar, x, x_dot] for a harmonic oscillator with
// angular frequency omega relaxing around x_bar:
//   [ 1        0       0          ]
//   [ 1-cos u  cos u   sin(u)/w   ]   with u = omega*dt
//   [ w*sin u  -w*sin u  cos u    ]
// Entries with removable singularities switch to 4th-order series below
// |u| < 1e-4. Pure in omega (no clamping); omega = 0 is fine via the series.
Eigen::Matrix3d transition_matrix(double omega, double dt);

// Per-axis process noise for the same model, densities q1 (mean channel) and
// q2 (velocity channel), integrated over dt. Series fallback below |u| < 1e-4.
Eigen::Matrix3d process_noise(double omega, double dt, double q1, double q2);

// Full 7x7 process covariance: blkdiag(Q_axis, Q_axis, omega_var).
// omega <= 0 is clamped to +1e-6 before building Q.
Mat7 full_process_cov(double omega, double dt, const NoiseParams& p);

// Propagate the 7-state mean through one frame: blkdiag(F, F, 1) * s with F
// built from the state's own omega (clamped to +1e-6 when <= 0).
State7 propagate(const State7& s, double dt);

// Measurement picks the positions: (s[kPosX], s[kPosY]).
Eigen::Vector2d measure(const State7& s);

Eigen::Matrix2d measurement_cov(double r);

// Threshold on |omega*dt| below which series forms replace the closed forms.
inline constexpr double kSmallAngle = 1e-4;

inline double clamp_omega(double omega) { return omega <= 0.0 ? 1e-6 : omega; }

}  // namespace ckf
