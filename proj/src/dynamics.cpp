#include "ckf/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ckf {

double angular_frequency_init(double heart_rate_bpm) {
  if (!(heart_rate_bpm > 0.0))
    throw Error(Errc::non_positive_rate,
                "heart rate must be positive, got " + std::to_string(heart_rate_bpm));
  return 2.0 * std::numbers::pi * heart_rate_bpm / 60.0;
}

double frame_interval(double heart_rate_bpm, int n_frames) {
  if (!(heart_rate_bpm > 0.0))
    throw Error(Errc::non_positive_rate,
                "heart rate must be positive, got " + std::to_string(heart_rate_bpm));
  if (n_frames < 1)
    throw Error(Errc::bad_frame_count,
                "frame count must be positive, got " + std::to_string(n_frames));
  return 60.0 / (heart_rate_bpm * n_frames);
}

Eigen::Matrix3d transition_matrix(double omega, double dt) {
  const double u = omega * dt;
  const double c = std::cos(u);
  Eigen::Matrix3d f;
  f(0, 0) = 1.0;
  f(0, 1) = 0.0;
  f(0, 2) = 0.0;
  f(1, 1) = c;
  f(2, 2) = c;
  // omega*sin(u) and -omega*sin(u) are cancellation-free products, so the
  // closed forms serve the whole range (and give exact zeros at omega = 0).
  const double ws = omega * std::sin(u);
  f(2, 0) = ws;
  f(2, 1) = -ws;
  if (std::abs(u) < kSmallAngle) {
    const double u2 = u * u;
    f(1, 0) = u2 * (0.5 - u2 / 24.0);                          // 1 - cos(u)
    f(1, 2) = dt * (1.0 - u2 / 6.0 + u2 * u2 / 120.0);         // sin(u)/omega
  } else {
    f(1, 0) = 1.0 - c;
    f(1, 2) = std::sin(u) / omega;
  }
  return f;
}

Eigen::Matrix3d process_noise(double omega, double dt, double q1, double q2) {
  const double u = omega * dt;
  const double a1 = q1 * q1;
  const double a2 = q2 * q2;
  Eigen::Matrix3d q;
  q(0, 0) = a1 * dt;
  if (std::abs(u) < kSmallAngle) {
    const double u2 = u * u;
    const double u4 = u2 * u2;
    q(0, 1) = a1 * dt * (u2 / 6.0 - u4 / 120.0);
    q(0, 2) = a1 * (u2 / 2.0 - u4 / 24.0);
    q(1, 1) = a1 * dt * u4 * (1.0 / 20.0 - u2 / 168.0) +
              a2 * dt * dt * dt * (1.0 / 3.0 - u2 / 15.0 + 2.0 * u4 / 315.0);
    q(1, 2) = a1 * (u4 / 8.0 - u4 * u2 / 48.0) +
              a2 * dt * dt * (1.0 - u2 / 3.0 + 2.0 * u4 / 45.0) / 2.0;
    q(2, 2) = a1 * (u4 / (3.0 * dt)) * (1.0 - u2 / 5.0) +
              a2 * dt * (1.0 - u2 / 3.0 + u4 / 15.0);
  } else {
    const double s = std::sin(u);
    const double c = std::cos(u);
    q(0, 1) = a1 * (u - s) / omega;
    q(0, 2) = a1 * (1.0 - c);
    q(1, 1) = (a1 * omega * omega * (3.0 * u - 4.0 * s + c * s) + a2 * (u - c * s)) /
              (2.0 * omega * omega * omega);
    q(1, 2) = (a1 * omega * omega * (1.0 - 2.0 * c + c * c) + a2 * s * s) /
              (2.0 * omega * omega);
    q(2, 2) = -(a1 * omega * omega * (c * s - u) - a2 * (c * s + u)) / (2.0 * omega);
  }
  q(1, 0) = q(0, 1);
  q(2, 0) = q(0, 2);
  q(2, 1) = q(1, 2);
  return q;
}

Mat7 full_process_cov(double omega, double dt, const NoiseParams& p) {
  const Eigen::Matrix3d q = process_noise(clamp_omega(omega), dt, p.q1, p.q2);
  Mat7 full = Mat7::Zero();
  full.block<3, 3>(0, 0) = q;
  full.block<3, 3>(3, 3) = q;
  full(kOmega, kOmega) = p.omega_var;
  return full;
}

State7 propagate(const State7& s, double dt) {
  const Eigen::Matrix3d f = transition_matrix(clamp_omega(s[kOmega]), dt);
  State7 out;
  out.segment<3>(0) = f * s.segment<3>(0);
  out.segment<3>(3) = f * s.segment<3>(3);
  out[kOmega] = s[kOmega];
  return out;
}

Eigen::Vector2d measure(const State7& s) { return {s[kPosX], s[kPosY]}; }

Eigen::Matrix2d measurement_cov(double r) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = r;
  m(1, 1) = r;
  return m;
}

}  // namespace ckf
