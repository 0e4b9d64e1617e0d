#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "ckf/dynamics.hpp"
#include "reference_ukf.hpp"

using namespace ckf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("angular frequency and frame interval") {
  CHECK(angular_frequency_init(60.0) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(angular_frequency_init(75.0) ==
        doctest::Approx(2.0 * kPi * 1.25).epsilon(1e-15));
  CHECK(frame_interval(60.0, 25) == doctest::Approx(0.04).epsilon(1e-15));
  // K * dT spans exactly one cardiac period regardless of K.
  for (int k : {2, 10, 25, 30})
    CHECK(k * frame_interval(72.0, k) == doctest::Approx(60.0 / 72.0).epsilon(1e-14));

  CHECK_THROWS_AS(angular_frequency_init(0.0), Error);
  CHECK_THROWS_AS(angular_frequency_init(-3.0), Error);
  CHECK_THROWS_AS(frame_interval(60.0, 0), Error);
}

TEST_CASE("transition and noise match the long-double closed forms") {
  for (double omega : {0.1, 2.0 * kPi, 12.0}) {
    for (double dt : {0.033, 0.04}) {
      const Eigen::Matrix3d f = transition_matrix(omega, dt);
      const refukf::Mat3 rf = refukf::transition3(omega, dt);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(std::abs(f(i, j) - static_cast<double>(rf[i][j])) < 1e-12);

      for (double q1 : {1e-3, 0.05}) {
        for (double q2 : {1e-3, 0.02}) {
          const Eigen::Matrix3d q = process_noise(omega, dt, q1, q2);
          const refukf::Mat3 rq = refukf::process3(omega, dt, q1, q2);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              CHECK(std::abs(q(i, j) - static_cast<double>(rq[i][j])) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("series branch agrees with long-double closed forms") {
  // Just below the switch the series must reproduce the exact values; the
  // long-double closed forms keep enough headroom to act as the oracle here.
  const double omega = 1.0;
  for (double u : {9.9e-5, 5e-5, 1e-6}) {
    const double dt = u / omega;
    const Eigen::Matrix3d f = transition_matrix(omega, dt);
    const refukf::Mat3 rf = refukf::transition3(omega, dt);
    const Eigen::Matrix3d q = process_noise(omega, dt, 0.5, 0.25);
    const refukf::Mat3 rq = refukf::process3(omega, dt, 0.5L, 0.25L);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(f(i, j) - static_cast<double>(rf[i][j])) < 1e-12);
        const double rv = static_cast<double>(rq[i][j]);
        CHECK(std::abs(q(i, j) - rv) <=
              1e-12 + 1e-7 * std::abs(rv));  // tiny entries, mixed tolerance
      }
  }
}

TEST_CASE("no jump at the series switch threshold") {
  const double omega = 1.0;
  const double below = kSmallAngle * (1.0 - 1e-13);
  const double above = kSmallAngle * (1.0 + 1e-13);
  const Eigen::Matrix3d fb = transition_matrix(omega, below / omega);
  const Eigen::Matrix3d fa = transition_matrix(omega, above / omega);
  CHECK((fb - fa).cwiseAbs().maxCoeff() < 1e-9);
  const Eigen::Matrix3d qb = process_noise(omega, below / omega, 1e-3, 1e-3);
  const Eigen::Matrix3d qa = process_noise(omega, above / omega, 1e-3, 1e-3);
  CHECK((qb - qa).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("omega -> 0 limit reduces to the constant-velocity model") {
  const double dt = 0.04;
  const Eigen::Matrix3d f = transition_matrix(0.0, dt);
  Eigen::Matrix3d want;
  want << 1, 0, 0, 0, 1, dt, 0, 0, 1;
  CHECK((f - want).cwiseAbs().maxCoeff() == 0.0);

  const double q1 = 2.0, q2 = 3.0;
  const Eigen::Matrix3d q = process_noise(0.0, dt, q1, q2);
  CHECK(q(0, 0) == q1 * q1 * dt);
  CHECK(q(0, 1) == 0.0);
  CHECK(q(0, 2) == 0.0);
  CHECK(q(1, 1) == doctest::Approx(q2 * q2 * dt * dt * dt / 3.0).epsilon(1e-15));
  CHECK(q(1, 2) == doctest::Approx(q2 * q2 * dt * dt / 2.0).epsilon(1e-15));
  CHECK(q(2, 2) == doctest::Approx(q2 * q2 * dt).epsilon(1e-15));
}

TEST_CASE("propagating K steps over one period returns to the start") {
  State7 s;
  s << 2.0, 5.0, -3.0, -1.0, 4.0, 2.0, 2.0 * kPi;
  const int kframes = 25;
  const double dt = frame_interval(60.0, kframes);  // K*dt = 1 = 2pi/omega
  State7 cur = s;
  for (int k = 0; k < kframes; ++k) cur = propagate(cur, dt);
  CHECK((cur - s).cwiseAbs().maxCoeff() < 1e-9);

  // Different rate and frame count, same closure property.
  State7 s2;
  s2 << 0.5, -2.0, 7.0, 3.0, 3.0, -4.0, angular_frequency_init(75.0);
  const double dt2 = frame_interval(75.0, 30);
  State7 cur2 = s2;
  for (int k = 0; k < 30; ++k) cur2 = propagate(cur2, dt2);
  CHECK((cur2 - s2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("process covariance is PSD and block structured") {
  NoiseParams p;
  p.q1 = 1e-3;
  p.q2 = 1e-3;
  p.omega_var = 1.0;
  for (double omega : {0.1, 2.0 * kPi, 12.0}) {
    for (double dt : {0.033, 0.04}) {
      const Mat7 q = full_process_cov(omega, dt, p);
      CHECK((q - q.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<Mat7> es(q);
      CHECK(es.eigenvalues().minCoeff() > -1e-15);
      CHECK(q(kOmega, kOmega) == 1.0);
      CHECK(q.block<3, 3>(0, 3).cwiseAbs().maxCoeff() == 0.0);
      CHECK((q.block<3, 3>(0, 0) - q.block<3, 3>(3, 3)).cwiseAbs().maxCoeff() ==
            0.0);
    }
  }
}

TEST_CASE("propagate clamps non-positive omega for the matrices only") {
  State7 s;
  s << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, -5.0;
  const State7 out = propagate(s, 0.04);
  CHECK(out[kOmega] == -5.0);  // state component untouched
  State7 s_eps = s;
  s_eps[kOmega] = 1e-6;
  const State7 out_eps = propagate(s_eps, 0.04);
  for (int i = 0; i < 6; ++i)
    CHECK(out[i] == doctest::Approx(out_eps[i]).epsilon(1e-12));
}

TEST_CASE("measurement picks the position components") {
  State7 s;
  s << 1, 2, 3, 4, 5, 6, 7;
  const Eigen::Vector2d z = measure(s);
  CHECK(z[0] == 2.0);
  CHECK(z[1] == 5.0);
  const Eigen::Matrix2d r = measurement_cov(0.01);
  CHECK(r(0, 0) == 0.01);
  CHECK(r(1, 1) == 0.01);
  CHECK(r(0, 1) == 0.0);
}
