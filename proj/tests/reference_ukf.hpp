#pragma once

// Long-double reference implementations of the weights, the cyclic model,
// and a complete scalar-loop filter. Deliberately free of Eigen and of the
// library's own headers so that agreement with the production code is
// evidence, not tautology.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace refukf {

using ld = long double;

inline constexpr ld kPi = 3.14159265358979323846264338327950288L;

struct RefWeights {
  std::vector<ld> wm, wc;
  ld lambda = 0.0L;
};

inline RefWeights weights(int d, ld alpha, ld beta, ld kappa) {
  RefWeights w;
  const ld dd = static_cast<ld>(d);
  w.lambda = alpha * alpha * (dd + kappa) - dd;
  const ld denom = dd + w.lambda;
  w.wm.assign(static_cast<std::size_t>(2 * d + 1), 1.0L / (2.0L * denom));
  w.wc = w.wm;
  w.wm[0] = w.lambda / denom;
  w.wc[0] = w.wm[0] + 1.0L - alpha * alpha + beta;
  return w;
}

using Mat3 = std::array<std::array<ld, 3>, 3>;

inline Mat3 transition3(ld omega, ld dt) {
  const ld u = omega * dt;
  const ld c = std::cos(u);
  const ld s = std::sin(u);
  return {{{1.0L, 0.0L, 0.0L},
           {1.0L - c, c, s / omega},
           {omega * s, -omega * s, c}}};
}

inline Mat3 process3(ld omega, ld dt, ld q1, ld q2) {
  const ld u = omega * dt;
  const ld c = std::cos(u);
  const ld s = std::sin(u);
  const ld a1 = q1 * q1;
  const ld a2 = q2 * q2;
  Mat3 q{};
  q[0][0] = a1 * dt;
  q[0][1] = a1 * (u - s) / omega;
  q[0][2] = a1 * (1.0L - c);
  q[1][1] = (a1 * omega * omega * (3.0L * u - 4.0L * s + c * s) +
             a2 * (u - c * s)) /
            (2.0L * omega * omega * omega);
  q[1][2] = (a1 * omega * omega * (1.0L - 2.0L * c + c * c) + a2 * s * s) /
            (2.0L * omega * omega);
  q[2][2] = -(a1 * omega * omega * (c * s - u) - a2 * (c * s + u)) /
            (2.0L * omega);
  q[1][0] = q[0][1];
  q[2][0] = q[0][2];
  q[2][1] = q[1][2];
  return q;
}

constexpr int kD = 7;
using Vec7 = std::array<ld, kD>;
using Mat7 = std::array<std::array<ld, kD>, kD>;

inline ld clamp_omega(ld w) { return w <= 0.0L ? 1e-6L : w; }

inline Vec7 propagate7(const Vec7& s, ld dt) {
  const Mat3 f = transition3(clamp_omega(s[6]), dt);
  Vec7 out{};
  for (int axis = 0; axis < 2; ++axis) {
    const int o = 3 * axis;
    for (int i = 0; i < 3; ++i) {
      ld acc = 0.0L;
      for (int j = 0; j < 3; ++j) acc += f[i][j] * s[o + j];
      out[o + i] = acc;
    }
  }
  out[6] = s[6];
  return out;
}

inline Mat7 full_process7(ld omega, ld dt, ld q1, ld q2, ld omega_var) {
  const Mat3 q = process3(clamp_omega(omega), dt, q1, q2);
  Mat7 full{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      full[i][j] = q[i][j];
      full[3 + i][3 + j] = q[i][j];
    }
  full[6][6] = omega_var;
  return full;
}

// Plain lower Cholesky; the reference path only ever sees positive definite
// covariances, so a non-positive pivot is a hard error.
inline Mat7 chol7(const Mat7& a) {
  Mat7 l{};
  for (int j = 0; j < kD; ++j) {
    ld d = a[j][j];
    for (int k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (d <= 0.0L) throw std::runtime_error("reference Cholesky pivot <= 0");
    l[j][j] = std::sqrt(d);
    for (int i = j + 1; i < kD; ++i) {
      ld v = a[i][j];
      for (int k = 0; k < j; ++k) v -= l[i][k] * l[j][k];
      l[i][j] = v / l[j][j];
    }
  }
  return l;
}

struct RefState {
  Vec7 mean{};
  Mat7 cov{};
};

struct RefParams {
  ld q1 = 1e-3L, q2 = 1e-3L, r = 1e-2L, omega_var = 1.0L;
  ld alpha = 0.1L, beta = 2.0L, kappa = -1.0L;
};

inline std::vector<Vec7> sigma7(const RefState& fs, ld lambda) {
  const Mat7 l = chol7(fs.cov);
  const ld spread = std::sqrt(static_cast<ld>(kD) + lambda);
  std::vector<Vec7> pts(2 * kD + 1, fs.mean);
  for (int i = 0; i < kD; ++i)
    for (int rrow = 0; rrow < kD; ++rrow) {
      pts[1 + i][rrow] += spread * l[rrow][i];
      pts[1 + kD + i][rrow] -= spread * l[rrow][i];
    }
  return pts;
}

inline RefState predict7(const RefState& fs, ld dt, const RefParams& p,
                         const RefWeights& w) {
  std::vector<Vec7> pts = sigma7(fs, w.lambda);
  for (Vec7& pt : pts) pt = propagate7(pt, dt);
  RefState out;
  for (int i = 0; i < kD; ++i) {
    ld acc = 0.0L;
    for (std::size_t n = 0; n < pts.size(); ++n) acc += w.wm[n] * pts[n][i];
    out.mean[i] = acc;
  }
  out.cov = full_process7(fs.mean[6], dt, p.q1, p.q2, p.omega_var);
  for (std::size_t n = 0; n < pts.size(); ++n)
    for (int i = 0; i < kD; ++i)
      for (int j = 0; j < kD; ++j)
        out.cov[i][j] +=
            w.wc[n] * (pts[n][i] - out.mean[i]) * (pts[n][j] - out.mean[j]);
  for (int i = 0; i < kD; ++i)
    for (int j = 0; j < i; ++j) {
      const ld v = (out.cov[i][j] + out.cov[j][i]) / 2.0L;
      out.cov[i][j] = v;
      out.cov[j][i] = v;
    }
  return out;
}

inline RefState update7(const RefState& fs, ld zx, ld zy, const RefParams& p,
                        const RefWeights& w) {
  const std::vector<Vec7> pts = sigma7(fs, w.lambda);
  const int zi[2] = {1, 4};  // measured components: x, y positions
  ld mz[2] = {0.0L, 0.0L};
  for (std::size_t n = 0; n < pts.size(); ++n)
    for (int a = 0; a < 2; ++a) mz[a] += w.wm[n] * pts[n][zi[a]];
  ld pz[2][2] = {{p.r, 0.0L}, {0.0L, p.r}};
  ld pxz[kD][2] = {};
  for (std::size_t n = 0; n < pts.size(); ++n) {
    const ld dz[2] = {pts[n][zi[0]] - mz[0], pts[n][zi[1]] - mz[1]};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) pz[a][b] += w.wc[n] * dz[a] * dz[b];
    for (int i = 0; i < kD; ++i)
      for (int a = 0; a < 2; ++a)
        pxz[i][a] += w.wc[n] * (pts[n][i] - fs.mean[i]) * dz[a];
  }
  const ld det = pz[0][0] * pz[1][1] - pz[0][1] * pz[1][0];
  const ld inv[2][2] = {{pz[1][1] / det, -pz[0][1] / det},
                        {-pz[1][0] / det, pz[0][0] / det}};
  ld gain[kD][2];
  for (int i = 0; i < kD; ++i)
    for (int a = 0; a < 2; ++a)
      gain[i][a] = pxz[i][0] * inv[0][a] + pxz[i][1] * inv[1][a];

  RefState out = fs;
  const ld innov[2] = {zx - mz[0], zy - mz[1]};
  for (int i = 0; i < kD; ++i)
    out.mean[i] += gain[i][0] * innov[0] + gain[i][1] * innov[1];
  for (int i = 0; i < kD; ++i)
    for (int j = 0; j < kD; ++j) {
      ld acc = 0.0L;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          acc += gain[i][a] * pz[a][b] * gain[j][b];
      out.cov[i][j] -= acc;
    }
  for (int i = 0; i < kD; ++i)
    for (int j = 0; j < i; ++j) {
      const ld v = (out.cov[i][j] + out.cov[j][i]) / 2.0L;
      out.cov[i][j] = v;
      out.cov[j][i] = v;
    }
  return out;
}

// Full forward filter over one point's track; returns post-update positions.
inline std::vector<std::array<ld, 2>> filter_track(
    const std::vector<std::array<ld, 2>>& z, ld heart_rate_bpm,
    const RefParams& p) {
  const int kframes = static_cast<int>(z.size());
  const ld omega1 = 2.0L * kPi * heart_rate_bpm / 60.0L;
  const ld dt = 60.0L / (heart_rate_bpm * kframes);
  const RefWeights w = weights(kD, p.alpha, p.beta, p.kappa);

  RefState fs;
  ld sx = 0.0L, sy = 0.0L;
  for (const auto& m : z) {
    sx += m[0];
    sy += m[1];
  }
  fs.mean = {sx / kframes, z[0][0], (z[1][0] - z[0][0]) / dt,
             sy / kframes, z[0][1], (z[1][1] - z[0][1]) / dt, omega1};
  const ld kk = static_cast<ld>(kframes);
  const ld phi[3][3] = {{p.r, p.r / kk, p.r / (kk * dt)},
                        {p.r / kk, p.r, p.r / dt},
                        {p.r / (kk * dt), p.r / dt, 2.0L * p.r / (dt * dt)}};
  fs.cov = Mat7{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      fs.cov[i][j] = phi[i][j];
      fs.cov[3 + i][3 + j] = phi[i][j];
    }
  fs.cov[6][6] = 1.0L;

  std::vector<std::array<ld, 2>> out;
  out.reserve(z.size());
  for (const auto& m : z) {
    fs = predict7(fs, dt, p, w);
    fs = update7(fs, m[0], m[1], p, w);
    out.push_back({fs.mean[1], fs.mean[4]});
  }
  return out;
}

}  // namespace refukf
