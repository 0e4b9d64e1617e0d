#include "ckf/ukf.hpp"

#include <cmath>
#include <string>

namespace ckf {
namespace {

void symmetrize(Eigen::MatrixXd& m) { m = ((m + m.transpose()) * 0.5).eval(); }

void symmetrize7(Mat7& m) { m = ((m + m.transpose()) * 0.5).eval(); }

}  // namespace

Weights compute_weights(const UTParams& p) {
  if (p.dim < 1)
    throw Error(Errc::bad_config, "state dimension must be positive");
  if (!(p.alpha > 0.0))
    throw Error(Errc::bad_config, "alpha must be positive");
  const double d = static_cast<double>(p.dim);
  const double lambda = p.alpha * p.alpha * (d + p.kappa) - d;
  if (!(d + lambda > 0.0))
    throw Error(Errc::degenerate_scaling,
                "d + lambda = " + std::to_string(d + lambda) +
                    " must be positive for the sigma-point spread");
  Weights w;
  w.dim = p.dim;
  w.lambda = lambda;
  const int n = 2 * p.dim + 1;
  w.wm = Eigen::VectorXd::Constant(n, 1.0 / (2.0 * (d + lambda)));
  w.wc = w.wm;
  w.wm[0] = lambda / (d + lambda);
  w.wc[0] = w.wm[0] + 1.0 - p.alpha * p.alpha + p.beta;
  return w;
}

bool psd_cholesky_lower(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const Eigen::Index n = a.rows();
  l.setZero(n, n);
  double scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  const double tol = 1e-9 * scale;
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -tol) return false;
    if (d <= 0.0) continue;  // semidefinite direction: leave the column zero
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

Eigen::MatrixXd sigma_points(const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& cov, const Weights& w) {
  const Eigen::Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d || w.dim != d)
    throw Error(Errc::dimension_mismatch, "mean/covariance/weight sizes disagree");

  Eigen::MatrixXd l;
  if (!psd_cholesky_lower(cov, l)) {
    double jitter = 1e-9;
    bool ok = false;
    while (jitter <= 1e-3) {
      Eigen::MatrixXd bumped = cov;
      bumped.diagonal().array() += jitter;
      if (psd_cholesky_lower(bumped, l)) {
        ok = true;
        break;
      }
      jitter *= 10.0;
    }
    if (!ok)
      throw Error(Errc::not_positive_definite,
                  "covariance not factorizable even with 1e-3 jitter");
  }

  const double spread = std::sqrt(static_cast<double>(d) + w.lambda);
  Eigen::MatrixXd pts(d, 2 * d + 1);
  pts.col(0) = mean;
  for (Eigen::Index i = 0; i < d; ++i) {
    pts.col(1 + i) = mean + spread * l.col(i);
    pts.col(1 + d + i) = mean - spread * l.col(i);
  }
  return pts;
}

Moments unscented_transform(const Eigen::MatrixXd& points, const Weights& w,
                            const Eigen::MatrixXd& additive_cov) {
  const Eigen::Index n = points.cols();
  if (n != w.wm.size())
    throw Error(Errc::dimension_mismatch, "sigma point count does not match weights");
  if (additive_cov.rows() != points.rows() || additive_cov.cols() != points.rows())
    throw Error(Errc::dimension_mismatch, "additive covariance has wrong shape");

  Moments m;
  m.mean = points * w.wm;
  m.cov = additive_cov;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd diff = points.col(i) - m.mean;
    m.cov += w.wc[i] * diff * diff.transpose();
  }
  symmetrize(m.cov);
  return m;
}

State7 init_state(const std::vector<Point2>& series, double dt, double omega1) {
  if (series.size() < 2)
    throw Error(Errc::too_few_frames,
                "two-point differencing needs at least 2 frames, got " +
                    std::to_string(series.size()));
  double sx = 0.0, sy = 0.0;
  for (const Point2& p : series) {
    sx += p.x;
    sy += p.y;
  }
  const double k = static_cast<double>(series.size());
  State7 s;
  s[kMeanX] = sx / k;
  s[kPosX] = series[0].x;
  s[kVelX] = (series[1].x - series[0].x) / dt;
  s[kMeanY] = sy / k;
  s[kPosY] = series[0].y;
  s[kVelY] = (series[1].y - series[0].y) / dt;
  s[kOmega] = omega1;
  return s;
}

Mat7 init_cov(double r, double dt, int n_frames) {
  if (n_frames < 2)
    throw Error(Errc::too_few_frames, "initial covariance needs >= 2 frames");
  if (!(r > 0.0) || !(dt > 0.0))
    throw Error(Errc::bad_config, "r and dt must be positive");
  const double k = static_cast<double>(n_frames);
  Eigen::Matrix3d phi;
  phi << r, r / k, r / (k * dt),
         r / k, r, r / dt,
         r / (k * dt), r / dt, 2.0 * r / (dt * dt);
  Mat7 p = Mat7::Zero();
  p.block<3, 3>(0, 0) = phi;
  p.block<3, 3>(3, 3) = phi;
  p(kOmega, kOmega) = 1.0;
  return p;
}

FilterState predict(const FilterState& fs, double dt, const Mat7& process_cov,
                    const UTParams& ut) {
  const Weights w = compute_weights(ut);
  const Eigen::MatrixXd chi = sigma_points(fs.mean, fs.cov, w);
  Eigen::MatrixXd propagated(kStateDim, chi.cols());
  for (Eigen::Index i = 0; i < chi.cols(); ++i)
    propagated.col(i) = propagate(chi.col(i), dt);
  const Moments m = unscented_transform(propagated, w, process_cov);
  FilterState out;
  out.mean = m.mean;
  out.cov = m.cov;
  return out;
}

FilterState predict(const FilterState& fs, double dt, const NoiseParams& noise,
                    const UTParams& ut) {
  return predict(fs, dt, full_process_cov(fs.mean[kOmega], dt, noise), ut);
}

FilterState update(const FilterState& fs, const Eigen::Vector2d& z, double r,
                   const UTParams& ut) {
  const Weights w = compute_weights(ut);
  const Eigen::MatrixXd chi = sigma_points(fs.mean, fs.cov, w);
  Eigen::MatrixXd zpts(2, chi.cols());
  for (Eigen::Index i = 0; i < chi.cols(); ++i)
    zpts.col(i) = measure(chi.col(i));
  const Moments mz = unscented_transform(zpts, w, measurement_cov(r));

  Eigen::Matrix<double, kStateDim, 2> pxz =
      Eigen::Matrix<double, kStateDim, 2>::Zero();
  for (Eigen::Index i = 0; i < chi.cols(); ++i)
    pxz += w.wc[i] * (chi.col(i) - fs.mean) * (zpts.col(i) - mz.mean).transpose();

  const Eigen::Matrix2d pz = mz.cov;
  const double det = pz(0, 0) * pz(1, 1) - pz(0, 1) * pz(1, 0);
  if (std::abs(det) <= 1e-30)
    throw Error(Errc::singular_innovation,
                "innovation covariance determinant " + std::to_string(det));
  Eigen::Matrix2d pz_inv;
  pz_inv << pz(1, 1) / det, -pz(0, 1) / det,
            -pz(1, 0) / det, pz(0, 0) / det;

  const Eigen::Matrix<double, kStateDim, 2> gain = pxz * pz_inv;
  FilterState out;
  out.mean = fs.mean + gain * (z - mz.mean);
  out.cov = fs.cov - gain * pz * gain.transpose();
  symmetrize7(out.cov);
  return out;
}

std::vector<std::vector<Point2>> filter_sequence(
    const std::vector<std::vector<Point2>>& measurements,
    const SequenceMeta& meta, const FilterOptions& options) {
  const std::size_t n_points = measurements.size();
  if (n_points == 0)
    throw Error(Errc::shape_mismatch, "no point tracks to filter");
  const std::size_t n_frames = measurements[0].size();
  if (n_frames < 2)
    throw Error(Errc::too_few_frames,
                "need at least 2 frames, got " + std::to_string(n_frames));
  for (std::size_t i = 0; i < n_points; ++i) {
    if (measurements[i].size() != n_frames)
      throw Error(Errc::shape_mismatch,
                  "point " + std::to_string(i) + " has " +
                      std::to_string(measurements[i].size()) + " frames, expected " +
                      std::to_string(n_frames));
    for (std::size_t k = 0; k < n_frames; ++k)
      if (!std::isfinite(measurements[i][k].x) || !std::isfinite(measurements[i][k].y))
        throw Error(Errc::bad_config, "non-finite measurement at point " +
                                          std::to_string(i) + " frame " +
                                          std::to_string(k));
  }

  const double omega1 = angular_frequency_init(meta.heart_rate_bpm);
  const double dt = frame_interval(meta.heart_rate_bpm, static_cast<int>(n_frames));
  const Mat7 frozen_q = full_process_cov(omega1, dt, options.noise);

  std::vector<std::vector<Point2>> out(n_points,
                                       std::vector<Point2>(n_frames));
  for (std::size_t i = 0; i < n_points; ++i) {
    try {
      FilterState fs;
      fs.mean = init_state(measurements[i], dt, omega1);
      fs.cov = init_cov(options.noise.r, dt, static_cast<int>(n_frames));
      for (std::size_t k = 0; k < n_frames; ++k) {
        fs = options.freeze_process_noise
                 ? predict(fs, dt, frozen_q, options.ut)
                 : predict(fs, dt, options.noise, options.ut);
        const Eigen::Vector2d z(measurements[i][k].x, measurements[i][k].y);
        fs = update(fs, z, options.noise.r, options.ut);
        out[i][k] = {fs.mean[kPosX], fs.mean[kPosY]};
      }
    } catch (const Error& e) {
      throw Error(e.code(), "point " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ckf
