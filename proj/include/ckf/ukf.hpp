#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ckf/dynamics.hpp"
#include "ckf/types.hpp"

namespace ckf {

// Scaled unscented transform parameters (Merwe). dim is the state dimension
// the weights are built for; lambda = alpha^2*(dim+kappa) - dim.
struct UTParams {
  double alpha = 0.1;
  double beta = 2.0;
  double kappa = -1.0;
  int dim = kStateDim;
};

struct Weights {
  Eigen::VectorXd wm;  // mean weights, size 2*dim+1
  Eigen::VectorXd wc;  // covariance weights
  double lambda = 0.0;
  int dim = 0;
};

// Throws bad_config for alpha <= 0 or dim < 1, degenerate_scaling when
// dim + lambda <= 0 (sigma-point spread sqrt(dim+lambda) must exist).
Weights compute_weights(const UTParams& p);

// Lower Cholesky factor tolerant of positive semidefinite input: a pivot in
// [-tol, 0] zeroes its column instead of failing. Returns false for pivots
// below -tol (tol = 1e-9 * max(1, max |diag|)).
bool psd_cholesky_lower(const Eigen::MatrixXd& a, Eigen::MatrixXd& l);

// 2*dim+1 sigma points as columns: mean, then mean +- sqrt(dim+lambda) times
// the Cholesky columns of cov. On factorization failure, jitter 1e-9*I is
// added and escalated tenfold up to 1e-3*I before not_positive_definite.
Eigen::MatrixXd sigma_points(const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& cov, const Weights& w);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Weighted mean/covariance of sigma points (columns) plus additive_cov,
// symmetrized on the way out.
Moments unscented_transform(const Eigen::MatrixXd& points, const Weights& w,
                            const Eigen::MatrixXd& additive_cov);

struct FilterState {
  State7 mean = State7::Zero();
  Mat7 cov = Mat7::Zero();
};

// Two-point differencing init from one point's measured track:
// x = z_0, x_dot = (z_1 - z_0)/dt, x_bar = mean(z), omega = omega1.
// Throws too_few_frames for fewer than 2 samples.
State7 init_state(const std::vector<Point2>& series, double dt, double omega1);

// Initial covariance blkdiag(phi, phi, 1) with
//   phi = [ r       r/K      r/(K*dt) ]
//         [ r/K     r        r/dt     ]
//         [ r/(K*dt) r/dt    2r/dt^2  ]
// in [x_bar, x, x_dot] order, K = frame count.
Mat7 init_cov(double r, double dt, int n_frames);

// One predict step: sigma points from fs, each propagated through the cyclic
// model, recombined; process covariance is rebuilt from the current mean
// omega unless a frozen Q is supplied via the overload.
FilterState predict(const FilterState& fs, double dt, const NoiseParams& noise,
                    const UTParams& ut);
FilterState predict(const FilterState& fs, double dt, const Mat7& process_cov,
                    const UTParams& ut);

// Measurement update with z = (x, y), R = diag(r, r). Sigma points are drawn
// fresh from fs; the innovation covariance is inverted in closed form
// (singular_innovation below |det| = 1e-30).
FilterState update(const FilterState& fs, const Eigen::Vector2d& z, double r,
                   const UTParams& ut);

struct FilterOptions {
  NoiseParams noise;
  UTParams ut;
  // Keep the process covariance fixed at its omega_1 value instead of
  // rebuilding it from the evolving omega estimate each predict.
  bool freeze_process_noise = false;
};

// Filter every point's track independently over one cycle. measurements and
// the result are indexed [point][frame]; each output sample is the
// post-update position estimate. Frame 0's measurement is assimilated too
// (predict from the init state, then update).
std::vector<std::vector<Point2>> filter_sequence(
    const std::vector<std::vector<Point2>>& measurements,
    const SequenceMeta& meta, const FilterOptions& options);

}  // namespace ckf
