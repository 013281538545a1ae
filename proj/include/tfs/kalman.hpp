#ifndef TFS_KALMAN_HPP
#define TFS_KALMAN_HPP

#include <Eigen/Dense>
#include <vector>

namespace tfs {

/// Gaussian state belief. Covariances are kept symmetric to 1e-12 by
/// re-symmetrizing after every update.
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Matrices of a linear Gaussian state-space model
///   x_n = F x_{n-1} + w_n,  w_n ~ N(0, Q)
///   y_n = G x_n      + v_n,  v_n ~ N(0, R)
/// with initial belief x_0 ~ N(mu0, Sigma0); Sigma0 == 0 is the fixed-point
/// (Dirac) initialization.
struct LinearGaussianSystem {
  Eigen::MatrixXd F;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd G;
  Eigen::MatrixXd R;
  Eigen::VectorXd mu0;
  Eigen::MatrixXd Sigma0;
};

struct KalmanRun {
  std::vector<GaussianBelief> predicted;       // pi(x_n | y_{1:n-1}), n = 1..T
  std::vector<GaussianBelief> filtered;        // pi(x_n | y_{1:n}),   n = 1..T
  std::vector<double> step_log_likelihood;     // log p(y_n | y_{1:n-1})
  double log_likelihood = 0.0;                 // sum of the step terms
  int first_time = 1;                          // time index of entry 0
};

/// Exact Kalman filter with Joseph-form covariance updates. Throws
/// std::runtime_error if a covariance loses positive semidefiniteness
/// (numerical breakdown).
KalmanRun kalman_filter(const LinearGaussianSystem& sys,
                        const std::vector<Eigen::VectorXd>& ys);

/// Continuation form: treats `prior` as the filtered belief at time
/// first_time - 1 and processes ys as observations first_time, first_time+1,
/// ... Running 1..T in one call or in consecutive segments produces
/// bit-identical beliefs and likelihood terms.
KalmanRun kalman_filter(const LinearGaussianSystem& sys,
                        const std::vector<Eigen::VectorXd>& ys, int first_time,
                        const GaussianBelief& prior);

/// Rauch-Tung-Striebel backward pass over a completed filter run; returns
/// smoothed beliefs for n = 1..T.
std::vector<GaussianBelief> rts_smooth(const LinearGaussianSystem& sys,
                                       const KalmanRun& run);

/// Predictive belief pi(x_n | y_{1:n-1}), the favourable choice for the
/// backward filter's artificial densities. Throws std::out_of_range unless
/// 1 <= n <= T.
const GaussianBelief& xi_predictive(const KalmanRun& run, int n);

}  // namespace tfs

#endif  // TFS_KALMAN_HPP
