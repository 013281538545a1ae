#include "tfs/kalman.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfs {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

void check_psd(const Eigen::MatrixXd& cov, int n, const char* where) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::runtime_error(std::string("kalman_filter: covariance lost "
                                         "positive semidefiniteness in ") +
                             where + " at time " + std::to_string(n));
  }
}

double log_mvn(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
               const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("kalman_filter: innovation covariance not PD");
  }
  Eigen::VectorXd diff = x - mean;
  llt.matrixL().solveInPlace(diff);
  double log_det = 0.0;
  Eigen::MatrixXd L = llt.matrixL();
  for (int i = 0; i < L.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
  return -0.5 * (x.size() * std::log(2.0 * M_PI) + log_det +
                 diff.squaredNorm());
}

}  // namespace

KalmanRun kalman_filter(const LinearGaussianSystem& sys,
                        const std::vector<Eigen::VectorXd>& ys, int first_time,
                        const GaussianBelief& prior) {
  const int T = static_cast<int>(ys.size());
  const int dx = static_cast<int>(sys.F.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dx, dx);

  KalmanRun run;
  run.first_time = first_time;
  run.predicted.reserve(T);
  run.filtered.reserve(T);
  run.step_log_likelihood.reserve(T);

  Eigen::VectorXd m = prior.mean;
  Eigen::MatrixXd P = prior.cov;
  for (int k = 0; k < T; ++k) {
    const int n = first_time + k;
    // Predict.
    Eigen::VectorXd m_pred = sys.F * m;
    Eigen::MatrixXd P_pred = symmetrize(sys.F * P * sys.F.transpose() + sys.Q);
    run.predicted.push_back({m_pred, P_pred});

    // Update (Joseph form).
    Eigen::MatrixXd S = sys.G * P_pred * sys.G.transpose() + sys.R;
    run.step_log_likelihood.push_back(log_mvn(ys[k], sys.G * m_pred, S));
    Eigen::MatrixXd K = S.llt().solve(sys.G * P_pred).transpose();
    m = m_pred + K * (ys[k] - sys.G * m_pred);
    Eigen::MatrixXd A = I - K * sys.G;
    P = symmetrize(A * P_pred * A.transpose() + K * sys.R * K.transpose());
    check_psd(P, n, "update");
    run.filtered.push_back({m, P});
  }
  double total = 0.0;
  for (double v : run.step_log_likelihood) total += v;
  run.log_likelihood = total;
  return run;
}

KalmanRun kalman_filter(const LinearGaussianSystem& sys,
                        const std::vector<Eigen::VectorXd>& ys) {
  return kalman_filter(sys, ys, 1, GaussianBelief{sys.mu0, sys.Sigma0});
}

std::vector<GaussianBelief> rts_smooth(const LinearGaussianSystem& sys,
                                       const KalmanRun& run) {
  const int T = static_cast<int>(run.filtered.size());
  std::vector<GaussianBelief> smoothed(T);
  if (T == 0) return smoothed;
  smoothed[T - 1] = run.filtered[T - 1];
  for (int k = T - 2; k >= 0; --k) {
    const auto& f = run.filtered[k];
    const auto& pred_next = run.predicted[k + 1];
    // C = P_k F' (P_{k+1}^-)^{-1}, via the predicted covariance's LLT.
    Eigen::LLT<Eigen::MatrixXd> llt(pred_next.cov);
    Eigen::MatrixXd C = llt.solve(sys.F * f.cov).transpose();
    smoothed[k].mean = f.mean + C * (smoothed[k + 1].mean - pred_next.mean);
    smoothed[k].cov = symmetrize(
        f.cov + C * (smoothed[k + 1].cov - pred_next.cov) * C.transpose());
  }
  return smoothed;
}

const GaussianBelief& xi_predictive(const KalmanRun& run, int n) {
  const int idx = n - run.first_time;
  if (idx < 0 || idx >= static_cast<int>(run.predicted.size())) {
    throw std::out_of_range("xi_predictive: time index " + std::to_string(n) +
                            " outside filter run");
  }
  return run.predicted[idx];
}

}  // namespace tfs
