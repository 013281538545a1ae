#include "tfs/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace tfs {

MvNormal::MvNormal(const Eigen::MatrixXd& cov) : cov_(cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("MvNormal: covariance is not positive definite");
  }
  chol_lower_ = llt.matrixL();
  double log_det = 0.0;
  for (int i = 0; i < chol_lower_.rows(); ++i) {
    log_det += 2.0 * std::log(chol_lower_(i, i));
  }
  log_norm_const_ =
      -0.5 * (cov_.rows() * std::log(2.0 * M_PI) + log_det);
}

double MvNormal::log_pdf(const Eigen::VectorXd& x,
                         const Eigen::VectorXd& mean) const {
  Eigen::VectorXd diff = x - mean;
  chol_lower_.triangularView<Eigen::Lower>().solveInPlace(diff);
  return log_norm_const_ - 0.5 * diff.squaredNorm();
}

Eigen::VectorXd MvNormal::sample(RngStream& rng,
                                 const Eigen::VectorXd& mean) const {
  Eigen::VectorXd z(dim());
  for (int i = 0; i < dim(); ++i) z[i] = rng.normal();
  return mean + chol_lower_ * z;
}

double log_normal_pdf(double x, double mean, double variance) {
  double d = x - mean;
  return -0.5 * (std::log(2.0 * M_PI * variance) + d * d / variance);
}

}  // namespace tfs
