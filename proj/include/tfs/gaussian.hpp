#ifndef TFS_GAUSSIAN_HPP
#define TFS_GAUSSIAN_HPP

#include <Eigen/Dense>

#include "tfs/rng.hpp"

namespace tfs {

/// Multivariate normal with a fixed covariance and caller-supplied mean.
/// Caches the Cholesky factor and log normalizing constant, since filter
/// hot loops evaluate the same covariance at many means.
class MvNormal {
 public:
  MvNormal() = default;
  explicit MvNormal(const Eigen::MatrixXd& cov);

  double log_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean) const;
  Eigen::VectorXd sample(RngStream& rng, const Eigen::VectorXd& mean) const;

  const Eigen::MatrixXd& cov() const { return cov_; }
  int dim() const { return static_cast<int>(cov_.rows()); }

 private:
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_lower_;
  double log_norm_const_ = 0.0;
};

/// Scalar normal log-density.
double log_normal_pdf(double x, double mean, double variance);

}  // namespace tfs

#endif  // TFS_GAUSSIAN_HPP
