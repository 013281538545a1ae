#ifndef TFS_TESTS_LG_QUADRATURE_HPP
#define TFS_TESTS_LG_QUADRATURE_HPP

#include <vector>

#include "tfs/kalman.hpp"

namespace tfs::testing {

/// Dense-grid sequential quadrature for the constant-velocity linear
/// Gaussian model: marginal likelihood, predictive moments and smoothed
/// means, computed without any Kalman recursion so it can serve as an
/// independent oracle for one.
///
/// The state is propagated on a (position, velocity) lattice. The transition
/// kernel factorizes as
///   f(x'|x) = N(v'; v, Q22) * N(p'; p + (v+v')/2, Q11 - Q12^2/Q22)
/// for this Q family (Q12/Q22 == 1/2 for every nu2), which turns each
/// propagation into per-slice 1-d convolutions on the lattice. Only small T
/// is feasible; intended for T <= 8.
struct LgQuadratureResult {
  double log_likelihood = 0.0;
  std::vector<Eigen::Vector2d> predictive_means;  // n = 1..T
  std::vector<Eigen::Matrix2d> predictive_covs;
  std::vector<Eigen::Vector2d> smoothed_means;
};

LgQuadratureResult lg_quadrature(const LinearGaussianSystem& sys,
                                 const std::vector<Eigen::VectorXd>& ys,
                                 double resolution = 4.0,
                                 double margin_sds = 8.0);

}  // namespace tfs::testing

#endif  // TFS_TESTS_LG_QUADRATURE_HPP
