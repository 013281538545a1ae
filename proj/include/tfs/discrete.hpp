#ifndef TFS_DISCRETE_HPP
#define TFS_DISCRETE_HPP

#include <Eigen/Dense>
#include <vector>

namespace tfs {

/// Finite-state HMM with a discrete observation alphabet; densities are
/// probability mass functions w.r.t. counting measure, so the same filter
/// code runs on it and an exact brute-force reference is available.
struct DiscreteHmm {
  int num_states = 0;             // K
  int num_symbols = 0;            // L
  Eigen::MatrixXd transition;     // K x K, rows sum to 1
  Eigen::MatrixXd emission;       // K x L, rows sum to 1
  int x0 = 0;                     // fixed initial state
  std::vector<int> observations;  // y_1..y_T in [0, L)
  Eigen::MatrixXd xi;             // T x K, each row a pmf (backward targets)

  int horizon() const { return static_cast<int>(observations.size()); }

  /// Checks row sums, index ranges and the plain-arithmetic size limits
  /// (K <= 10, T <= 20). Throws ConfigError on violation.
  void validate() const;
};

/// Uniform xi tables, the always-valid default.
Eigen::MatrixXd uniform_xi(int T, int K);

/// xi_n = pi(x_n | y_{1:n-1}), the exact predictive tables.
Eigen::MatrixXd predictive_xi(const DiscreteHmm& hmm);

/// Exact marginal likelihood p(y_{1:T}) by the forward recursion, in plain
/// (non-log) arithmetic guarded against underflow.
double exact_likelihood(const DiscreteHmm& hmm);

/// Exact smoothed marginal P(X_t = . | y_{1:T}), t in 1..T.
Eigen::VectorXd exact_smoothed_marginal(const DiscreteHmm& hmm, int t);

/// Exact normalizing constant of the backward target started at n_stop:
///   sum over x_{n_stop:T} of xi_{n_stop}(x_{n_stop}) g(y_{n_stop}|x_{n_stop})
///     * prod_{m > n_stop} g(y_m|x_m) f(x_m|x_{m-1}).
double exact_backward_nc(const DiscreteHmm& hmm, int n_stop);

// Exhaustive K^T path-sum cross-checks (small instances only).
double exhaustive_likelihood(const DiscreteHmm& hmm);
Eigen::VectorXd exhaustive_smoothed_marginal(const DiscreteHmm& hmm, int t);
double exhaustive_backward_nc(const DiscreteHmm& hmm, int n_stop);

}  // namespace tfs

#endif  // TFS_DISCRETE_HPP
