#include "tfs/discrete.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tfs/errors.hpp"

namespace tfs {

namespace {

// Plain-arithmetic scale guard: all oracle recursions stay far above the
// denormal range for the admitted sizes; trip loudly if that breaks.
constexpr double kUnderflowFloor = 1e-280;

void check_scale(double v, const char* where) {
  if (v < kUnderflowFloor) {
    throw std::runtime_error(std::string("discrete oracle: underflow in ") +
                             where);
  }
}

// Backward variables beta_n(k) = p(y_{n+1:T} | X_n = k), beta_T = 1.
Eigen::MatrixXd backward_variables(const DiscreteHmm& hmm) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  Eigen::MatrixXd beta(T, K);
  beta.row(T - 1).setOnes();
  for (int n = T - 1; n >= 1; --n) {
    for (int k = 0; k < K; ++k) {
      double s = 0.0;
      for (int j = 0; j < K; ++j) {
        s += hmm.transition(k, j) * hmm.emission(j, hmm.observations[n]) *
             beta(n, j);
      }
      beta(n - 1, k) = s;
    }
    check_scale(beta.row(n - 1).maxCoeff(), "backward recursion");
  }
  return beta;
}

// Unnormalized forward variables alpha_n(k) = p(y_{1:n}, X_n = k).
Eigen::MatrixXd forward_variables(const DiscreteHmm& hmm) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  Eigen::MatrixXd alpha(T, K);
  for (int k = 0; k < K; ++k) {
    alpha(0, k) =
        hmm.transition(hmm.x0, k) * hmm.emission(k, hmm.observations[0]);
  }
  for (int n = 2; n <= T; ++n) {
    for (int k = 0; k < K; ++k) {
      double s = 0.0;
      for (int j = 0; j < K; ++j) s += alpha(n - 2, j) * hmm.transition(j, k);
      alpha(n - 1, k) = s * hmm.emission(k, hmm.observations[n - 1]);
    }
    check_scale(alpha.row(n - 1).sum(), "forward recursion");
  }
  return alpha;
}

}  // namespace

void DiscreteHmm::validate() const {
  const int K = num_states;
  const int T = horizon();
  if (K < 1 || K > 10) throw ConfigError("DiscreteHmm: K must be in 1..10");
  if (T < 1 || T > 20) throw ConfigError("DiscreteHmm: T must be in 1..20");
  if (num_symbols < 1) throw ConfigError("DiscreteHmm: L must be >= 1");
  if (transition.rows() != K || transition.cols() != K) {
    throw ConfigError("DiscreteHmm: transition must be K x K");
  }
  if (emission.rows() != K || emission.cols() != num_symbols) {
    throw ConfigError("DiscreteHmm: emission must be K x L");
  }
  if (x0 < 0 || x0 >= K) throw ConfigError("DiscreteHmm: x0 out of range");
  if (xi.rows() != T || xi.cols() != K) {
    throw ConfigError("DiscreteHmm: xi must be T x K");
  }
  auto check_rows = [](const Eigen::MatrixXd& m, const char* name) {
    for (int i = 0; i < m.rows(); ++i) {
      if (m.row(i).minCoeff() < 0.0) {
        throw ConfigError(std::string("DiscreteHmm: negative entry in ") +
                          name);
      }
      if (std::abs(m.row(i).sum() - 1.0) > 1e-12) {
        throw ConfigError(std::string("DiscreteHmm: row ") +
                          std::to_string(i) + " of " + name +
                          " does not sum to 1");
      }
    }
  };
  check_rows(transition, "transition");
  check_rows(emission, "emission");
  check_rows(xi, "xi");
  for (int y : observations) {
    if (y < 0 || y >= num_symbols) {
      throw ConfigError("DiscreteHmm: observation symbol out of range");
    }
  }
}

Eigen::MatrixXd uniform_xi(int T, int K) {
  return Eigen::MatrixXd::Constant(T, K, 1.0 / K);
}

Eigen::MatrixXd predictive_xi(const DiscreteHmm& hmm) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  Eigen::MatrixXd pred(T, K);
  Eigen::VectorXd filt(K);
  pred.row(0) = hmm.transition.row(hmm.x0);
  for (int n = 1; n <= T; ++n) {
    for (int k = 0; k < K; ++k) {
      filt(k) = pred(n - 1, k) * hmm.emission(k, hmm.observations[n - 1]);
    }
    double s = filt.sum();
    check_scale(s, "predictive recursion");
    filt /= s;
    if (n < T) pred.row(n) = (filt.transpose() * hmm.transition);
  }
  return pred;
}

double exact_likelihood(const DiscreteHmm& hmm) {
  return forward_variables(hmm).row(hmm.horizon() - 1).sum();
}

Eigen::VectorXd exact_smoothed_marginal(const DiscreteHmm& hmm, int t) {
  if (t < 1 || t > hmm.horizon()) {
    throw std::out_of_range("exact_smoothed_marginal: t out of range");
  }
  Eigen::MatrixXd alpha = forward_variables(hmm);
  Eigen::MatrixXd beta = backward_variables(hmm);
  Eigen::VectorXd post =
      alpha.row(t - 1).cwiseProduct(beta.row(t - 1)).transpose();
  return post / post.sum();
}

double exact_backward_nc(const DiscreteHmm& hmm, int n_stop) {
  if (n_stop < 1 || n_stop > hmm.horizon()) {
    throw std::out_of_range("exact_backward_nc: n_stop out of range");
  }
  Eigen::MatrixXd beta = backward_variables(hmm);
  double s = 0.0;
  for (int k = 0; k < hmm.num_states; ++k) {
    s += hmm.xi(n_stop - 1, k) * hmm.emission(k, hmm.observations[n_stop - 1]) *
         beta(n_stop - 1, k);
  }
  return s;
}

double exhaustive_likelihood(const DiscreteHmm& hmm) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  if (std::pow(static_cast<double>(K), T) > 4e6) {
    throw std::invalid_argument("exhaustive_likelihood: K^T too large");
  }
  std::vector<int> path(T, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    int prev = hmm.x0;
    for (int n = 0; n < T; ++n) {
      p *= hmm.transition(prev, path[n]) *
           hmm.emission(path[n], hmm.observations[n]);
      prev = path[n];
    }
    total += p;
    int pos = T - 1;
    while (pos >= 0 && ++path[pos] == K) path[pos--] = 0;
    if (pos < 0) break;
  }
  return total;
}

Eigen::VectorXd exhaustive_smoothed_marginal(const DiscreteHmm& hmm, int t) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  if (std::pow(static_cast<double>(K), T) > 4e6) {
    throw std::invalid_argument("exhaustive_smoothed_marginal: K^T too large");
  }
  std::vector<int> path(T, 0);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(K);
  while (true) {
    double p = 1.0;
    int prev = hmm.x0;
    for (int n = 0; n < T; ++n) {
      p *= hmm.transition(prev, path[n]) *
           hmm.emission(path[n], hmm.observations[n]);
      prev = path[n];
    }
    mass(path[t - 1]) += p;
    int pos = T - 1;
    while (pos >= 0 && ++path[pos] == K) path[pos--] = 0;
    if (pos < 0) break;
  }
  return mass / mass.sum();
}

double exhaustive_backward_nc(const DiscreteHmm& hmm, int n_stop) {
  const int T = hmm.horizon();
  const int K = hmm.num_states;
  const int span = T - n_stop + 1;
  if (std::pow(static_cast<double>(K), span) > 4e6) {
    throw std::invalid_argument("exhaustive_backward_nc: K^span too large");
  }
  std::vector<int> path(span, 0);  // x_{n_stop} .. x_T
  double total = 0.0;
  while (true) {
    double p = hmm.xi(n_stop - 1, path[0]) *
               hmm.emission(path[0], hmm.observations[n_stop - 1]);
    for (int m = 1; m < span; ++m) {
      p *= hmm.transition(path[m - 1], path[m]) *
           hmm.emission(path[m], hmm.observations[n_stop - 1 + m]);
    }
    total += p;
    int pos = span - 1;
    while (pos >= 0 && ++path[pos] == K) path[pos--] = 0;
    if (pos < 0) break;
  }
  return total;
}

}  // namespace tfs
