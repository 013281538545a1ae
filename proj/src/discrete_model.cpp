#include "tfs/discrete_model.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "tfs/errors.hpp"

namespace tfs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }
}  // namespace

int state_index(const State& x) {
  return static_cast<int>(std::lround(x(0)));
}

int sample_categorical(RngStream& rng, const Eigen::VectorXd& probs) {
  double u = rng.uniform() * probs.sum();
  double c = 0.0;
  for (int k = 0; k < probs.size(); ++k) {
    c += probs(k);
    if (u < c) return k;
  }
  return static_cast<int>(probs.size()) - 1;
}

DiscreteHmmModel::DiscreteHmmModel(DiscreteHmm hmm,
                                   const DiscreteModelOptions& opts)
    : hmm_(std::move(hmm)), opts_(opts) {
  hmm_.validate();
  x0_ = State::Constant(1, static_cast<double>(hmm_.x0));
  obs_.reserve(hmm_.observations.size());
  for (int y : hmm_.observations) {
    obs_.push_back(Obs::Constant(1, static_cast<double>(y)));
  }
}

double DiscreteHmmModel::transition_density_bound() const {
  return hmm_.transition.maxCoeff();
}

double DiscreteHmmModel::log_f(const State& x_prev, const State& x,
                               int n) const {
  (void)n;
  return safe_log(hmm_.transition(state_index(x_prev), state_index(x)));
}

double DiscreteHmmModel::log_g(const Obs& y, const State& x, int n) const {
  (void)n;
  return safe_log(hmm_.emission(state_index(x), static_cast<int>(y(0))));
}

double DiscreteHmmModel::log_xi(const State& x, int n) const {
  return safe_log(hmm_.xi(n - 1, state_index(x)));
}

Eigen::VectorXd DiscreteHmmModel::forward_row(const State& x_prev,
                                              int n) const {
  Eigen::VectorXd row = hmm_.transition.row(state_index(x_prev)).transpose();
  if (opts_.forward == DiscreteProposalMode::Adapted) {
    row = row.cwiseProduct(hmm_.emission.col(hmm_.observations[n - 1]));
  }
  return row / row.sum();
}

Eigen::VectorXd DiscreteHmmModel::backward_row(const State& x_next,
                                               int n) const {
  const int T = hmm_.horizon();
  Eigen::VectorXd row = hmm_.xi.row(n - 1).transpose();
  if (opts_.backward == DiscreteProposalMode::Adapted) {
    row = row.cwiseProduct(hmm_.emission.col(hmm_.observations[n - 1]));
    if (n < T) {
      row = row.cwiseProduct(hmm_.transition.col(state_index(x_next)));
    }
  }
  double s = row.sum();
  if (s <= 0.0) {
    throw InvalidDensityError(
        "discrete backward proposal has empty support at time " +
        std::to_string(n));
  }
  return row / s;
}

Eigen::VectorXd DiscreteHmmModel::combining_row(const State& x_prev,
                                                const State& x_next,
                                                int t) const {
  Eigen::VectorXd row = hmm_.transition.row(state_index(x_prev)).transpose();
  if (opts_.combining == DiscreteProposalMode::Adapted) {
    row = row.cwiseProduct(hmm_.emission.col(hmm_.observations[t - 1]));
    row = row.cwiseProduct(hmm_.transition.col(state_index(x_next)));
  }
  double s = row.sum();
  if (s <= 0.0) {
    throw InvalidDensityError(
        "discrete combining proposal has empty support at time " +
        std::to_string(t));
  }
  return row / s;
}

State DiscreteHmmModel::sample_forward_proposal(RngStream& rng,
                                                const State& x_prev,
                                                int n) const {
  return State::Constant(
      1, static_cast<double>(sample_categorical(rng, forward_row(x_prev, n))));
}

double DiscreteHmmModel::log_q_fwd(const State& x, const State& x_prev,
                                   int n) const {
  return safe_log(forward_row(x_prev, n)(state_index(x)));
}

State DiscreteHmmModel::sample_backward_proposal(RngStream& rng,
                                                 const State& x_next,
                                                 int n) const {
  return State::Constant(
      1, static_cast<double>(sample_categorical(rng, backward_row(x_next, n))));
}

double DiscreteHmmModel::log_q_bwd(const State& x, const State& x_next,
                                   int n) const {
  return safe_log(backward_row(x_next, n)(state_index(x)));
}

State DiscreteHmmModel::sample_combining_proposal(RngStream& rng,
                                                  const State& x_prev,
                                                  const State& x_next,
                                                  int t) const {
  return State::Constant(
      1, static_cast<double>(
             sample_categorical(rng, combining_row(x_prev, x_next, t))));
}

double DiscreteHmmModel::log_q_combine(const State& x, const State& x_prev,
                                       const State& x_next, int t) const {
  return safe_log(combining_row(x_prev, x_next, t)(state_index(x)));
}

State DiscreteHmmModel::sample_transition(RngStream& rng, const State& x_prev,
                                          int n) const {
  (void)n;
  Eigen::VectorXd row = hmm_.transition.row(state_index(x_prev)).transpose();
  return State::Constant(1,
                         static_cast<double>(sample_categorical(rng, row)));
}

Obs DiscreteHmmModel::sample_observation(RngStream& rng, const State& x,
                                         int n) const {
  (void)n;
  Eigen::VectorXd row = hmm_.emission.row(state_index(x)).transpose();
  return Obs::Constant(1, static_cast<double>(sample_categorical(rng, row)));
}

}  // namespace tfs
