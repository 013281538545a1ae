#ifndef TFS_DISCRETE_MODEL_HPP
#define TFS_DISCRETE_MODEL_HPP

#include <vector>

#include "tfs/discrete.hpp"
#include "tfs/hmm.hpp"

namespace tfs {

/// Prior proposals sample the model densities themselves (transition /
/// xi row); Adapted proposals fold the local observation and neighbour
/// factors in, normalized over the K states.
enum class DiscreteProposalMode { Prior, Adapted };

struct DiscreteModelOptions {
  DiscreteProposalMode forward = DiscreteProposalMode::Adapted;
  DiscreteProposalMode backward = DiscreteProposalMode::Adapted;
  DiscreteProposalMode combining = DiscreteProposalMode::Adapted;
};

/// HmmModel view of a DiscreteHmm; states travel as 1-d vectors holding the
/// state index so the generic particle filters run unchanged.
class DiscreteHmmModel final : public HmmModel {
 public:
  explicit DiscreteHmmModel(DiscreteHmm hmm,
                            const DiscreteModelOptions& opts = {});

  const DiscreteHmm& hmm() const { return hmm_; }

  /// max over the transition table, for FFBSi rejection sampling.
  double transition_density_bound() const;

  int state_dim() const override { return 1; }
  int obs_dim() const override { return 1; }
  int horizon() const override { return hmm_.horizon(); }
  const State& initial_state() const override { return x0_; }
  const std::vector<Obs>& observations() const override { return obs_; }

  double log_f(const State& x_prev, const State& x, int n) const override;
  double log_g(const Obs& y, const State& x, int n) const override;
  double log_xi(const State& x, int n) const override;

  State sample_forward_proposal(RngStream& rng, const State& x_prev,
                                int n) const override;
  double log_q_fwd(const State& x, const State& x_prev, int n) const override;
  State sample_backward_proposal(RngStream& rng, const State& x_next,
                                 int n) const override;
  double log_q_bwd(const State& x, const State& x_next, int n) const override;
  State sample_combining_proposal(RngStream& rng, const State& x_prev,
                                  const State& x_next, int t) const override;
  double log_q_combine(const State& x, const State& x_prev,
                       const State& x_next, int t) const override;

  State sample_transition(RngStream& rng, const State& x_prev,
                          int n) const override;
  Obs sample_observation(RngStream& rng, const State& x, int n) const override;

 private:
  Eigen::VectorXd forward_row(const State& x_prev, int n) const;
  Eigen::VectorXd backward_row(const State& x_next, int n) const;
  Eigen::VectorXd combining_row(const State& x_prev, const State& x_next,
                                int t) const;

  DiscreteHmm hmm_;
  DiscreteModelOptions opts_;
  State x0_;
  std::vector<Obs> obs_;
};

/// Index of a discrete state vector.
int state_index(const State& x);

/// One draw from a pmf over 0..K-1 (linear scan; K is small).
int sample_categorical(RngStream& rng, const Eigen::VectorXd& probs);

}  // namespace tfs

#endif  // TFS_DISCRETE_MODEL_HPP
