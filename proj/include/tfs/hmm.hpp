#ifndef TFS_HMM_HPP
#define TFS_HMM_HPP

#include <Eigen/Dense>
#include <vector>

#include "tfs/rng.hpp"

namespace tfs {

using State = Eigen::VectorXd;
using Obs = Eigen::VectorXd;

/// Hidden Markov model instance: densities, samplers, the artificial
/// backward-target densities xi, and the attached observation record.
///
/// Time indices are 1-based and run 1..horizon(); the fixed (or integrated
/// out) initial point sits at index 0. Log-density methods return a finite
/// value or -infinity, never NaN, and may be time-inhomogeneous.
///
/// At n == 1 the transition density log_f(x_prev, x, 1) is evaluated with
/// x_prev == initial_state(); models with a diffuse initial law interpret it
/// as the marginal density of X_1 with the initial state integrated out.
///
/// Instances are immutable after construction and safe to share across
/// threads. RngStream arguments are owned by exactly one caller.
class HmmModel {
 public:
  virtual ~HmmModel() = default;

  virtual int state_dim() const = 0;
  virtual int obs_dim() const = 0;
  virtual int horizon() const = 0;
  virtual const State& initial_state() const = 0;
  virtual const std::vector<Obs>& observations() const = 0;

  // Model densities.
  virtual double log_f(const State& x_prev, const State& x, int n) const = 0;
  virtual double log_g(const Obs& y, const State& x, int n) const = 0;
  virtual double log_xi(const State& x, int n) const = 0;

  // Forward-filter proposal q_n(x_n | x_{n-1}).
  virtual State sample_forward_proposal(RngStream& rng, const State& x_prev,
                                        int n) const = 0;
  virtual double log_q_fwd(const State& x, const State& x_prev,
                           int n) const = 0;

  // Backward-filter proposal q_n(x_n | x_{n+1}); at n == horizon() the
  // proposal is unconditional and x_next is ignored.
  virtual State sample_backward_proposal(RngStream& rng, const State& x_next,
                                         int n) const = 0;
  virtual double log_q_bwd(const State& x, const State& x_next,
                           int n) const = 0;

  // Combining proposal q_t(x_t | x_{t-1}, x_{t+1}).
  virtual State sample_combining_proposal(RngStream& rng, const State& x_prev,
                                          const State& x_next,
                                          int t) const = 0;
  virtual double log_q_combine(const State& x, const State& x_prev,
                               const State& x_next, int t) const = 0;

  // Generative samplers, for simulation.
  virtual State sample_initial(RngStream& rng) const;
  virtual State sample_transition(RngStream& rng, const State& x_prev,
                                  int n) const = 0;
  virtual Obs sample_observation(RngStream& rng, const State& x,
                                 int n) const = 0;
};

struct SimulatedPath {
  std::vector<State> states;      // x_0 .. x_T
  std::vector<Obs> observations;  // y_1 .. y_T
};

/// Draws one path from the generative model: x_0 from the initial law, then
/// x_n ~ f(.|x_{n-1}) and y_n ~ g(.|x_n) for n = 1..T.
SimulatedPath simulate(const HmmModel& model, RngStream& rng, int T);

}  // namespace tfs

#endif  // TFS_HMM_HPP
