#ifndef TFS_LINEAR_GAUSSIAN_HPP
#define TFS_LINEAR_GAUSSIAN_HPP

#include <vector>

#include "tfs/gaussian.hpp"
#include "tfs/hmm.hpp"
#include "tfs/kalman.hpp"

namespace tfs {

enum class ForwardProposalKind { Bootstrap, LocallyOptimal };
enum class BackwardProposalKind { XiPrior, ExactConditional };
enum class CombiningProposalKind { Transition, ExactConditional };

struct LinearGaussianOptions {
  ForwardProposalKind forward = ForwardProposalKind::LocallyOptimal;
  BackwardProposalKind backward = BackwardProposalKind::ExactConditional;
  CombiningProposalKind combining = CombiningProposalKind::ExactConditional;
};

/// Constant-velocity linear Gaussian model
///   F = [[1,1],[0,1]], G = (1,0), Q = nu2 * [[1/3,1/2],[1/2,1]], R = tau2,
/// initial belief N(mu0, Sigma0) (Sigma0 == 0 pins the start point).
///
/// When observations are attached the model runs an exact Kalman filter once
/// and uses the predictive beliefs pi(x_n | y_{1:n-1}) as the backward
/// targets' artificial densities xi_n. The default proposals are the exact
/// conditionals, Gaussian in closed form:
///   forward    q_n(x | x_prev)        ~ f(x|x_prev) g(y_n|x)
///   backward   q_n(x | x_next)        ~ xi_n(x) g(y_n|x) f(x_next|x)
///   combining  q_t(x | x_prev,x_next) ~ f(x|x_prev) g(y_t|x) f(x_next|x).
class LinearGaussianModel final : public HmmModel {
 public:
  /// Simulation-only instance (no observations, no proposal machinery).
  LinearGaussianModel(double nu2, double tau2,
                      const Eigen::Vector2d& mu0 = Eigen::Vector2d::Zero(),
                      const Eigen::Matrix2d& Sigma0 = Eigen::Matrix2d::Zero());

  /// Inference instance. Requires nu2 > 0 and tau2 > 0.
  LinearGaussianModel(double nu2, double tau2, const Eigen::Vector2d& mu0,
                      const Eigen::Matrix2d& Sigma0, std::vector<Obs> ys,
                      const LinearGaussianOptions& opts = {});

  double nu2() const { return nu2_; }
  double tau2() const { return tau2_; }
  const LinearGaussianSystem& system() const { return sys_; }

  /// Exact filter results over the attached observations.
  const KalmanRun& kalman() const;
  const std::vector<GaussianBelief>& smoothed() const;

  /// sup_{x,x'} f(x'|x) = (2 pi)^{-dx/2} det(Q)^{-1/2}, for FFBSi rejection.
  double transition_density_bound() const;

  // HmmModel interface.
  int state_dim() const override { return 2; }
  int obs_dim() const override { return 1; }
  int horizon() const override { return static_cast<int>(obs_.size()); }
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

  State sample_initial(RngStream& rng) const override;
  State sample_transition(RngStream& rng, const State& x_prev,
                          int n) const override;
  Obs sample_observation(RngStream& rng, const State& x, int n) const override;

 private:
  struct ConditionalGaussian {
    // mean = base + A x_prev + B x_next (unused blocks are empty).
    Eigen::VectorXd base;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    MvNormal dist;
  };

  void build_inference_caches(const LinearGaussianOptions& opts);
  const ConditionalGaussian& fwd_prop(int n) const;
  const ConditionalGaussian& bwd_prop(int n) const;
  Eigen::VectorXd trans_mean(const State& x_prev, int n) const;
  const MvNormal& trans_dist(int n) const;
  void require_inference(const char* what) const;
  void check_time(int n, const char* what) const;

  double nu2_, tau2_;
  LinearGaussianSystem sys_;
  State x0_;
  std::vector<Obs> obs_;
  LinearGaussianOptions opts_;

  // Inference-side caches (empty for simulation-only instances).
  bool inference_ready_ = false;
  KalmanRun kalman_;
  std::vector<GaussianBelief> smoothed_;
  MvNormal trans_;        // N(., Q), transitions n >= 2
  MvNormal trans_init_;   // N(., F Sigma0 F' + Q), marginal transition at n = 1
  std::vector<MvNormal> xi_;                   // N(m_pred_n, P_pred_n)
  std::vector<ConditionalGaussian> fwd_;       // per n
  std::vector<ConditionalGaussian> bwd_;       // per n
  ConditionalGaussian comb_;                   // base per t lives in comb_base_
  std::vector<Eigen::Vector2d> comb_base_;     // y_t-dependent part
};

}  // namespace tfs

#endif  // TFS_LINEAR_GAUSSIAN_HPP
