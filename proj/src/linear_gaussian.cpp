#include "tfs/linear_gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "tfs/errors.hpp"

namespace tfs {

namespace {

LinearGaussianSystem make_system(double nu2, double tau2,
                                 const Eigen::Vector2d& mu0,
                                 const Eigen::Matrix2d& Sigma0) {
  LinearGaussianSystem sys;
  sys.F.resize(2, 2);
  sys.F << 1, 1, 0, 1;
  sys.Q.resize(2, 2);
  sys.Q << nu2 / 3.0, nu2 / 2.0, nu2 / 2.0, nu2;
  sys.G.resize(1, 2);
  sys.G << 1, 0;
  sys.R.resize(1, 1);
  sys.R << tau2;
  sys.mu0 = mu0;
  sys.Sigma0 = Sigma0;
  return sys;
}

}  // namespace

LinearGaussianModel::LinearGaussianModel(double nu2, double tau2,
                                         const Eigen::Vector2d& mu0,
                                         const Eigen::Matrix2d& Sigma0)
    : nu2_(nu2),
      tau2_(tau2),
      sys_(make_system(nu2, tau2, mu0, Sigma0)),
      x0_(mu0) {}

LinearGaussianModel::LinearGaussianModel(double nu2, double tau2,
                                         const Eigen::Vector2d& mu0,
                                         const Eigen::Matrix2d& Sigma0,
                                         std::vector<Obs> ys,
                                         const LinearGaussianOptions& opts)
    : nu2_(nu2),
      tau2_(tau2),
      sys_(make_system(nu2, tau2, mu0, Sigma0)),
      x0_(mu0),
      obs_(std::move(ys)),
      opts_(opts) {
  if (nu2 <= 0.0 || tau2 <= 0.0) {
    throw ConfigError("LinearGaussianModel: inference requires nu2 > 0 and tau2 > 0");
  }
  if (obs_.empty()) {
    throw ConfigError("LinearGaussianModel: empty observation sequence");
  }
  for (const auto& y : obs_) {
    if (y.size() != 1) {
      throw ConfigError("LinearGaussianModel: observations must be scalar");
    }
  }
  build_inference_caches(opts);
}

void LinearGaussianModel::build_inference_caches(
    const LinearGaussianOptions& opts) {
  const int T = horizon();
  kalman_ = kalman_filter(sys_, obs_);
  smoothed_ = rts_smooth(sys_, kalman_);

  const Eigen::Matrix2d Q = sys_.Q;
  const Eigen::Matrix2d Qinv = Q.inverse();
  const Eigen::Matrix2d F = sys_.F;
  const Eigen::RowVector2d G = sys_.G.row(0);
  const double tau2 = tau2_;
  const Eigen::Matrix2d obs_info = G.transpose() * G / tau2;
  const Eigen::Matrix2d P1 =
      F * sys_.Sigma0 * F.transpose() + Q;  // marginal transition cov at n = 1

  trans_ = MvNormal(Q);
  trans_init_ = MvNormal(P1);

  xi_.reserve(T);
  for (int n = 1; n <= T; ++n) {
    xi_.emplace_back(kalman_.predicted[n - 1].cov);
  }

  // Forward proposals.
  fwd_.resize(T);
  for (int n = 1; n <= T; ++n) {
    ConditionalGaussian& c = fwd_[n - 1];
    const double y = obs_[n - 1](0);
    if (opts.forward == ForwardProposalKind::Bootstrap) {
      c.A = F;
      c.base = Eigen::Vector2d::Zero();
      c.dist = (n == 1) ? trans_init_ : trans_;
    } else {
      const Eigen::Matrix2d Cinv = (n == 1) ? P1.inverse() : Qinv;
      const Eigen::Matrix2d cov = (Cinv + obs_info).inverse();
      c.A = cov * Cinv * F;
      c.base = cov * G.transpose() * (y / tau2);
      c.dist = MvNormal(cov);
    }
  }

  // Backward proposals. At n == T the proposal is unconditional; for n < T
  // the exact conditional adds the f(x_next | .) information term.
  bwd_.resize(T);
  for (int n = 1; n <= T; ++n) {
    ConditionalGaussian& c = bwd_[n - 1];
    const double y = obs_[n - 1](0);
    const GaussianBelief& pred = kalman_.predicted[n - 1];
    if (opts.backward == BackwardProposalKind::XiPrior) {
      c.base = pred.mean;
      c.dist = xi_[n - 1];
      continue;
    }
    const Eigen::Matrix2d Pinv = pred.cov.inverse();
    const Eigen::Vector2d eta0 =
        Pinv * pred.mean + G.transpose() * (y / tau2);
    if (n == T) {
      const Eigen::Matrix2d cov = (Pinv + obs_info).inverse();
      c.base = cov * eta0;
      c.dist = MvNormal(cov);
    } else {
      const Eigen::Matrix2d cov =
          (Pinv + obs_info + F.transpose() * Qinv * F).inverse();
      c.base = cov * eta0;
      c.B = cov * F.transpose() * Qinv;
      c.dist = MvNormal(cov);
    }
  }

  // Combining proposal.
  comb_base_.resize(T);
  if (opts.combining == CombiningProposalKind::Transition) {
    comb_.A = F;
    comb_.dist = trans_;
    for (int n = 0; n < T; ++n) comb_base_[n] = Eigen::Vector2d::Zero();
  } else {
    const Eigen::Matrix2d cov =
        (Qinv + obs_info + F.transpose() * Qinv * F).inverse();
    comb_.A = cov * Qinv * F;
    comb_.B = cov * F.transpose() * Qinv;
    comb_.dist = MvNormal(cov);
    for (int n = 0; n < T; ++n) {
      comb_base_[n] = cov * G.transpose() * (obs_[n](0) / tau2);
    }
  }

  inference_ready_ = true;
}

void LinearGaussianModel::require_inference(const char* what) const {
  if (!inference_ready_) {
    throw std::logic_error(std::string(what) +
                           ": model was built without observations");
  }
}

void LinearGaussianModel::check_time(int n, const char* what) const {
  if (n < 1 || n > horizon()) {
    throw std::out_of_range(std::string(what) + ": time index " +
                            std::to_string(n) + " outside 1.." +
                            std::to_string(horizon()));
  }
}

const KalmanRun& LinearGaussianModel::kalman() const {
  require_inference("kalman");
  return kalman_;
}

const std::vector<GaussianBelief>& LinearGaussianModel::smoothed() const {
  require_inference("smoothed");
  return smoothed_;
}

double LinearGaussianModel::transition_density_bound() const {
  return std::pow(2.0 * M_PI, -1.0) / std::sqrt(sys_.Q.determinant());
}

Eigen::VectorXd LinearGaussianModel::trans_mean(const State& x_prev,
                                                int n) const {
  if (n == 1) return sys_.F * sys_.mu0;
  return sys_.F * x_prev;
}

const MvNormal& LinearGaussianModel::trans_dist(int n) const {
  return (n == 1) ? trans_init_ : trans_;
}

double LinearGaussianModel::log_f(const State& x_prev, const State& x,
                                  int n) const {
  require_inference("log_f");
  check_time(n, "log_f");
  return trans_dist(n).log_pdf(x, trans_mean(x_prev, n));
}

double LinearGaussianModel::log_g(const Obs& y, const State& x, int n) const {
  require_inference("log_g");
  check_time(n, "log_g");
  return log_normal_pdf(y(0), sys_.G.row(0).dot(x), tau2_);
}

double LinearGaussianModel::log_xi(const State& x, int n) const {
  require_inference("log_xi");
  check_time(n, "log_xi");
  return xi_[n - 1].log_pdf(x, kalman_.predicted[n - 1].mean);
}

const LinearGaussianModel::ConditionalGaussian& LinearGaussianModel::fwd_prop(
    int n) const {
  require_inference("forward proposal");
  check_time(n, "forward proposal");
  return fwd_[n - 1];
}

const LinearGaussianModel::ConditionalGaussian& LinearGaussianModel::bwd_prop(
    int n) const {
  require_inference("backward proposal");
  check_time(n, "backward proposal");
  return bwd_[n - 1];
}

State LinearGaussianModel::sample_forward_proposal(RngStream& rng,
                                                   const State& x_prev,
                                                   int n) const {
  const ConditionalGaussian& c = fwd_prop(n);
  Eigen::VectorXd mean = c.base;
  if (n == 1 && opts_.forward == ForwardProposalKind::Bootstrap) {
    mean += c.A * sys_.mu0;
  } else {
    mean += c.A * x_prev;
  }
  return c.dist.sample(rng, mean);
}

double LinearGaussianModel::log_q_fwd(const State& x, const State& x_prev,
                                      int n) const {
  const ConditionalGaussian& c = fwd_prop(n);
  Eigen::VectorXd mean = c.base;
  if (n == 1 && opts_.forward == ForwardProposalKind::Bootstrap) {
    mean += c.A * sys_.mu0;
  } else {
    mean += c.A * x_prev;
  }
  return c.dist.log_pdf(x, mean);
}

State LinearGaussianModel::sample_backward_proposal(RngStream& rng,
                                                    const State& x_next,
                                                    int n) const {
  const ConditionalGaussian& c = bwd_prop(n);
  Eigen::VectorXd mean = c.base;
  if (c.B.size() > 0) mean += c.B * x_next;
  return c.dist.sample(rng, mean);
}

double LinearGaussianModel::log_q_bwd(const State& x, const State& x_next,
                                      int n) const {
  const ConditionalGaussian& c = bwd_prop(n);
  Eigen::VectorXd mean = c.base;
  if (c.B.size() > 0) mean += c.B * x_next;
  return c.dist.log_pdf(x, mean);
}

State LinearGaussianModel::sample_combining_proposal(RngStream& rng,
                                                     const State& x_prev,
                                                     const State& x_next,
                                                     int t) const {
  require_inference("combining proposal");
  check_time(t, "combining proposal");
  Eigen::VectorXd mean = comb_base_[t - 1] + comb_.A * x_prev;
  if (comb_.B.size() > 0) mean += comb_.B * x_next;
  return comb_.dist.sample(rng, mean);
}

double LinearGaussianModel::log_q_combine(const State& x, const State& x_prev,
                                          const State& x_next, int t) const {
  require_inference("combining proposal");
  check_time(t, "combining proposal");
  Eigen::VectorXd mean = comb_base_[t - 1] + comb_.A * x_prev;
  if (comb_.B.size() > 0) mean += comb_.B * x_next;
  return comb_.dist.log_pdf(x, mean);
}

State LinearGaussianModel::sample_initial(RngStream& rng) const {
  if (sys_.Sigma0.isZero(0.0)) return sys_.mu0;
  return MvNormal(sys_.Sigma0).sample(rng, sys_.mu0);
}

State LinearGaussianModel::sample_transition(RngStream& rng,
                                             const State& x_prev,
                                             int n) const {
  (void)n;
  Eigen::VectorXd mean = sys_.F * x_prev;
  if (nu2_ == 0.0) return mean;
  if (inference_ready_) return trans_.sample(rng, mean);
  return MvNormal(sys_.Q).sample(rng, mean);
}

Obs LinearGaussianModel::sample_observation(RngStream& rng, const State& x,
                                            int n) const {
  (void)n;
  Obs y(1);
  y(0) = sys_.G.row(0).dot(x);
  if (tau2_ > 0.0) y(0) += std::sqrt(tau2_) * rng.normal();
  return y;
}

}  // namespace tfs
