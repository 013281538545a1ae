#include "oracles/lg_quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tfs::testing {

namespace {

double gauss(double x, double var) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * M_PI * var);
}

// Lattice in (position, velocity): p_i = (p0i + i) hp, v_j = (v0i + 2k j) hp.
// hv = 2k hp makes every mid-point (v_j + v_j')/2 land exactly on the
// position lattice, which keeps the transition's per-slice convolutions
// index-exact.
struct Lattice {
  double hp = 0, hv = 0;
  int np = 0, nv = 0;
  int p0i = 0, v0i = 0;
  int k = 0;

  double p(int i) const { return (p0i + i) * hp; }
  double v(int j) const { return (v0i + 2 * k * j) * hp; }
};

class LatticeOps {
 public:
  LatticeOps(const Lattice& g, double sig_e2, double q22)
      : g_(g),
        Dp_(static_cast<int>(std::ceil(8.0 * std::sqrt(sig_e2) / g.hp))),
        Dv_(static_cast<int>(std::ceil(8.0 * std::sqrt(q22) / g.hv))) {
    Kp_.resize(2 * Dp_ + 1);
    Kv_.resize(2 * Dv_ + 1);
    for (int d = -Dp_; d <= Dp_; ++d) {
      Kp_[d + Dp_] = g.hp * gauss(d * g.hp, sig_e2);
    }
    for (int d = -Dv_; d <= Dv_; ++d) {
      Kv_[d + Dv_] = g.hv * gauss(d * g.hv, q22);
    }
  }

  // conv[m - m_lo][j] = sum_i Kp[m - i] a(i, j), m in [m_lo, m_hi].
  Eigen::MatrixXd conv_slices(const Eigen::MatrixXd& a, int m_lo,
                              int m_hi) const {
    Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(m_hi - m_lo + 1, a.cols());
    for (int j = 0; j < a.cols(); ++j) {
      for (int i = 0; i < g_.np; ++i) {
        const double aij = a(i, j);
        if (aij == 0.0) continue;
        const int lo = std::max(m_lo, i - Dp_);
        const int hi = std::min(m_hi, i + Dp_);
        for (int m = lo; m <= hi; ++m) {
          conv(m - m_lo, j) += Kp_[m - i + Dp_] * aij;
        }
      }
    }
    return conv;
  }

  // S(i',j') = sum_j Kv[j'-j] conv_j[i' - v0i - k (j + j')].
  Eigen::MatrixXd forward(const Eigen::MatrixXd& a) const {
    const int m_lo = -g_.v0i - 2 * g_.k * (g_.nv - 1);
    const int m_hi = (g_.np - 1) - g_.v0i;
    const Eigen::MatrixXd conv = conv_slices(a, m_lo, m_hi);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g_.np, g_.nv);
    for (int jp = 0; jp < g_.nv; ++jp) {
      for (int j = 0; j < g_.nv; ++j) {
        if (std::abs(jp - j) > Dv_) continue;
        const double kv = Kv_[jp - j + Dv_];
        const int shift = g_.v0i + g_.k * (j + jp);
        for (int ip = 0; ip < g_.np; ++ip) {
          out(ip, jp) += kv * conv(ip - shift - m_lo, j);
        }
      }
    }
    return out;
  }

  // B(i,j) = sum_j' Kv[j-j'] convh_j'[i + v0i + k (j + j')].
  Eigen::MatrixXd backward(const Eigen::MatrixXd& h) const {
    const int m_lo = g_.v0i;
    const int m_hi = (g_.np - 1) + g_.v0i + 2 * g_.k * (g_.nv - 1);
    const Eigen::MatrixXd conv = conv_slices(h, m_lo, m_hi);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g_.np, g_.nv);
    for (int j = 0; j < g_.nv; ++j) {
      for (int jp = 0; jp < g_.nv; ++jp) {
        if (std::abs(j - jp) > Dv_) continue;
        const double kv = Kv_[j - jp + Dv_];
        const int shift = g_.v0i + g_.k * (j + jp);
        for (int i = 0; i < g_.np; ++i) {
          out(i, j) += kv * conv(i + shift - m_lo, jp);
        }
      }
    }
    return out;
  }

 private:
  Lattice g_;
  int Dp_, Dv_;
  std::vector<double> Kp_, Kv_;
};

}  // namespace

LgQuadratureResult lg_quadrature(const LinearGaussianSystem& sys,
                                 const std::vector<Eigen::VectorXd>& ys,
                                 double resolution, double margin_sds) {
  const int T = static_cast<int>(ys.size());
  if (T < 1) throw std::invalid_argument("lg_quadrature: empty data");
  const double q22 = sys.Q(1, 1);
  const double sig_e2 = sys.Q(0, 0) - sys.Q(0, 1) * sys.Q(0, 1) / q22;
  if (std::abs(sys.Q(0, 1) / q22 - 0.5) > 1e-12 ||
      (sys.F - (Eigen::MatrixXd(2, 2) << 1, 1, 0, 1).finished()).norm() >
          1e-12 ||
      (sys.G - (Eigen::MatrixXd(1, 2) << 1, 0).finished()).norm() > 1e-12) {
    throw std::invalid_argument(
        "lg_quadrature: system is not the constant-velocity family");
  }
  const double tau2 = sys.R(0, 0);

  // Extents from the prior marginal moments, widened to cover the data.
  Eigen::Vector2d pm = sys.mu0;
  Eigen::Matrix2d pc = sys.Sigma0;
  double p_lo = pm(0), p_hi = pm(0), v_lo = pm(1), v_hi = pm(1);
  for (int n = 1; n <= T; ++n) {
    pm = sys.F * pm;
    pc = sys.F * pc * sys.F.transpose() + sys.Q;
    p_lo = std::min({p_lo, pm(0) - margin_sds * std::sqrt(pc(0, 0)),
                     ys[n - 1](0) - margin_sds * std::sqrt(tau2)});
    p_hi = std::max({p_hi, pm(0) + margin_sds * std::sqrt(pc(0, 0)),
                     ys[n - 1](0) + margin_sds * std::sqrt(tau2)});
    v_lo = std::min(v_lo, pm(1) - margin_sds * std::sqrt(pc(1, 1)));
    v_hi = std::max(v_hi, pm(1) + margin_sds * std::sqrt(pc(1, 1)));
  }

  Lattice g;
  g.hp = std::min(std::sqrt(sig_e2), std::sqrt(tau2)) / resolution;
  g.k = std::max(1, static_cast<int>(std::lround(
                        std::sqrt(q22) / resolution / (2.0 * g.hp))));
  g.hv = 2.0 * g.k * g.hp;
  g.p0i = static_cast<int>(std::floor(p_lo / g.hp));
  g.np = static_cast<int>(std::ceil(p_hi / g.hp)) - g.p0i + 1;
  g.v0i = static_cast<int>(std::floor(v_lo / g.hp));
  g.nv = static_cast<int>(std::ceil((v_hi - g.v0i * g.hp) / g.hv)) + 1;

  const LatticeOps ops(g, sig_e2, q22);

  LgQuadratureResult res;
  res.predictive_means.resize(T);
  res.predictive_covs.resize(T);
  res.smoothed_means.resize(T);

  auto moments = [&](const Eigen::MatrixXd& w, Eigen::Vector2d& mean,
                     Eigen::Matrix2d& cov) {
    double s = 0, sp = 0, sv = 0, spp = 0, svv = 0, spv = 0;
    for (int j = 0; j < g.nv; ++j) {
      const double vj = g.v(j);
      for (int i = 0; i < g.np; ++i) {
        const double wij = w(i, j);
        if (wij == 0.0) continue;
        const double pi = g.p(i);
        s += wij;
        sp += wij * pi;
        sv += wij * vj;
        spp += wij * pi * pi;
        svv += wij * vj * vj;
        spv += wij * pi * vj;
      }
    }
    mean << sp / s, sv / s;
    cov << spp / s - mean(0) * mean(0), spv / s - mean(0) * mean(1),
        spv / s - mean(0) * mean(1), svv / s - mean(1) * mean(1);
  };

  std::vector<double> obs_factor(g.np);
  auto fill_obs = [&](int n) {
    for (int i = 0; i < g.np; ++i) {
      obs_factor[i] = gauss(ys[n - 1](0) - g.p(i), tau2);
    }
  };
  auto apply_obs = [&](Eigen::MatrixXd& a) {
    for (int j = 0; j < g.nv; ++j) {
      for (int i = 0; i < g.np; ++i) a(i, j) *= obs_factor[i];
    }
  };

  // Forward pass: alpha_n ~ p(x_n, y_{1:n}) up to the running log scale.
  std::vector<Eigen::MatrixXd> alpha(T);
  double log_scale = 0.0;
  {
    const Eigen::Vector2d m1 = sys.F * sys.mu0;
    const Eigen::Matrix2d C1 = sys.F * sys.Sigma0 * sys.F.transpose() + sys.Q;
    const Eigen::Matrix2d C1inv = C1.inverse();
    const double norm1 = 1.0 / (2.0 * M_PI * std::sqrt(C1.determinant()));
    Eigen::MatrixXd pred(g.np, g.nv);
    for (int j = 0; j < g.nv; ++j) {
      for (int i = 0; i < g.np; ++i) {
        Eigen::Vector2d d(g.p(i) - m1(0), g.v(j) - m1(1));
        pred(i, j) = norm1 * std::exp(-0.5 * d.dot(C1inv * d));
      }
    }
    moments(pred, res.predictive_means[0], res.predictive_covs[0]);
    fill_obs(1);
    apply_obs(pred);
    alpha[0] = std::move(pred);
  }
  for (int n = 2; n <= T; ++n) {
    Eigen::MatrixXd pred = ops.forward(alpha[n - 2]);
    moments(pred, res.predictive_means[n - 1], res.predictive_covs[n - 1]);
    fill_obs(n);
    apply_obs(pred);
    double mx = pred.maxCoeff();
    if (mx <= 0.0) throw std::runtime_error("lg_quadrature: mass left grid");
    pred /= mx;
    log_scale += std::log(mx);
    alpha[n - 1] = std::move(pred);
  }
  res.log_likelihood =
      log_scale + std::log(alpha[T - 1].sum() * g.hp * g.hv);

  // Backward pass for smoothed means.
  Eigen::MatrixXd beta = Eigen::MatrixXd::Ones(g.np, g.nv);
  {
    Eigen::MatrixXd w = alpha[T - 1].cwiseProduct(beta);
    Eigen::Matrix2d cov_unused;
    moments(w, res.smoothed_means[T - 1], cov_unused);
  }
  for (int n = T - 1; n >= 1; --n) {
    fill_obs(n + 1);
    Eigen::MatrixXd h = beta;
    apply_obs(h);
    beta = ops.backward(h);
    double mx = beta.maxCoeff();
    if (mx <= 0.0) throw std::runtime_error("lg_quadrature: mass left grid");
    beta /= mx;
    Eigen::MatrixXd w = alpha[n - 1].cwiseProduct(beta);
    Eigen::Matrix2d cov_unused;
    moments(w, res.smoothed_means[n - 1], cov_unused);
  }
  return res;
}

}  // namespace tfs::testing
