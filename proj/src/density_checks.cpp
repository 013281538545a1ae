#include "tfs/density_checks.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace tfs {

namespace {

// Trapezoid mass of a 2-d log-density over an axis-aligned box: half-width
// 8.5 marginal sd of `span_cov`, spacing a quarter of the conditional sd of
// `scale_cov` (the narrowest density the box may contain). Gaussian-tailed
// integrands make the trapezoid rule exponentially accurate at this
// resolution. A misplaced box loses mass, so placement errors fail the
// check rather than masking one.
double gaussian_mass_2d(const std::function<double(double, double)>& log_f,
                        const Eigen::Vector2d& mean,
                        const Eigen::Matrix2d& span_cov,
                        const Eigen::Matrix2d& scale_cov) {
  const Eigen::Matrix2d prec = scale_cov.inverse();
  double mass = 0.0;
  std::array<int, 2> n;
  std::array<double, 2> lo, h;
  for (int a = 0; a < 2; ++a) {
    double marg_sd = std::sqrt(span_cov(a, a));
    double cond_sd = 1.0 / std::sqrt(prec(a, a));
    double half = 8.5 * marg_sd;
    h[a] = 0.25 * cond_sd;
    n[a] = std::min(2001, static_cast<int>(std::ceil(2.0 * half / h[a])) + 1);
    h[a] = 2.0 * half / (n[a] - 1);
    lo[a] = mean(a) - half;
  }
  for (int i = 0; i < n[0]; ++i) {
    double wx = (i == 0 || i == n[0] - 1) ? 0.5 : 1.0;
    double x = lo[0] + i * h[0];
    double row = 0.0;
    for (int j = 0; j < n[1]; ++j) {
      double wy = (j == 0 || j == n[1] - 1) ? 0.5 : 1.0;
      row += wy * std::exp(log_f(x, lo[1] + j * h[1]));
    }
    mass += wx * row;
  }
  return mass * h[0] * h[1];
}

std::string describe(const char* name, int n, double mass, double tol) {
  std::ostringstream os;
  os << name << " at time " << n << ": quadrature mass " << mass
     << " deviates from 1 by more than " << tol;
  return os.str();
}

}  // namespace

double trapezoid_mass_1d(const std::function<double(double)>& log_density,
                         double lo, double hi, int points) {
  const double h = (hi - lo) / (points - 1);
  double mass = 0.0;
  for (int i = 0; i < points; ++i) {
    double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    mass += w * std::exp(log_density(lo + i * h));
  }
  return mass * h;
}

DensityCheckReport check_densities(const LinearGaussianModel& model,
                                   const std::vector<State>& grid,
                                   const std::vector<int>& times) {
  DensityCheckReport rep;
  const auto& sys = model.system();
  const Eigen::Matrix2d Q = sys.Q;
  const double tau2 = model.tau2();
  auto vec2 = [](const State& s) { return Eigen::Vector2d(s(0), s(1)); };

  for (int n : times) {
    const Eigen::Matrix2d pred_cov = model.kalman().predicted[n - 1].cov;
    const Eigen::Vector2d pred_mean = model.kalman().predicted[n - 1].mean;
    // Narrowest density in play: the fully informed conditional.
    const Eigen::Matrix2d scale_cov =
        (Q.inverse() + sys.G.row(0).transpose() * sys.G.row(0) / tau2 +
         sys.F.transpose() * Q.inverse() * sys.F)
            .inverse();

    // xi_n normalization (predictive density).
    {
      auto lf = [&](double a, double b) {
        return model.log_xi(Eigen::Vector2d(a, b), n);
      };
      double mass = gaussian_mass_2d(lf, pred_mean, pred_cov, scale_cov);
      if (std::abs(mass - 1.0) > 1e-5) rep.note(describe("xi", n, mass, 1e-5));
    }

    for (const State& xp : grid) {
      // Transition density in its second argument.
      {
        auto lf = [&](double a, double b) {
          return model.log_f(xp, Eigen::Vector2d(a, b), n);
        };
        Eigen::Vector2d m = sys.F * vec2(xp);
        Eigen::Matrix2d C = Q;
        if (n == 1) {
          m = sys.F * sys.mu0;
          C = sys.F * sys.Sigma0 * sys.F.transpose() + Q;
        }
        double mass = gaussian_mass_2d(lf, m, C, scale_cov);
        if (std::abs(mass - 1.0) > 1e-5) {
          rep.note(describe("transition", n, mass, 1e-5));
        }
      }
      // Forward proposal. The optimal proposal sits between the prior mean
      // and the observation; widen the box hint by that offset so it always
      // covers the mass.
      {
        auto lf = [&](double a, double b) {
          return model.log_q_fwd(Eigen::Vector2d(a, b), xp, n);
        };
        Eigen::Vector2d m = sys.F * vec2(xp);
        if (n == 1) m = sys.F * sys.mu0;
        Eigen::Vector2d d(m(0) - model.observations()[n - 1](0), 0.0);
        m(0) = 0.5 * (m(0) + model.observations()[n - 1](0));
        Eigen::Matrix2d C = Q + pred_cov + d * d.transpose();
        double mass = gaussian_mass_2d(lf, m, C, scale_cov);
        if (std::abs(mass - 1.0) > 1e-5) {
          rep.note(describe("forward proposal", n, mass, 1e-5));
        }
      }
      // Backward proposal (conditional on x_{n+1} = F x_prev as a probe).
      {
        Eigen::Vector2d xnext = sys.F * vec2(xp);
        auto lf = [&](double a, double b) {
          return model.log_q_bwd(Eigen::Vector2d(a, b), xnext, n);
        };
        Eigen::Vector2d m = 0.5 * (pred_mean + xnext);
        Eigen::Vector2d d1 = pred_mean - xnext;
        Eigen::Vector2d d2(m(0) - model.observations()[n - 1](0), 0.0);
        Eigen::Matrix2d C =
            Q + pred_cov + d1 * d1.transpose() + d2 * d2.transpose();
        double mass = gaussian_mass_2d(lf, m, C, scale_cov);
        if (std::abs(mass - 1.0) > 1e-5) {
          rep.note(describe("backward proposal", n, mass, 1e-5));
        }
      }
      // Observation density over y.
      {
        double m = sys.G.row(0).dot(xp);
        auto lf = [&](double y) {
          return model.log_g(Obs::Constant(1, y), xp, n);
        };
        double sd = std::sqrt(tau2);
        double mass = trapezoid_mass_1d(lf, m - 10 * sd, m + 10 * sd, 2001);
        if (std::abs(mass - 1.0) > 1e-6) {
          rep.note(describe("observation", n, mass, 1e-6));
        }
      }
    }
  }
  return rep;
}

DensityCheckReport check_densities(const DiscreteHmm& hmm) {
  DensityCheckReport rep;
  auto check_rows = [&rep](const Eigen::MatrixXd& m, const char* name) {
    for (int i = 0; i < m.rows(); ++i) {
      if (std::abs(m.row(i).sum() - 1.0) > 1e-12) {
        std::ostringstream os;
        os << name << " row " << i << " sums to " << m.row(i).sum();
        rep.note(os.str());
      }
    }
  };
  check_rows(hmm.transition, "transition");
  check_rows(hmm.emission, "emission");
  check_rows(hmm.xi, "xi");
  return rep;
}

}  // namespace tfs
