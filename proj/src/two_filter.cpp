#include "tfs/two_filter.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tfs/errors.hpp"
#include "tfs/logweights.hpp"

namespace tfs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kFwdKey = 1, kBwdKey = 2, kCombineKey = 3;

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> ess_trace(const std::vector<ParticleSystem>& systems) {
  std::vector<double> trace;
  trace.reserve(systems.size());
  for (const auto& ps : systems) trace.push_back(ps.ess);
  return trace;
}

// log xi at a surviving (positively weighted) particle must be finite; a
// zero there means the artificial density does not dominate the target.
double checked_log_xi(const HmmModel& model, const State& x, int n,
                      double log_weight) {
  double lx = model.log_xi(x, n);
  if (log_weight != kNegInf && !std::isfinite(lx)) {
    throw InvalidDensityError(
        "two-filter combination: xi vanishes at a weighted particle at time " +
        std::to_string(n));
  }
  return lx;
}

}  // namespace

BetaWeights make_beta_weights(BetaScheme scheme,
                              const ParticleSystem& fwd_final,
                              const ParticleSystem& bwd_final) {
  auto build = [&](const ParticleSystem& ps) {
    const int n = ps.size();
    std::vector<double> beta(n);
    if (scheme == BetaScheme::Uniform) {
      for (double& b : beta) b = 1.0 / n;
      return beta;
    }
    // Proportional to the final unnormalized weights, floored so every
    // index keeps positive pairing probability.
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      beta[i] = std::max(std::exp(ps.log_weights_norm[i]), 1e-12);
      sum += beta[i];
    }
    for (double& b : beta) b /= sum;
    return beta;
  };
  return BetaWeights{build(fwd_final), build(bwd_final)};
}

std::vector<std::pair<int, int>> sample_pairings(RngStream& rng,
                                                 const BetaWeights& beta,
                                                 int count) {
  auto cumulative = [](const std::vector<double>& p) {
    std::vector<double> cum(p.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc += p[k];
      cum[k] = acc;
    }
    cum.back() = 1.0;
    return cum;
  };
  const std::vector<double> cum_f = cumulative(beta.forward);
  const std::vector<double> cum_b = cumulative(beta.backward);
  auto draw = [&rng](const std::vector<double>& cum) {
    double u = rng.uniform();
    return static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) -
                            cum.begin());
  };
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(count);
  for (int l = 0; l < count; ++l) {
    int i = draw(cum_f);
    int j = draw(cum_b);
    pairs.emplace_back(i, j);
  }
  return pairs;
}

EstimateReport estimate_n2(const HmmModel& model, RngStream& rng,
                           const TwoFilterConfig& cfg) {
  const auto start = Clock::now();
  const int T = model.horizon();
  const int t = cfg.meeting_time;
  if (t < 2 || t > T - 1) {
    throw std::invalid_argument(
        "estimate_n2: meeting time must satisfy 2 <= t <= T-1");
  }
  const FilterOptions opts{cfg.num_particles, cfg.resampling};
  RngStream fwd_rng = rng.substream(kFwdKey);
  RngStream bwd_rng = rng.substream(kBwdKey);
  const ForwardRun fwd = run_forward(model, fwd_rng, opts, t - 1, true);
  const BackwardRun bwd = run_backward(model, bwd_rng, opts, t, true);

  const ParticleSystem& ff = fwd.at_time(t - 1);
  const ParticleSystem& bf = bwd.at_time(t);
  const int N = cfg.num_particles;

  // Per-column part: log W_t^j - log xi_t(x_t^j).
  std::vector<double> col(N);
  for (int j = 0; j < N; ++j) {
    col[j] = bf.log_weights_unnorm[j] -
             checked_log_xi(model, bf.particles[j], t, bf.log_weights_unnorm[j]);
  }
  LogSumExpAccumulator total;
  for (int i = 0; i < N; ++i) {
    if (ff.log_weights_unnorm[i] == kNegInf) continue;
    LogSumExpAccumulator row;
    for (int j = 0; j < N; ++j) {
      if (bf.log_weights_unnorm[j] == kNegInf) continue;
      row.add(col[j] + model.log_f(ff.particles[i], bf.particles[j], t));
    }
    total.add(ff.log_weights_unnorm[i] + row.value());
  }
  double combine = total.value();
  if (!std::isfinite(combine)) {
    throw DegeneracyError(
        t, "estimate_n2: all pair terms vanish at the meeting time");
  }

  EstimateReport rep;
  rep.estimator = EstimatorKind::OrderN2;
  rep.meeting_time = t;
  rep.num_particles = N;
  rep.log_fwd_nc = fwd.log_nc_prefix(t - 2);
  rep.log_bwd_nc = bwd.log_nc_suffix(t + 1);
  rep.log_combine_term = combine - 2.0 * std::log(static_cast<double>(N));
  rep.log_p_hat = rep.log_fwd_nc + rep.log_bwd_nc + rep.log_combine_term;
  rep.ess_fwd_trace = ess_trace(fwd.systems);
  rep.ess_bwd_trace = ess_trace(bwd.systems);
  rep.wall_seconds = elapsed_seconds(start);
  return rep;
}

EstimateReport estimate_n(const HmmModel& model, RngStream& rng,
                          const TwoFilterConfig& cfg,
                          std::span<const StateFunctional> phis) {
  const auto start = Clock::now();
  const int T = model.horizon();
  const int t = cfg.meeting_time;
  if (t < 3 || t > T - 2) {
    throw std::invalid_argument(
        "estimate_n: meeting time must satisfy 3 <= t <= T-2");
  }
  const FilterOptions opts{cfg.num_particles, cfg.resampling};
  RngStream fwd_rng = rng.substream(kFwdKey);
  RngStream bwd_rng = rng.substream(kBwdKey);
  RngStream comb_rng = rng.substream(kCombineKey);
  const ForwardRun fwd = run_forward(model, fwd_rng, opts, t - 1, true);
  const BackwardRun bwd = run_backward(model, bwd_rng, opts, t + 1, true);

  const ParticleSystem& ff = fwd.at_time(t - 1);
  const ParticleSystem& bf = bwd.at_time(t + 1);
  const int N = cfg.num_particles;
  const Obs& yt = model.observations().at(t - 1);

  const BetaWeights beta = make_beta_weights(cfg.beta, ff, bf);
  const auto pairs = sample_pairings(comb_rng, beta, N);

  LogSumExpAccumulator total;
  std::vector<LogSumExpAccumulator> phi_pos(phis.size()), phi_neg(phis.size());
  for (int l = 0; l < N; ++l) {
    const auto [i, j] = pairs[l];
    const State& xf = ff.particles[i];
    const State& xb = bf.particles[j];
    const State xt = model.sample_combining_proposal(comb_rng, xf, xb, t);
    double term = ff.log_weights_unnorm[i] + bf.log_weights_unnorm[j];
    if (term != kNegInf) {
      term += model.log_f(xf, xt, t) + model.log_f(xt, xb, t + 1) +
              model.log_g(yt, xt, t) -
              checked_log_xi(model, xb, t + 1, bf.log_weights_unnorm[j]) -
              std::log(beta.forward[i]) - std::log(beta.backward[j]) -
              model.log_q_combine(xt, xf, xb, t);
    }
    total.add(term);
    for (std::size_t p = 0; p < phis.size(); ++p) {
      double v = phis[p](xt);
      if (v > 0.0) {
        phi_pos[p].add(term + std::log(v));
      } else if (v < 0.0) {
        phi_neg[p].add(term + std::log(-v));
      }
    }
  }
  double combine = total.value();
  if (!std::isfinite(combine)) {
    throw DegeneracyError(
        t, "estimate_n: all pairing terms vanish at the meeting time");
  }

  EstimateReport rep;
  rep.estimator = EstimatorKind::OrderN;
  rep.meeting_time = t;
  rep.num_particles = N;
  rep.log_fwd_nc = fwd.log_nc_prefix(t - 2);
  rep.log_bwd_nc = bwd.log_nc_suffix(t + 2);
  rep.log_combine_term = combine - 3.0 * std::log(static_cast<double>(N));
  rep.log_p_hat = rep.log_fwd_nc + rep.log_bwd_nc + rep.log_combine_term;
  rep.ess_fwd_trace = ess_trace(fwd.systems);
  rep.ess_bwd_trace = ess_trace(bwd.systems);
  // Smoothing functionals: the shared prefactors and 1/N^3 cancel in the
  // ratio, leaving signed log-space sums over the same terms.
  rep.smoothed.reserve(phis.size());
  for (std::size_t p = 0; p < phis.size(); ++p) {
    double pos = std::exp(phi_pos[p].value() - combine);
    double neg = std::exp(phi_neg[p].value() - combine);
    rep.smoothed.push_back(pos - neg);
  }
  rep.wall_seconds = elapsed_seconds(start);
  return rep;
}

double smooth_expectation(const HmmModel& model, RngStream& rng,
                          const TwoFilterConfig& cfg,
                          const StateFunctional& phi) {
  const StateFunctional phis[] = {phi};
  return estimate_n(model, rng, cfg, phis).smoothed.front();
}

EstimateReport estimate_forward_only(const HmmModel& model, RngStream& rng,
                                     const TwoFilterConfig& cfg) {
  const auto start = Clock::now();
  const FilterOptions opts{cfg.num_particles, cfg.resampling};
  RngStream fwd_rng = rng.substream(kFwdKey);
  const ForwardRun fwd = run_forward(model, fwd_rng, opts, model.horizon());

  EstimateReport rep;
  rep.estimator = EstimatorKind::ForwardOnly;
  rep.meeting_time = cfg.meeting_time;
  rep.num_particles = cfg.num_particles;
  rep.log_fwd_nc = fwd.log_nc;
  rep.log_bwd_nc = 0.0;
  rep.log_combine_term = 0.0;
  rep.log_p_hat = rep.log_fwd_nc;
  rep.ess_fwd_trace = ess_trace(fwd.systems);
  rep.wall_seconds = elapsed_seconds(start);
  return rep;
}

}  // namespace tfs
