#include "tfs/backward_filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tfs/errors.hpp"

namespace tfs {

double BackwardRun::log_nc_suffix(int m) const {
  double s = 0.0;
  for (const auto& ps : systems) {
    if (ps.time >= m) s += ps.log_nc_factor;
  }
  return s;
}

const ParticleSystem& BackwardRun::at_time(int n) const {
  return systems.at(first_time_ - n);
}

ParticleSystem backward_init(const HmmModel& model, RngStream& rng,
                             const FilterOptions& opts,
                             bool draw_ancestor_indices) {
  if (opts.num_particles < 1) {
    throw std::invalid_argument("backward_init: need at least one particle");
  }
  const int N = opts.num_particles;
  const int T = model.horizon();
  const Obs& yT = model.observations().at(T - 1);
  const State none;  // proposal at T is unconditional

  ParticleSystem ps;
  ps.time = T;
  ps.particles.reserve(N);
  ps.log_weights_unnorm.reserve(N);
  for (int i = 0; i < N; ++i) {
    State x = model.sample_backward_proposal(rng, none, T);
    double lw = model.log_xi(x, T) + model.log_g(yT, x, T) -
                model.log_q_bwd(x, none, T);
    ps.particles.push_back(std::move(x));
    ps.log_weights_unnorm.push_back(lw);
  }
  finalize_weights(ps);
  if (draw_ancestor_indices) draw_ancestors(rng, ps, opts.resampling);
  return ps;
}

ParticleSystem backward_step(const HmmModel& model, RngStream& rng,
                             const ParticleSystem& next, int n, bool resample,
                             const FilterOptions& opts) {
  if (n < 1 || n + 1 != next.time) {
    throw std::logic_error("backward_step: next system is at time " +
                           std::to_string(next.time) + ", expected " +
                           std::to_string(n + 1));
  }
  if (!next.resampled) {
    throw std::logic_error(
        "backward_step: next system has no ancestor indices");
  }
  const int N = next.size();
  const Obs& yn = model.observations().at(n - 1);

  ParticleSystem ps;
  ps.time = n;
  ps.particles.reserve(N);
  ps.log_weights_unnorm.reserve(N);
  for (int i = 0; i < N; ++i) {
    const State& parent = next.particles[next.ancestors[i]];
    double log_xi_next = model.log_xi(parent, n + 1);
    if (!std::isfinite(log_xi_next)) {
      throw InvalidDensityError(
          "backward_step: xi vanishes at a surviving particle at time " +
          std::to_string(n + 1));
    }
    State x = model.sample_backward_proposal(rng, parent, n);
    double lw = model.log_xi(x, n) + model.log_g(yn, x, n) +
                model.log_f(x, parent, n + 1) - log_xi_next -
                model.log_q_bwd(x, parent, n);
    ps.particles.push_back(std::move(x));
    ps.log_weights_unnorm.push_back(lw);
  }
  finalize_weights(ps);
  if (resample) draw_ancestors(rng, ps, opts.resampling);
  return ps;
}

BackwardRun run_backward(const HmmModel& model, RngStream& rng,
                         const FilterOptions& opts, int n_stop,
                         bool skip_final_resample) {
  const int T = model.horizon();
  if (n_stop < 1 || n_stop > T) {
    throw std::invalid_argument("run_backward: n_stop outside 1..T");
  }
  BackwardRun run;
  run.first_time_ = T;
  run.systems.reserve(T - n_stop + 1);
  run.systems.push_back(
      backward_init(model, rng, opts, !(skip_final_resample && n_stop == T)));
  for (int n = T - 1; n >= n_stop; --n) {
    bool resample = !(skip_final_resample && n == n_stop);
    run.systems.push_back(
        backward_step(model, rng, run.systems.back(), n, resample, opts));
  }
  run.log_nc = run.log_nc_suffix(n_stop);
  run.resampled_last = run.systems.back().resampled;
  return run;
}

}  // namespace tfs
