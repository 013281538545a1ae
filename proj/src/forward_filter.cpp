#include "tfs/forward_filter.hpp"

#include <stdexcept>
#include <string>

namespace tfs {

double ForwardRun::log_nc_prefix(int m) const {
  double s = 0.0;
  for (int n = 1; n <= m; ++n) s += systems[n - 1].log_nc_factor;
  return s;
}

ParticleSystem forward_init(const HmmModel& model, RngStream& rng,
                            const FilterOptions& opts,
                            bool draw_ancestor_indices) {
  if (opts.num_particles < 1) {
    throw std::invalid_argument("forward_init: need at least one particle");
  }
  const int N = opts.num_particles;
  const State& x0 = model.initial_state();
  const Obs& y1 = model.observations().at(0);

  ParticleSystem ps;
  ps.time = 1;
  ps.particles.reserve(N);
  ps.log_weights_unnorm.reserve(N);
  for (int i = 0; i < N; ++i) {
    State x = model.sample_forward_proposal(rng, x0, 1);
    double lw = model.log_g(y1, x, 1) + model.log_f(x0, x, 1) -
                model.log_q_fwd(x, x0, 1);
    ps.particles.push_back(std::move(x));
    ps.log_weights_unnorm.push_back(lw);
  }
  finalize_weights(ps);
  if (draw_ancestor_indices) draw_ancestors(rng, ps, opts.resampling);
  return ps;
}

ParticleSystem forward_step(const HmmModel& model, RngStream& rng,
                            const ParticleSystem& prev, int n, bool resample,
                            const FilterOptions& opts) {
  if (n < 2) throw std::invalid_argument("forward_step: n must be >= 2");
  if (prev.time != n - 1) {
    throw std::logic_error("forward_step: previous system is at time " +
                           std::to_string(prev.time) + ", expected " +
                           std::to_string(n - 1));
  }
  if (!prev.resampled) {
    throw std::logic_error(
        "forward_step: previous system has no ancestor indices");
  }
  const int N = prev.size();
  const Obs& yn = model.observations().at(n - 1);

  ParticleSystem ps;
  ps.time = n;
  ps.particles.reserve(N);
  ps.log_weights_unnorm.reserve(N);
  for (int i = 0; i < N; ++i) {
    const State& parent = prev.particles[prev.ancestors[i]];
    State x = model.sample_forward_proposal(rng, parent, n);
    double lw = model.log_g(yn, x, n) + model.log_f(parent, x, n) -
                model.log_q_fwd(x, parent, n);
    ps.particles.push_back(std::move(x));
    ps.log_weights_unnorm.push_back(lw);
  }
  finalize_weights(ps);
  if (resample) draw_ancestors(rng, ps, opts.resampling);
  return ps;
}

ForwardRun run_forward(const HmmModel& model, RngStream& rng,
                       const FilterOptions& opts, int n_stop,
                       bool skip_final_resample) {
  if (n_stop < 1 || n_stop > model.horizon()) {
    throw std::invalid_argument("run_forward: n_stop outside 1..T");
  }
  ForwardRun run;
  run.systems.reserve(n_stop);
  run.systems.push_back(
      forward_init(model, rng, opts, !(skip_final_resample && n_stop == 1)));
  for (int n = 2; n <= n_stop; ++n) {
    bool resample = !(skip_final_resample && n == n_stop);
    run.systems.push_back(
        forward_step(model, rng, run.systems.back(), n, resample, opts));
  }
  run.log_nc = run.log_nc_prefix(n_stop);
  run.resampled_last = run.systems.back().resampled;
  return run;
}

}  // namespace tfs
