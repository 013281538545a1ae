#ifndef TFS_BACKWARD_FILTER_HPP
#define TFS_BACKWARD_FILTER_HPP

#include "tfs/particle.hpp"

namespace tfs {

/// Backward information filter over times T down to n_stop, targeting the
/// artificial-density sequence built from xi. Structurally the mirror of
/// ForwardRun: systems[k] is time T - k, and log_nc estimates the
/// xi-dependent normalizing constant of the target started at n_stop.
struct BackwardRun {
  std::vector<ParticleSystem> systems;  // times T, T-1, ..., n_stop
  double log_nc = 0.0;
  bool resampled_last = true;

  /// Sum of the factors for n = T down to m (excluding anything below m).
  double log_nc_suffix(int m) const;
  const ParticleSystem& at_time(int n) const;

 private:
  friend BackwardRun run_backward(const HmmModel&, RngStream&,
                                  const FilterOptions&, int, bool);
  int first_time_ = 0;  // == T of the generating model
};

ParticleSystem backward_init(const HmmModel& model, RngStream& rng,
                             const FilterOptions& opts,
                             bool draw_ancestor_indices = true);

/// One backward step to time n, proposing from the (resampled) particles at
/// n + 1. Weight:
///   xi_n(x_n) g(y_n|x_n) f(x_{n+1}|x_n) / (xi_{n+1}(x_{n+1}) q_n(x_n|x_{n+1})).
/// Throws InvalidDensityError if xi_{n+1} vanishes at a surviving particle.
ParticleSystem backward_step(const HmmModel& model, RngStream& rng,
                             const ParticleSystem& next, int n, bool resample,
                             const FilterOptions& opts);

BackwardRun run_backward(const HmmModel& model, RngStream& rng,
                         const FilterOptions& opts, int n_stop,
                         bool skip_final_resample = false);

}  // namespace tfs

#endif  // TFS_BACKWARD_FILTER_HPP
