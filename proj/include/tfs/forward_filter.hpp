#ifndef TFS_FORWARD_FILTER_HPP
#define TFS_FORWARD_FILTER_HPP

#include "tfs/particle.hpp"

namespace tfs {

/// Forward SMC pass over times 1..n_stop, resampling every step except
/// (optionally) the last. log((1/N) sum W_n) factors accumulate into log_nc,
/// the running marginal-likelihood estimate.
struct ForwardRun {
  std::vector<ParticleSystem> systems;  // times 1..n_stop
  double log_nc = 0.0;                  // sum of all per-step factors
  bool resampled_last = true;

  /// Sum of the factors for n = 1..m only (the combination estimators need
  /// the prefix that excludes the final step).
  double log_nc_prefix(int m) const;
  const ParticleSystem& at_time(int n) const { return systems.at(n - 1); }
};

ParticleSystem forward_init(const HmmModel& model, RngStream& rng,
                            const FilterOptions& opts,
                            bool draw_ancestor_indices = true);

/// One propagate/weight/resample step; prev must carry ancestor indices.
ParticleSystem forward_step(const HmmModel& model, RngStream& rng,
                            const ParticleSystem& prev, int n, bool resample,
                            const FilterOptions& opts);

ForwardRun run_forward(const HmmModel& model, RngStream& rng,
                       const FilterOptions& opts, int n_stop,
                       bool skip_final_resample = false);

}  // namespace tfs

#endif  // TFS_FORWARD_FILTER_HPP
