#ifndef TFS_FFBSI_HPP
#define TFS_FFBSI_HPP

#include "tfs/forward_filter.hpp"
#include "tfs/two_filter.hpp"

namespace tfs {

struct FfbsiOptions {
  int num_trajectories = 100;        // M
  double transition_density_bound;   // with f <= bound everywhere
  int cap_multiplier = 5;            // rejection cap ceil(cap*N); 0 = always
                                     // use the exhaustive categorical draw
};

struct FfbsiTrajectorySet {
  std::vector<std::vector<int>> index_paths;      // M x T forward-run indices
  std::vector<std::vector<State>> trajectories;   // M x T states x_1..x_T
  // Rejection-sampling cost diagnostics, indexed by backward step
  // (entry k covers the draw of time T-1-k).
  std::vector<std::uint64_t> proposals_per_step;
  std::vector<std::uint64_t> fallbacks_per_step;
};

/// Backward-simulation smoother over a completed forward run (resampled at
/// every step). Trajectory indices at T follow the final normalized weights;
/// earlier indices are drawn by rejection against the transition bound, with
/// an exact exhaustive categorical fallback after the cap.
FfbsiTrajectorySet ffbsi_sample(const HmmModel& model, const ForwardRun& fwd,
                                RngStream& rng, const FfbsiOptions& opts);

/// (1/M) sum_m phi(x_t^(m)).
double ffbsi_expectation(const FfbsiTrajectorySet& set, int t,
                         const StateFunctional& phi);

}  // namespace tfs

#endif  // TFS_FFBSI_HPP
