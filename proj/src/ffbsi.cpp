#include "tfs/ffbsi.hpp"

#include <cmath>
#include <stdexcept>

#include "tfs/logweights.hpp"

namespace tfs {

namespace {

int categorical_from_log_norm(RngStream& rng,
                              std::span<const double> log_norm) {
  double u = rng.uniform();
  double c = 0.0;
  const int n = static_cast<int>(log_norm.size());
  for (int k = 0; k < n; ++k) {
    c += std::exp(log_norm[k]);
    if (u < c) return k;
  }
  return n - 1;
}

}  // namespace

FfbsiTrajectorySet ffbsi_sample(const HmmModel& model, const ForwardRun& fwd,
                                RngStream& rng, const FfbsiOptions& opts) {
  const int T = model.horizon();
  if (static_cast<int>(fwd.systems.size()) != T) {
    throw std::invalid_argument("ffbsi_sample: forward run must cover 1..T");
  }
  const int M = opts.num_trajectories;
  const int N = fwd.systems.front().size();
  const double log_bound = std::log(opts.transition_density_bound);
  const std::uint64_t cap =
      static_cast<std::uint64_t>(opts.cap_multiplier) *
      static_cast<std::uint64_t>(N);

  FfbsiTrajectorySet set;
  set.index_paths.assign(M, std::vector<int>(T));
  set.trajectories.assign(M, std::vector<State>(T));
  set.proposals_per_step.assign(T > 1 ? T - 1 : 0, 0);
  set.fallbacks_per_step.assign(T > 1 ? T - 1 : 0, 0);

  for (int m = 0; m < M; ++m) {
    RngStream traj_rng = rng.substream(static_cast<std::uint64_t>(m));
    auto& idx = set.index_paths[m];
    auto& traj = set.trajectories[m];

    idx[T - 1] = categorical_from_log_norm(
        traj_rng, fwd.systems[T - 1].log_weights_norm);
    traj[T - 1] = fwd.systems[T - 1].particles[idx[T - 1]];

    for (int n = T - 1; n >= 1; --n) {
      const ParticleSystem& sys = fwd.systems[n - 1];
      const State& chosen_next = traj[n];  // x_{n+1}
      int drawn = -1;
      std::uint64_t attempts = 0;
      while (attempts < cap) {
        ++attempts;
        int j = categorical_from_log_norm(traj_rng, sys.log_weights_norm);
        double lf = model.log_f(sys.particles[j], chosen_next, n + 1);
        if (lf > log_bound + 1e-9) {
          throw std::logic_error(
              "ffbsi_sample: transition density exceeds the supplied bound");
        }
        if (std::log(traj_rng.uniform()) < lf - log_bound) {
          drawn = j;
          break;
        }
      }
      set.proposals_per_step[T - 1 - n] += attempts;
      if (drawn < 0) {
        // Exact categorical over w_n^i f(x_{n+1} | x_n^i).
        ++set.fallbacks_per_step[T - 1 - n];
        std::vector<double> lw(N);
        for (int i = 0; i < N; ++i) {
          lw[i] = sys.log_weights_norm[i] +
                  model.log_f(sys.particles[i], chosen_next, n + 1);
        }
        NormalizedLogWeights nw = normalize_log_weights(lw, n);
        drawn = categorical_from_log_norm(traj_rng, nw.log_norm);
      }
      idx[n - 1] = drawn;
      traj[n - 1] = sys.particles[drawn];
    }
  }
  return set;
}

double ffbsi_expectation(const FfbsiTrajectorySet& set, int t,
                         const StateFunctional& phi) {
  if (t < 1 || t > static_cast<int>(set.trajectories.front().size())) {
    throw std::out_of_range("ffbsi_expectation: t out of range");
  }
  double s = 0.0;
  for (const auto& traj : set.trajectories) s += phi(traj[t - 1]);
  return s / static_cast<double>(set.trajectories.size());
}

}  // namespace tfs
