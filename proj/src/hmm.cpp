#include "tfs/hmm.hpp"

#include <stdexcept>

namespace tfs {

State HmmModel::sample_initial(RngStream&) const { return initial_state(); }

SimulatedPath simulate(const HmmModel& model, RngStream& rng, int T) {
  if (T < 1) throw std::invalid_argument("simulate: T must be >= 1");
  SimulatedPath path;
  path.states.reserve(T + 1);
  path.observations.reserve(T);
  path.states.push_back(model.sample_initial(rng));
  for (int n = 1; n <= T; ++n) {
    path.states.push_back(model.sample_transition(rng, path.states.back(), n));
    path.observations.push_back(model.sample_observation(rng, path.states.back(), n));
  }
  return path;
}

}  // namespace tfs
