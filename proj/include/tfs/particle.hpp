#ifndef TFS_PARTICLE_HPP
#define TFS_PARTICLE_HPP

#include <span>
#include <vector>

#include "tfs/hmm.hpp"
#include "tfs/rng.hpp"

namespace tfs {

/// Multinomial is the scheme the estimators' unbiasedness argument assumes;
/// systematic is available behind this switch but is not the default.
enum class ResamplingScheme { Multinomial, Systematic };

/// Weighted particle ensemble at one time step. All weight bookkeeping is in
/// log space; unnormalized weights are never materialized.
struct ParticleSystem {
  int time = 0;                          // n
  std::vector<State> particles;          // X_n^i
  std::vector<double> log_weights_unnorm;
  std::vector<double> log_weights_norm;  // log-sum-exp == 0
  std::vector<int> ancestors;            // a_n^i ~ categorical(w_n); empty when
                                         // resampling was suppressed
  double log_nc_factor = 0.0;            // log((1/N) sum_i W_n^i)
  double ess = 0.0;                      // 1 / sum_i (w_n^i)^2
  bool resampled = false;

  int size() const { return static_cast<int>(particles.size()); }
};

/// Normalizes log_weights_unnorm into log_weights_norm / log_nc_factor / ess.
/// Throws DegeneracyError if every weight is zero.
void finalize_weights(ParticleSystem& ps);

/// Draws ancestor indices from the normalized weights and marks the system
/// resampled.
void draw_ancestors(RngStream& rng, ParticleSystem& ps,
                    ResamplingScheme scheme);

/// N i.i.d. categorical draws (inverse CDF per draw).
std::vector<int> multinomial_resample(RngStream& rng,
                                      std::span<const double> log_norm);

/// One uniform, N stratified points.
std::vector<int> systematic_resample(RngStream& rng,
                                     std::span<const double> log_norm);

struct FilterOptions {
  int num_particles = 100;
  ResamplingScheme resampling = ResamplingScheme::Multinomial;
};

}  // namespace tfs

#endif  // TFS_PARTICLE_HPP
