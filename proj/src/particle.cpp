#include "tfs/particle.hpp"

#include <algorithm>
#include <cmath>

#include "tfs/logweights.hpp"

namespace tfs {

void finalize_weights(ParticleSystem& ps) {
  NormalizedLogWeights nw = normalize_log_weights(ps.log_weights_unnorm, ps.time);
  ps.log_weights_norm = std::move(nw.log_norm);
  ps.log_nc_factor = nw.log_mean;
  ps.ess = nw.ess;
}

namespace {

std::vector<double> cumulative_probs(std::span<const double> log_norm) {
  std::vector<double> cum(log_norm.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < log_norm.size(); ++i) {
    acc += std::exp(log_norm[i]);
    cum[i] = acc;
  }
  cum.back() = 1.0;  // guard against rounding at the top end
  return cum;
}

}  // namespace

std::vector<int> multinomial_resample(RngStream& rng,
                                      std::span<const double> log_norm) {
  const std::vector<double> cum = cumulative_probs(log_norm);
  std::vector<int> idx(log_norm.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double u = rng.uniform();
    idx[i] = static_cast<int>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  }
  return idx;
}

std::vector<int> systematic_resample(RngStream& rng,
                                     std::span<const double> log_norm) {
  const std::size_t n = log_norm.size();
  const std::vector<double> cum = cumulative_probs(log_norm);
  std::vector<int> idx(n);
  double u = rng.uniform() / static_cast<double>(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double point = u + static_cast<double>(i) / static_cast<double>(n);
    while (cum[j] < point) ++j;
    idx[i] = static_cast<int>(j);
  }
  return idx;
}

void draw_ancestors(RngStream& rng, ParticleSystem& ps,
                    ResamplingScheme scheme) {
  ps.ancestors = (scheme == ResamplingScheme::Multinomial)
                     ? multinomial_resample(rng, ps.log_weights_norm)
                     : systematic_resample(rng, ps.log_weights_norm);
  ps.resampled = true;
}

}  // namespace tfs
