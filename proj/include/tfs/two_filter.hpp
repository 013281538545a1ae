#ifndef TFS_TWO_FILTER_HPP
#define TFS_TWO_FILTER_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tfs/backward_filter.hpp"
#include "tfs/forward_filter.hpp"

namespace tfs {

enum class BetaScheme { Uniform, WeightProportional };
enum class EstimatorKind { OrderN2, OrderN, ForwardOnly };

struct TwoFilterConfig {
  int num_particles = 100;
  int meeting_time = 0;  // t; O(N) needs 3 <= t <= T-2, O(N^2) 2 <= t <= T-1
  BetaScheme beta = BetaScheme::Uniform;
  ResamplingScheme resampling = ResamplingScheme::Multinomial;
};

/// Pairing probabilities over the final forward / backward particle indices.
/// Each side sums to 1 and is strictly positive.
struct BetaWeights {
  std::vector<double> forward;
  std::vector<double> backward;
};

struct EstimateReport {
  double log_p_hat = 0.0;  // always log_fwd_nc + log_bwd_nc + log_combine_term
  double log_fwd_nc = 0.0;
  double log_bwd_nc = 0.0;
  double log_combine_term = 0.0;
  std::vector<double> ess_fwd_trace;
  std::vector<double> ess_bwd_trace;  // ordered T, T-1, ...
  std::vector<double> smoothed;       // one entry per requested functional
  EstimatorKind estimator = EstimatorKind::OrderN;
  int meeting_time = 0;
  int num_particles = 0;
  double wall_seconds = 0.0;
};

using StateFunctional = std::function<double(const State&)>;

BetaWeights make_beta_weights(BetaScheme scheme,
                              const ParticleSystem& fwd_final,
                              const ParticleSystem& bwd_final);

/// i(l) i.i.d. from beta.forward and j(l) i.i.d. from beta.backward,
/// independently.
std::vector<std::pair<int, int>> sample_pairings(RngStream& rng,
                                                 const BetaWeights& beta,
                                                 int count);

/// O(N^2) estimate: forward filter to t-1 and backward filter to t, final
/// resampling suppressed on both, combined through the transition /
/// artificial-density ratio. The double sum is streamed row-wise, never
/// materializing N^2 terms.
EstimateReport estimate_n2(const HmmModel& model, RngStream& rng,
                           const TwoFilterConfig& cfg);

/// O(N) estimate: forward to t-1, backward to t+1, beta-weighted pairings
/// and one combining draw per pair. When `phis` are supplied the report also
/// carries smoothing-expectation estimates E[phi(X_t) | y_{1:T}] computed
/// from the same pairings and draws as the likelihood estimate.
EstimateReport estimate_n(const HmmModel& model, RngStream& rng,
                          const TwoFilterConfig& cfg,
                          std::span<const StateFunctional> phis = {});

/// Smoothing expectation alone (ratio of the coupled numerator and
/// denominator estimates).
double smooth_expectation(const HmmModel& model, RngStream& rng,
                          const TwoFilterConfig& cfg,
                          const StateFunctional& phi);

/// Plain forward-filter estimate over the full horizon, for comparisons.
EstimateReport estimate_forward_only(const HmmModel& model, RngStream& rng,
                                     const TwoFilterConfig& cfg);

}  // namespace tfs

#endif  // TFS_TWO_FILTER_HPP
