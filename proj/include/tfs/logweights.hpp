#ifndef TFS_LOGWEIGHTS_HPP
#define TFS_LOGWEIGHTS_HPP

#include <span>
#include <vector>

namespace tfs {

/// log(sum(exp(v))); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> v);

/// log((1/n) * sum(exp(v))).
double log_mean_exp(std::span<const double> v);

/// Streaming log-sum-exp accumulator, so quadratic-cost reductions never
/// materialize their terms. Deterministic for a fixed feed order.
class LogSumExpAccumulator {
 public:
  void add(double log_term);
  double value() const;
  std::size_t count() const { return count_; }

 private:
  double max_ = -1.0 / 0.0;
  double sum_ = 0.0;  // sum of exp(term - max_)
  std::size_t count_ = 0;
};

struct NormalizedLogWeights {
  std::vector<double> log_norm;  // log w^i, log-sum-exp == 0
  double log_mean;               // log((1/N) sum W^i)
  double ess;                    // 1 / sum (w^i)^2, in (0, N]
};

/// Normalizes unnormalized log weights. Throws DegeneracyError when all
/// entries are -inf and InvalidDensityError on NaN.
NormalizedLogWeights normalize_log_weights(std::span<const double> log_unnorm,
                                           int time_index);

double ess_from_log_norm(std::span<const double> log_norm);

}  // namespace tfs

#endif  // TFS_LOGWEIGHTS_HPP
