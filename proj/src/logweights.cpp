#include "tfs/logweights.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tfs/errors.hpp"

namespace tfs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // empty, all -inf, or a +inf/NaN input
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_mean_exp(std::span<const double> v) {
  return log_sum_exp(v) - std::log(static_cast<double>(v.size()));
}

void LogSumExpAccumulator::add(double log_term) {
  ++count_;
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    sum_ += std::exp(log_term - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumExpAccumulator::value() const {
  if (!std::isfinite(max_)) return max_;
  return max_ + std::log(sum_);
}

NormalizedLogWeights normalize_log_weights(std::span<const double> log_unnorm,
                                           int time_index) {
  const std::size_t n = log_unnorm.size();
  for (double w : log_unnorm) {
    if (std::isnan(w)) {
      throw InvalidDensityError("NaN log weight at time step " +
                                std::to_string(time_index));
    }
  }
  double lse = log_sum_exp(log_unnorm);
  if (!std::isfinite(lse)) {
    throw DegeneracyError(time_index,
                          "all particle weights are zero at time step " +
                              std::to_string(time_index));
  }
  NormalizedLogWeights out;
  out.log_norm.resize(n);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.log_norm[i] = log_unnorm[i] - lse;
    double w = std::exp(out.log_norm[i]);
    sum_sq += w * w;
  }
  out.log_mean = lse - std::log(static_cast<double>(n));
  out.ess = 1.0 / sum_sq;
  return out;
}

double ess_from_log_norm(std::span<const double> log_norm) {
  double sum_sq = 0.0;
  for (double lw : log_norm) {
    double w = std::exp(lw);
    sum_sq += w * w;
  }
  return 1.0 / sum_sq;
}

}  // namespace tfs
