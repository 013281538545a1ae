#ifndef TFS_DENSITY_CHECKS_HPP
#define TFS_DENSITY_CHECKS_HPP

#include <string>
#include <vector>

#include "tfs/discrete.hpp"
#include "tfs/linear_gaussian.hpp"

namespace tfs {

struct DensityCheckReport {
  bool passed = true;
  std::vector<std::string> violations;  // density name + location

  void note(const std::string& v) {
    passed = false;
    violations.push_back(v);
  }
};

/// Trapezoid mass of exp(log_density) over [lo, hi] with `points` nodes.
double trapezoid_mass_1d(const std::function<double(double)>& log_density,
                         double lo, double hi, int points);

/// Quadrature-based normalization checks for the linear Gaussian model:
/// transition and proposal densities at each conditioning state in `grid`
/// (mass 1 within 1e-5 on a 2-d grid), the scalar observation density
/// (1e-6), and the xi sequence (1e-5) at the given times.
DensityCheckReport check_densities(const LinearGaussianModel& model,
                                   const std::vector<State>& grid,
                                   const std::vector<int>& times);

/// Exact row-sum checks for a discrete model (transition, emission, xi).
DensityCheckReport check_densities(const DiscreteHmm& hmm);

}  // namespace tfs

#endif  // TFS_DENSITY_CHECKS_HPP
