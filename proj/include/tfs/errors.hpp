#ifndef TFS_ERRORS_HPP
#define TFS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tfs {

/// Raised when every particle weight at one time step is zero (log weight
/// -inf). Surfacing this beats silently propagating a -inf estimate: it
/// almost always indicates a model or proposal bug.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(int time_index, const std::string& what)
      : std::runtime_error(what), time_index_(time_index) {}
  int time_index() const { return time_index_; }

 private:
  int time_index_;
};

/// Raised when a density evaluation violates its contract, e.g. an
/// artificial backward density evaluating to zero at a surviving particle,
/// or a NaN from a model callback.
class InvalidDensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration or input-file problem (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfs

#endif  // TFS_ERRORS_HPP
