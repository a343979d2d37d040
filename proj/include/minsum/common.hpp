#ifndef MINSUM_COMMON_HPP
#define MINSUM_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace minsum {

// Error categories surfaced by the library.  Everything derives from
// MinsumError so callers can catch one type at the CLI boundary.
struct MinsumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyClusterError : MinsumError {
  using MinsumError::MinsumError;
};
struct InvalidLabelingError : MinsumError {
  using MinsumError::MinsumError;
};
struct MismatchError : MinsumError {
  using MinsumError::MinsumError;
};
struct TooLargeError : MinsumError {
  using MinsumError::MinsumError;
};
struct InfeasibleError : MinsumError {
  using MinsumError::MinsumError;
};
struct DegenerateDistributionError : MinsumError {
  using MinsumError::MinsumError;
};
struct InvalidAlphaError : MinsumError {
  using MinsumError::MinsumError;
};
struct DuplicateSetError : MinsumError {
  using MinsumError::MinsumError;
};
struct ParseError : MinsumError {
  using MinsumError::MinsumError;
};
struct ConfigError : MinsumError {
  using MinsumError::MinsumError;
};

inline bool rel_close(double a, double b, double tol = 1e-9) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

// Floor/ceil with a scale-aware guard so that values sitting one ulp off an
// integer (e.g. 0.8 * 10) round the way exact arithmetic would.
inline std::int64_t guarded_floor(double x) {
  double eps = 1e-9 * (std::fabs(x) + 1.0);
  return static_cast<std::int64_t>(std::floor(x + eps));
}

inline std::int64_t guarded_ceil(double x) {
  double eps = 1e-9 * (std::fabs(x) + 1.0);
  return static_cast<std::int64_t>(std::ceil(x - eps));
}

}  // namespace minsum

#endif  // MINSUM_COMMON_HPP
