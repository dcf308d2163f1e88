#ifndef STEKLOV_UTIL_HPP
#define STEKLOV_UTIL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

namespace steklov {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// FNV-1a over a byte range; used for content fingerprints of grids,
/// densities and output files.
std::uint64_t fnv1a64(const void* data, std::size_t n_bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t fnv1a64(const Eigen::VectorXd& v, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(const Eigen::MatrixXd& m, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Formats with 17 significant digits so that values round-trip exactly
/// through text output.
std::string format_double(double x);

std::string to_hex(std::uint64_t v);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Results must be
/// written to pre-allocated slots indexed by i, which keeps output ordering
/// independent of scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace steklov

#endif
