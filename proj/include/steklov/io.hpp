#ifndef STEKLOV_IO_HPP
#define STEKLOV_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklov/bathtub.hpp"
#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"
#include "steklov/optimizer.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// CSV with header theta,rho; one row per node, 17 significant digits.
void write_density_csv(const Density& density, const BoundaryGrid& grid, const std::string& path);

/// Reads a theta,rho CSV produced by write_density_csv (theta is
/// informational; values are matched to the grid by row order). The box and
/// mass parameters are attached by the caller. Throws std::runtime_error on
/// malformed input or row-count mismatch.
Density read_density_csv(const std::string& path, const BoundaryGrid& grid, double alpha,
                         double beta, double gamma);

/// CSV with header theta,w.
void write_scalar_csv(const BoundaryGrid& grid, const Eigen::VectorXd& values,
                      const std::string& value_name, const std::string& path);

/// JSON object {eigenvalues, traces_csv_path, density_fingerprint,
/// asymmetry_norm}.
void write_spectrum_json(const Spectrum& spectrum, const std::string& traces_csv_path,
                         const std::string& path);

/// CSV with header theta,u0,u1,...; trace column per computed mode.
void write_traces_csv(const Spectrum& spectrum, const BoundaryGrid& grid, const std::string& path);

/// CSV with header iter,objective,step,violation.
void write_history_csv(const std::vector<IterationRecord>& iterates, const std::string& path);

/// JSON object {violation_measure, tau, band, n_violating}.
void write_optimality_json(const OptimalityReport& report, const std::string& path);

/// FNV-1a hash of a file's bytes, as 16 hex digits. Throws on unreadable
/// files.
std::string file_content_hash(const std::string& path);

}  // namespace steklov

#endif
