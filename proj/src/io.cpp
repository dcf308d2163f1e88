#include "steklov/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "steklov/util.hpp"

namespace steklov {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_density_csv(const Density& density, const BoundaryGrid& grid,
                       const std::string& path) {
  if (density.size() != grid.size()) {
    throw std::invalid_argument("write_density_csv: density does not match grid");
  }
  auto out = open_out(path);
  out << "theta,rho\n";
  for (int l = 0; l < grid.size(); ++l) {
    out << format_double(grid.params[l]) << ',' << format_double(density.values[l]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Density read_density_csv(const std::string& path, const BoundaryGrid& grid, double alpha,
                         double beta, double gamma) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open density file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty density file: " + path);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed density row in " + path + ": " + line);
    }
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("malformed density value in " + path + ": " + line);
    }
  }
  if (static_cast<int>(values.size()) != grid.size()) {
    throw std::runtime_error("density file row count does not match the grid: " + path);
  }
  Density d;
  d.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  d.alpha = alpha;
  d.beta = beta;
  d.gamma = gamma;
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

void write_scalar_csv(const BoundaryGrid& grid, const Eigen::VectorXd& values,
                      const std::string& value_name, const std::string& path) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("write_scalar_csv: values do not match grid");
  }
  auto out = open_out(path);
  out << "theta," << value_name << '\n';
  for (int l = 0; l < grid.size(); ++l) {
    out << format_double(grid.params[l]) << ',' << format_double(values[l]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_spectrum_json(const Spectrum& spectrum, const std::string& traces_csv_path,
                         const std::string& path) {
  nlohmann::json j;
  std::vector<std::string> eigs;
  eigs.reserve(static_cast<std::size_t>(spectrum.size()));
  for (int i = 0; i < spectrum.size(); ++i) eigs.push_back(format_double(spectrum.eigenvalues[i]));
  j["eigenvalues"] = eigs;
  j["traces_csv_path"] = traces_csv_path;
  j["density_fingerprint"] = to_hex(spectrum.density_fingerprint);
  j["asymmetry_norm"] = format_double(spectrum.asymmetry_norm);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_traces_csv(const Spectrum& spectrum, const BoundaryGrid& grid,
                      const std::string& path) {
  if (spectrum.traces.rows() != grid.size()) {
    throw std::invalid_argument("write_traces_csv: traces do not match grid");
  }
  auto out = open_out(path);
  out << "theta";
  for (int j = 0; j < spectrum.size(); ++j) out << ",u" << j;
  out << '\n';
  for (int l = 0; l < grid.size(); ++l) {
    out << format_double(grid.params[l]);
    for (int j = 0; j < spectrum.size(); ++j) out << ',' << format_double(spectrum.traces(l, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_history_csv(const std::vector<IterationRecord>& iterates, const std::string& path) {
  auto out = open_out(path);
  out << "iter,objective,step,violation\n";
  for (const auto& rec : iterates) {
    out << rec.iteration << ',' << format_double(rec.objective) << ','
        << format_double(rec.step) << ',' << format_double(rec.violation_measure) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_optimality_json(const OptimalityReport& report, const std::string& path) {
  nlohmann::json j;
  j["violation_measure"] = format_double(report.violation_measure);
  j["tau"] = format_double(report.tau);
  j["band"] = format_double(report.band);
  j["n_violating"] = report.n_violating;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  return to_hex(fnv1a64(bytes.data(), bytes.size()));
}

}  // namespace steklov
