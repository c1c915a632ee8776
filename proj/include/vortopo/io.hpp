#ifndef VORTOPO_IO_HPP
#define VORTOPO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortopo/field.hpp"
#include "vortopo/mesh.hpp"
#include "vortopo/orbit.hpp"
#include "vortopo/perturb.hpp"
#include "vortopo/tracer.hpp"

namespace vortopo {

struct ClassifyConfig {
  std::vector<double> psi;
  double sigma = 0.1;
};

struct TraceConfig {
  std::vector<double> psi_targets;
  std::vector<Point3> seeds;
  TracerSettings settings;
};

struct SurfaceConfig {
  std::vector<double> psi;
  int resolution = 128;
};

struct OrbitRunConfig {
  double charge;
  double mass;
  Point3 position;
  OrbitConfig config;
};

struct FractionSweepConfig {
  double ratio_min = 0.05;
  double ratio_max = 0.95;
  int points = 50;
};

struct RunConfig {
  VortexParams vortex;
  std::optional<PerturbationParams> perturbation;
  std::optional<PerturbationSpectrum> spectrum;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::optional<ClassifyConfig> classify;
  std::optional<TraceConfig> trace;
  std::optional<SurfaceConfig> surface;
  std::optional<OrbitRunConfig> orbit;
  std::optional<FractionSweepConfig> fraction_sweep;

  // The perturbation block is required by every command except reduce.
  const PerturbationParams& require_perturbation() const;
  const PerturbationSpectrum& require_spectrum() const;
};

// Strict parse: every unknown key anywhere is a ConfigError, as is any
// missing required field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

PerturbationSpectrum parse_spectrum(const nlohmann::json& j);
nlohmann::json spectrum_to_json(const PerturbationSpectrum& s);

// Round-trip-exact double formatting (17 significant digits).
std::string format_double(double v);

// CSV with a header row; every numeric cell uses format_double.
std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows);

std::vector<std::uint8_t> stl_binary_from_mesh(const TriMesh& mesh);
nlohmann::json mesh_to_json(const TriMesh& mesh);

nlohmann::json surface_report_to_json(const SurfaceReport& rep);

std::vector<std::vector<double>> field_line_rows(const FieldLine& line);
std::vector<std::vector<double>> trajectory_rows(const Trajectory& traj);

// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a64_hex(const void* data, std::size_t size);

// Collects emitted files and writes out/manifest.json listing each with its
// size and hash.
class OutputManifest {
 public:
  explicit OutputManifest(std::filesystem::path dir);
  // Writes bytes to dir/name and records the entry.
  void write_file(const std::string& name, const std::string& bytes);
  void write_file(const std::string& name, const std::vector<std::uint8_t>& bytes);
  void finalize() const;  // writes manifest.json

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  nlohmann::json entries_ = nlohmann::json::array();
};

// Recomputes hashes for every manifest entry; returns mismatched names.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace vortopo

#endif
