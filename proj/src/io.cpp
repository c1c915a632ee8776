#include "vortopo/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "vortopo/errors.hpp"

namespace vortopo {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

double require_number(const json& j, const std::string& where,
                      const char* key) {
  if (!j.contains(key))
    throw ConfigError("config: missing '" + std::string(key) + "' in " + where);
  if (!j[key].is_number())
    throw ConfigError("config: '" + std::string(key) + "' in " + where +
                      " must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError("config: '" + std::string(key) + "' must be a number");
  return j[key].get<double>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError("config: " + where + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number())
      throw ConfigError("config: " + where + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Point3 point_from(const json& j, const std::string& where) {
  const auto v = number_list(j, where);
  if (v.size() != 3)
    throw ConfigError("config: " + where + " must have 3 components");
  return {v[0], v[1], v[2]};
}

}  // namespace

const PerturbationParams& RunConfig::require_perturbation() const {
  if (!perturbation)
    throw ConfigError("config: this command requires a 'perturbation' block");
  return *perturbation;
}

const PerturbationSpectrum& RunConfig::require_spectrum() const {
  if (!spectrum)
    throw ConfigError("config: this command requires a 'spectrum' block");
  return *spectrum;
}

PerturbationSpectrum parse_spectrum(const json& j) {
  reject_unknown_keys(j, "spectrum", {"modes"});
  if (!j.contains("modes") || !j["modes"].is_array())
    throw ConfigError("config: spectrum needs a 'modes' array");
  PerturbationSpectrum s;
  for (const auto& mj : j["modes"]) {
    reject_unknown_keys(mj, "spectrum mode", {"n", "samples"});
    SpectrumMode mode;
    if (!mj.contains("n") || !mj["n"].is_number_integer())
      throw ConfigError("config: spectrum mode needs integer 'n'");
    mode.n = mj["n"].get<int>();
    if (!mj.contains("samples") || !mj["samples"].is_array())
      throw ConfigError("config: spectrum mode needs 'samples'");
    for (const auto& sj : mj["samples"]) {
      const auto v = number_list(sj, "spectrum sample");
      if (v.size() != 3)
        throw ConfigError("config: spectrum samples are [k, re, im] triples");
      mode.samples.push_back({v[0], {v[1], v[2]}});
    }
    s.modes.push_back(std::move(mode));
  }
  s.validate();
  return s;
}

json spectrum_to_json(const PerturbationSpectrum& s) {
  json modes = json::array();
  for (const auto& mode : s.modes) {
    json samples = json::array();
    for (const auto& smp : mode.samples)
      samples.push_back({smp.k, smp.weight.real(), smp.weight.imag()});
    modes.push_back({{"n", mode.n}, {"samples", samples}});
  }
  return json{{"modes", modes}};
}

RunConfig parse_config(const json& j) {
  reject_unknown_keys(j, "top level",
                      {"vortex", "perturbation", "spectrum", "seed",
                       "output_dir", "classify", "trace", "surface", "orbit",
                       "fraction_sweep"});
  RunConfig cfg;
  if (!j.contains("vortex"))
    throw ConfigError("config: missing required 'vortex' block");
  reject_unknown_keys(j["vortex"], "vortex", {"B0", "r_s", "z_s"});
  cfg.vortex = {require_number(j["vortex"], "vortex", "B0"),
                require_number(j["vortex"], "vortex", "r_s"),
                require_number(j["vortex"], "vortex", "z_s")};
  cfg.vortex.validate();

  if (j.contains("perturbation")) {
    reject_unknown_keys(j["perturbation"], "perturbation", {"alpha", "k"});
    cfg.perturbation =
        PerturbationParams{require_number(j["perturbation"], "perturbation", "alpha"),
                           require_number(j["perturbation"], "perturbation", "k")};
    cfg.perturbation->validate();
  }
  if (j.contains("spectrum")) cfg.spectrum = parse_spectrum(j["spectrum"]);

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      throw ConfigError("config: 'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }

  if (j.contains("classify")) {
    reject_unknown_keys(j["classify"], "classify", {"psi", "sigma"});
    ClassifyConfig cc;
    if (!j["classify"].contains("psi"))
      throw ConfigError("config: classify needs a 'psi' list");
    cc.psi = number_list(j["classify"]["psi"], "classify.psi");
    cc.sigma = number_or(j["classify"], "sigma", 0.1);
    cfg.classify = cc;
  }

  if (j.contains("trace")) {
    reject_unknown_keys(j["trace"], "trace",
                        {"psi_targets", "seeds", "rel_tol", "abs_tol",
                         "max_arc_length", "closure_eps", "escape_radius"});
    TraceConfig tc;
    tc.settings = TracerSettings::defaults(cfg.vortex);
    const auto& tj = j["trace"];
    if (tj.contains("psi_targets"))
      tc.psi_targets = number_list(tj["psi_targets"], "trace.psi_targets");
    if (tj.contains("seeds"))
      for (const auto& sj : tj["seeds"])
        tc.seeds.push_back(point_from(sj, "trace.seeds entry"));
    if (tc.psi_targets.empty() && tc.seeds.empty())
      throw ConfigError("config: trace needs 'psi_targets' or 'seeds'");
    tc.settings.rel_tol = number_or(tj, "rel_tol", tc.settings.rel_tol);
    tc.settings.abs_tol = number_or(tj, "abs_tol", tc.settings.abs_tol);
    tc.settings.max_arc_length =
        number_or(tj, "max_arc_length", tc.settings.max_arc_length);
    tc.settings.closure_eps =
        number_or(tj, "closure_eps", tc.settings.closure_eps);
    tc.settings.escape_radius =
        number_or(tj, "escape_radius", tc.settings.escape_radius);
    tc.settings.validate();
    cfg.trace = tc;
  }

  if (j.contains("surface")) {
    reject_unknown_keys(j["surface"], "surface", {"psi", "resolution"});
    SurfaceConfig sc;
    if (!j["surface"].contains("psi"))
      throw ConfigError("config: surface needs a 'psi' list");
    sc.psi = number_list(j["surface"]["psi"], "surface.psi");
    sc.resolution =
        static_cast<int>(number_or(j["surface"], "resolution", 128));
    cfg.surface = sc;
  }

  if (j.contains("orbit")) {
    reject_unknown_keys(j["orbit"], "orbit",
                        {"charge", "mass", "position", "s", "dt_tau",
                         "duration_tau", "decimation"});
    OrbitRunConfig oc;
    oc.charge = require_number(j["orbit"], "orbit", "charge");
    oc.mass = require_number(j["orbit"], "orbit", "mass");
    if (!j["orbit"].contains("position"))
      throw ConfigError("config: orbit needs 'position'");
    oc.position = point_from(j["orbit"]["position"], "orbit.position");
    oc.config.s_target = number_or(j["orbit"], "s", oc.config.s_target);
    oc.config.dt_tau = number_or(j["orbit"], "dt_tau", oc.config.dt_tau);
    oc.config.duration_tau =
        number_or(j["orbit"], "duration_tau", oc.config.duration_tau);
    oc.config.decimation = static_cast<std::uint64_t>(
        number_or(j["orbit"], "decimation", double(oc.config.decimation)));
    oc.config.validate();
    cfg.orbit = oc;
  }

  if (j.contains("fraction_sweep")) {
    reject_unknown_keys(j["fraction_sweep"], "fraction_sweep",
                        {"ratio_min", "ratio_max", "points"});
    FractionSweepConfig fc;
    fc.ratio_min = number_or(j["fraction_sweep"], "ratio_min", fc.ratio_min);
    fc.ratio_max = number_or(j["fraction_sweep"], "ratio_max", fc.ratio_max);
    fc.points =
        static_cast<int>(number_or(j["fraction_sweep"], "points", fc.points));
    if (fc.points < 2 || !(fc.ratio_min > 0.0) || !(fc.ratio_max < 1.0) ||
        !(fc.ratio_min < fc.ratio_max))
      throw ConfigError("config: fraction_sweep needs 0 < ratio_min < "
                        "ratio_max < 1 and points >= 2");
    cfg.fraction_sweep = fc;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_config(j);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += i + 1 < header.size() ? ',' : '\n';
  }
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += format_double(row[i]);
      out += i + 1 < row.size() ? ',' : '\n';
    }
  return out;
}

std::vector<std::uint8_t> stl_binary_from_mesh(const TriMesh& mesh) {
  std::vector<std::uint8_t> out(80, 0);
  const char* tag = "vortopo flux surface";
  std::memcpy(out.data(), tag, std::strlen(tag));
  auto push_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
  };
  auto push_f32 = [&](float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    push_u32(v);
  };
  push_u32(static_cast<std::uint32_t>(mesh.triangle_count()));
  for (const auto& tri : mesh.triangles) {
    const Point3& a = mesh.vertices[tri[0]];
    const Point3& b = mesh.vertices[tri[1]];
    const Point3& c = mesh.vertices[tri[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len > 0.0) n = n / len;
    push_f32(float(n.x));
    push_f32(float(n.y));
    push_f32(float(n.z));
    for (const Point3* p : {&a, &b, &c}) {
      push_f32(float(p->x));
      push_f32(float(p->y));
      push_f32(float(p->z));
    }
    out.push_back(0);
    out.push_back(0);
  }
  return out;
}

json mesh_to_json(const TriMesh& mesh) {
  json vertices = json::array();
  for (const auto& v : mesh.vertices) vertices.push_back({v.x, v.y, v.z});
  json triangles = json::array();
  for (const auto& t : mesh.triangles) triangles.push_back({t[0], t[1], t[2]});
  return json{{"vertices", vertices}, {"triangles", triangles}};
}

json surface_report_to_json(const SurfaceReport& rep) {
  return json{{"psi_target", rep.psi_target},
              {"chi", rep.chi},
              {"genus", rep.genus},
              {"watertight", rep.watertight},
              {"class", to_string(rep.class_from_chi)},
              {"vertices", rep.vertex_count},
              {"triangles", rep.triangle_count}};
}

std::vector<std::vector<double>> field_line_rows(const FieldLine& line) {
  std::vector<std::vector<double>> rows;
  rows.reserve(line.samples.size());
  for (const auto& s : line.samples)
    rows.push_back({s.s, s.p.x, s.p.y, s.p.z, s.psi, s.varphi});
  return rows;
}

std::vector<std::vector<double>> trajectory_rows(const Trajectory& traj) {
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.samples.size());
  for (const auto& s : traj.samples)
    rows.push_back({s.t, s.position.x, s.position.y, s.position.z,
                    s.velocity.x, s.velocity.y, s.velocity.z,
                    s.kinetic_energy, s.mu, s.s_local});
  return rows;
}

std::string fnv1a64_hex(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

OutputManifest::OutputManifest(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputManifest::write_file(const std::string& name,
                                const std::string& bytes) {
  std::ofstream out(dir_ / name, std::ios::binary);
  if (!out) throw NumericError("cannot write " + (dir_ / name).string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  entries_.push_back({{"path", name},
                      {"bytes", bytes.size()},
                      {"hash", "fnv1a64:" + fnv1a64_hex(bytes.data(), bytes.size())}});
}

void OutputManifest::write_file(const std::string& name,
                                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(dir_ / name, std::ios::binary);
  if (!out) throw NumericError("cannot write " + (dir_ / name).string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  entries_.push_back({{"path", name},
                      {"bytes", bytes.size()},
                      {"hash", "fnv1a64:" + fnv1a64_hex(bytes.data(), bytes.size())}});
}

void OutputManifest::finalize() const {
  const json manifest{{"files", entries_}};
  std::ofstream out(dir_ / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("verify: no manifest.json in " + dir.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("verify: bad manifest: ") + e.what());
  }
  std::vector<std::string> mismatched;
  for (const auto& entry : manifest.at("files")) {
    const std::string name = entry.at("path").get<std::string>();
    std::ifstream f(dir / name, std::ios::binary);
    if (!f) {
      mismatched.push_back(name);
      continue;
    }
    std::string bytes((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
    const std::string hash = "fnv1a64:" + fnv1a64_hex(bytes.data(), bytes.size());
    if (hash != entry.at("hash").get<std::string>()) mismatched.push_back(name);
  }
  return mismatched;
}

}  // namespace vortopo
