#include "gyrochip/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gyrochip::cli {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

class Validator {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& path, const std::string& message) { problems.push_back(path + ": " + message); }

  // Null when the key is absent; flags a non-object section.
  const json* section(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& s = parent.at(key);
    if (!s.is_object()) {
      fail(path, "must be an object");
      return nullptr;
    }
    return &s;
  }

  void allow_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(join(path, key), "unknown field");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  // Reads obj[key] into out when present and valid.
  bool number(const json& obj, const std::string& path, const std::string& key, double& out,
              const std::function<bool(double)>& ok = {}, const char* requirement = "") {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    const std::string p = join(path, key);
    if (!v.is_number()) {
      fail(p, "must be a number");
      return false;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d) || (ok && !ok(d))) {
      fail(p, std::string("must be ") + requirement);
      return false;
    }
    out = d;
    return true;
  }

  bool optional_number(const json& obj, const std::string& path, const std::string& key, std::optional<double>& out,
                       const std::function<bool(double)>& ok, const char* requirement) {
    double d = 0.0;
    if (!number(obj, path, key, d, ok, requirement)) return false;
    out = d;
    return true;
  }

  bool count(const json& obj, const std::string& path, const std::string& key, std::size_t& out,
             std::size_t minimum) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    const std::string p = join(path, key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
      fail(p, "must be an integer >= " + std::to_string(minimum));
      return false;
    }
    out = v.get<std::size_t>();
    return true;
  }

  bool string(const json& obj, const std::string& path, const std::string& key, std::string& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail(join(path, key), "must be a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }
};

const auto positive = [](double v) { return v > 0.0; };
const auto non_negative = [](double v) { return v >= 0.0; };
const auto unit_interval = [](double v) { return v > 0.0 && v <= 1.0; };

void read_species(Validator& val, const json& doc, RunConfig& cfg) {
  const json* s = val.section(doc, "species", "species");
  if (!s) return;
  val.allow_keys(*s, "species", {"name", "mass_kg", "wavelength_m", "magnetic_moment_J_T"});
  std::string name = "Rb87";
  val.string(*s, "species", "name", name);
  const bool explicit_constants = s->contains("mass_kg") || s->contains("wavelength_m") ||
                                  s->contains("magnetic_moment_J_T");
  if (!explicit_constants) {
    if (name != "Rb87") val.fail("species.name", "unknown species '" + name + "'; give mass_kg, wavelength_m and magnetic_moment_J_T");
    return;
  }
  double mass = 0.0, wavelength = 0.0, moment = 0.0;
  bool ok = true;
  for (const auto& [key, out] : {std::pair<const char*, double*>{"mass_kg", &mass},
                                 {"wavelength_m", &wavelength},
                                 {"magnetic_moment_J_T", &moment}}) {
    if (!s->contains(key)) {
      val.fail(std::string("species.") + key, "required when species constants are given explicitly");
      ok = false;
    } else if (!val.number(*s, "species", key, *out, positive, "> 0")) {
      ok = false;
    }
  }
  if (ok) cfg.species = units::AtomSpecies(name, mass, wavelength, moment);
}

void read_geometry(Validator& val, const json& doc, RunConfig& cfg) {
  const json* g = val.section(doc, "geometry", "geometry");
  if (!g) return;
  val.allow_keys(*g, "geometry", {"loops", "offset_B0_T", "label"});
  val.number(*g, "geometry", "offset_B0_T", cfg.offset_b0, non_negative, ">= 0");
  std::string label = "custom";
  val.string(*g, "geometry", "label", label);
  if (!g->contains("loops")) return;
  const json& loops = g->at("loops");
  if (!loops.is_array() || loops.empty()) {
    val.fail("geometry.loops", "must be a non-empty array");
    return;
  }
  std::vector<magnetostatics::WireLoop> out;
  bool ok = true;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const std::string p = "geometry.loops." + std::to_string(i);
    if (!loops[i].is_object()) {
      val.fail(p, "must be an object");
      ok = false;
      continue;
    }
    val.allow_keys(loops[i], p, {"radius_m", "current_A", "height_m"});
    magnetostatics::WireLoop w{0.0, 0.0, 0.0};
    if (!loops[i].contains("radius_m") || !loops[i].contains("current_A")) {
      val.fail(p, "radius_m and current_A are required");
      ok = false;
      continue;
    }
    ok &= val.number(loops[i], p, "radius_m", w.radius, positive, "> 0");
    ok &= val.number(loops[i], p, "current_A", w.current);
    if (loops[i].contains("height_m")) ok &= val.number(loops[i], p, "height_m", w.height);
    out.push_back(w);
  }
  if (!ok) return;
  try {
    cfg.geometry = magnetostatics::GuideGeometry(std::move(out), label);
  } catch (const InvalidInputError& e) {
    val.fail("geometry.loops", e.what());
  }
}

void read_interferometer(Validator& val, const json& doc, RunConfig& cfg) {
  const json* s = val.section(doc, "interferometer", "interferometer");
  if (!s) return;
  const std::string p = "interferometer";
  val.allow_keys(*s, p, {"pulse_duration_s", "interrogation_time_s", "radius_m", "n_loops", "atom_number",
                         "contrast", "latitude_deg", "squeezing", "dead_time_s", "launch_velocity_over_recoil"});
  auto& q = cfg.sequence;
  val.number(*s, p, "pulse_duration_s", q.pulse_duration, positive, "> 0");
  val.number(*s, p, "atom_number", q.atom_number, positive, "> 0");
  val.number(*s, p, "contrast", q.contrast, unit_interval, "in (0, 1]");
  val.number(*s, p, "squeezing", q.squeezing, unit_interval, "in (0, 1]");
  val.number(*s, p, "dead_time_s", q.dead_time, non_negative, ">= 0");
  val.number(*s, p, "launch_velocity_over_recoil", q.launch_velocity_over_recoil, positive, "> 0");
  double latitude_deg = 0.0;
  if (val.number(*s, p, "latitude_deg", latitude_deg)) q.latitude = latitude_deg * units::pi / 180.0;
  val.optional_number(*s, p, "interrogation_time_s", cfg.interrogation_time, positive, "> 0");
  val.optional_number(*s, p, "radius_m", cfg.guide_radius, positive, "> 0");
  std::size_t n_loops = 1;
  if (val.count(*s, p, "n_loops", n_loops, 1)) cfg.n_loops = static_cast<int>(n_loops);
  if (s->contains("interrogation_time_s") && s->contains("radius_m")) {
    val.fail(p, "give either interrogation_time_s or radius_m (with n_loops), not both");
    return;
  }
  if (cfg.has_interferometer() && val.problems.empty()) {
    try {
      (void)cfg.interferometer();
    } catch (const InvalidInputError& e) {
      val.fail(p, e.what());
    }
  }
}

void read_noise(Validator& val, const json& doc, const std::filesystem::path& base_dir, RunConfig& cfg) {
  const json* s = val.section(doc, "noise", "noise");
  if (!s) return;
  const std::string p = "noise";
  val.allow_keys(*s, p, {"domain", "model", "file", "band", "relative_tolerance"});
  auto domain = noise::NoiseDomain::phase;
  std::string domain_name;
  if (val.string(*s, p, "domain", domain_name)) {
    try {
      domain = noise::parse_domain(domain_name);
    } catch (const InvalidInputError& e) {
      val.fail("noise.domain", e.what());
    }
  }
  val.number(*s, p, "relative_tolerance", cfg.noise.relative_tolerance,
             [](double v) { return v > 0.0 && v < 1.0; }, "in (0, 1)");
  if (const json* b = val.section(*s, "band", "noise.band")) {
    val.allow_keys(*b, "noise.band", {"f_min_hz", "f_max_hz"});
    noise::Band band{1e-4, 0.0};
    const bool has_max = val.number(*b, "noise.band", "f_max_hz", band.f_max, positive, "> 0");
    val.number(*b, "noise.band", "f_min_hz", band.f_min, non_negative, ">= 0");
    if (!has_max) {
      val.fail("noise.band.f_max_hz", "required when a band is given");
    } else if (!(band.f_max > band.f_min)) {
      val.fail("noise.band", "f_max_hz must exceed f_min_hz");
    } else {
      cfg.noise.band = band;
    }
  }
  const bool has_model = s->contains("model");
  const bool has_file = s->contains("file");
  if (has_model && has_file) {
    val.fail(p, "give either model or file, not both");
    return;
  }
  if (has_model) {
    const json* m = val.section(*s, "model", "noise.model");
    if (!m) return;
    val.allow_keys(*m, "noise.model", {"white", "flicker", "random_walk"});
    double white = 0.0, flicker = 0.0, rw = 0.0;
    val.number(*m, "noise.model", "white", white, non_negative, ">= 0");
    val.number(*m, "noise.model", "flicker", flicker, non_negative, ">= 0");
    val.number(*m, "noise.model", "random_walk", rw, non_negative, ">= 0");
    cfg.noise.psd = noise::PowerSpectralDensity::analytic(domain, white, flicker, rw);
    cfg.noise.source = "model";
  } else if (has_file) {
    std::string file;
    if (!val.string(*s, p, "file", file)) return;
    std::filesystem::path path(file);
    if (path.is_relative()) path = base_dir / path;
    try {
      cfg.noise.psd = noise::load_psd_csv(path, domain);
      cfg.noise.source = path.string();
    } catch (const InvalidInputError& e) {
      val.fail("noise.file", e.what());
    }
  }
}

void read_run(Validator& val, const json& doc, RunConfig& cfg) {
  const json* r = val.section(doc, "run", "run");
  if (!r) return;
  val.allow_keys(*r, "run", {"seed", "potential_map", "transfer", "sensitivity", "allan", "mission"});
  if (r->contains("seed")) {
    const json& v = r->at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      val.fail("run.seed", "must be a non-negative integer");
    } else {
      cfg.seed = v.get<std::uint64_t>();
    }
  }
  if (const json* m = val.section(*r, "potential_map", "run.potential_map")) {
    val.allow_keys(*m, "run.potential_map", {"n_rho", "n_z"});
    val.count(*m, "run.potential_map", "n_rho", cfg.potential_map.n_rho, 2);
    val.count(*m, "run.potential_map", "n_z", cfg.potential_map.n_z, 2);
  }
  if (const json* t = val.section(*r, "transfer", "run.transfer")) {
    const std::string p = "run.transfer";
    val.allow_keys(*t, p, {"f_min_hz", "f_max_hz", "points"});
    val.number(*t, p, "f_min_hz", cfg.transfer.f_min, positive, "> 0");
    val.number(*t, p, "f_max_hz", cfg.transfer.f_max, positive, "> 0");
    val.count(*t, p, "points", cfg.transfer.points, 2);
    if (!(cfg.transfer.f_max > cfg.transfer.f_min)) val.fail(p, "f_max_hz must exceed f_min_hz");
  }
  if (const json* s = val.section(*r, "sensitivity", "run.sensitivity")) {
    const std::string p = "run.sensitivity";
    auto& g = cfg.sensitivity;
    val.allow_keys(*s, p, {"two_t_min_s", "two_t_max_s", "points", "atom_numbers"});
    val.number(*s, p, "two_t_min_s", g.two_t_min, positive, "> 0");
    val.number(*s, p, "two_t_max_s", g.two_t_max, positive, "> 0");
    val.count(*s, p, "points", g.points, 2);
    if (!(g.two_t_max > g.two_t_min)) val.fail(p, "two_t_max_s must exceed two_t_min_s");
    if (s->contains("atom_numbers")) {
      const json& a = s->at("atom_numbers");
      g.atom_numbers.clear();
      if (!a.is_array() || a.empty()) val.fail(p + ".atom_numbers", "must be a non-empty array");
      else {
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (!a[i].is_number() || !(a[i].get<double>() > 0.0)) {
            val.fail(p + ".atom_numbers." + std::to_string(i), "must be a number > 0");
          } else {
            g.atom_numbers.push_back(a[i].get<double>());
          }
        }
      }
    }
  }
  if (const json* a = val.section(*r, "allan", "run.allan")) {
    const std::string p = "run.allan";
    auto& s = cfg.allan;
    val.allow_keys(*a, p, {"model", "tau_min_s", "tau_max_s", "points", "m_max"});
    std::string model;
    if (val.string(*a, p, "model", model)) {
      try {
        s.model = stability::parse_allan_model(model);
      } catch (const InvalidInputError& e) {
        val.fail(p + ".model", e.what());
      }
    }
    val.optional_number(*a, p, "tau_min_s", s.tau_min, positive, "> 0");
    val.number(*a, p, "tau_max_s", s.tau_max, positive, "> 0");
    val.count(*a, p, "points", s.points, 2);
    std::size_t m_max = 0;
    if (val.count(*a, p, "m_max", m_max, 1)) s.m_max = m_max;
    if (s.tau_min && !(s.tau_max > *s.tau_min)) val.fail(p, "tau_max_s must exceed tau_min_s");
  }
  if (const json* m = val.section(*r, "mission", "run.mission")) {
    const std::string p = "run.mission";
    auto& s = cfg.mission;
    val.allow_keys(*m, p, {"target_sigma_rad_s", "integration_time_s", "v_over_vr_min", "v_over_vr_max", "points",
                           "atom_number", "contrast", "squeezing", "latitude_deg", "dead_time_s"});
    val.number(*m, p, "target_sigma_rad_s", s.target_sigma, positive, "> 0");
    val.number(*m, p, "integration_time_s", s.integration_time, positive, "> 0");
    val.number(*m, p, "v_over_vr_min", s.v_over_vr_min, positive, "> 0");
    val.number(*m, p, "v_over_vr_max", s.v_over_vr_max, positive, "> 0");
    val.count(*m, p, "points", s.points, 2);
    val.number(*m, p, "atom_number", s.atom_number, positive, "> 0");
    val.number(*m, p, "contrast", s.contrast, unit_interval, "in (0, 1]");
    val.number(*m, p, "squeezing", s.squeezing, unit_interval, "in (0, 1]");
    val.number(*m, p, "dead_time_s", s.dead_time, non_negative, ">= 0");
    double latitude_deg = 0.0;
    if (val.number(*m, p, "latitude_deg", latitude_deg)) s.latitude = latitude_deg * units::pi / 180.0;
    if (!(s.v_over_vr_max > s.v_over_vr_min)) val.fail(p, "v_over_vr_max must exceed v_over_vr_min");
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InvalidInputError(join_problems(problems)), problems_(std::move(problems)) {}

interferometer::InterferometerConfig RunConfig::interferometer() const {
  if (interrogation_time) {
    return interferometer::InterferometerConfig::from_interrogation_time(species, sequence, *interrogation_time,
                                                                         n_loops);
  }
  if (guide_radius) {
    return interferometer::InterferometerConfig::from_geometry(species, sequence, *guide_radius, n_loops);
  }
  throw ConfigError({"interferometer: exactly one of interrogation_time_s or radius_m (with n_loops) is required"});
}

json parse_config_text(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({origin + ": " + e.what()});
  }
}

void apply_override(json& document, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError({"--override '" + std::string(assignment) + "': expected key=value"});
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &document;
  std::string seen;
  std::stringstream segments(path);
  std::string segment;
  std::vector<std::string> parts;
  while (std::getline(segments, segment, '.')) parts.push_back(segment);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& key = parts[i];
    if (key.empty()) throw ConfigError({"--override '" + path + "': empty path segment"});
    seen = seen.empty() ? key : seen + "." + key;
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      std::size_t index = 0;
      try {
        index = std::stoul(key);
      } catch (const std::exception&) {
        throw ConfigError({seen + ": array index expected"});
      }
      if (index >= node->size()) throw ConfigError({seen + ": index out of range"});
      node = &(*node)[index];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError({seen + ": cannot descend into a non-object value"});
      node = &(*node)[key];
    }
    if (last) *node = value;
  }
}

RunConfig build_config(const json& document, const std::filesystem::path& base_dir) {
  Validator val;
  RunConfig cfg;
  cfg.document = document;
  if (!document.is_object()) throw ConfigError({"(root): must be an object"});
  val.allow_keys(document, "", {"species", "geometry", "interferometer", "noise", "run"});
  read_species(val, document, cfg);
  read_geometry(val, document, cfg);
  read_interferometer(val, document, cfg);
  read_noise(val, document, base_dir, cfg);
  read_run(val, document, cfg);
  if (!val.problems.empty()) throw ConfigError(std::move(val.problems));
  return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
  json document = json::object();
  std::filesystem::path base_dir = std::filesystem::current_path();
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ConfigError({"--config: cannot read '" + path->string() + "'"});
    std::stringstream buffer;
    buffer << in.rdbuf();
    document = parse_config_text(buffer.str(), path->string());
    base_dir = path->parent_path();
  }
  for (const auto& o : overrides) apply_override(document, o);
  return build_config(document, base_dir);
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string>& requested) {
  const char* env = std::getenv("GYROCHIP_CONFIG_DIR");
  const std::filesystem::path dir = env ? std::filesystem::path(env) : std::filesystem::path();
  if (requested) {
    const std::filesystem::path p(*requested);
    if (std::filesystem::exists(p)) return p;
    if (env && p.is_relative() && std::filesystem::exists(dir / p)) return dir / p;
    throw ConfigError({"--config: file not found: '" + *requested + "'"});
  }
  if (env && std::filesystem::exists(dir / "gyrochip.json")) return dir / "gyrochip.json";
  return std::nullopt;
}

}  // namespace gyrochip::cli
