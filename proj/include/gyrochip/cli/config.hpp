#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gyrochip/errors.hpp"
#include "gyrochip/interferometer.hpp"
#include "gyrochip/magnetostatics.hpp"
#include "gyrochip/noise.hpp"
#include "gyrochip/stability.hpp"
#include "gyrochip/units.hpp"

namespace gyrochip::cli {

// Every problem found while reading a config, each prefixed by its field path.
class ConfigError : public InvalidInputError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Default guide offset field. The reference geometry's transverse gradient is
// ~150 T/m, and 10 mT brings the radial trap frequency to ~2 kHz.
inline constexpr double default_offset_b0 = 1e-2;  // T

struct TransferGrid {
  double f_min = 1e-3;  // Hz
  double f_max = 1e5;   // Hz
  std::size_t points = 2000;
};

struct SensitivityGrid {
  double two_t_min = 0.1;  // s
  double two_t_max = 10.0; // s
  std::size_t points = 100;
  std::vector<double> atom_numbers{1e4, 1e5};
};

struct AllanSettings {
  stability::AllanModel model = stability::AllanModel::projection;
  std::optional<double> tau_min;  // s; default one cycle
  double tau_max = units::julian_year;
  std::size_t points = 60;
  std::optional<std::size_t> m_max;
};

// Mission feasibility sweep. The hypothesis set replaces the matching
// interferometer fields for this command only.
struct MissionSettings {
  double target_sigma = stability::geodetic_target_sigma();  // rad/s
  double integration_time = units::julian_year;              // s
  double v_over_vr_min = 1.0;
  double v_over_vr_max = 10.0;
  std::size_t points = 10;
  double atom_number = 1e5;
  double contrast = 1.0;
  double squeezing = 1.0;
  double latitude = units::pi / 2.0;  // rad
  double dead_time = 0.0;             // s
};

struct PotentialMapGrid {
  std::size_t n_rho = 121;
  std::size_t n_z = 101;
};

struct NoiseSettings {
  std::optional<noise::PowerSpectralDensity> psd;
  std::string source;  // "model" or the resolved file path
  std::optional<noise::Band> band;
  double relative_tolerance = 1e-6;
};

struct RunConfig {
  units::AtomSpecies species = units::species_rb87();
  magnetostatics::GuideGeometry geometry = magnetostatics::reference_guide_geometry();
  double offset_b0 = default_offset_b0;

  interferometer::SequenceParameters sequence;
  std::optional<double> interrogation_time;  // 2T, s
  std::optional<double> guide_radius;        // m
  int n_loops = 1;

  NoiseSettings noise;

  std::uint64_t seed = 0;
  PotentialMapGrid potential_map;
  TransferGrid transfer;
  SensitivityGrid sensitivity;
  AllanSettings allan;
  MissionSettings mission;

  // Merged document after overrides, echoed into outputs.
  nlohmann::json document;

  bool has_interferometer() const { return interrogation_time || guide_radius; }
  // Throws ConfigError when neither 2T nor R was configured.
  interferometer::InterferometerConfig interferometer() const;
};

// JSON with // and /* */ comments allowed.
nlohmann::json parse_config_text(std::string_view text, const std::string& origin);

// Sets `dotted.path` to `value`; the value is parsed as JSON when it is valid
// JSON and kept as a string otherwise.
void apply_override(nlohmann::json& document, std::string_view assignment);

// Validates the whole document, collecting every problem before throwing.
// Relative file paths are resolved against base_dir.
RunConfig build_config(const nlohmann::json& document, const std::filesystem::path& base_dir);

RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides);

// --config resolution: an existing path as given, else relative to
// $GYROCHIP_CONFIG_DIR. With no --config, $GYROCHIP_CONFIG_DIR/gyrochip.json
// if present.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string>& requested);

}  // namespace gyrochip::cli
