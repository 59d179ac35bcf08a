#include "gyrochip/cli/commands.hpp"

#include <cmath>
#include <ostream>

#include "CLI11.hpp"
#include "gyrochip/cli/output.hpp"
#include "gyrochip/guide.hpp"
#include "gyrochip/interferometer.hpp"
#include "gyrochip/noise.hpp"
#include "gyrochip/simd/field_kernels.hpp"
#include "gyrochip/stability.hpp"

namespace gyrochip::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double rad_to_deg = 180.0 / units::pi;

json sequence_json(const interferometer::InterferometerConfig& c) {
  return {
      {"pulse_duration_s", c.pulse_duration()},
      {"interrogation_time_s", c.interrogation_time()},
      {"guide_radius_m", c.guide_radius()},
      {"n_loops", c.n_loops()},
      {"atom_number", c.atom_number()},
      {"contrast", c.contrast()},
      {"squeezing", c.squeezing()},
      {"latitude_deg", c.latitude() * rad_to_deg},
      {"sin_latitude", std::sin(c.latitude())},
      {"dead_time_s", c.dead_time()},
      {"cycle_time_s", c.cycle_time()},
      {"launch_velocity_m_s", c.launch_velocity()},
      {"launch_velocity_over_recoil", c.parameters().launch_velocity_over_recoil},
      {"effective_wavevector_rad_m", c.effective_wavevector()},
  };
}

json band_json(const noise::Band& b) { return {{"f_min_hz", b.f_min}, {"f_max_hz", b.f_max}}; }

fs::path output(const fs::path& dir, const char* name) { return dir / name; }

}  // namespace

json base_assumptions(const RunConfig& config) {
  const auto& s = config.species;
  json a = {
      {"species",
       {{"name", s.name()},
        {"mass_kg", s.mass()},
        {"wavelength_m", s.wavelength()},
        {"recoil_velocity_m_s", s.recoil_velocity()},
        {"magnetic_moment_J_T", s.magnetic_moment()}}},
      {"seed", config.seed},
  };
  if (config.has_interferometer()) a["interferometer"] = sequence_json(config.interferometer());
  return a;
}

CommandResult cmd_guide(const RunConfig& config, const fs::path& out_dir) {
  const auto& g = config.geometry;
  const auto c = guide::characterize_guide(g, config.species, config.offset_b0);
  const auto box = guide::search_box(g);
  const double chip = g.loops().front().height;

  json loops = json::array();
  for (const auto& l : g.loops()) {
    loops.push_back({{"radius_m", l.radius}, {"current_A", l.current}, {"height_m", l.height}});
  }
  json assumptions = base_assumptions(config);
  assumptions["geometry"] = {{"label", g.label()}, {"loops", loops}, {"offset_B0_T", config.offset_b0}};
  assumptions["potential"] = "U = mu sqrt(|B|^2 + B0^2), mu = magnetic_moment_J_T";
  assumptions["depth"] = "escape barrier of the static |B| (offset excluded) over the search box";
  assumptions["search_box"] = {{"rho_min_m", box.rho_min}, {"rho_max_m", box.rho_max},
                               {"z_floor_m", box.z_floor}, {"z_max_m", box.z_max}};
  assumptions["simd"] = std::string(simd::isa_name(simd::active_isa()));

  json record = {
      {"min_position", {{"rho_m", c.min_position.rho}, {"z_m", c.min_position.z}}},
      {"height_above_chip_m", c.min_position.z - chip},
      {"b_min_T", c.b_min},
      {"gradient_T_m", c.gradient},
      {"offset_B0_T", c.offset_b0},
      {"radial_frequency_hz", c.radial_frequency},
      {"depth_field_T", c.depth_field},
      {"depth_temperature_K", c.depth_temperature},
      {"hessian_J_m2", {{c.hessian[0][0], c.hessian[0][1]}, {c.hessian[1][0], c.hessian[1][1]}}},
      {"hessian_asymmetry", c.hessian_asymmetry},
      {"escape_point", {{"rho_m", c.escape_point.rho}, {"z_m", c.escape_point.z}}},
      {"assumptions", assumptions},
  };

  const auto map = guide::potential_map(g, config.species, config.offset_b0, box, config.potential_map.n_rho,
                                        config.potential_map.n_z);
  CsvTable table({"rho_m", "z_m", "potential_J"});
  table.comments(assumptions);
  table.comment("grid", std::to_string(map.rho.size()) + " x " + std::to_string(map.z.size()) + ", rho-major");
  for (std::size_t i = 0; i < map.rho.size(); ++i) {
    for (std::size_t j = 0; j < map.z.size(); ++j) {
      table.row({map.rho[i], map.z[j], map.energy[i * map.z.size() + j]});
    }
  }

  const auto json_path = output(out_dir, "guide_characterization.json");
  const auto csv_path = output(out_dir, "potential_map.csv");
  write_atomic(json_path, dump_json(record));
  write_atomic(csv_path, table.str());
  return {{json_path, csv_path},
          {{"height_above_chip_m", record["height_above_chip_m"]},
           {"radial_frequency_hz", c.radial_frequency},
           {"depth_temperature_K", c.depth_temperature}}};
}

std::vector<double> transfer_grid(const TransferGrid& grid) {
  // f_i = f_min (f_max/f_min)^(i/(n-1)): refining n -> 2n-1 keeps every old
  // point bitwise.
  std::vector<double> f(grid.points);
  const double ratio = grid.f_max / grid.f_min;
  const double last = static_cast<double>(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i) f[i] = grid.f_min * std::pow(ratio, static_cast<double>(i) / last);
  return f;
}

CommandResult cmd_transfer(const RunConfig& config, const fs::path& out_dir) {
  const auto ic = config.interferometer();
  json assumptions = base_assumptions(config);
  assumptions["f_hp_hz"] = interferometer::high_pass_corner(ic);
  assumptions["f_lp_hz"] = interferometer::low_pass_corner(ic);
  assumptions["grid"] = {{"f_min_hz", config.transfer.f_min},
                         {"f_max_hz", config.transfer.f_max},
                         {"points", config.transfer.points},
                         {"spacing", "logarithmic"}};
  CsvTable table({"f_hz", "abs_h", "abs_h_squared"});
  table.comments(assumptions);
  for (double f : transfer_grid(config.transfer)) {
    const double mag = std::abs(interferometer::transfer_H(f, ic));
    table.row({f, mag, interferometer::transfer_H_squared(f, ic.pulse_duration(), ic.interrogation_time())});
  }
  const auto path = output(out_dir, "transfer.csv");
  write_atomic(path, table.str());
  return {{path}, {{"f_hp_hz", assumptions["f_hp_hz"]}, {"f_lp_hz", assumptions["f_lp_hz"]}}};
}

CommandResult cmd_sensitivity(const RunConfig& config, const fs::path& out_dir) {
  const auto& g = config.sensitivity;
  json assumptions = base_assumptions(config);
  assumptions.erase("interferometer");
  auto params = config.sequence;
  assumptions["sequence"] = {{"pulse_duration_s", params.pulse_duration},
                             {"contrast", params.contrast},
                             {"squeezing", params.squeezing},
                             {"latitude_deg", params.latitude * rad_to_deg},
                             {"sin_latitude", std::sin(params.latitude)},
                             {"dead_time_s", params.dead_time},
                             {"launch_velocity_over_recoil", params.launch_velocity_over_recoil},
                             {"n_loops", config.n_loops}};
  assumptions["reading"] =
      "delta_omega_rad_s is per shot; arw_deg_root_h reads it as a density per root Hz; "
      "arw_deg_root_h_cycle uses delta_omega_rad_s_root_hz = per-shot * sqrt(cycle time)";

  CsvTable table({"atom_number", "two_t_s", "radius_m", "delta_omega_rad_s", "delta_omega_rad_s_root_hz",
                  "arw_deg_root_h", "arw_deg_root_h_cycle"});
  table.comments(assumptions);
  const double last = static_cast<double>(g.points - 1);
  for (double n : g.atom_numbers) {
    params.atom_number = n;
    for (std::size_t i = 0; i < g.points; ++i) {
      const double two_t = g.two_t_min + (g.two_t_max - g.two_t_min) * (static_cast<double>(i) / last);
      const auto ic =
          interferometer::InterferometerConfig::from_interrogation_time(config.species, params, two_t, config.n_loops);
      const double shot = interferometer::shot_noise_sensitivity(ic);
      const double density = interferometer::sensitivity_per_root_hz(ic);
      table.row({n, two_t, ic.guide_radius(), shot, density,
                 units::convert_rotation(shot, units::RotationUnit::deg_per_root_hour),
                 units::convert_rotation(density, units::RotationUnit::deg_per_root_hour)});
    }
  }
  const auto path = output(out_dir, "sensitivity.csv");
  write_atomic(path, table.str());
  return {{path}, {{"rows", table.rows()}}};
}

namespace {

noise::PowerSpectralDensity rotation_psd(const RunConfig& config, const interferometer::InterferometerConfig& ic) {
  if (!config.noise.psd) throw ConfigError({"noise: a PSD (model or file) is required for this command"});
  return noise::convert_psd(*config.noise.psd, noise::NoiseDomain::rotation, ic.effective_wavevector(),
                            ic.effective_radius());
}

}  // namespace

CommandResult cmd_allan(const RunConfig& config, const fs::path& out_dir) {
  const auto ic = config.interferometer();
  const auto& s = config.allan;
  const double tau_min = s.tau_min.value_or(ic.cycle_time());
  if (!(s.tau_max > tau_min)) {
    throw ConfigError({"run.allan.tau_max_s: must exceed the shortest averaging time (" +
                       format_double(tau_min) + " s)"});
  }
  const auto taus = stability::log_grid(tau_min, s.tau_max, s.points);

  json assumptions = base_assumptions(config);
  assumptions["model"] = std::string(stability::allan_model_name(s.model));
  stability::AllanCurve curve = [&] {
    if (s.model == stability::AllanModel::projection) return stability::projection_allan_curve(ic, taus);
    const auto psd = rotation_psd(config, ic);
    const std::size_t m_max = s.m_max.value_or(stability::default_harmonic_count(ic));
    assumptions["noise_source"] = config.noise.source;
    assumptions["noise_domain"] = std::string(noise::domain_name(config.noise.psd->domain()));
    assumptions["harmonics"] = "m/T for m = 1..m_max";
    return stability::dick_sum_allan_curve(psd, ic, taus, m_max);
  }();

  const double coefficient = curve.white_coefficient();
  json record = {
      {"model", assumptions["model"]},
      {"coefficient_rad_s_root_s", coefficient},
      {"sigma_one_year_rad_s", coefficient / std::sqrt(units::julian_year)},
      {"points", curve.points.size()},
      {"assumptions", assumptions},
  };
  if (s.model == stability::AllanModel::dick_sum) {
    record["m_max"] = curve.m_max;
    record["converged"] = curve.converged;
  }

  CsvTable table({"tau_s", "sigma_rad_s"});
  table.comments(assumptions);
  for (const auto& p : curve.points) table.row({p.averaging_time, p.sigma});
  const auto csv_path = output(out_dir, "allan.csv");
  const auto json_path = output(out_dir, "allan.json");
  write_atomic(csv_path, table.str());
  write_atomic(json_path, dump_json(record));
  return {{csv_path, json_path},
          {{"coefficient_rad_s_root_s", coefficient}, {"sigma_one_year_rad_s", record["sigma_one_year_rad_s"]}}};
}

CommandResult cmd_mission(const RunConfig& config, const fs::path& out_dir) {
  const auto& m = config.mission;
  auto params = config.sequence;
  params.atom_number = m.atom_number;
  params.contrast = m.contrast;
  params.squeezing = m.squeezing;
  params.latitude = m.latitude;
  params.dead_time = m.dead_time;

  const double vr = config.species.recoil_velocity();
  std::vector<double> ratios(m.points), velocities(m.points);
  const double last = static_cast<double>(m.points - 1);
  for (std::size_t i = 0; i < m.points; ++i) {
    ratios[i] = m.v_over_vr_min + (m.v_over_vr_max - m.v_over_vr_min) * (static_cast<double>(i) / last);
    velocities[i] = ratios[i] * vr;
  }
  const auto boundary = stability::feasibility_boundary(m.target_sigma, m.integration_time, velocities,
                                                        config.species, params, config.n_loops);

  json assumptions = base_assumptions(config);
  assumptions.erase("interferometer");
  assumptions["model"] = "projection";
  assumptions["target_sigma_rad_s"] = m.target_sigma;
  assumptions["integration_time_s"] = m.integration_time;
  assumptions["hypothesis"] = {{"atom_number", m.atom_number},
                               {"contrast", m.contrast},
                               {"squeezing", m.squeezing},
                               {"latitude_deg", m.latitude * rad_to_deg},
                               {"sin_latitude", std::sin(m.latitude)},
                               {"dead_time_s", m.dead_time},
                               {"pulse_duration_s", params.pulse_duration},
                               {"n_loops", config.n_loops}};
  assumptions["radius"] = "R = v_launch 2T / (n_loops pi)";
  for (const auto& p : stability::phenomenon_rates()) {
    assumptions["phenomena"][p.name] = {{"rate_rad_s", p.rate}, {"relative_to_earth", p.rate_relative_to_earth}};
  }

  CsvTable table({"v_over_vr", "v_launch_m_s", "min_two_t_s", "radius_m"});
  table.comments(assumptions);
  for (std::size_t i = 0; i < boundary.points.size(); ++i) {
    const auto& p = boundary.points[i];
    table.row({ratios[i], p.launch_velocity, p.interrogation_time, p.guide_radius});
  }
  const auto path = output(out_dir, "mission.csv");
  write_atomic(path, table.str());
  return {{path}, {{"rows", table.rows()}, {"target_sigma_rad_s", m.target_sigma}}};
}

CommandResult cmd_noise(const RunConfig& config, const fs::path& out_dir) {
  const auto ic = config.interferometer();
  if (!config.noise.psd) throw ConfigError({"noise: a PSD (model or file) is required for this command"});
  const auto& psd = *config.noise.psd;
  noise::VarianceOptions options;
  options.band = config.noise.band;
  options.relative_tolerance = config.noise.relative_tolerance;
  const auto v = noise::output_phase_variance(psd, ic, options);
  const double sigma_phase = std::sqrt(v.value);
  const double sigma_rotation = noise::phase_sigma_to_rotation_sigma(sigma_phase, ic);

  json entry = {
      {"source", config.noise.source},
      {"domain", std::string(noise::domain_name(psd.domain()))},
      {"value", v.value},
      {"error_estimate", v.error_estimate},
      {"band", band_json(v.band)},
      {"convention", v.convention},
      {"infrared_exponent", v.infrared_exponent},
      {"panels", v.panels},
      {"converged", v.converged},
      {"sigma_phase_rad", sigma_phase},
      {"sigma_rotation_rad_s", sigma_rotation},
  };
  json assumptions = base_assumptions(config);
  assumptions["convention"] = std::string(noise::psd_convention);
  assumptions["angular_frequency"] = "omega = 2 pi f";
  assumptions["relative_tolerance"] = options.relative_tolerance;
  json record = {
      {"entries", json::array({entry})},
      {"total", {{"variance_rad2", v.value}, {"sigma_phase_rad", sigma_phase}, {"sigma_rotation_rad_s", sigma_rotation}}},
      {"assumptions", assumptions},
  };
  const auto path = output(out_dir, "noise_budget.json");
  write_atomic(path, dump_json(record));
  return {{path}, {{"variance_rad2", v.value}, {"sigma_rotation_rad_s", sigma_rotation}}};
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"guide", "transfer", "sensitivity", "allan", "mission", "noise"};
  return names;
}

CommandResult run_command(std::string_view name, const RunConfig& config, const fs::path& out_dir) {
  if (name == "guide") return cmd_guide(config, out_dir);
  if (name == "transfer") return cmd_transfer(config, out_dir);
  if (name == "sensitivity") return cmd_sensitivity(config, out_dir);
  if (name == "allan") return cmd_allan(config, out_dir);
  if (name == "mission") return cmd_mission(config, out_dir);
  if (name == "noise") return cmd_noise(config, out_dir);
  throw ConfigError({"unknown command '" + std::string(name) + "'"});
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Atom-chip guided Sagnac gyrometer design tool", "gyrochip"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON config (comments allowed)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--override", overrides, "dot-path override key=value (repeatable)")->take_all();
  for (const auto& name : command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto report = [&](int code, const std::string& message) {
    err << "gyrochip " << command << ": " << message << "\n";
    out << json{{"command", command}, {"status", "error"}, {"exit_code", code}, {"error", message}}.dump() << "\n";
    return code;
  };
  try {
    const auto cfg = load_config(resolve_config_path(config_path), overrides);
    fs::create_directories(out_dir);
    const auto result = run_command(command, cfg, out_dir);
    json outputs = json::array();
    for (const auto& p : result.outputs) outputs.push_back(p.string());
    out << json{{"command", command}, {"status", "ok"}, {"outputs", outputs}, {"results", result.summary}}.dump()
        << "\n";
    return exit_ok;
  } catch (const DomainError& e) {
    return report(exit_domain_error, e.what());
  } catch (const std::exception& e) {
    return report(exit_config_error, e.what());
  }
}

}  // namespace gyrochip::cli
