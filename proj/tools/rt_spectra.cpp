// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Data artifacts go to --out (or stdout); the
// one-line summary goes to stdout, or to stderr when stdout carries the data.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rtspectra/rtspectra.hpp"

using namespace rtspectra;

namespace
{

enum ExitCode
{
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kSolver = 3,
  kConfigParse = 4,
};

int exit_code(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::ConfigParse: return kConfigParse;
    case ErrorKind::Validation:
    case ErrorKind::InvalidLaw:
    case ErrorKind::InvalidGrading:
    case ErrorKind::NoRoot:
    case ErrorKind::VacuumReached:
    case ErrorKind::OutOfDomain:
    case ErrorKind::DegenerateMode:
    case ErrorKind::WrongFieldOrientation:
    case ErrorKind::BadDirection: return kValidation;
    default: return kSolver;
  }
}

struct Sinks
{
  std::ofstream file;
  std::ostream* data = &std::cout;
  std::ostream* summary = &std::cout;
  OutputFormat format = OutputFormat::csv;

  Sinks(const std::optional<std::string>& path, OutputFormat fmt) : format(fmt)
  {
    if (path)
    {
      file.open(*path, std::ios::binary);
      if (!file)
        fail(ErrorKind::Validation, fmt::format("cannot open output path '{}'", *path));
      data = &file;
    }
    else
      summary = &std::cerr;
  }

  bool json() const { return format == OutputFormat::json; }
  void line(const std::string& s) { *summary << s << "\n"; }
  void emit(const Json& j) { *data << j.dump(2) << "\n"; }
};

FourierMode config_mode(const RunConfig& c) { return FourierMode::from_lattice(c.k1, c.k2, c.geometry); }

void cmd_equilibrium(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  const auto rt = check_rt_condition(profile);
  if (out.json())
    out.emit(profile_json(profile));
  else
    write_profile_csv(*out.data, profile);
  out.line(fmt::format("density_jump={} rt_condition={} p_inf={} rho_max={}", format_number(rt.jump),
                       rt.holds ? "true" : "false", format_number(infimum_p_prime_rho(profile)),
                       format_number(profile.max_density())));
}

void cmd_xi(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  const auto mode = config_mode(c);
  const auto m = assemble(profile, c.params, mode, c.assembly);
  const auto xi = xi_per_mode(m, c.medium, c.scan_options().xi);
  if (out.json())
  {
    Json j = json_header("xi");
    j.update(Json{{"k1", mode.k1}, {"k2", mode.k2}, {"xi1", mode.xi1}, {"xi2", mode.xi2},
                  {"medium", to_string(c.medium)}, {"xi_value", json_number(xi.value)},
                  {"iterations", xi.iterations}});
    out.emit(j);
  }
  else
    *out.data << "k1,k2,xi1,xi2,xi_value,iterations\n"
              << fmt::format("{},{},{},{},{},{}\n", mode.k1, mode.k2, format_number(mode.xi1),
                             format_number(mode.xi2), format_number(xi.value), xi.iterations);
  out.line(fmt::format("xi_value={}", format_number(xi.value)));
}

void cmd_growth(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  const auto mode = config_mode(c);
  const auto m = assemble(profile, c.params, mode, c.assembly);
  const auto gr = growth_rate(m, c.medium, c.fixed_point_tol);
  if (out.json())
  {
    Json j = json_header("growth");
    j.update(Json{{"k1", mode.k1}, {"k2", mode.k2}, {"xi1", mode.xi1}, {"xi2", mode.xi2},
                  {"medium", to_string(c.medium)}, {"alpha0", gr.alpha0}, {"lambda", json_optional(gr.lambda)},
                  {"residual", gr.residual}, {"upper_bound", gr.upper_bound},
                  {"bisection_steps", gr.bisection_steps}});
    out.emit(j);
  }
  else
    *out.data << "k1,k2,xi1,xi2,alpha0,lambda,residual,bisection_steps\n"
              << fmt::format("{},{},{},{},{},{},{},{}\n", mode.k1, mode.k2, format_number(mode.xi1),
                             format_number(mode.xi2), format_number(gr.alpha0), format_optional(gr.lambda),
                             format_number(gr.residual), gr.bisection_steps);
  out.line(fmt::format("alpha0={} lambda={} residual={}", format_number(gr.alpha0),
                       gr.lambda ? format_number(*gr.lambda) : "none", format_number(gr.residual)));
}

void cmd_scan(const RunConfig& c, Sinks& out, unsigned threads)
{
  const auto profile = c.build();
  auto opt = c.scan_options();
  opt.threads = threads;
  const auto verdict = global_scan(profile, c.params, opt);
  if (out.json())
    out.emit(scan_json(verdict));
  else
    write_scan_csv(*out.data, verdict);
  for (const auto& v : verdict.modes)
    if (!v.ok())
      std::cerr << fmt::format("mode ({},{}) failed: {}\n", v.mode.k1, v.mode.k2, v.error);
  out.line(scan_summary(verdict));
}

void cmd_witness(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  WitnessField w;
  std::optional<double> critical;
  if (c.witness == WitnessKind::horizontal_field)
  {
    w = horizontal_field_witness(profile, c.params, config_mode(c));
    critical = critical_period(profile, c.params);
  }
  else
    w = small_field_witness(profile, c.params, c.epsilon);

  if (out.json())
  {
    Json j = json_header("witness");
    j["kind"] = c.witness == WitnessKind::horizontal_field ? "horizontal_field" : "small_field";
    if (c.witness == WitnessKind::horizontal_field)
      j["critical_L1"] = json_optional(critical);
    j["witness"] = witness_json(w);
    out.emit(j);
  }
  else
    write_witness_csv(*out.data, w);
  std::string line = fmt::format("energy_value={} closed_form_value={} positive={}", format_number(w.energy_value),
                                 format_number(w.closed_form_value), w.positive() ? "true" : "false");
  if (c.witness == WitnessKind::horizontal_field)
    line += fmt::format(" critical_L1={}", critical ? format_number(*critical) : "none");
  else
    line += fmt::format(" epsilon={}", format_number(w.epsilon));
  out.line(line);
}

void cmd_thresholds(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  const auto r = c.medium == Medium::mhd ? vertical_field_threshold(profile, c.params.lambda, c.params.M[2])
                                         : viscoelastic_threshold(profile, c.params.kappa_plus, c.params.kappa_minus);
  if (out.json())
  {
    Json j = json_header("thresholds");
    j["thresholds"] = Json::array({threshold_json(r)});
    out.emit(j);
  }
  else
    write_threshold_csv(*out.data, r);
  out.line(threshold_summary(r));
}

void cmd_evolve(const RunConfig& c, Sinks& out)
{
  const auto profile = c.build();
  const auto mode = config_mode(c);
  const auto m = assemble(profile, c.params, mode, c.assembly);
  const auto gr = growth_rate(m, c.medium, c.fixed_point_tol);
  if (!gr.lambda && (!c.evolution.dt || !c.evolution.T))
    fail(ErrorKind::Validation, "evolution.dt and evolution.T are required for a mode without growth");
  const double dt = c.evolution.dt.value_or(gr.lambda ? 1e-3 / *gr.lambda : 0.0);
  const double T = c.evolution.T.value_or(gr.lambda ? 10.0 / *gr.lambda : 0.0);
  const auto r = integrate_linearized(m, c.medium, dt, T, c.evolution.seed);
  const std::optional<double> rel =
      gr.lambda ? std::optional<double>((r.fitted_rate - *gr.lambda) / *gr.lambda) : std::nullopt;
  if (out.json())
  {
    Json j = json_header("evolve");
    j.update(Json{{"k1", mode.k1}, {"k2", mode.k2}, {"dt", dt}, {"T", T}, {"seed", c.evolution.seed},
                  {"fitted_rate", r.fitted_rate}, {"lambda", json_optional(gr.lambda)},
                  {"relative_difference", json_optional(rel)},
                  {"fit_window", Json::array({r.fit_window.first, r.fit_window.second})},
                  {"energy_balance_residual", r.energy_balance_residual}, {"trajectory", trajectory_json(r)}});
    out.emit(j);
  }
  else
    write_trajectory_csv(*out.data, r);
  out.line(fmt::format("fitted_rate={} lambda={} relative_difference={} energy_balance_residual={}",
                       format_number(r.fitted_rate), gr.lambda ? format_number(*gr.lambda) : "none",
                       rel ? format_number(*rel) : "none", format_number(r.energy_balance_residual)));
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Linear Rayleigh-Taylor stability analysis of stratified MHD and viscoelastic layers"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  unsigned threads = 0;

  const char* commands[][2] = {
      {"equilibrium", "Build the equilibrium profile and export it"},
      {"xi", "Discriminant of the configured mode"},
      {"growth", "Growth rate of the configured mode"},
      {"scan", "Discriminant and growth rate over the mode lattice"},
      {"witness", "Explicit instability witness field"},
      {"thresholds", "Closed-form sufficient stability thresholds"},
      {"evolve", "Linearized time evolution of the configured mode"},
  };
  for (const auto& [name, help] : commands)
  {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Configuration file (INI, or JSON by extension)")->required();
    sub->add_option("--out", out_path, "Output path for the data artifact");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "Worker threads for scans (default RT_SPECTRA_THREADS or all cores)");
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try
  {
    RunConfig config = load_config(config_path);
    if (out_path)
      config.output_path = out_path;
    if (format)
      config.format = parse_output_format(*format);
    Sinks sinks(config.output_path, config.format);

    if (command == "equilibrium")
      cmd_equilibrium(config, sinks);
    else if (command == "xi")
      cmd_xi(config, sinks);
    else if (command == "growth")
      cmd_growth(config, sinks);
    else if (command == "scan")
      cmd_scan(config, sinks, threads);
    else if (command == "witness")
      cmd_witness(config, sinks);
    else if (command == "thresholds")
      cmd_thresholds(config, sinks);
    else
      cmd_evolve(config, sinks);
    sinks.data->flush();
    if (!*sinks.data)
    {
      std::cerr << "error: failed to write output\n";
      return kSolver;
    }
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
