// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "criteria.hpp"
#include "equilibrium.hpp"
#include "evolution.hpp"
#include "spectral.hpp"

namespace rtspectra
{

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Shortest round-trip text; "inf" for +infinity, empty for NaN.
inline std::string format_number(double v)
{
  if (std::isnan(v))
    return "";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v == 0.0 ? 0.0 : v);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

/// Finite numbers as JSON numbers, infinities as {"special": "inf"}, NaN as null.
inline Json json_number(double v)
{
  if (std::isnan(v))
    return nullptr;
  if (std::isinf(v))
    return Json{{"special", v > 0 ? "inf" : "-inf"}};
  return v;
}

inline Json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

inline Json json_header(const std::string& command)
{
  return Json{{"schema_version", kSchemaVersion}, {"command", command}};
}

inline constexpr const char* kScanHeader = "k1,k2,xi1,xi2,xi_value,alpha0,lambda,residual";

inline void write_scan_row(std::ostream& os, const ModeVerdict& v)
{
  os << fmt::format("{},{},{},{},{},{},{},{}\n", v.mode.k1, v.mode.k2, format_number(v.mode.xi1),
                    format_number(v.mode.xi2), format_number(v.xi_value), format_number(v.alpha0),
                    format_optional(v.lambda), v.ok() ? format_number(v.residual) : "");
}

inline std::string scan_summary(const StabilityVerdict& s)
{
  return fmt::format("global_xi={} global_lambda={} truncation_converged={}", format_number(s.global_xi),
                     s.global_lambda ? format_number(*s.global_lambda) : "none",
                     s.truncation_converged ? "true" : "false");
}

/// Table of per-mode records sorted by (k1, k2), closed by a comment row
/// carrying the summary.
inline void write_scan_csv(std::ostream& os, const StabilityVerdict& s)
{
  os << kScanHeader << "\n";
  for (const auto& v : s.modes)
    write_scan_row(os, v);
  os << "# " << scan_summary(s) << " failed_modes=" << s.failed_modes << "\n";
}

inline Json mode_json(const ModeVerdict& v)
{
  Json j{{"k1", v.mode.k1},
         {"k2", v.mode.k2},
         {"xi1", v.mode.xi1},
         {"xi2", v.mode.xi2},
         {"xi_value", json_number(v.xi_value)},
         {"alpha0", json_number(v.alpha0)},
         {"lambda", json_optional(v.lambda)},
         {"residual", v.ok() ? json_number(v.residual) : Json(nullptr)},
         {"xi_iterations", v.xi_iterations},
         {"bisection_steps", v.bisection_steps}};
  if (v.coercivity)
    j["coercivity"] = *v.coercivity;
  if (!v.ok())
    j["error"] = v.error;
  return j;
}

inline Json scan_json(const StabilityVerdict& s)
{
  Json j = json_header("scan");
  j["modes"] = Json::array();
  for (const auto& v : s.modes)
    j["modes"].push_back(mode_json(v));
  j["summary"] = Json{{"global_xi", json_number(s.global_xi)},
                      {"global_lambda", json_optional(s.global_lambda)},
                      {"truncation_converged", s.truncation_converged},
                      {"k_max", s.k_max},
                      {"failed_modes", s.failed_modes}};
  return j;
}

inline Json threshold_json(const ThresholdReport& r)
{
  const auto& in = r.inputs;
  return Json{{"kind", to_string(r.kind)},
              {"threshold_value", r.threshold_value},
              {"actual_value", r.actual_value},
              {"sufficient_stability", r.sufficient_stability},
              {"inputs",
               {{"p_inf", in.p_inf},
                {"rho_max", in.rho_max},
                {"g", in.g},
                {"h_minus", in.h_minus},
                {"h_plus", in.h_plus},
                {"lambda", in.lambda},
                {"kappa_plus", in.kappa_plus},
                {"kappa_minus", in.kappa_minus},
                {"density_jump", in.density_jump}}}};
}

inline void write_threshold_csv(std::ostream& os, const ThresholdReport& r)
{
  const auto& in = r.inputs;
  os << "kind,threshold_value,actual_value,sufficient_stability,p_inf,rho_max,g,h_minus,h_plus,lambda,kappa_plus,"
        "kappa_minus,density_jump\n";
  os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.kind), format_number(r.threshold_value),
                    format_number(r.actual_value), r.sufficient_stability ? "true" : "false", format_number(in.p_inf),
                    format_number(in.rho_max), format_number(in.g), format_number(in.h_minus),
                    format_number(in.h_plus), format_number(in.lambda), format_number(in.kappa_plus),
                    format_number(in.kappa_minus), format_number(in.density_jump));
}

/// key=value line; the vertical threshold is a squared field strength.
inline std::string threshold_summary(const ThresholdReport& r)
{
  if (r.kind == ThresholdKind::viscoelastic)
    return fmt::format("kappa_threshold={} kappa_min={} sufficient_stability={}", format_number(r.threshold_value),
                       format_number(r.actual_value), r.sufficient_stability ? "true" : "false");
  return fmt::format("M3_squared_threshold={} M3_threshold={} M3_squared={} sufficient_stability={}",
                     format_number(r.threshold_value), format_number(std::sqrt(r.threshold_value)),
                     format_number(r.actual_value), r.sufficient_stability ? "true" : "false");
}

inline void write_witness_csv(std::ostream& os, const WitnessField& w)
{
  os << "y3,phi,theta,psi\n";
  for (std::size_t i = 0; i < w.y.size(); ++i)
    os << fmt::format("{},{},{},{}\n", format_number(w.y[i]), format_number(w.phi[i]), format_number(w.theta[i]),
                      format_number(w.psi[i]));
}

inline Json witness_json(const WitnessField& w)
{
  Json j{{"k1", w.mode.k1},
         {"k2", w.mode.k2},
         {"xi1", w.mode.xi1},
         {"xi2", w.mode.xi2},
         {"energy_value", w.energy_value},
         {"closed_form_value", w.closed_form_value},
         {"positive", w.positive()}};
  if (w.epsilon > 0.0)
    j["epsilon"] = w.epsilon;
  if (w.magnetic_value)
    j["magnetic_value"] = json_number(*w.magnetic_value);
  j["y3"] = w.y;
  j["phi"] = w.phi;
  j["theta"] = w.theta;
  j["psi"] = w.psi;
  return j;
}

inline Json profile_json(const EquilibriumProfile& p)
{
  Json j = json_header("equilibrium");
  j["g"] = p.gravity();
  j["density_jump"] = p.density_jump();
  j["law_minus"] = p.law(Side::minus).describe();
  j["law_plus"] = p.law(Side::plus).describe();
  Json rows = Json::array();
  for (Side side : {Side::minus, Side::plus})
  {
    const auto& t = p.table(side);
    for (std::size_t i = 0; i < t.y.size(); ++i)
    {
      const auto pt = p.point_from_density(t.rho[i], side);
      rows.push_back(Json{{"y3", t.y[i]}, {"rho", pt.rho}, {"rho_prime", pt.rho_prime}, {"p_prime_rho", pt.p_prime_rho}});
    }
  }
  j["samples"] = std::move(rows);
  return j;
}

inline Json trajectory_json(const EvolutionResult& r)
{
  return Json{{"t", r.times}, {"eta_norm", r.eta_norm}, {"u_norm", r.u_norm}};
}

}  // namespace rtspectra
