// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "assembly.hpp"
#include "equilibrium.hpp"
#include "error.hpp"
#include "forms.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace rtspectra
{

enum class OutputFormat
{
  csv,
  json
};

enum class WitnessKind
{
  horizontal_field,
  small_field
};

struct EvolutionConfig
{
  /// Unset values default to dt = 1e-3 / Lambda and T = 10 / Lambda.
  std::optional<double> dt;
  std::optional<double> T;
  std::uint64_t seed = 1;
};

struct RunConfig
{
  Geometry geometry;
  double g = 1.0;
  double rho_plus_interface = 2.0;
  PressureLaw law_plus = PressureLaw::linear(1.0);
  PressureLaw law_minus = PressureLaw::linear(2.0);
  PhysicalParams params;
  Medium medium = Medium::mhd;
  AssemblyOptions assembly;
  int k_max = 8;
  double fixed_point_tol = 1e-8;
  double eig_tol = 1e-14;
  double null_tolerance = 1e-10;
  int k1 = 1;
  int k2 = 0;
  EvolutionConfig evolution;
  WitnessKind witness = WitnessKind::horizontal_field;
  double epsilon = 0.1;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;

  void validate() const
  {
    geometry.validate();
    law_plus.validate();
    law_minus.validate();
    params.validate();
    auto positive = [](double v, const char* key) {
      if (!(v > 0.0) || !std::isfinite(v))
        fail(ErrorKind::Validation, fmt::format("{} must be > 0", key));
    };
    positive(rho_plus_interface, "rho_plus_interface");
    if (!(g >= 0.0) || !std::isfinite(g))
      fail(ErrorKind::Validation, "g must be >= 0");
    if (assembly.n_per_layer < 4)
      fail(ErrorKind::Validation, "n_per_layer must be >= 4");
    if (!(assembly.grading >= 1.0))
      fail(ErrorKind::Validation, "grading must be >= 1");
    if (assembly.quadrature_order < 2 || assembly.quadrature_order > 20)
      fail(ErrorKind::Validation, "quadrature_order must lie in [2, 20]");
    if (k_max < 1)
      fail(ErrorKind::Validation, "k_max must be >= 1");
    positive(fixed_point_tol, "fixed_point_tol");
    positive(eig_tol, "eig_tol");
    positive(null_tolerance, "null_tolerance");
    if (evolution.dt)
      positive(*evolution.dt, "dt");
    if (evolution.T)
      positive(*evolution.T, "T");
    positive(epsilon, "epsilon");
  }

  ScanOptions scan_options() const
  {
    ScanOptions s;
    s.k_max = k_max;
    s.medium = medium;
    s.assembly = assembly;
    s.fixed_point_tol = fixed_point_tol;
    s.xi.tolerance = eig_tol;
    s.xi.null_tolerance = null_tolerance;
    return s;
  }

  EquilibriumProfile build() const { return build_profile(geometry, law_plus, law_minus, g, rho_plus_interface); }
};

namespace detail
{

using boost::property_tree::ptree;

class ConfigReader
{
public:
  explicit ConfigReader(const ptree& root) : root_(root)
  {
    for (const auto& [section, body] : root_)
    {
      if (body.empty())
        fail(ErrorKind::ConfigParse, fmt::format("top-level key '{}' must be a section", section));
      if (!known_.contains(section))
        fail(ErrorKind::ConfigParse, fmt::format("unknown section '{}'", section));
      for (const auto& [key, v] : body)
        if (!known_.at(section).contains(key))
          fail(ErrorKind::ConfigParse, fmt::format("unknown key '{}.{}'", section, key));
    }
  }

  bool has_section(const std::string& s) const { return root_.get_child_optional(s).has_value(); }

  template <class T>
  std::optional<T> get(const std::string& section, const std::string& key) const
  {
    const auto node = root_.get_child_optional(ptree::path_type(section + "." + key));
    if (!node)
      return std::nullopt;
    const std::string text = node->data();
    if constexpr (std::is_same_v<T, std::string>)
      return text;
    else
    {
      auto v = node->get_value_optional<T>();
      if (!v)
        fail(ErrorKind::ConfigParse, fmt::format("key '{}.{}' has malformed value '{}'", section, key, text));
      return *v;
    }
  }

  template <class T>
  void read(const std::string& section, const std::string& key, T& target) const
  {
    if (auto v = get<T>(section, key))
      target = *v;
  }

private:
  const ptree& root_;
  inline static const std::map<std::string, std::set<std::string>> known_{
      {"geometry", {"h_minus", "h_plus", "L1", "L2"}},
      {"equilibrium",
       {"g", "rho_plus_interface", "law_plus", "c2_plus", "K_plus", "gamma_plus", "law_minus", "c2_minus", "K_minus",
        "gamma_minus"}},
      {"viscosity", {"mu_plus", "mu_minus", "varsigma_plus", "varsigma_minus"}},
      {"mhd", {"lambda", "M1", "M2", "M3"}},
      {"viscoelastic", {"kappa_plus", "kappa_minus"}},
      {"numerics",
       {"n_per_layer", "grading", "quadrature_order", "k_max", "fixed_point_tol", "eig_tol", "null_tolerance",
        "element"}},
      {"mode", {"k1", "k2"}},
      {"evolution", {"dt", "T", "seed"}},
      {"witness", {"kind", "epsilon"}},
      {"output", {"path", "format"}},
  };
};

inline PressureLaw read_law(const ConfigReader& r, const std::string& side, PressureLaw fallback)
{
  const std::string kind = r.get<std::string>("equilibrium", "law_" + side).value_or(
      fallback.kind == PressureLaw::Kind::linear ? "linear" : "polytropic");
  if (kind == "linear")
  {
    PressureLaw law = PressureLaw::linear(fallback.c2);
    r.read("equilibrium", "c2_" + side, law.c2);
    return law;
  }
  if (kind == "polytropic")
  {
    PressureLaw law = PressureLaw::polytropic(fallback.K, fallback.gamma);
    r.read("equilibrium", "K_" + side, law.K);
    r.read("equilibrium", "gamma_" + side, law.gamma);
    return law;
  }
  fail(ErrorKind::ConfigParse, fmt::format("key 'equilibrium.law_{}' must be linear or polytropic, got '{}'", side, kind));
}

inline OutputFormat parse_format(const std::string& s)
{
  if (s == "csv")
    return OutputFormat::csv;
  if (s == "json")
    return OutputFormat::json;
  fail(ErrorKind::ConfigParse, fmt::format("key 'output.format' must be csv or json, got '{}'", s));
}

}  // namespace detail

inline OutputFormat parse_output_format(const std::string& s) { return detail::parse_format(s); }

/// Build a RunConfig from a parsed tree; missing keys keep their defaults.
inline RunConfig config_from_tree(const boost::property_tree::ptree& tree)
{
  const detail::ConfigReader r(tree);
  RunConfig c;
  r.read("geometry", "h_minus", c.geometry.h_minus);
  r.read("geometry", "h_plus", c.geometry.h_plus);
  r.read("geometry", "L1", c.geometry.L1);
  r.read("geometry", "L2", c.geometry.L2);
  r.read("equilibrium", "g", c.g);
  r.read("equilibrium", "rho_plus_interface", c.rho_plus_interface);
  c.law_plus = detail::read_law(r, "plus", c.law_plus);
  c.law_minus = detail::read_law(r, "minus", c.law_minus);
  r.read("viscosity", "mu_plus", c.params.mu_plus);
  r.read("viscosity", "mu_minus", c.params.mu_minus);
  r.read("viscosity", "varsigma_plus", c.params.varsigma_plus);
  r.read("viscosity", "varsigma_minus", c.params.varsigma_minus);

  const bool mhd = r.has_section("mhd"), visco = r.has_section("viscoelastic");
  if (mhd == visco)
    fail(ErrorKind::ConfigParse, "exactly one of the sections 'mhd' and 'viscoelastic' is required");
  c.medium = mhd ? Medium::mhd : Medium::viscoelastic;
  r.read("mhd", "lambda", c.params.lambda);
  r.read("mhd", "M1", c.params.M[0]);
  r.read("mhd", "M2", c.params.M[1]);
  r.read("mhd", "M3", c.params.M[2]);
  r.read("viscoelastic", "kappa_plus", c.params.kappa_plus);
  r.read("viscoelastic", "kappa_minus", c.params.kappa_minus);

  if (auto n = r.get<long>("numerics", "n_per_layer"))
  {
    if (*n < 4)
      fail(ErrorKind::Validation, "n_per_layer must be >= 4");
    c.assembly.n_per_layer = static_cast<std::size_t>(*n);
  }
  r.read("numerics", "grading", c.assembly.grading);
  r.read("numerics", "quadrature_order", c.assembly.quadrature_order);
  r.read("numerics", "k_max", c.k_max);
  r.read("numerics", "fixed_point_tol", c.fixed_point_tol);
  r.read("numerics", "eig_tol", c.eig_tol);
  r.read("numerics", "null_tolerance", c.null_tolerance);
  if (auto e = r.get<std::string>("numerics", "element"))
  {
    if (*e == "p1")
      c.assembly.family = ElementFamily::p1;
    else if (*e == "p1_bubble")
      c.assembly.family = ElementFamily::p1_bubble;
    else
      fail(ErrorKind::ConfigParse, fmt::format("key 'numerics.element' must be p1 or p1_bubble, got '{}'", *e));
  }
  r.read("mode", "k1", c.k1);
  r.read("mode", "k2", c.k2);
  c.evolution.dt = r.get<double>("evolution", "dt");
  c.evolution.T = r.get<double>("evolution", "T");
  r.read("evolution", "seed", c.evolution.seed);
  if (auto w = r.get<std::string>("witness", "kind"))
  {
    if (*w == "horizontal_field")
      c.witness = WitnessKind::horizontal_field;
    else if (*w == "small_field")
      c.witness = WitnessKind::small_field;
    else
      fail(ErrorKind::ConfigParse, fmt::format("key 'witness.kind' must be horizontal_field or small_field, got '{}'", *w));
  }
  r.read("witness", "epsilon", c.epsilon);
  c.output_path = r.get<std::string>("output", "path");
  if (auto f = r.get<std::string>("output", "format"))
    c.format = detail::parse_format(*f);
  c.validate();
  return c;
}

/// Load an INI file, or JSON when the extension is .json.
inline RunConfig load_config(const std::filesystem::path& path)
{
  boost::property_tree::ptree tree;
  try
  {
    if (path.extension() == ".json")
      boost::property_tree::read_json(path.string(), tree);
    else
      boost::property_tree::read_ini(path.string(), tree);
  }
  catch (const boost::property_tree::file_parser_error& e)
  {
    fail(ErrorKind::ConfigParse, e.what());
  }
  return config_from_tree(tree);
}

}  // namespace rtspectra
