// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Independent of GTest so the report stays one line per item.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "oracles.hpp"
#include "rtspectra/rtspectra.hpp"
#include "test_support.hpp"

using namespace rtspectra;
using testing_support::CanonicalExact;

namespace
{

struct Outcome
{
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what)
  {
    if (!ok)
    {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Criterion
{
  int id;
  std::string name;
  double budget_seconds;  // 0 means no runtime bound
  std::function<void(Outcome&)> body;
};

const EquilibriumProfile& canonical() { return testing_support::canonical_profile(); }

EquilibriumProfile canonical_with(const Geometry& geo)
{
  return build_profile(geo, PressureLaw::linear(1.0), PressureLaw::linear(2.0), 1.0, 2.0);
}

PhysicalParams with_field(Vec3 M)
{
  PhysicalParams p;
  p.M = M;
  return p;
}

PhysicalParams with_kappa(double k)
{
  PhysicalParams p;
  p.kappa_plus = p.kappa_minus = k;
  return p;
}

AssemblyOptions mesh(std::size_t n)
{
  AssemblyOptions opt;
  opt.n_per_layer = n;
  return opt;
}

ScanOptions scan_options(std::size_t n, int k_max, Medium medium = Medium::mhd)
{
  ScanOptions s;
  s.assembly = mesh(n);
  s.k_max = k_max;
  s.medium = medium;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

double min_eigenvalue(const BandedHermitian& a)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

NodalField random_nodal(std::mt19937_64& rng, const std::shared_ptr<const Discretization>& disc)
{
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(disc->size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = {nd(rng), nd(rng)};
  return NodalField(disc, v);
}

FunctionField imaginary_horizontal(const testing_support::RandomProfile& p)
{
  auto rotate = [](CVec3 v) { return CVec3{-I * v[0], -I * v[1], v[2]}; };
  return FunctionField(
      FunctionField::uniform_breakpoints(Geometry{}, 16), [p, rotate](double y, Side) { return rotate(p.value(y)); },
      [p, rotate](double y, Side s) { return rotate(p.derivative(y, s)); });
}

// 1
void equilibrium_exactness(Outcome& out)
{
  const auto& p = canonical();
  double worst = 0.0, ode = 0.0;
  for (Side side : {Side::minus, Side::plus})
  {
    const double c2 = side == Side::plus ? 1.0 : 2.0, r0 = side == Side::plus ? 2.0 : 1.0;
    const auto& t = p.table(side);
    for (std::size_t i = 0; i < t.y.size(); ++i)
    {
      const double exact = r0 * std::exp(-t.y[i] / c2);
      worst = std::max(worst, std::abs(t.rho[i] - exact) / exact);
    }
    // ODE residual with rho' from a fourth-order difference of the interpolated profile.
    const double lo = side == Side::plus ? 0.0 : -1.0, d = 1e-3;
    for (int i = 1; i < 100; ++i)
    {
      const double y = lo + i / 100.0;
      auto r = [&](double s) { return p.evaluate(y + s * d, side).rho; };
      const double drho = (r(-2) - 8.0 * r(-1) + 8.0 * r(1) - r(2)) / (12.0 * d);
      const double rho = r(0);
      ode = std::max(ode, std::abs(p.law(side).derivative(rho) * drho + rho * p.gravity()) / (rho * p.gravity()));
    }
  }
  const double pp = p.law(Side::plus).pressure(p.interface_density(Side::plus));
  const double pm = p.law(Side::minus).pressure(p.interface_density(Side::minus));
  out.require(worst <= 1e-10, fmt::format("max relative profile error {:.3e}", worst));
  out.require(ode <= 1e-9, fmt::format("ODE residual {:.3e}", ode));
  out.require(std::abs(pp - pm) <= 1e-12 * pp, "pressure continuity");
  out.note(fmt::format("max_rel_err={:.2e} ode_residual={:.2e}", worst, ode));
}

// 2
void form_reduction(Outcome& out)
{
  std::mt19937_64 rng(2024);
  PhysicalParams params = with_field({0.8, 0.0, 0.0});
  params.lambda = 1.3;
  const FormCoefficients c(canonical(), params);
  const double modes[5][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, -2.0}, {3.0, 2.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial)
  {
    const auto prof = testing_support::random_profile(rng, 4, true);
    const auto w = imaginary_horizontal(prof);
    for (const auto& m : modes)
    {
      const double oracle = testing_support::horizontal_energy_oracle(prof, m[0], m[1], params.lambda, params.M[0]);
      const double value = energy_form(w, c, FourierMode::from_frequency(m[0], m[1]), Medium::mhd);
      worst = std::max(worst, std::abs(value - oracle) / std::abs(oracle));
    }
  }
  out.require(worst <= 1e-10, fmt::format("relative error {:.3e}", worst));
  out.note(fmt::format("100 evaluations, max_rel_err={:.2e}", worst));
}

// 3
void integration_by_parts(Outcome& out)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PhysicalParams params = with_field({0.4, -0.9, 1.7});
  const FormCoefficients c(canonical(), params);
  const auto disc = make_discretization(Geometry{}, [] {
    AssemblyOptions o = mesh(10);
    o.grading = 1.3;
    return o;
  }());
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial)
  {
    const auto mode = FourierMode::from_frequency(u(rng), u(rng));
    double a, b;
    if (trial % 2 == 0)
    {
      const auto w = testing_support::random_profile(rng).field();
      a = gravity_form(w, c, mode);
      b = theta_numerator_form(w, c, mode);
    }
    else
    {
      const auto w = random_nodal(rng, disc);
      a = gravity_form(w, c, mode);
      b = theta_numerator_form(w, c, mode);
    }
    worst = std::max(worst, rel(a, b));
  }
  out.require(worst <= 1e-8, fmt::format("relative gap {:.3e}", worst));
  out.note(fmt::format("200 fields, max_rel_gap={:.2e}", worst));
}

// 4
void matrix_invariants(Outcome& out)
{
  PhysicalParams rich = with_field({0.6, -0.4, 1.1});
  rich.mu_plus = 0.2;
  rich.mu_minus = 0.5;
  rich.varsigma_plus = 0.0;
  rich.varsigma_minus = 0.3;
  rich.kappa_plus = 0.7;
  rich.kappa_minus = 0.25;
  int checked = 0;
  for (const auto& profile : {canonical(), testing_support::polytropic_profile()})
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{2, -1}, std::pair{-3, 2}})
      for (auto family : {ElementFamily::p1, ElementFamily::p1_bubble})
      {
        AssemblyOptions opt = mesh(40);
        opt.family = family;
        const auto m = assemble(profile, rich, FourierMode::from_lattice(k1, k2, Geometry{}), opt);
        const std::string where = fmt::format("k=({},{}) {}", k1, k2, to_string(family));
        for (const auto* x : {&m.mass, &m.gravity, &m.compressibility, &m.magnetic, &m.elastic, &m.dissipation})
        {
          const Eigen::MatrixXcd d = x->to_dense();
          out.require((d - d.adjoint()).norm() <= 1e-12 * d.norm(), "Hermitian " + where);
        }
        out.require(min_eigenvalue(m.mass) > 0.0, "mass definite " + where);
        out.require(min_eigenvalue(m.dissipation) > 0.0, "dissipation definite " + where);
        out.require(min_eigenvalue(m.compressibility) >= -1e-12 * m.compressibility.frobenius_norm(),
                    "compressibility semidefinite " + where);
        out.require(min_eigenvalue(m.magnetic) >= -1e-12 * m.magnetic.frobenius_norm(),
                    "magnetic semidefinite " + where);
        ++checked;
      }
  // Production mesh: definiteness through banded Cholesky.
  const auto m = assemble(canonical(), rich, FourierMode::from_lattice(1, 1, Geometry{}), mesh(200));
  out.require(is_positive_definite(m.mass) && is_positive_definite(m.dissipation), "definite at n = 200");
  out.note(fmt::format("{} assemblies checked densely", checked));
}

// 5
void alpha_monotonicity(Outcome& out)
{
  struct Case
  {
    std::string name;
    EquilibriumProfile profile;
    PhysicalParams params;
    Medium medium;
    int k1, k2;
  };
  const std::vector<Case> cases{
      {"canonical", canonical(), PhysicalParams{}, Medium::mhd, 1, 0},
      {"weak vertical", canonical(), with_field({0.0, 0.0, 0.02}), Medium::mhd, 2, 1},
      {"tilted field", canonical(), with_field({0.3, 0.2, 0.5}), Medium::mhd, 1, 1},
      {"soft elastic", canonical(), with_kappa(0.01), Medium::viscoelastic, 1, 0},
      {"polytropic", testing_support::polytropic_profile(), PhysicalParams{}, Medium::mhd, 3, -2},
  };
  int roots = 0;
  for (const auto& cs : cases)
  {
    const auto m = assemble(cs.profile, cs.params, FourierMode::from_lattice(cs.k1, cs.k2, cs.profile.geometry()),
                            mesh(200));
    const auto gr = growth_rate(m, cs.medium);
    const double s_max = 2.0 * gr.upper_bound;
    double prev = alpha(0.0, m, cs.medium).value;
    for (int i = 1; i < 20; ++i)
    {
      const double a = alpha(s_max * i / 19.0, m, cs.medium).value;
      out.require(a <= prev + 1e-12 * std::max(1.0, std::abs(prev)),
                  fmt::format("{}: alpha increased at grid point {}", cs.name, i));
      prev = a;
    }
    if (gr.lambda)
    {
      ++roots;
      const double l2 = *gr.lambda * *gr.lambda;
      const double resid = std::abs(l2 - alpha(*gr.lambda, m, cs.medium).value);
      out.require(resid <= 1e-8 * std::max(1.0, l2), fmt::format("{}: fixed-point residual {:.3e}", cs.name, resid));
    }
  }
  out.require(roots >= 3, "at least three configurations have a growth rate");
  out.note(fmt::format("5 configurations, {} with a root", roots));
}

// 6
void rate_vs_evolution(Outcome& out)
{
  const auto m = assemble(canonical(), PhysicalParams{}, FourierMode::from_lattice(1, 0, Geometry{}), mesh(200));
  const auto gr = growth_rate(m, Medium::mhd);
  out.require(gr.lambda.has_value(), "canonical mode grows");
  if (!gr.lambda)
    return;
  const double L = *gr.lambda;
  const auto r = integrate_linearized(m, Medium::mhd, 1e-3 / L, 10.0 / L, 1);
  const double d = std::abs(r.fitted_rate - L) / L;
  out.require(d <= 0.02, fmt::format("relative difference {:.3e}", d));
  out.note(fmt::format("lambda={:.8f} fitted={:.8f} rel_diff={:.2e}", L, r.fitted_rate, d));
}

// 7
void vertical_sufficiency(Outcome& out)
{
  const auto threshold = vertical_field_threshold(canonical(), 1.0);
  const double M3 = 1.05 * std::sqrt(threshold.threshold_value);
  out.require(std::abs(std::sqrt(threshold.threshold_value) - 2.268) < 5e-4, "threshold near 2.268");
  auto opt = scan_options(200, 8);
  opt.coercivity = true;
  const auto v = global_scan(canonical(), with_field({0.0, 0.0, M3}), opt);
  double min_coercivity = kInfinity;
  for (const auto& mv : v.modes)
  {
    out.require(mv.ok(), fmt::format("mode ({},{}) {}", mv.mode.k1, mv.mode.k2, mv.error));
    if (mv.ok())
    {
      out.require(mv.coercivity && *mv.coercivity > 0.0, fmt::format("coercivity at ({},{})", mv.mode.k1, mv.mode.k2));
      if (mv.coercivity)
        min_coercivity = std::min(min_coercivity, *mv.coercivity);
    }
  }
  out.require(v.global_xi < 1.0, fmt::format("global_xi {:.6f}", v.global_xi));
  out.require(v.truncation_converged, "truncation converged");
  out.require(!v.global_lambda, "no growing mode");
  out.note(fmt::format("M3={:.5f} modes={} global_xi={:.6f} min_coercivity={:.3e}", M3, v.modes.size(), v.global_xi,
                       min_coercivity));
}

// 8
void small_field_instability(Outcome& out)
{
  const auto params = with_field({0.0, 0.0, 0.02});
  const auto v = global_scan(canonical(), params, scan_options(200, 2));
  bool found = false;
  for (const auto& mv : v.modes)
    found = found || (mv.ok() && mv.xi_value > 1.0 && mv.lambda && *mv.lambda > 0.0);
  out.require(found, "a mode with xi > 1 and Lambda > 0");
  const auto w = small_field_witness(canonical(), params, 0.1);
  out.require(w.energy_value > 0.0, "E1 + E2 > 0");
  out.require(std::abs(w.energy_value - w.closed_form_value) <= 1e-10 * std::abs(w.closed_form_value),
              "witness direct and closed-form values agree");
  out.note(fmt::format("global_xi={} global_lambda={:.6f} E1+E2={:.6f} eps={}", format_number(v.global_xi),
                       v.global_lambda.value_or(0.0), w.energy_value, w.epsilon));
}

// 9
void horizontal_instability(Outcome& out)
{
  const auto params = with_field({1.0, 0.0, 0.0});
  const auto L1 = critical_period(canonical(), params);
  out.require(L1 && *L1 > 0.0, "critical period found");
  if (!L1 || !(*L1 > 0.0))
    return;
  auto closed = [&](double l1) {
    return horizontal_closed_form(canonical(), params, FourierMode::from_frequency(1.0 / l1, 1.0),
                                  quadratic_bump(Geometry{}));
  };
  out.require(closed(0.99 * *L1) < 0.0, "closed form negative below L1*");
  for (double f : {1.01, 1.5, 2.0, 4.0, 10.0})
    out.require(closed(f * *L1) > 0.0, fmt::format("closed form positive at {} L1*", f));

  const auto prof = canonical_with(Geometry{-1.0, 1.0, 2.0 * *L1, 1.0});
  const auto v = global_scan(prof, params, scan_options(200, 4));
  out.require(v.global_xi > 1.0, fmt::format("global_xi {}", format_number(v.global_xi)));
  const auto mode = FourierMode::from_lattice(1, 1, prof.geometry());
  const auto w = horizontal_field_witness(prof, params, mode);
  double solver_xi = 0.0;
  for (const auto& mv : v.modes)
    if (mv.mode.k1 == 1 && mv.mode.k2 == 1)
      solver_xi = mv.xi_value;
  out.require(w.positive() == (solver_xi > 1.0), "witness and solver agree at (1,1)");
  out.note(fmt::format("L1*={:.6f} witness={:.6f} xi(1,1)={} global_xi={}", *L1, w.energy_value,
                       format_number(solver_xi), format_number(v.global_xi)));
}

// 10
void viscoelastic(Outcome& out)
{
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PhysicalParams params = with_kappa(0.8);
  params.kappa_minus = 0.35;
  const FormCoefficients c(canonical(), params);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial)
  {
    const auto w = testing_support::random_profile(rng).field();
    const auto mode = FourierMode::from_frequency(u(rng), u(rng));
    worst = std::max(worst, rel(elastic_form(w, c, mode), elastic_form_sum_of_squares(w, c, mode)));
  }
  out.require(worst <= 1e-12, fmt::format("elastic identity gap {:.3e}", worst));

  const auto threshold = viscoelastic_threshold(canonical(), 0.0, 0.0).threshold_value;
  out.require(std::abs(threshold - 0.5) < 1e-12, "threshold 0.5");
  const auto stiff = global_scan(canonical(), with_kappa(1.1 * threshold), scan_options(200, 8, Medium::viscoelastic));
  out.require(stiff.failed_modes == 0 && stiff.global_xi < 1.0,
              fmt::format("stiff global_xi {}", format_number(stiff.global_xi)));
  const auto soft = global_scan(canonical(), with_kappa(0.01), scan_options(200, 2, Medium::viscoelastic));
  out.require(soft.global_xi > 1.0 && soft.global_lambda && *soft.global_lambda > 0.0, "soft medium unstable");
  out.note(fmt::format("identity_gap={:.2e} xi(kappa=0.55)={:.6f} xi(kappa=0.01)={} lambda={:.6f}", worst,
                       stiff.global_xi, format_number(soft.global_xi), soft.global_lambda.value_or(0.0)));
}

// 11
void inequalities(Outcome& out)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), depth(0.3, 2.0), grade(1.0, 1.4);
  std::uniform_int_distribution<int> cells(4, 12);
  int poincare = 0, trace = 0;
  double tightest = 0.0;
  for (int trial = 0; trial < 1000; ++trial)
  {
    const Geometry geo{-depth(rng), depth(rng), 1.0, 1.0};
    const auto mode = FourierMode::from_frequency(u(rng), u(rng));
    const Vec3 nu{u(rng), u(rng), 1.0};
    auto check = [&](const auto& field) {
      const auto pc = poincare_check(field, mode, nu, geo);
      const auto tc = trace_check(field, mode, nu, geo);
      poincare += pc.holds;
      trace += tc.holds;
      tightest = std::max({tightest, pc.ratio(), tc.ratio()});
    };
    if (trial % 2 == 0)
    {
      AssemblyOptions opt = mesh(static_cast<std::size_t>(cells(rng)));
      opt.grading = grade(rng);
      check(random_nodal(rng, make_discretization(geo, opt)));
    }
    else
      check(testing_support::random_profile(rng, 4, false, geo.h_minus, geo.h_plus).field());
  }
  out.require(poincare == 1000, fmt::format("Poincare held on {}/1000", poincare));
  out.require(trace == 1000, fmt::format("trace held on {}/1000", trace));

  const Geometry geo{-0.5, 1.5, 1.0, 1.0};
  AssemblyOptions opt = mesh(400);
  opt.grading = 1.0;
  const auto sine = interpolate(make_discretization(geo, opt), [&](double y) {
    return CVec3{std::sin(kPi * (y - geo.h_minus) / geo.height()), 0.0, 0.0};
  });
  const double ratio = poincare_check(sine, FourierMode{}, {0.0, 0.0, 1.0}, geo).ratio();
  out.require(ratio >= 0.999, fmt::format("equality ratio {:.6f}", ratio));
  out.note(fmt::format("random max ratio={:.4f} equality ratio={:.7f}", tightest, ratio));
}

// 12
void mesh_convergence(Outcome& out)
{
  struct Case
  {
    std::string name;
    PhysicalParams params;
    Medium medium;
  };
  const double M3 = 1.05 * std::sqrt(vertical_field_threshold(canonical(), 1.0).threshold_value);
  const std::vector<Case> cases{{"mhd M=0", PhysicalParams{}, Medium::mhd},
                                {"vertical field", with_field({0.0, 0.0, M3}), Medium::mhd},
                                {"weak vertical field", with_field({0.0, 0.0, 0.02}), Medium::mhd},
                                {"viscoelastic 0.55", with_kappa(0.55), Medium::viscoelastic},
                                {"viscoelastic 0.01", with_kappa(0.01), Medium::viscoelastic}};
  double worst_xi = 0.0, worst_lambda = 0.0;
  int compared = 0;
  for (const auto& cs : cases)
    for (auto [k1, k2] : {std::pair{1, 0}, std::pair{1, 1}, std::pair{3, -2}})
    {
      const auto mode = FourierMode::from_lattice(k1, k2, Geometry{});
      const auto coarse = assemble(canonical(), cs.params, mode, mesh(200));
      const auto fine = assemble(canonical(), cs.params, mode, mesh(400));
      const std::string where = fmt::format("{} ({},{})", cs.name, k1, k2);
      const double xc = xi_per_mode(coarse, cs.medium).value, xf = xi_per_mode(fine, cs.medium).value;
      out.require(std::isinf(xc) == std::isinf(xf), where + ": finiteness of xi changed");
      if (std::isfinite(xc) && std::isfinite(xf))
      {
        worst_xi = std::max(worst_xi, rel(xc, xf));
        out.require(rel(xc, xf) <= 1e-3, fmt::format("{}: xi {:.3e}", where, rel(xc, xf)));
        ++compared;
      }
      const auto lc = growth_rate(coarse, cs.medium).lambda, lf = growth_rate(fine, cs.medium).lambda;
      out.require(lc.has_value() == lf.has_value(), where + ": growth changed");
      if (lc && lf)
      {
        worst_lambda = std::max(worst_lambda, rel(*lc, *lf));
        out.require(rel(*lc, *lf) <= 1e-3, fmt::format("{}: lambda {:.3e}", where, rel(*lc, *lf)));
        ++compared;
      }
    }
  out.note(fmt::format("{} comparisons, max xi change={:.2e}, max lambda change={:.2e}", compared, worst_xi,
                       worst_lambda));
}

// 13
std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& out)
{
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rt_spectra_acceptance";
  fs::create_directories(dir);
  const std::string config = std::string(RT_SPECTRA_SOURCE_DIR) + "/configs/canonical_mhd.ini";
  std::vector<std::string> outputs;
  for (const char* extra : {"--threads 1", "--threads 1", "--threads 3"})
  {
    const fs::path target = dir / fmt::format("scan{}.csv", outputs.size());
    const std::string cmd =
        fmt::format("{} scan --config {} {} --out {} >/dev/null", RT_SPECTRA_EXE, config, extra, target.string());
    const int status = std::system(cmd.c_str());
    out.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "scan exit status");
    outputs.push_back(slurp(target));
  }
  out.require(!outputs[0].empty(), "scan produced output");
  out.require(outputs[0] == outputs[1], "repeated runs are byte-identical");
  out.require(outputs[0] == outputs[2], "thread count does not change the bytes");
  fs::remove_all(dir);
  out.note(fmt::format("3 runs, {} bytes each", outputs[0].size()));
}

}  // namespace

int main(int argc, char** argv)
{
  const std::vector<Criterion> criteria{
      {1, "equilibrium exactness", 1.0, equilibrium_exactness},
      {2, "form reduction oracle", 10.0, form_reduction},
      {3, "integration by parts identity", 0.0, integration_by_parts},
      {4, "matrix invariants", 0.0, matrix_invariants},
      {5, "alpha monotonicity and fixed point", 30.0, alpha_monotonicity},
      {6, "growth rate vs evolution", 60.0, rate_vs_evolution},
      {7, "vertical field sufficiency", 120.0, vertical_sufficiency},
      {8, "small field instability", 0.0, small_field_instability},
      {9, "horizontal field large period instability", 0.0, horizontal_instability},
      {10, "viscoelastic identity and thresholds", 0.0, viscoelastic},
      {11, "inequality suites", 0.0, inequalities},
      {12, "mesh convergence", 0.0, mesh_convergence},
      {13, "determinism", 0.0, determinism},
  };
  // Optional argument: run a single criterion by number.
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;

  int failures = 0;
  for (const auto& c : criteria)
  {
    if (only != 0 && c.id != only)
      continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try
    {
      c.body(out);
    }
    catch (const std::exception& e)
    {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0)
      out.require(seconds < c.budget_seconds, fmt::format("runtime {:.2f} s over {} s budget", seconds, c.budget_seconds));
    failures += !out.pass;
    std::string detail;
    for (const auto& n : out.notes)
      detail += (detail.empty() ? "" : "; ") + n;
    std::cout << fmt::format("{} criterion {:2d} {} ({:.2f} s): {}", out.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                             detail)
              << std::endl;
  }
  std::cout << fmt::format("{} criteria failed", failures) << std::endl;
  return failures == 0 ? 0 : 1;
}
