// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace
{

struct RunResult
{
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("rt_spectra_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text)
  {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  RunResult run(const std::string& args)
  {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(RT_SPECTRA_EXE) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  static std::string base_config(const std::string& medium_block, const std::string& extra = "")
  {
    return "[geometry]\nh_minus = -1\nh_plus = 1\nL1 = 1\nL2 = 1\n"
           "[equilibrium]\ng = 1\nrho_plus_interface = 2\nlaw_plus = linear\nc2_plus = 1\nlaw_minus = linear\n"
           "c2_minus = 2\n"
           "[viscosity]\nmu_plus = 0.1\nmu_minus = 0.1\nvarsigma_plus = 0.1\nvarsigma_minus = 0.1\n" +
           medium_block + "[numerics]\nn_per_layer = 16\nk_max = 2\n" + extra;
  }

  fs::path dir_;
};

const std::string kMhd = "[mhd]\nlambda = 1\nM1 = 0\nM2 = 0\nM3 = 0\n";
const std::string kVisco = "[viscoelastic]\nkappa_plus = 0.55\nkappa_minus = 0.55\n";

}  // namespace

TEST_F(Cli, ViscoelasticThresholdLine)
{
  const auto cfg = write("v.ini", base_config(kVisco));
  const auto r = run("thresholds --config " + cfg.string() + " --out " + (dir_ / "t.csv").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("kappa_threshold=0.5 "), std::string::npos) << r.out;
  EXPECT_EQ(slurp(dir_ / "t.csv").rfind("kind,threshold_value,", 0), 0u);
}

TEST_F(Cli, NegativeViscosityNamesTheKey)
{
  std::string text = base_config(kMhd);
  text.replace(text.find("mu_plus = 0.1"), 13, "mu_plus = -0.1");
  const auto cfg = write("bad.ini", text);
  const auto r = run("scan --config " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mu_plus"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigErrorsAndUsage)
{
  EXPECT_EQ(run("scan --config " + write("broken.ini", "[geometry\nh_minus = -1\n").string()).code, 4);
  const auto unknown = run("scan --config " + write("unknown.ini", base_config(kMhd, "bogus = 3\n")).string());
  EXPECT_EQ(unknown.code, 4);
  EXPECT_NE(unknown.err.find("numerics.bogus"), std::string::npos);
  EXPECT_EQ(run("scan --config " + write("both.ini", base_config(kMhd + kVisco)).string()).code, 4);
  EXPECT_EQ(run("scan --config " + write("nomed.ini", base_config("")).string()).code, 4);
  const auto malformed = run("xi --config " + write("mal.ini", base_config(kMhd, "grading = fast\n")).string());
  EXPECT_EQ(malformed.code, 4);
  EXPECT_NE(malformed.err.find("numerics.grading"), std::string::npos);
  EXPECT_EQ(run("scan").code, 1);
  EXPECT_EQ(run("frobnicate --config x.ini").code, 1);
  EXPECT_EQ(run("scan --config " + (dir_ / "missing.ini").string()).code, 4);
}

TEST_F(Cli, ScanCsvIsDeterministic)
{
  const auto cfg = write("s.ini", base_config(kMhd));
  const auto a = run("scan --config " + cfg.string() + " --threads 1 --out " + (dir_ / "a.csv").string());
  const auto b = run("scan --config " + cfg.string() + " --threads 3 --out " + (dir_ / "b.csv").string());
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string ta = slurp(dir_ / "a.csv");
  EXPECT_EQ(ta, slurp(dir_ / "b.csv"));
  EXPECT_EQ(ta.substr(0, ta.find('\n')), "k1,k2,xi1,xi2,xi_value,alpha0,lambda,residual");
  EXPECT_NE(ta.find(",inf,"), std::string::npos);
  EXPECT_EQ(a.out.rfind("global_xi=inf global_lambda=", 0), 0u) << a.out;
  EXPECT_NE(a.out.find("truncation_converged="), std::string::npos);
  // Thirteen modes on the half lattice with k_max = 2, plus header and summary.
  EXPECT_EQ(std::count(ta.begin(), ta.end(), '\n'), 13 + 2);
}

TEST_F(Cli, JsonOutputCarriesSchemaVersion)
{
  const auto cfg = write("s.json", R"({
    "equilibrium": {"g": "1", "rho_plus_interface": "2", "c2_plus": "1", "c2_minus": "2"},
    "mhd": {"lambda": "1", "M3": "0"},
    "numerics": {"n_per_layer": "16", "k_max": "1"}
  })");
  const auto r = run("scan --config " + cfg.string() + " --format json --out " + (dir_ / "s.json.out").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "s.json.out"));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["modes"].size(), 5u);
  EXPECT_EQ(j["summary"]["global_xi"]["special"], "inf");
  for (const auto& m : j["modes"])
    if (m["k1"] == 0 && m["k2"] == 0)
    {
      EXPECT_EQ(m["xi_value"], 0.0);
      EXPECT_TRUE(m["lambda"].is_null());
    }
    else
      EXPECT_EQ(m["xi_value"]["special"], "inf");
}

TEST_F(Cli, SingleModeCommands)
{
  const auto cfg = write("m.ini", base_config(kMhd, "[evolution]\nseed = 4\n"));
  const auto growth = run("growth --config " + cfg.string() + " --out " + (dir_ / "g.csv").string());
  ASSERT_EQ(growth.code, 0) << growth.err;
  EXPECT_EQ(growth.out.rfind("alpha0=", 0), 0u);
  const auto xi = run("xi --config " + cfg.string() + " --out " + (dir_ / "x.csv").string());
  EXPECT_EQ(xi.out, "xi_value=inf\n");
  const auto eq = run("equilibrium --config " + cfg.string());
  EXPECT_EQ(eq.code, 0);
  EXPECT_NE(eq.out.find("y3,rho,rho_prime,p_prime_rho"), std::string::npos);
  EXPECT_NE(eq.err.find("density_jump=1 rt_condition=true"), std::string::npos);
  const auto wit = run("witness --config " + cfg.string() + " --out " + (dir_ / "w.csv").string());
  EXPECT_EQ(wit.code, 0) << wit.err;
  EXPECT_NE(wit.out.find("positive=true"), std::string::npos);
  const auto evo = run("evolve --config " + cfg.string() + " --out " + (dir_ / "e.csv").string());
  ASSERT_EQ(evo.code, 0) << evo.err;
  EXPECT_EQ(slurp(dir_ / "e.csv").rfind("t,eta_norm,u_norm\n", 0), 0u);
  EXPECT_NE(evo.out.find("relative_difference="), std::string::npos);

  // A stable mode without dt and T cannot pick a time scale.
  const auto stable = write("st.ini", base_config("[mhd]\nlambda = 1\nM3 = 3\n"));
  EXPECT_EQ(run("evolve --config " + stable.string()).code, 2);
  // Horizontal witness at a mode with xi1 = 0.
  const auto deg = write("deg.ini", base_config(kMhd, "[mode]\nk1 = 0\nk2 = 1\n"));
  EXPECT_EQ(run("witness --config " + deg.string()).code, 2);
}
