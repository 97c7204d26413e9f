#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rmdisk/manifest.hpp"

namespace fs = std::filesystem;
using rmdisk::cli::dispatch;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rmdisk_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, EmptyArgvPrintsUsage) {
  const Result r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("usage"), std::string::npos);
}

TEST(Cli, UnknownCommandAndOptionAreUsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--bogus"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--help"}).code, 0);
}

TEST(Cli, UnknownConfigKeyExitsTwo) {
  const fs::path dir = scratch("badkey");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "model.chi = 0.38\nmodel.tua = 9.88\n";
  const Result r = run({"spectrum", "--config", (dir / "run.cfg").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("tua"), std::string::npos);
  EXPECT_EQ(run({"spectrum", "--set", "grid.nrr=3", "--out", dir.string()}).code, 2);
}

TEST(Cli, ResonanceExitsFour) {
  const fs::path dir = scratch("res");
  const Result r = run({"normal-form", "--preset", "case1-consistent", "--set", "nf.resonance_cond=1", "--out", dir.string()});
  EXPECT_EQ(r.code, 4);
}

TEST(Cli, NumericalFailureExitsThree) {
  // mode (6,3) on a small disk has no Hopf frequency at this chi
  const fs::path dir = scratch("num");
  const Result r = run({"normal-form", "--set", "model.chi=0.38", "--set", "model.R=1", "--set", "nf.n=6", "--set", "nf.m=3",
                     "--out", dir.string()});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, SpectrumTableAndManifest) {
  const fs::path dir = scratch("spectrum");
  ASSERT_EQ(run({"spectrum", "--set", "spectrum.n_max=1", "--set", "spectrum.m_max=1", "--out", dir.string()}).code, 0);
  EXPECT_EQ(slurp(dir / "spectrum.csv"), "n,m,beta,lambda\n0,0,0,0\n0,1,3.8317059702075125,0.14681970642123893\n"
                                          "1,1,1.8411837813406593,0.033899577166718882\n");
  EXPECT_TRUE(rmdisk::verify_manifest((dir / "manifest.json").string()).ok);
}

TEST(Cli, CasePresetEmitsCaptionConfigurations) {
  const fs::path dir = scratch("case1");
  const Result r = run({"case-preset", "case1", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig2.cfg"));
  EXPECT_TRUE(fs::exists(dir / "fig4.cfg"));
  EXPECT_TRUE(fs::exists(dir / "crosscheck.json"));
  const std::string fig4 = slurp(dir / "fig4.cfg");
  EXPECT_NE(fig4.find("model.chi = 0.38\n"), std::string::npos);
  EXPECT_NE(fig4.find("model.tau = 9.8800000000000008\n"), std::string::npos);
  EXPECT_NE(fig4.find("init.u_angle = sin\n"), std::string::npos);
  const fs::path dir2 = scratch("case2");
  ASSERT_EQ(run({"case-preset", "case2", "--out", dir2.string()}).code, 0);
  EXPECT_NE(slurp(dir2 / "fig3.cfg").find("model.chi = 0.46000000000000002\n"), std::string::npos);
  EXPECT_NE(slurp(dir2 / "fig6.cfg").find("model.tau = 9.5999999999999996\n"), std::string::npos);
  EXPECT_EQ(run({"case-preset", "case9", "--out", dir2.string()}).code, 2);
}

TEST(Cli, SimulateIsReproducibleFromManifest) {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b"), k = scratch("sim_k");
  const std::vector<std::string> sets{"--set", "grid.nr=8", "--set", "grid.ntheta=16", "--set", "sim.t_end=30",
                                      "--set", "init.kind=random", "--set", "sim.seed=9"};
  std::vector<std::string> args{"simulate", "--preset", "case2-consistent", "--out", a.string()};
  args.insert(args.end(), sets.begin(), sets.end());
  ASSERT_EQ(run(args).code, 0);
  ASSERT_EQ(run({"simulate", "--manifest", (a / "manifest.json").string(), "--out", b.string()}).code, 0);
  EXPECT_EQ(slurp(a / "frames.bin"), slurp(b / "frames.bin"));
  EXPECT_EQ(fs::file_size(a / "frames.bin"), 16u * 8 * 16 * 2 * 8);
  const auto m = rmdisk::read_manifest((b / "manifest.json").string());
  EXPECT_EQ(m.config.initial.seed, 9u);
  EXPECT_EQ(m.times.size(), 16u);

  // a short run classifies without error; the report and residual table are written twice identically
  ASSERT_EQ(run({"classify", "--manifest", (a / "manifest.json").string(), "--out", k.string()}).code, 0);
  const std::string rep = slurp(k / "wave_report.json"), res = slurp(k / "residuals.csv");
  ASSERT_EQ(run({"classify", "--manifest", (b / "manifest.json").string(), "--out", k.string()}).code, 0);
  EXPECT_EQ(slurp(k / "residuals.csv"), res);
  EXPECT_NE(rep.find("\"tag\""), std::string::npos);
}

TEST(Cli, ClassifyRejectsTamperedFrames) {
  const fs::path a = scratch("tamper");
  ASSERT_EQ(run({"simulate", "--set", "grid.nr=4", "--set", "grid.ntheta=8", "--set", "sim.t_end=4", "--out", a.string()}).code,
            0);
  std::fstream f(a / "frames.bin", std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(3);
  f.put('\x7f');
  f.close();
  EXPECT_EQ(run({"classify", "--manifest", (a / "manifest.json").string(), "--out", a.string()}).code, 2);
}

TEST(Cli, HopfCurvesAndNormalFormTables) {
  const fs::path dir = scratch("curves");
  ASSERT_EQ(run({"hopf-curves", "--preset", "fig1", "--set", "curves.samples=5", "--out", dir.string()}).code, 0);
  const std::string curves = slurp(dir / "hopf_curves.csv");
  EXPECT_EQ(curves.substr(0, curves.find('\n')), "chi,n,m,k,omega_star,tau_c,transversality");
  ASSERT_EQ(run({"normal-form", "--preset", "case2-consistent", "--set", "nf.branch=standing", "--out", dir.string()}).code, 0);
  const std::string nf = slurp(dir / "normal_form.csv");
  EXPECT_NE(nf.find("2,1,0,standing,"), std::string::npos);
}
