#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmdisk/config.hpp"
#include "rmdisk/diagnostics.hpp"
#include "rmdisk/errors.hpp"
#include "rmdisk/lineal.hpp"
#include "rmdisk/manifest.hpp"
#include "rmdisk/normalform.hpp"
#include "rmdisk/presets.hpp"
#include "rmdisk/simulator.hpp"
#include "rmdisk/spectrum.hpp"

namespace rmdisk::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name;
  std::vector<std::string> sets;
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config,-c", c.config_path, "key = value config file");
  sub->add_option("--preset,-p", c.preset_name, "start from a named preset");
  sub->add_option("--set,-s", c.sets, "override one key (key=value); repeatable");
  sub->add_option("--out,-o", c.out_dir, "output directory")->capture_default_str();
}

RunConfig resolve(const Common& c, RunConfig base = {}) {
  if (!c.preset_name.empty()) base = preset(c.preset_name);
  if (!c.config_path.empty()) base = load_config(c.config_path, base);
  apply_overrides(base, c.sets);
  validate(base.model);
  return base;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - t0_).count();
    t0_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// ---- spectrum

int run_spectrum(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  Stopwatch sw;
  CsvTable t({"n", "m", "beta", "lambda"});
  const auto modes = mode_list(cfg.model.R, cfg.spectrum_n_max, cfg.spectrum_m_max);
  for (const auto& md : modes) t.row().add(md.n).add(md.m).add(md.beta).add(md.lambda);
  ManifestBuilder mb("spectrum", cfg);
  mb.add_timing("spectrum", sw.lap());
  mb.set("truncation.n_max", cfg.spectrum_n_max);
  mb.set("truncation.m_max", cfg.spectrum_m_max);
  mb.add_output(write_text(c.out_dir, "spectrum.csv", t.str()));
  mb.write(c.out_dir);
  out << modes.size() << " modes -> " << (fs::path(c.out_dir) / "spectrum.csv").string() << "\n";
  return kExitOk;
}

// ---- hopf-curves

int run_hopf_curves(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  const CurveSettings& cs = cfg.curves;
  if (cs.samples < 1) throw ConfigError("curves.samples must be positive");
  if (cs.chi_hi < cs.chi_lo) throw ConfigError("curves.chi_hi must not be below curves.chi_lo");
  Stopwatch sw;
  const ChiTauCurves cv =
      chi_tau_curves(cfg.model, mode_list(cfg.model.R, cs.n_max, cs.m_max), cs.chi_lo, cs.chi_hi, cs.samples, cs.k_max);
  const double t_curves = sw.lap();

  CsvTable t({"chi", "n", "m", "k", "omega_star", "tau_c", "transversality"});
  double worst = 0.0;
  for (const auto& p : cv.points) {
    t.row().add(p.chi).add(p.n).add(p.m).add(p.k).add(p.omega_star).add(p.tau_c).add(p.transversality);
    worst = std::max(worst, p.residual);
  }
  CsvTable on({"n", "m", "chi_lower"});
  for (const auto& o : cv.onsets) on.row().add(o.n).add(o.m).add(o.chi_lower ? format_double(*o.chi_lower) : "none");

  ManifestBuilder mb("hopf-curves", cfg);
  mb.add_timing("curves", t_curves);
  mb.set("truncation.n_max", cs.n_max);
  mb.set("truncation.m_max", cs.m_max);
  mb.set("truncation.k_max", cs.k_max);
  mb.set("tolerances.newton", 1e-13);
  mb.set("tolerances.frequency_domain", 1e-9);
  mb.set("diagnostics.points", static_cast<long long>(cv.points.size()));
  mb.set("diagnostics.max_residual", worst);
  mb.add_output(write_text(c.out_dir, "hopf_curves.csv", t.str()));
  mb.add_output(write_text(c.out_dir, "onsets.csv", on.str()));
  mb.write(c.out_dir);
  out << cv.points.size() << " points, max |Gamma(i omega*)| = " << format_double(worst) << "\n";
  return kExitOk;
}

// ---- normal-form

std::vector<Branch> branches_for(const std::string& name) {
  if (name == "all") return {Branch::RotatingCW, Branch::RotatingCCW, Branch::Standing, Branch::StandingCos};
  return {branch_from_string(name)};
}

int run_normal_form(const Common& c, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  if (cfg.nf_k < 0) throw ConfigError("nf.k must be non-negative");
  Stopwatch sw;
  const SteadyState ss = steady_state(cfg.model);
  const EigenMode mode = eigenmode(cfg.nf_n, cfg.nf_m, cfg.model.R);
  const auto hps = hopf_points(cfg.model, ss, mode, cfg.nf_k);
  if (hps.size() <= static_cast<std::size_t>(cfg.nf_k)) {
    throw NumericalError("mode (" + std::to_string(cfg.nf_n) + "," + std::to_string(cfg.nf_m) +
                         ") has no Hopf point at this chi");
  }
  const HopfPoint& hp = hps[static_cast<std::size_t>(cfg.nf_k)];

  CsvTable t({"n", "m", "k", "branch", "re_g21", "im_g21", "tau_prime0", "rho_prime0", "supercritical"});
  ManifestBuilder mb("normal-form", cfg);
  mb.set("hopf.omega_star", hp.omega_star);
  mb.set("hopf.tau_c", hp.tau_c);
  mb.set("hopf.residual", hp.residual);
  mb.set("hopf.transversality", hp.transversality);
  mb.set("truncation.radial_modes", cfg.nf.radial_modes);
  mb.set("truncation.quad_radial", cfg.nf.quad_radial > 0 ? cfg.nf.quad_radial : 3 * cfg.nf.radial_modes + 40);
  mb.set("truncation.quad_theta", cfg.nf.quad_theta > 0 ? cfg.nf.quad_theta : 16 * cfg.nf_n + 16);
  mb.set("tolerances.resonance_cond", cfg.nf.resonance_cond);
  for (const Branch b : branches_for(cfg.nf_branch)) {
    const NormalFormReport rep = normal_form(cfg.model, hp, b, cfg.nf, cfg.nf_gauge);
    const NormalFormResult& r = rep.result;
    t.row()
        .add(r.n)
        .add(r.m)
        .add(r.k)
        .add(to_string(b))
        .add(r.g21.real())
        .add(r.g21.imag())
        .add(r.tau_prime0)
        .add(r.rho_prime0)
        .add(r.supercritical ? "true" : "false");
    const std::string key = "diagnostics." + to_string(b);
    mb.set(key + ".max_cond", rep.corrections.max_cond);
    mb.set(key + ".max_solve_residual", rep.corrections.max_solve_residual);
    mb.set(key + ".range_residual_11", rep.corrections.range_residual_11);
    mb.set(key + ".range_residual_20", rep.corrections.range_residual_20);
    mb.set(key + ".predicted_side", r.predicted_side);
    out << to_string(b) << ": tau'(0) = " << format_double(r.tau_prime0) << ", rho'(0) = " << format_double(r.rho_prime0)
        << (r.supercritical ? " (supercritical)" : " (subcritical)") << "\n";
  }
  mb.add_timing("normal_form", sw.lap());
  mb.add_output(write_text(c.out_dir, "normal_form.csv", t.str()));
  mb.write(c.out_dir);
  return kExitOk;
}

// ---- simulate

int run_simulate(const Common& c, const std::string& from_manifest, std::ostream& out) {
  RunConfig base;
  if (!from_manifest.empty()) {
    if (!c.preset_name.empty()) throw ConfigError("--manifest and --preset are exclusive");
    base = read_manifest(from_manifest).config;
  }
  const RunConfig cfg = resolve(c, base);
  fs::create_directories(c.out_dir);
  Stopwatch sw;
  Simulator sim(cfg.model, [&] {
    SimConfig s = sim_config(cfg);
    s.keep_frames = false;
    return s;
  }());
  std::vector<double> times;
  FrameWriter fw((fs::path(c.out_dir) / "frames.bin").string());
  try {
    sim.run([&](double t, const Field& f) {
      times.push_back(t);
      fw.push(f);
    });
  } catch (...) {
    try {
      fw.close();
    } catch (...) {
    }
    throw;
  }
  fw.close();
  const double t_run = sw.lap();

  ManifestBuilder mb("simulate", cfg);
  const PolarGrid& g = sim.grid();
  mb.set("grid.nr", g.nr);
  mb.set("grid.ntheta", g.ntheta);
  mb.set("grid.R", g.R);
  mb.set("grid.layout", "frames of u then v, each nr*ntheta little-endian float64, index i*ntheta+j");
  mb.set("steady_state.u_star", sim.steady().u_star);
  mb.set("steady_state.v_star", sim.steady().v_star);
  mb.set("run.dt", sim.dt());
  mb.set("run.delay_steps", sim.delay_steps());
  mb.set("run.output_stride", sim.output_stride());
  mb.set("run.steps", sim.steps());
  mb.set("run.rejected_steps", sim.rejected_steps());
  mb.set("seed", static_cast<long long>(cfg.initial.seed));
  mb.set("scheme", cfg.scheme.name());
  mb.set("times", times);
  mb.add_timing("simulate", t_run);
  mb.add_output(OutputFile{"frames.bin", fw.bytes(), fw.crc32()});
  mb.write(c.out_dir);
  out << times.size() << " frames to t = " << format_double(sim.time()) << " -> "
      << (fs::path(c.out_dir) / "frames.bin").string() << "\n";
  return kExitOk;
}

// ---- classify

ordered_json report_json(const WaveReport& r) {
  ordered_json j;
  j["tag"] = r.tag;
  j["n"] = r.n;
  j["period"] = r.period;
  j["omega"] = r.omega;
  j["phase_velocity"] = r.phase_velocity;
  j["nodal_axes"] = r.nodal_axes;
  j["symmetry_axis"] = r.symmetry_axis;
  j["residuals"] = ordered_json::object();
  for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
  j["shifts"] = ordered_json::object();
  for (const auto& [k, s] : r.shifts) j["shifts"][k] = {{"steps", s.steps}, {"requested", s.requested}, {"used", s.used}};
  j["amplitude"] = r.amplitude;
  j["balance"] = r.balance;
  j["amp_ccw"] = r.amp_ccw;
  j["amp_cw"] = r.amp_cw;
  j["trend"] = r.trend;
  j["t_start"] = r.t_start;
  j["t_end"] = r.t_end;
  j["frames"] = r.frames;
  j["note"] = r.note;
  return j;
}

int run_classify(const Common& c, const std::string& manifest_path, std::ostream& out) {
  if (manifest_path.empty()) throw ConfigError("classify needs --manifest");
  if (!c.preset_name.empty()) throw ConfigError("classify takes its configuration from the manifest");
  Stopwatch sw;
  const VerifyResult vr = verify_manifest(manifest_path);
  if (!vr.ok) {
    std::string msg = "manifest outputs do not verify:";
    for (const auto& p : vr.problems) msg += " " + p + ";";
    throw ConfigError(msg);
  }
  const RunConfig cfg = resolve(c, read_manifest(manifest_path).config);
  const FrameWindow w = read_frames(manifest_path);
  const double t_read = sw.lap();
  const WaveReport rep = classify(w, cfg.classify);
  const double t_classify = sw.lap();

  ordered_json j = report_json(rep);
  j["source"] = fs::absolute(manifest_path).lexically_normal().string();
  {
    // mean angular power over the analysed window
    const FrameWindow tw = trim(w, rep.t_start);
    std::vector<double> power(static_cast<std::size_t>(cfg.classify.n_max) + 1, 0.0);
    for (const auto& f : tw.frames) {
      const AngularSpectrum sp = angular_spectrum(w.grid, f.u, w.u_star, cfg.classify.band, cfg.classify.n_max);
      for (int k = 0; k <= cfg.classify.n_max; ++k) power[static_cast<std::size_t>(k)] += sp.power(k);
    }
    for (double& p : power) p /= std::max<double>(1.0, static_cast<double>(tw.frames.size()));
    j["angular_power"] = power;
  }

  // residuals over consecutive windows of three periods
  CsvTable t({"t_start", "t_end", "frames", "rotating_ccw", "rotating_cw", "standing"});
  if (rep.period > 0 && rep.t_end > rep.t_start) {
    const double len = 3.0 * rep.period;
    for (double a = rep.t_start; a + len <= rep.t_end + 1e-9; a += len) {
      FrameWindow sub = trim(w, a);
      while (!sub.times.empty() && sub.times.back() > a + len + 1e-9) {
        sub.times.pop_back();
        sub.frames.pop_back();
      }
      t.row().add(a).add(a + len).add(static_cast<long long>(sub.frames.size()));
      for (const char* kind : {"rotating-ccw", "rotating-cw", "standing"}) {
        t.add(symmetry_residual(sub, relation(rep, kind)).value);
      }
    }
  }

  ManifestBuilder mb("classify", cfg);
  mb.set("source", j["source"].get<std::string>());
  mb.add_timing("read", t_read);
  mb.add_timing("classify", t_classify + sw.lap());
  mb.add_output(write_text(c.out_dir, "wave_report.json", j.dump(2) + "\n"));
  mb.add_output(write_text(c.out_dir, "residuals.csv", t.str()));
  mb.write(c.out_dir);
  out << rep.tag << " n=" << rep.n << " period=" << format_double(rep.period) << "\n";
  return kExitOk;
}

// ---- case-preset

int run_case_preset(const std::string& name, const Common& c, std::ostream& out) {
  if (!c.preset_name.empty() || !c.config_path.empty()) throw ConfigError("case-preset takes a preset name only");
  Stopwatch sw;
  const std::vector<std::string> group = preset_group(name);
  RunConfig first = preset(group.front());
  apply_overrides(first, c.sets);
  ManifestBuilder mb("case-preset", first);
  for (const auto& p : group) {
    RunConfig cfg = preset(p);
    apply_overrides(cfg, c.sets);
    mb.add_output(write_text(c.out_dir, p + ".cfg", to_text(cfg)));
    out << p << ": chi = " << format_double(cfg.model.chi) << ", tau = " << format_double(cfg.model.tau)
        << ", d = " << format_double(cfg.model.d) << "\n";
  }
  int case_id = 0;
  if (name == "case1" || name.rfind("case1-", 0) == 0) case_id = 1;
  if (name == "case2" || name.rfind("case2-", 0) == 0) case_id = 2;
  if (case_id > 0) {
    const CrossCheck cc = cross_check(case_id, first.nf);
    mb.add_output(write_text(c.out_dir, "crosscheck.json", cross_check_json(cc)));
    const std::string text = cross_check_text(cc);
    mb.add_output(write_text(c.out_dir, "crosscheck.txt", text));
    out << text;
  }
  mb.set("group", name);
  mb.add_timing("case_preset", sw.lap());
  mb.write(c.out_dir);
  return kExitOk;
}

std::string key_listing() {
  std::ostringstream os;
  for (const auto& k : config_keys()) os << "  " << k.key << "  " << k.help << "\n";
  return os.str();
}

}  // namespace

std::string usage() {
  return "usage: rmdisk <command> [options]\n"
         "commands:\n"
         "  spectrum      Neumann eigenvalues of the disk\n"
         "  hopf-curves   critical delays along chi for each mode\n"
         "  normal-form   g21 and branch direction at a Hopf point\n"
         "  simulate      integrate the delayed system and write frames\n"
         "  classify      wave class of a simulate run (--manifest)\n"
         "  case-preset   write preset configurations (case1, case2 or a preset name)\n"
         "common options: --config FILE  --preset NAME  --set key=value  --out DIR\n"
         "run 'rmdisk <command> --help' for details, 'rmdisk keys' for the config keys\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kExitConfig;
  }
  if (args.front() == "keys") {
    out << key_listing();
    return kExitOk;
  }

  CLI::App app{"Delayed predator-taxis model on a disk", "rmdisk"};
  app.require_subcommand(1);
  Common common;
  std::string manifest;
  std::string case_name;

  auto* sp = app.add_subcommand("spectrum", "Neumann eigenvalues of the disk");
  auto* hc = app.add_subcommand("hopf-curves", "critical delays along chi for each mode");
  auto* nf = app.add_subcommand("normal-form", "g21 and branch direction at a Hopf point");
  auto* sim = app.add_subcommand("simulate", "integrate the delayed system and write frames");
  auto* cl = app.add_subcommand("classify", "wave class of a simulate run");
  auto* cp = app.add_subcommand("case-preset", "write preset configurations");
  for (auto* s : {sp, hc, nf, sim, cl, cp}) add_common(s, common);
  sim->add_option("--manifest,-m", manifest, "re-run the configuration recorded in a manifest");
  cl->add_option("--manifest,-m", manifest, "manifest of a simulate run")->required();
  cp->add_option("name", case_name, "case1, case2 or a preset name")->required();

  std::vector<const char*> argv{"rmdisk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sp->parsed()) return run_spectrum(common, out);
    if (hc->parsed()) return run_hopf_curves(common, out);
    if (nf->parsed()) return run_normal_form(common, out);
    if (sim->parsed()) return run_simulate(common, manifest, out);
    if (cl->parsed()) return run_classify(common, manifest, out);
    if (cp->parsed()) return run_case_preset(case_name, common, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResonanceError& e) {
    err << "resonance: " << e.what() << "\n";
    return kExitResonance;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << usage();
  return kExitConfig;
}

}  // namespace rmdisk::cli
