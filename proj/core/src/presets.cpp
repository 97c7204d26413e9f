#include "rmdisk/presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "rmdisk/errors.hpp"
#include "rmdisk/lineal.hpp"

namespace rmdisk {

namespace {

RunConfig base_case(int case_id, double d) {
  RunConfig c;
  c.model = ModelParams{};
  c.model.d = d;
  c.model.R = 10.0;
  if (case_id == 1) {
    c.model.chi = 0.38;
    c.model.tau = 9.88;
    c.nf_n = 1;
  } else {
    c.model.chi = 0.46;
    c.model.tau = 9.6;
    c.nf_n = 2;
  }
  c.nf_m = 1;
  c.nf_k = 0;
  c.nf_branch = "all";
  c.initial.kind = InitialHistory::Kind::Formula;
  c.initial.amplitude = 0.1;
  c.initial.u_factor = {Parity::Cos, c.nf_n};
  c.initial.v_factor = {Parity::Cos, c.nf_n};
  return c;
}

RunConfig figure(int case_id, Parity u, Parity v, int n, const std::string& name) {
  RunConfig c = base_case(case_id, 0.8);
  c.preset = name;
  c.initial.u_factor = {u, n};
  c.initial.v_factor = {v, n};
  return c;
}

RunConfig onset(double R, double tau, int n, int nr, int ntheta, const std::string& name) {
  RunConfig c = base_case(1, 0.8);
  c.preset = name;
  c.model.R = R;
  c.model.tau = tau;
  c.nr = nr;
  c.ntheta = ntheta;
  c.t_end = 4000.0;
  c.output_interval = 1.0;
  c.nf_n = n;
  c.initial.u_factor = {Parity::Cos, n};
  c.initial.v_factor = {Parity::Cos, n};
  c.curves.n_max = 4;
  c.curves.m_max = 3;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"case1-consistent", "case1-literal", "case2-consistent", "case2-literal", "fig1", "fig2",
          "fig3",             "fig4",          "fig5",             "fig6",          "onset-n1", "onset-n2"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "case1-consistent") {
    c = base_case(1, 0.8);
  } else if (name == "case1-literal") {
    c = base_case(1, 0.1);
  } else if (name == "case2-consistent") {
    c = base_case(2, 0.8);
  } else if (name == "case2-literal") {
    c = base_case(2, 0.1);
  } else if (name == "fig1") {
    c = base_case(1, 0.8);
    c.curves = CurveSettings{0.0, 0.6, 121, 0, 4, 3};
  } else if (name == "fig2") {
    c = figure(1, Parity::Cos, Parity::Cos, 1, name);
  } else if (name == "fig3") {
    c = figure(2, Parity::Cos, Parity::Cos, 2, name);
  } else if (name == "fig4") {
    c = figure(1, Parity::Sin, Parity::Cos, 1, name);
  } else if (name == "fig5") {
    c = figure(2, Parity::Cos, Parity::Sin, 2, name);
  } else if (name == "fig6") {
    c = base_case(2, 0.8);
    c.initial.kind = InitialHistory::Kind::Random;
    c.initial.amplitude = 0.05;
    c.initial.seed = 1;
  } else if (name == "onset-n1") {
    c = onset(2.6, 9.3, 1, 32, 64, name);
  } else if (name == "onset-n2") {
    c = onset(4.25, 9.0, 2, 48, 96, name);
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ConfigError("unknown preset '" + name + "'; known:" + known);
  }
  c.preset = name;
  return c;
}

std::vector<std::string> preset_group(const std::string& name) {
  if (name == "case1") return {"fig2", "fig4"};
  if (name == "case2") return {"fig3", "fig5", "fig6"};
  (void)preset(name);
  return {name};
}

ReportedValues reported_values(int case_id) {
  ReportedValues r;
  if (case_id == 1) {
    r.n = 1;
    r.m = 1;
    r.omega = 0.1567;
    r.tau_c = 9.8270;
    r.branches = {{"phi^c", -0.4085, 0.1390}, {"phi^c+phi^s", -0.0883, 0.0402}};
  } else if (case_id == 2) {
    r.n = 2;
    r.m = 1;
    r.omega = 0.1938;
    r.tau_c = 9.5520;
    r.branches = {{"phi^s", -0.0631, 0.0467}, {"phi^c+phi^s", -0.4942, 0.1697}};
  } else {
    throw ConfigError("cross-check: case must be 1 or 2");
  }
  return r;
}

CrossCheck cross_check(int case_id, const NormalFormOptions& opts) {
  CrossCheck cc;
  cc.case_id = case_id;
  cc.reported = reported_values(case_id);
  cc.convention =
      "angles increase counterclockwise; supercritical means tau'(0) < 0; the branch lies on the side "
      "-sign(tau'(0)) of tau_c, from dz/dt = gamma(tau) z + (g21/2) z|z|^2 with Re gamma'(tau_c) > 0";
  for (const std::string reading : {"consistent", "literal"}) {
    const std::string name = "case" + std::to_string(case_id) + "-" + reading;
    const RunConfig c = preset(name);
    CrossCheckReading rd;
    rd.preset = name;
    rd.d = c.model.d;
    const SteadyState ss = steady_state(c.model);
    rd.u_star = ss.u_star;
    rd.v_star = ss.v_star;
    const EigenMode mode = eigenmode(cc.reported.n, cc.reported.m, c.model.R);
    const auto hps = hopf_points(c.model, ss, mode, 0);
    if (const auto first = first_hopf(c.model, ss, mode_list(c.model.R, 8, 4))) {
      rd.first_tau = first->tau_c;
      rd.first_n = first->n;
      rd.first_m = first->m;
    }
    if (hps.empty()) {
      rd.note = "no Hopf frequency for this mode";
    } else {
      const HopfPoint& hp = hps.front();
      rd.omega = hp.omega_star;
      rd.tau_c = hp.tau_c;
      rd.residual = hp.residual;
      for (const auto& b : cc.reported.branches) {
        // phi^s alone is phi^c turned by pi/(2n); both give the same coefficients
        const Branch br = b.profile == "phi^c+phi^s" ? Branch::Standing : Branch::StandingCos;
        const NormalFormResult r = normal_form(c.model, hp, br, opts).result;
        rd.branches.push_back({b.profile, to_string(br), r.tau_prime0, r.rho_prime0, r.supercritical, r.predicted_side});
      }
      const NormalFormResult rot = normal_form(c.model, hp, Branch::RotatingCCW, opts).result;
      rd.branches.push_back({"phi^c-i phi^s", to_string(Branch::RotatingCCW), rot.tau_prime0, rot.rho_prime0,
                             rot.supercritical, rot.predicted_side});
    }
    cc.readings.push_back(rd);
  }
  return cc;
}

std::string cross_check_json(const CrossCheck& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["case"] = c.case_id;
  j["mode"] = {c.reported.n, c.reported.m};
  ordered_json rep;
  rep["omega_star"] = c.reported.omega;
  rep["tau_c"] = c.reported.tau_c;
  for (const auto& b : c.reported.branches) {
    rep["branches"].push_back({{"profile", b.profile}, {"tau_prime0", b.tau_prime0}, {"rho_prime0", b.rho_prime0}});
  }
  j["reported"] = rep;
  for (const auto& r : c.readings) {
    ordered_json x;
    x["preset"] = r.preset;
    x["d"] = r.d;
    x["u_star"] = r.u_star;
    x["v_star"] = r.v_star;
    x["omega_star"] = r.omega ? ordered_json(*r.omega) : ordered_json(nullptr);
    x["tau_c"] = r.tau_c ? ordered_json(*r.tau_c) : ordered_json(nullptr);
    x["residual"] = r.residual;
    if (r.omega) {
      x["omega_rel_diff"] = (*r.omega - c.reported.omega) / c.reported.omega;
      x["tau_rel_diff"] = (*r.tau_c - c.reported.tau_c) / c.reported.tau_c;
    }
    for (const auto& b : r.branches) {
      x["branches"].push_back({{"profile", b.profile},
                               {"branch", b.branch},
                               {"tau_prime0", b.tau_prime0},
                               {"rho_prime0", b.rho_prime0},
                               {"supercritical", b.supercritical},
                               {"predicted_side", b.predicted_side}});
    }
    if (r.first_tau) {
      x["first_critical_delay"] = {{"tau", *r.first_tau}, {"n", r.first_n}, {"m", r.first_m}};
    }
    if (!r.note.empty()) x["note"] = r.note;
    j["readings"].push_back(x);
  }
  j["convention"] = c.convention;
  return j.dump(2) + "\n";
}

std::string cross_check_text(const CrossCheck& c) {
  std::ostringstream os;
  os.precision(6);
  os << "case " << c.case_id << ", mode (" << c.reported.n << "," << c.reported.m << ")\n";
  os << "  reported: omega* = " << c.reported.omega << ", tau_c = " << c.reported.tau_c << "\n";
  for (const auto& r : c.readings) {
    os << "  " << r.preset << " (d = " << r.d << ", u* = " << r.u_star << ", v* = " << r.v_star << "): ";
    if (r.omega) {
      os << "omega* = " << *r.omega << " (" << std::showpos << 100.0 * (*r.omega / c.reported.omega - 1.0)
         << std::noshowpos << "%), tau_c = " << *r.tau_c << " (" << std::showpos
         << 100.0 * (*r.tau_c / c.reported.tau_c - 1.0) << std::noshowpos << "%)\n";
    } else {
      os << r.note << "\n";
    }
    if (r.first_tau) {
      os << "    first critical delay " << *r.first_tau << " at mode (" << r.first_n << "," << r.first_m << ")\n";
    }
    for (const auto& b : r.branches) {
      double rep_tau = NAN, rep_rho = NAN;
      for (const auto& x : c.reported.branches) {
        if (x.profile == b.profile) {
          rep_tau = x.tau_prime0;
          rep_rho = x.rho_prime0;
        }
      }
      os << "    " << b.profile << " [" << b.branch << "]: tau'(0) = " << b.tau_prime0 << ", rho'(0) = " << b.rho_prime0;
      if (!std::isnan(rep_tau)) os << "  (reported " << rep_tau << ", " << rep_rho << ")";
      os << (b.supercritical ? "  supercritical" : "  subcritical") << "\n";
    }
  }
  os << "  convention: " << c.convention << "\n";
  return os.str();
}

}  // namespace rmdisk
