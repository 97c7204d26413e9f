#include "rmdisk/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "rmdisk/errors.hpp"

namespace rmdisk {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || v.empty()) throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || v.empty()) throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

Parity parse_parity(const std::string& key, const std::string& v) {
  if (v == "cos") return Parity::Cos;
  if (v == "sin") return Parity::Sin;
  throw ConfigError("config: " + key + " expects cos or sin, got '" + v + "'");
}

std::string parity_name(Parity p) { return p == Parity::Cos ? "cos" : "sin"; }

std::string kind_name(InitialHistory::Kind k) {
  switch (k) {
    case InitialHistory::Kind::Formula: return "formula";
    case InitialHistory::Kind::Random: return "random";
    case InitialHistory::Kind::Eigenmode: return "eigenmode";
    case InitialHistory::Kind::Constant: return "constant";
    case InitialHistory::Kind::Custom: return "custom";
  }
  return "formula";
}

struct Entry {
  std::string key;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define RM_DOUBLE(KEY, FIELD, HELP)                                                              \
  Entry {                                                                                        \
    KEY, HELP, [](RunConfig& c, const std::string& v) { c.FIELD = parse_double(KEY, v); },       \
        [](const RunConfig& c) { return format_double(c.FIELD); }                                \
  }
#define RM_INT(KEY, FIELD, HELP)                                                                 \
  Entry {                                                                                        \
    KEY, HELP, [](RunConfig& c, const std::string& v) { c.FIELD = static_cast<int>(parse_int(KEY, v)); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                               \
  }
#define RM_BOOL(KEY, FIELD, HELP)                                                                \
  Entry {                                                                                        \
    KEY, HELP, [](RunConfig& c, const std::string& v) { c.FIELD = parse_bool(KEY, v); },         \
        [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); }               \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      Entry{"meta.preset", "preset name the file was derived from (informational)",
            [](RunConfig& c, const std::string& v) { c.preset = v; }, [](const RunConfig& c) { return c.preset; }},
      RM_DOUBLE("model.d1", model.d1, "prey diffusivity"),
      RM_DOUBLE("model.d2", model.d2, "predator diffusivity"),
      RM_DOUBLE("model.chi", model.chi, "predator-taxis coefficient"),
      RM_DOUBLE("model.K", model.K, "prey carrying capacity"),
      RM_DOUBLE("model.alpha", model.alpha, "capture rate"),
      RM_DOUBLE("model.d", model.d, "predator mortality"),
      RM_DOUBLE("model.tau", model.tau, "delay"),
      RM_DOUBLE("model.R", model.R, "disk radius"),
      RM_INT("grid.nr", nr, "radial cells"),
      RM_INT("grid.ntheta", ntheta, "angular cells (even)"),
      RM_DOUBLE("sim.dt", dt, "requested time step (snapped so tau/dt is an integer)"),
      RM_DOUBLE("sim.t_end", t_end, "final time"),
      RM_DOUBLE("sim.output_interval", output_interval, "time between stored frames"),
      Entry{"sim.seed", "seed of the random initial history",
            [](RunConfig& c, const std::string& v) {
              const long long s = parse_int("sim.seed", v);
              if (s < 0) throw ConfigError("config: sim.seed must be >= 0");
              c.initial.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.initial.seed); }},
      Entry{"init.kind", "formula | random | eigenmode | constant",
            [](RunConfig& c, const std::string& v) {
              if (v == "formula") c.initial.kind = InitialHistory::Kind::Formula;
              else if (v == "random") c.initial.kind = InitialHistory::Kind::Random;
              else if (v == "eigenmode") c.initial.kind = InitialHistory::Kind::Eigenmode;
              else if (v == "constant") c.initial.kind = InitialHistory::Kind::Constant;
              else throw ConfigError("config: init.kind must be formula, random, eigenmode or constant, got '" + v + "'");
            },
            [](const RunConfig& c) { return kind_name(c.initial.kind); }},
      RM_DOUBLE("init.amplitude", initial.amplitude, "relative perturbation amplitude"),
      Entry{"init.u_angle", "formula: angular factor of u (cos | sin)",
            [](RunConfig& c, const std::string& v) { c.initial.u_factor.parity = parse_parity("init.u_angle", v); },
            [](const RunConfig& c) { return parity_name(c.initial.u_factor.parity); }},
      RM_INT("init.u_n", initial.u_factor.n, "formula: angular wavenumber of u"),
      Entry{"init.v_angle", "formula: angular factor of v (cos | sin)",
            [](RunConfig& c, const std::string& v) { c.initial.v_factor.parity = parse_parity("init.v_angle", v); },
            [](const RunConfig& c) { return parity_name(c.initial.v_factor.parity); }},
      RM_INT("init.v_n", initial.v_factor.n, "formula: angular wavenumber of v"),
      RM_INT("init.mode_n", initial.mode_n, "eigenmode seed: angular index"),
      RM_INT("init.mode_m", initial.mode_m, "eigenmode seed: radial index"),
      Entry{"init.mode_parity", "eigenmode seed: cos | sin",
            [](RunConfig& c, const std::string& v) { c.initial.mode_parity = parse_parity("init.mode_parity", v); },
            [](const RunConfig& c) { return parity_name(c.initial.mode_parity); }},
      RM_BOOL("scheme.reaction", scheme.reaction, "include kinetics"),
      RM_BOOL("scheme.taxis", scheme.taxis, "include the taxis flux"),
      RM_BOOL("scheme.diffusion", scheme.diffusion, "include diffusion"),
      Entry{"scheme.taxis_face", "centered | upwind face value of u in the taxis flux",
            [](RunConfig& c, const std::string& v) {
              if (v == "centered") c.scheme.taxis_face = TaxisFace::Centered;
              else if (v == "upwind") c.scheme.taxis_face = TaxisFace::Upwind;
              else throw ConfigError("config: scheme.taxis_face must be centered or upwind, got '" + v + "'");
            },
            [](const RunConfig& c) { return std::string(c.scheme.taxis_face == TaxisFace::Centered ? "centered" : "upwind"); }},
      RM_INT("scheme.max_halvings", scheme.max_halvings, "step rejection: maximum dt halvings"),
      RM_DOUBLE("scheme.negative_tol", scheme.negative_tol, "step rejection: densities below -tol"),
      RM_DOUBLE("curves.chi_lo", curves.chi_lo, "chi range start"),
      RM_DOUBLE("curves.chi_hi", curves.chi_hi, "chi range end"),
      RM_INT("curves.samples", curves.samples, "chi samples"),
      RM_INT("curves.k_max", curves.k_max, "largest winding index k"),
      RM_INT("curves.n_max", curves.n_max, "largest angular index"),
      RM_INT("curves.m_max", curves.m_max, "largest radial index"),
      RM_INT("spectrum.n_max", spectrum_n_max, "largest angular index"),
      RM_INT("spectrum.m_max", spectrum_m_max, "largest radial index"),
      RM_INT("nf.n", nf_n, "angular index of the critical mode"),
      RM_INT("nf.m", nf_m, "radial index of the critical mode"),
      RM_INT("nf.k", nf_k, "winding index of the critical delay"),
      Entry{"nf.branch", "rotating-cw | rotating-ccw | standing | standing-cos | all",
            [](RunConfig& c, const std::string& v) {
              if (v != "all") (void)branch_from_string(v);
              c.nf_branch = v;
            },
            [](const RunConfig& c) { return c.nf_branch; }},
      RM_INT("nf.radial_modes", nf.radial_modes, "radial truncation per excited family"),
      RM_INT("nf.quad_radial", nf.quad_radial, "radial quadrature nodes (0: automatic)"),
      RM_INT("nf.quad_theta", nf.quad_theta, "angular quadrature nodes (0: automatic)"),
      RM_DOUBLE("nf.theta0", nf.theta0, "rotation of the angular quadrature nodes"),
      RM_DOUBLE("nf.resonance_cond", nf.resonance_cond, "condition-number limit of the per-mode solves"),
      RM_DOUBLE("nf.gauge", nf_gauge, "phase applied to the kernel element"),
      RM_DOUBLE("classify.residual", classify.residual_threshold, "symmetry residual threshold"),
      RM_DOUBLE("classify.balance", classify.balance_threshold, "standing: allowed imbalance of the two senses"),
      RM_DOUBLE("classify.trend", classify.trend_threshold, "inconclusive above this amplitude trend per period"),
      RM_DOUBLE("classify.trim", classify.trim, "discarded initial time (negative: max(5 periods, 20 tau))"),
      RM_INT("classify.n_max", classify.n_max, "largest angular wavenumber examined"),
      RM_DOUBLE("classify.r_lo", classify.band.r_lo, "radius band start"),
      RM_DOUBLE("classify.r_hi", classify.band.r_hi, "radius band end (negative: R)"),
  };
  return table;
}

#undef RM_DOUBLE
#undef RM_INT
#undef RM_BOOL

const Entry& find_entry(const std::string& key) {
  for (const auto& e : entries()) {
    if (e.key == key) return e;
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> k;
    for (const auto& e : entries()) k.push_back({e.key, e.help});
    return k;
  }();
  return keys;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) { find_entry(key).set(c, value); }

std::string get_key(const RunConfig& c, const std::string& key) { return find_entry(key).get(c); }

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig c = base;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_ws(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim_ws(line.substr(0, eq));
    const std::string value = trim_ws(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    try {
      set_key(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), base);
}

void apply_overrides(RunConfig& c, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not of the form key=value");
    set_key(c, trim_ws(a.substr(0, eq)), trim_ws(a.substr(eq + 1)));
  }
}

std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries()) out.emplace_back(e.key, e.get(c));
  return out;
}

std::string to_text(const RunConfig& c) {
  std::string s;
  for (const auto& [k, v] : to_pairs(c)) s += k + " = " + v + "\n";
  return s;
}

SimConfig sim_config(const RunConfig& c) {
  SimConfig s;
  s.nr = c.nr;
  s.ntheta = c.ntheta;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.output_interval = c.output_interval;
  s.initial = c.initial;
  s.scheme = c.scheme;
  return s;
}

std::vector<EigenMode> mode_list(double R, int n_max, int m_max) {
  std::vector<EigenMode> modes;
  for (int n = 0; n <= n_max; ++n) {
    for (int m = n == 0 ? 0 : 1; m <= m_max; ++m) modes.push_back(eigenmode(n, m, R));
  }
  return modes;
}

}  // namespace rmdisk
