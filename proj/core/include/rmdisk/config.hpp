#pragma once

// Run configuration and its text form.
//
// A config file holds one `key = value` pair per line; `#` starts a comment. Keys are dotted
// (model.chi, grid.nr, ...). Unknown keys, repeated keys and malformed values raise ConfigError.
// config_keys() lists every key with a one-line description.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmdisk/diagnostics.hpp"
#include "rmdisk/model.hpp"
#include "rmdisk/normalform.hpp"
#include "rmdisk/simulator.hpp"

namespace rmdisk {

struct CurveSettings {
  double chi_lo = 0.0;
  double chi_hi = 0.6;
  int samples = 61;
  int k_max = 0;
  int n_max = 4;
  int m_max = 3;
};

struct RunConfig {
  std::string preset;               // informational
  ModelParams model;
  int nr = 64;
  int ntheta = 128;
  double dt = 0.1;
  double t_end = 2000.0;
  double output_interval = 2.0;
  InitialHistory initial;
  Scheme scheme;
  CurveSettings curves;
  int spectrum_n_max = 4;
  int spectrum_m_max = 3;
  int nf_n = 1;
  int nf_m = 1;
  int nf_k = 0;
  std::string nf_branch = "all";    // a branch name or "all"
  NormalFormOptions nf;
  double nf_gauge = 0.0;
  ClassifyOptions classify;
};

struct KeyInfo {
  std::string key;
  std::string help;
};
const std::vector<KeyInfo>& config_keys();

// Set one key; throws ConfigError for an unknown key or a malformed value.
void set_key(RunConfig& c, const std::string& key, const std::string& value);
std::string get_key(const RunConfig& c, const std::string& key);

// Parses file text on top of `base`.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});
RunConfig load_config(const std::string& path, const RunConfig& base = {});
// Applies `key=value` strings in order.
void apply_overrides(RunConfig& c, const std::vector<std::string>& assignments);

// Every key in config_keys() order; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& c);
std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& c);

SimConfig sim_config(const RunConfig& c);
std::vector<EigenMode> mode_list(double R, int n_max, int m_max);

// %.17g: enough digits to round-trip any double.
std::string format_double(double x);

}  // namespace rmdisk
