// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace mimomc {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf") return std::numeric_limits<double>::infinity();
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  if (lower == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t pos = 0;
    const double d = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return d;
  } catch (const std::exception&) {
    config_error("key '" + key + "': '" + v + "' is not a number");
  }
}

long long parse_integer(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size())
    config_error("key '" + key + "': '" + v + "' is not an integer");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const auto x = parse_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    config_error("key '" + key + "': value out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  config_error("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string fmt(double d) { return format_number(d); }

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MIMOMC_DOUBLE_KEY(name, field)                                                          \
  Key {                                                                                         \
    name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_double(name, v); },  \
        [](const ExperimentConfig& c) { return fmt(c.field); }                                  \
  }
#define MIMOMC_INT_KEY(name, field)                                                             \
  Key {                                                                                         \
    name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_int(name, v); },     \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                       \
  }
#define MIMOMC_BOOL_KEY(name, field)                                                            \
  Key {                                                                                         \
    name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_bool(name, v); },    \
        [](const ExperimentConfig& c) { return std::string(c.field ? "1" : "0"); }              \
  }
#define MIMOMC_LIST_KEY(name, field)                                                            \
  Key {                                                                                         \
    name, [](ExperimentConfig& c, const std::string& v) { c.field = parse_list(name, v); },    \
        [](const ExperimentConfig& c) { return fmt_list(c.field); }                             \
  }

ExperimentKind parse_kind(const std::string& v) {
  if (v == "coherence") return ExperimentKind::Coherence;
  if (v == "recovery") return ExperimentKind::Recovery;
  if (v == "resolution") return ExperimentKind::Resolution;
  if (v == "spectrum") return ExperimentKind::WaveSpectrum;
  config_error("unknown kind '" + v + "'");
}

Scheme parse_scheme(const std::string& v) {
  if (v == "I" || v == "1" || v == "mf") return Scheme::MatchedFilterBank;
  if (v == "II" || v == "2" || v == "raw") return Scheme::SubNyquist;
  config_error("unknown scheme '" + v + "'");
}

WaveformKind parse_waveform(const std::string& v) {
  if (v == "gorth" || v == "g-orth") return WaveformKind::GaussianOrthogonal;
  if (v == "hadamard") return WaveformKind::Hadamard;
  config_error("unknown waveform '" + v + "'");
}

std::vector<OverrideSet> parse_series(const std::string& v) {
  std::vector<OverrideSet> out;
  if (trim(v).empty()) return out;
  for (const auto& group : split(v, '|')) {
    OverrideSet set;
    if (!group.empty())
      for (const auto& pair : split(group, '&')) set.push_back(parse_override(pair));
    out.push_back(std::move(set));
  }
  return out;
}

std::string format_series(const std::vector<OverrideSet>& series) {
  std::string s;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) s += " | ";
    for (std::size_t j = 0; j < series[i].size(); ++j)
      s += (j ? "&" : "") + series[i][j].first + "=" + series[i][j].second;
  }
  return s;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"preset", [](ExperimentConfig& c, const std::string& v) { c.preset = trim(v); },
       [](const ExperimentConfig& c) { return c.preset; }},
      {"kind", [](ExperimentConfig& c, const std::string& v) { c.kind = parse_kind(trim(v)); },
       [](const ExperimentConfig& c) { return to_string(c.kind); }},
      {"scheme", [](ExperimentConfig& c, const std::string& v) { c.scheme = parse_scheme(trim(v)); },
       [](const ExperimentConfig& c) { return to_string(c.scheme); }},
      {"waveform", [](ExperimentConfig& c, const std::string& v) { c.waveform = parse_waveform(trim(v)); },
       [](const ExperimentConfig& c) { return to_string(c.waveform); }},
      MIMOMC_INT_KEY("mt", mt),
      MIMOMC_INT_KEY("mr", mr),
      MIMOMC_INT_KEY("n", n_nyquist),
      MIMOMC_INT_KEY("q", pulses),
      MIMOMC_DOUBLE_KEY("dt", dt_wavelengths),
      MIMOMC_DOUBLE_KEY("dr", dr_wavelengths),
      MIMOMC_DOUBLE_KEY("carrier", carrier_freq),
      MIMOMC_DOUBLE_KEY("t_pri", t_pri),
      MIMOMC_DOUBLE_KEY("t_sample", t_sample),
      MIMOMC_DOUBLE_KEY("energy", energy),
      MIMOMC_INT_KEY("targets", targets),
      MIMOMC_LIST_KEY("doas", doas),
      MIMOMC_DOUBLE_KEY("first_doa", first_doa),
      MIMOMC_DOUBLE_KEY("doa_min", doa_min),
      MIMOMC_DOUBLE_KEY("doa_max", doa_max),
      MIMOMC_DOUBLE_KEY("delta_theta", delta_theta),
      MIMOMC_LIST_KEY("speeds", speeds),
      MIMOMC_DOUBLE_KEY("speed_min", speed_min),
      MIMOMC_DOUBLE_KEY("speed_max", speed_max),
      MIMOMC_DOUBLE_KEY("snr", snr_db),
      MIMOMC_DOUBLE_KEY("occupancy", occupancy),
      MIMOMC_DOUBLE_KEY("m_over_df", m_over_df),
      MIMOMC_DOUBLE_KEY("tau", tau),
      MIMOMC_DOUBLE_KEY("tol", tol),
      MIMOMC_INT_KEY("max_iter", max_iter),
      MIMOMC_BOOL_KEY("noise_radius", use_noise_radius),
      MIMOMC_BOOL_KEY("full_baseline", full_baseline),
      MIMOMC_BOOL_KEY("music2d", music2d),
      MIMOMC_DOUBLE_KEY("coarse_step", coarse_step),
      MIMOMC_DOUBLE_KEY("fine_step", fine_step),
      MIMOMC_DOUBLE_KEY("refine_halfwidth", refine_halfwidth),
      MIMOMC_DOUBLE_KEY("speed_step", speed_step),
      MIMOMC_DOUBLE_KEY("theta2d_halfwidth", theta2d_halfwidth),
      MIMOMC_DOUBLE_KEY("theta2d_step", theta2d_step),
      MIMOMC_DOUBLE_KEY("eps", eps),
      MIMOMC_LIST_KEY("mu0_grid", mu0_grid),
      MIMOMC_INT_KEY("omega_points", omega_points),
      MIMOMC_INT_KEY("trials", trials),
      {"seed",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string t = trim(v);
         std::uint64_t out = 0;
         const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
         if (ec != std::errc() || ptr != t.data() + t.size()) config_error("key 'seed': '" + v + "' is not a seed");
         c.seed = out;
       },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      MIMOMC_INT_KEY("threads", threads),
      {"sweep", [](ExperimentConfig& c, const std::string& v) { c.sweep_key = trim(v); },
       [](const ExperimentConfig& c) { return c.sweep_key; }},
      MIMOMC_LIST_KEY("sweep_values", sweep_values),
      {"series", [](ExperimentConfig& c, const std::string& v) { c.series = parse_series(v); },
       [](const ExperimentConfig& c) { return format_series(c.series); }},
      // convenience setters for coupled sweeps; not serialized
      {"mtmr", [](ExperimentConfig& c, const std::string& v) { c.mt = c.mr = parse_int("mtmr", v); }, nullptr},
      {"mtn", [](ExperimentConfig& c, const std::string& v) { c.mt = c.n_nyquist = parse_int("mtn", v); }, nullptr},
  };
  return table;
}

#undef MIMOMC_DOUBLE_KEY
#undef MIMOMC_INT_KEY
#undef MIMOMC_BOOL_KEY
#undef MIMOMC_LIST_KEY

} // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::Coherence: return "coherence";
  case ExperimentKind::Recovery: return "recovery";
  case ExperimentKind::Resolution: return "resolution";
  case ExperimentKind::WaveSpectrum: return "spectrum";
  }
  return "?";
}

std::string to_string(Scheme scheme) { return scheme == Scheme::MatchedFilterBank ? "I" : "II"; }

std::string to_string(WaveformKind kind) {
  return kind == WaveformKind::Hadamard ? "hadamard" : "gorth";
}

std::string format_number(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return "nan";
  for (int prec = 6; prec < 17; ++prec) {
    std::ostringstream os;
    os << std::setprecision(prec) << d;
    if (std::stod(os.str()) == d) return os.str();
  }
  std::ostringstream os;
  os << std::setprecision(17) << d;
  return os.str();
}

std::string series_label(const OverrideSet& series) {
  if (series.empty()) return "base";
  std::string s;
  for (std::size_t j = 0; j < series.size(); ++j) s += (j ? " " : "") + series[j].first + "=" + series[j].second;
  return s;
}

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) config_error("expected key=value, got '" + text + "'");
  auto key = trim(text.substr(0, eq));
  if (key.empty()) config_error("empty key in '" + text + "'");
  return {key, trim(text.substr(eq + 1))};
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : keys())
    if (key == k.name) {
      k.set(cfg, value);
      return;
    }
  config_error("unknown key '" + key + "'");
}

void apply_overrides(ExperimentConfig& cfg, const OverrideSet& overrides) {
  for (const auto& [k, v] : overrides) apply_override(cfg, k, v);
}

void load_config(std::istream& is, ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(lineno) + ": expected key = value");
    try {
      apply_override(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const Error& e) {
      config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream is(path);
  if (!is) config_error("cannot open config file '" + path + "'");
  load_config(is, cfg);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  for (const auto& k : keys())
    if (k.get) os << k.name << " = " << k.get(cfg) << '\n';
}

RadarConfig ExperimentConfig::radar() const {
  RadarConfig r = make_radar_config(mt, mr, dt_wavelengths, dr_wavelengths, pulses, n_nyquist, carrier_freq,
                                    t_pri, t_sample);
  return r;
}

int ExperimentConfig::per_row_count() const {
  const int n1 = mr;
  const int n2 = matrix_cols();
  long l = 0;
  if (m_over_df > 0) {
    const int r = std::min({targets, n1, n2});
    const double df = static_cast<double>(r) * (n1 + n2 - r);
    l = std::lround(m_over_df * df / n1);
  } else {
    l = std::lround(occupancy * n2);
  }
  return static_cast<int>(std::clamp<long>(l, 1, n2));
}

void ExperimentConfig::validate() const {
  if (mt < 1 || mr < 1 || n_nyquist < 1 || pulses < 1) config_error("array sizes must be positive");
  if (!(occupancy > 0 && occupancy <= 1)) config_error("occupancy must lie in (0, 1]");
  if (trials < 1) config_error("trials must be at least 1");
  if (targets < 1) config_error("targets must be at least 1");
  if (!doas.empty() && static_cast<int>(doas.size()) != targets) config_error("doas list length != targets");
  if (!speeds.empty() && static_cast<int>(speeds.size()) != targets) config_error("speeds list length != targets");
  if (doa_max < doa_min) config_error("doa_max < doa_min");
  if (!(fine_step > 0) || !(coarse_step > 0)) config_error("grid steps must be positive");
  if (scheme == Scheme::SubNyquist && n_nyquist < mt) config_error("scheme II needs n >= mt");
  if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0)) config_error("snr must be finite or inf");
  if (!sweep_key.empty() && sweep_values.empty()) config_error("sweep key without sweep_values");
  if (sweep_key.empty() && !sweep_values.empty()) config_error("sweep_values without a sweep key");
}

} // namespace mimomc
