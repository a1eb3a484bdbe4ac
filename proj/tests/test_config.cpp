// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/config.hpp"
#include "mimomc/experiments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace mimomc;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Domain;
}

} // namespace

TEST_CASE("config file parsing", "[config]") {
  std::istringstream in(
      "# comment\n"
      "\n"
      "kind = resolution\n"
      "scheme = II\n"
      "waveform = hadamard\n"
      "mt = 10   \n"
      "  n = 32\n"
      "snr = inf\n"
      "doas = 20, 40\n"
      "noise_radius = off\n");
  ExperimentConfig cfg;
  load_config(in, cfg);
  CHECK(cfg.kind == ExperimentKind::Resolution);
  CHECK(cfg.scheme == Scheme::SubNyquist);
  CHECK(cfg.waveform == WaveformKind::Hadamard);
  CHECK(cfg.mt == 10);
  CHECK(cfg.n_nyquist == 32);
  CHECK(std::isinf(cfg.snr_db));
  CHECK(cfg.doas == std::vector<double>{20.0, 40.0});
  CHECK_FALSE(cfg.use_noise_radius);
  CHECK(cfg.matrix_cols() == 32);
}

TEST_CASE("config errors carry the line number", "[config][error]") {
  ExperimentConfig cfg;
  std::istringstream unknown("mt = 4\nbogus = 1\n");
  try {
    load_config(unknown, cfg);
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream no_eq("mt 4\n");
  CHECK(kind_of([&] { load_config(no_eq, cfg); }) == ErrorKind::Config);
  CHECK(kind_of([&] { apply_override(cfg, "mt", "four"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { apply_override(cfg, "mt", "4.5"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { apply_override(cfg, "scheme", "III"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { apply_override(cfg, "noise_radius", "maybe"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { load_config_file("/nonexistent/x.cfg", cfg); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_override("novalue"); }) == ErrorKind::Config);
}

TEST_CASE("written config loads back to the same config", "[config]") {
  for (const auto& name : preset_names()) {
    const ExperimentConfig a = preset(name);
    std::ostringstream out;
    write_config(out, a);
    ExperimentConfig b;
    std::istringstream in(out.str());
    load_config(in, b);
    std::ostringstream again;
    write_config(again, b);
    INFO(name);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("coupled setters and series grammar", "[config]") {
  ExperimentConfig cfg;
  apply_override(cfg, "mtmr", "12");
  CHECK(cfg.mt == 12);
  CHECK(cfg.mr == 12);
  apply_override(cfg, "mtn", "64");
  CHECK(cfg.mt == 64);
  CHECK(cfg.n_nyquist == 64);

  apply_override(cfg, "series", "waveform=gorth&delta_theta=1 | delta_theta=5");
  REQUIRE(cfg.series.size() == 2);
  CHECK(cfg.series[0] == OverrideSet{{"waveform", "gorth"}, {"delta_theta", "1"}});
  CHECK(cfg.series[1] == OverrideSet{{"delta_theta", "5"}});
  CHECK(series_label(cfg.series[0]) == "waveform=gorth delta_theta=1");
  CHECK(series_label({}) == "base");
  CHECK(parse_override(" snr = 10 ") == Override{"snr", "10"});
}

TEST_CASE("per-row sample count", "[config]") {
  ExperimentConfig cfg;
  cfg.mt = cfg.mr = 40;
  cfg.targets = 2;
  cfg.m_over_df = 5.0;
  // df = 2 (40 + 40 - 2) = 156, m = 780, L = 780 / 40
  CHECK(cfg.per_row_count() == 20);
  cfg.m_over_df = 0.0;
  cfg.occupancy = 0.25;
  CHECK(cfg.per_row_count() == 10);
  cfg.occupancy = 1e-6;
  CHECK(cfg.per_row_count() == 1);
  cfg.m_over_df = 100.0;
  CHECK(cfg.per_row_count() == 40);
  cfg.scheme = Scheme::SubNyquist;
  cfg.n_nyquist = 256;
  CHECK(cfg.per_row_count() == 256);
}

TEST_CASE("config validation", "[config][error]") {
  const auto bad = [](const std::function<void(ExperimentConfig&)>& f) {
    ExperimentConfig cfg;
    f(cfg);
    return kind_of([&] { cfg.validate(); });
  };
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  CHECK(bad([](auto& c) { c.mt = 0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.occupancy = 0.0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.occupancy = 1.5; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.trials = 0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.targets = 0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.doas = {1.0}; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.speeds = {1.0, 2.0, 3.0}; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.doa_min = 10; c.doa_max = 0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.fine_step = 0; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.scheme = Scheme::SubNyquist; c.n_nyquist = 8; c.mt = 16; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.snr_db = std::nan(""); }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.snr_db = -INFINITY; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.sweep_key = "snr"; }) == ErrorKind::Config);
  CHECK(bad([](auto& c) { c.sweep_values = {1.0}; }) == ErrorKind::Config);
}

TEST_CASE("preset contents", "[config][presets]") {
  const auto doa = preset("doa-s1");
  CHECK(doa.kind == ExperimentKind::Resolution);
  CHECK(doa.sweep_key == "delta_theta");
  CHECK(doa.sweep_values ==
        std::vector<double>{0.05, 0.08, 0.1, 0.12, 0.15, 0.18, 0.2, 0.22, 0.25, 0.3});
  CHECK(doa.mt == 20);
  CHECK(doa.mr == 20);
  CHECK(doa.pulses == 5);
  CHECK(doa.first_doa == 10.0);

  const auto rec = preset("recov-s1");
  CHECK(rec.snr_db == 25.0);
  CHECK(rec.mt == 40);
  CHECK(rec.mr == 40);
  CHECK(rec.scheme == Scheme::MatchedFilterBank);

  const auto wr = preset("wave-recov");
  CHECK(wr.mr == 128);
  CHECK(wr.mt == 10);
  CHECK(wr.n_nyquist == 32);
  CHECK(wr.scheme == Scheme::SubNyquist);

  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
  CHECK(kind_of([] { preset("nope"); }) == ErrorKind::Config);
}

TEST_CASE("number formatting is round-trip exact", "[config]") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e9, -0.05})
    CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(5.0) == "5");
}
