// Copyright 2026 The nvbath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nvbath command line: run, validate and presets.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nvbath/config.hpp"
#include "nvbath/parallel.hpp"
#include "nvbath/presets.hpp"
#include "nvbath/results.hpp"
#include "nvbath/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void log_line(const std::string& msg) { std::cerr << "nvbath: " << msg << std::endl; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw nvbath::IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int exit_code(const nvbath::Error& e) {
  switch (e.kind()) {
    case nvbath::ErrorKind::config: return kExitConfig;
    case nvbath::ErrorKind::numerical: return kExitNumerical;
    case nvbath::ErrorKind::io: return kExitIo;
  }
  return kExitNumerical;
}

void print_presets() {
  for (const auto& name : nvbath::preset_names()) {
    const nvbath::CPTExperiment e = nvbath::preset_by_name(name);
    const nvbath::CPTModel& m = e.model;
    auto mhz = [](double v) { return v / nvbath::kTwoPi; };
    std::printf("%s\n", name.c_str());
    std::printf("  gamma            %.6g per_us (1/%.6g ns)\n", m.gamma, 1e3 / m.gamma);
    std::printf("  gamma_s1         %.6g per_us\n", m.gamma_s1);
    std::printf("  gamma_s2         %.6g per_us (gamma/120)\n", m.gamma_s2);
    std::printf("  gamma_ce         %.6g per_us (gamma/800)\n", m.gamma_ce);
    std::printf("  gamma_s          %.6g per_us (gamma/33)\n", m.gamma_s);
    std::printf("  omega_a          %.6g MHz\n", mhz(m.omega_a));
    std::printf("  hf_excited       %.6g MHz\n", mhz(m.hf_excited));
    std::printf("  hf_ground        %.6g MHz\n", mhz(m.hf_ground));
    std::printf("  efficiency       %.6g\n", e.efficiency);
    std::printf("  t_cond           %.6g us\n", e.t_cond);
    std::printf("  gamma_c          %.6g per_s\n", e.gamma_c * 1e6);
    std::printf("  preparation      %.6g MHz\n", mhz(e.preparation_field));
    std::printf("  readout_rabi    ");
    for (double r : e.readout_rabi) std::printf(" %.6g", mhz(r));
    std::printf(" MHz\n");
    std::printf("  assumed: omega_e %.6g MHz, delta_a2 %.6g MHz, d_gs %.6g MHz, eps_a1 %.6g MHz, eps_e12 %.6g MHz, "
                "gamma_phi %.6g per_us, bath_size %d\n",
                mhz(m.omega_e), mhz(m.delta_a2), mhz(m.d_gs), mhz(m.eps_a1), mhz(m.eps_e12), m.gamma_phi, e.bath_size);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electron-nuclear spin bath simulator"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  unsigned workers = nvbath::default_workers();

  auto* run = app.add_subcommand("run", "Run a scenario and write result tables");
  run->add_option("config", config_path, "Scenario configuration (JSON)")->required();
  run->add_option("--preset", preset, "Named parameter preset");
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  run->add_option("--workers", workers, "Worker threads (default: NVBATH_WORKERS or hardware threads)")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("config", config_path, "Scenario configuration (JSON)")->required();
  validate->add_option("--preset", preset, "Named parameter preset");

  app.add_subcommand("presets", "List the built-in parameter presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("presets")) {
      print_presets();
      return kExitOk;
    }
    const std::string text = read_file(config_path);
    const std::optional<std::string> override_preset = preset.empty() ? std::nullopt : std::optional(preset);
    const nvbath::ScenarioConfig cfg = nvbath::load_config(text, override_preset);
    if (app.got_subcommand("validate")) {
      std::printf("%s: valid %s configuration\n", config_path.c_str(), nvbath::scenario_name(cfg.scenario));
      return kExitOk;
    }
    const std::string dir = out_dir.empty() ? cfg.output.directory : out_dir;
    log_line(std::string("running scenario '") + nvbath::scenario_name(cfg.scenario) + "' with " +
             std::to_string(workers) + " worker(s)");
    const nvbath::RunOutput result = nvbath::run_scenario(cfg, workers, log_line);
    const auto written = nvbath::write_results(result.tables, result.summary, dir, cfg.output.csv, cfg.output.json);
    for (const auto& p : written) log_line("wrote " + p.string());
    return kExitOk;
  } catch (const nvbath::Error& e) {
    log_line(std::string("error: ") + e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    log_line(std::string("error: ") + e.what());
    return kExitNumerical;
  }
}
