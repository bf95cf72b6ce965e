// Copyright 2026 The qncsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch driver for the butterfly network-coding simulator: runs the state /
// entanglement / baseline / classical experiments and emits CSV/JSON reports.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnc/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

qnc::RunConfig load_config(const std::string& config_path) {
  if (config_path.empty()) return qnc::RunConfig{};
  const std::string text = qnc::read_text_file(config_path);
  return qnc::config_from_json(nlohmann::json::parse(text));
}

void write_sweep_outputs(const qnc::SweepResult& sweep, const qnc::RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);
  qnc::write_text_file((out / "results.csv").string(), qnc::results_to_csv(sweep.rows));
  qnc::write_text_file((out / "summary.json").string(),
                       qnc::summary_to_json(sweep, config).dump(2) + "\n");
  qnc::write_text_file((out / "histogram.csv").string(),
                       qnc::histogram_to_csv(qnc::histogram(sweep.rows, config.histogram_bin_width)));
  qnc::write_text_file((out / "transcript.jsonl").string(), qnc::to_jsonl(sweep.transcript));
}

int run_mode(const qnc::RunConfig& config) {
  if (config.mode == "rates") {
    const double rate = qnc::estimate_fourfold_rate(config.source);
    std::printf("fourfold coincidence rate: %.4f counts/s\n", rate);
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    nlohmann::json j;
    j["mode"] = "rates";
    j["fourfold_rate_per_s"] = rate;
    qnc::write_text_file((fs::path(config.out_dir) / "summary.json").string(), j.dump(2) + "\n");
    return kExitOk;
  }

  if (config.mode == "classical") {
    const qnc::ClassicalCheck check = qnc::run_classical_check();
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    nlohmann::json j;
    j["mode"] = "classical";
    j["all_correct"] = check.all_correct;
    j["audit_violations"] = check.audit_violations;
    qnc::write_text_file((fs::path(config.out_dir) / "summary.json").string(), j.dump(2) + "\n");
    qnc::write_text_file((fs::path(config.out_dir) / "transcript.jsonl").string(),
                         qnc::to_jsonl(check.transcript));
    std::printf("classical butterfly: %s, audit violations: %d\n",
                check.all_correct ? "4/4 decoded" : "DECODE FAILURE", check.audit_violations);
    return (check.all_correct && check.audit_violations == 0) ? kExitOk : kExitRuntimeError;
  }

  qnc::SweepResult sweep;
  if (config.mode == "state") {
    sweep = qnc::run_state_sweep(config);
  } else if (config.mode == "entanglement") {
    sweep = qnc::run_entanglement_sweep(config);
  } else {
    sweep = qnc::run_baseline_sweep(config);
  }
  write_sweep_outputs(sweep, config);

  if (sweep.sig) {
    std::printf("%s: F_bar = %.6f +/- %.6f, threshold %.4f, significance %.2f sigma\n",
                sweep.mode.c_str(), sweep.f_bar.value, sweep.f_bar.sigma, sweep.threshold,
                *sweep.sig);
  } else {
    std::printf("%s: F_bar = %.6f (deterministic), threshold %.4f\n", sweep.mode.c_str(),
                sweep.f_bar.value, sweep.threshold);
  }
  if (sweep.audit_violations != 0) {
    std::fprintf(stderr, "error: transcript audit found %d violations\n",
                 sweep.audit_violations);
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Butterfly-network quantum coding simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<std::string> mode_override;

  CLI::App* run_cmd = app.add_subcommand("run", "run a configured experiment sweep");
  run_cmd->add_option("--config", config_path, "JSON configuration file");
  run_cmd->add_option("--seed", seed_override, "override the configured seed");
  run_cmd->add_option("--out", out_override, "override the output directory");
  run_cmd->add_option("--mode", mode_override,
                      "override the mode (state|entanglement|baseline|classical|rates)");

  std::string results_path;
  std::string report_out = ".";
  double bin_width = 0.005;
  CLI::App* report_cmd =
      app.add_subcommand("report", "tabulate a results file and emit histogram data");
  report_cmd->add_option("results", results_path, "path to results.csv")->required();
  report_cmd->add_option("--out", report_out, "directory for histogram.csv");
  report_cmd->add_option("--bin-width", bin_width, "histogram bin width");

  std::string rates_config_path;
  CLI::App* rates_cmd = app.add_subcommand("rates", "print the fourfold coincidence estimate");
  rates_cmd->add_option("--config", rates_config_path, "JSON configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run_cmd->parsed()) {
      qnc::RunConfig config;
      try {
        config = load_config(config_path);
        if (seed_override) config.seed = *seed_override;
        if (out_override) config.out_dir = *out_override;
        if (mode_override) config.mode = *mode_override;
        config.validate();
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
      }
      return run_mode(config);
    }
    if (report_cmd->parsed()) {
      const auto rows = qnc::results_from_csv(qnc::read_text_file(results_path));
      const qnc::ReportResult report = qnc::report_results(rows, bin_width);
      std::fputs(report.table.c_str(), stdout);
      namespace fs = std::filesystem;
      fs::create_directories(report_out);
      qnc::write_text_file((fs::path(report_out) / "histogram.csv").string(),
                           qnc::histogram_to_csv(report.bins));
      return kExitOk;
    }
    if (rates_cmd->parsed()) {
      qnc::RunConfig config;
      try {
        config = load_config(rates_config_path);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
      }
      std::printf("fourfold coincidence rate: %.4f counts/s\n",
                  qnc::estimate_fourfold_rate(config.source));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitOk;
}
