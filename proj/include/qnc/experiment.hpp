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

#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnc/analysis.hpp"
#include "qnc/network.hpp"
#include "qnc/noise.hpp"
#include "qnc/protocol.hpp"
#include "qnc/rng.hpp"

namespace qnc {

struct Thresholds {
  double single = 0.9503;
  double ent = 0.9256;
};

/// Batch-run configuration. The defaults reproduce the desk-scale noisy
/// experiment: Werner pairs at 99.3% fidelity, 720 counts per situation.
struct RunConfig {
  std::string mode = "state";  // state | entanglement | baseline | classical | rates
  NoiseModel noise{0.993, 0.993, 0.0, 0};
  SourceParams source{};
  int counts_per_situation = 720;
  std::uint64_t seed = 20260808;
  Thresholds thresholds{};
  std::string out_dir = "out";
  double histogram_bin_width = 0.005;

  void validate() const {
    static const std::vector<std::string> kModes = {"state", "entanglement", "baseline",
                                                    "classical", "rates"};
    if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end()) {
      throw std::invalid_argument("unknown mode '" + mode + "'");
    }
    noise.validate();
    source.validate();
    if (counts_per_situation < 1) {
      throw std::invalid_argument("counts_per_situation must be >= 1");
    }
    if (thresholds.single <= 0.0 || thresholds.single >= 1.0 ||
        thresholds.ent <= 0.0 || thresholds.ent >= 1.0) {
      throw std::invalid_argument("thresholds must lie in (0, 1)");
    }
    if (!(histogram_bin_width > 0.0)) {
      throw std::invalid_argument("histogram_bin_width must be positive");
    }
  }
};

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig config;
  if (j.contains("mode")) config.mode = j.at("mode").get<std::string>();
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    if (n.contains("shared_pair_fidelity"))
      config.noise.shared_pair_fidelity = n.at("shared_pair_fidelity").get<double>();
    if (n.contains("source_pair_fidelity"))
      config.noise.source_pair_fidelity = n.at("source_pair_fidelity").get<double>();
    if (n.contains("depolarizing_p"))
      config.noise.depolarizing_p = n.at("depolarizing_p").get<double>();
    if (n.contains("seed")) config.noise.seed = n.at("seed").get<std::uint64_t>();
  }
  if (j.contains("source")) {
    const auto& s = j.at("source");
    if (s.contains("rep_rate_hz")) config.source.rep_rate_hz = s.at("rep_rate_hz").get<double>();
    if (s.contains("pair_prob")) config.source.pair_prob = s.at("pair_prob").get<double>();
    if (s.contains("collection_eff"))
      config.source.collection_eff = s.at("collection_eff").get<double>();
    if (s.contains("bsm_success")) config.source.bsm_success = s.at("bsm_success").get<double>();
  }
  if (j.contains("counts_per_situation"))
    config.counts_per_situation = j.at("counts_per_situation").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    if (t.contains("single")) config.thresholds.single = t.at("single").get<double>();
    if (t.contains("ent")) config.thresholds.ent = t.at("ent").get<double>();
  }
  if (j.contains("out_dir")) config.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("histogram_bin_width"))
    config.histogram_bin_width = j.at("histogram_bin_width").get<double>();
  config.validate();
  return config;
}

/// Aggregated outcome of one batch mode.
struct SweepResult {
  std::string mode;
  std::vector<SituationResult> rows;
  std::vector<NetworkEvent> transcript;
  Estimate f_bar;
  double threshold = 0.0;
  std::optional<double> sig;  // absent when f_bar is deterministic
  int audit_violations = 0;
};

namespace detail_exp {

inline std::string frame_bits(const PauliFrame& f) {
  return std::string(1, static_cast<char>('0' + f.m)) +
         std::string(1, static_cast<char>('0' + f.n));
}

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Coincidence accumulation never stops at zero events; redraw until at least
// one count lands so the estimators are defined.
inline CountRecord accumulate_counts(double true_prob, double total_expected, Rng& rng) {
  CountRecord c = simulate_counts(true_prob, total_expected, rng);
  while (c.total() == 0) c = simulate_counts(true_prob, total_expected, rng);
  return c;
}

inline void finish_sweep(SweepResult& sweep, double threshold, const Topology& topology) {
  sweep.f_bar = weighted_average(sweep.rows);
  sweep.threshold = threshold;
  if (sweep.f_bar.sigma > 0.0) {
    sweep.sig = significance(sweep.f_bar, threshold);
  }
  sweep.audit_violations = static_cast<int>(audit(sweep.transcript, topology).size());
}

}  // namespace detail_exp

/// 36 input pairs x 16 forced BSM outcome pairs; each situation contributes
/// two count-sampled fidelity rows weighted by (1/36) x Born(outcomes) / 2.
inline SweepResult run_state_sweep(const RunConfig& config) {
  config.validate();
  SweepResult sweep;
  sweep.mode = "state";
  int situation = 0;
  for (StateLabel phi1 : kAllStateLabels) {
    for (StateLabel phi2 : kAllStateLabels) {
      for (BellKind k1 : kAllBellKinds) {
        for (BellKind k2 : kAllBellKinds) {
          const std::uint64_t situation_seed = split_seed(config.seed, situation);
          const ProtocolRun run = run_state_mode(phi1, phi2, config.noise, situation_seed,
                                                 std::make_pair(k1, k2), situation);
          sweep.transcript.insert(sweep.transcript.end(), run.transcript.begin(),
                                  run.transcript.end());
          const double pair_weight = run.outcome_weight() / 36.0;
          for (int stream = 1; stream <= 2; ++stream) {
            const StateLabel target = stream == 1 ? phi1 : phi2;
            const DensityMatrix& received = stream == 1 ? run.received_1 : run.received_2;
            const double true_f =
                detail_exp::clamp01(fidelity(received, single_qubit_state(target)));
            Rng rng = make_rng(split_seed(situation_seed, stream));
            const CountRecord counts =
                detail_exp::accumulate_counts(true_f, config.counts_per_situation, rng);
            sweep.rows.push_back(SituationResult{
                "state", to_string(phi1), to_string(phi2),
                detail_exp::frame_bits(run.outcome_s1->frame),
                detail_exp::frame_bits(run.outcome_s2->frame), stream, pair_weight / 2.0,
                fidelity_from_counts(counts)});
          }
          ++situation;
        }
      }
    }
  }
  detail_exp::finish_sweep(sweep, config.thresholds.single, build_butterfly());
  return sweep;
}

/// 16 forced BSM outcome pairs; for each, the Pauli correlations of the two
/// delivered pairs are count-sampled and folded into witness fidelities.
inline SweepResult run_entanglement_sweep(const RunConfig& config) {
  config.validate();
  SweepResult sweep;
  sweep.mode = "entanglement";
  const Operator xx = Operator::observable(2, detail::kron_low_first(pauli_x(), pauli_x(), 1));
  const Operator yy = Operator::observable(2, detail::kron_low_first(pauli_y(), pauli_y(), 1));
  const Operator zz = Operator::observable(2, detail::kron_low_first(pauli_z(), pauli_z(), 1));

  int situation = 0;
  for (BellKind k1 : kAllBellKinds) {
    for (BellKind k2 : kAllBellKinds) {
      const std::uint64_t situation_seed = split_seed(config.seed, situation);
      const ProtocolRun run = run_entanglement_mode(config.noise, situation_seed,
                                                    std::make_pair(k1, k2), situation);
      sweep.transcript.insert(sweep.transcript.end(), run.transcript.begin(),
                              run.transcript.end());
      const double weight = run.outcome_weight();
      for (int stream = 1; stream <= 2; ++stream) {
        const DensityMatrix& received = stream == 1 ? run.received_1 : run.received_2;
        std::array<Estimate, 3> correlations;
        const std::array<const Operator*, 3> observables = {&xx, &yy, &zz};
        for (std::size_t o = 0; o < 3; ++o) {
          const double value = expectation(received, *observables[o]);
          const double p_plus = detail_exp::clamp01((1.0 + value) / 2.0);
          Rng rng = make_rng(split_seed(situation_seed, 10 * stream + static_cast<int>(o)));
          const CountRecord counts =
              detail_exp::accumulate_counts(p_plus, config.counts_per_situation, rng);
          correlations[o] = expectation_from_counts(counts);
        }
        const WitnessEstimate witness =
            witness_fidelity(correlations[0], correlations[1], correlations[2]);
        sweep.rows.push_back(SituationResult{
            "entanglement", "-", "-", detail_exp::frame_bits(run.outcome_s1->frame),
            detail_exp::frame_bits(run.outcome_s2->frame), stream, weight / 2.0,
            witness.f_ent});
      }
      ++situation;
    }
  }
  detail_exp::finish_sweep(sweep, config.thresholds.ent, build_butterfly());
  return sweep;
}

/// Measure-and-resend over all 36 input pairs; counts_per_situation runs per
/// pair, reported as the per-stream mean with its standard error. One
/// representative transcript is logged per input pair.
inline SweepResult run_baseline_sweep(const RunConfig& config) {
  config.validate();
  SweepResult sweep;
  sweep.mode = "baseline";
  int pair_index = 0;
  for (StateLabel phi1 : kAllStateLabels) {
    for (StateLabel phi2 : kAllStateLabels) {
      const std::uint64_t pair_seed = split_seed(config.seed, pair_index);
      const int trials = config.counts_per_situation;
      std::array<double, 2> sum{0.0, 0.0};
      std::array<double, 2> sum_sq{0.0, 0.0};
      for (int t = 0; t < trials; ++t) {
        const ProtocolRun run =
            run_baseline_measure_resend(phi1, phi2, split_seed(pair_seed, t), pair_index);
        if (t == 0) {
          sweep.transcript.insert(sweep.transcript.end(), run.transcript.begin(),
                                  run.transcript.end());
        }
        const double f1 = fidelity(run.received_1, single_qubit_state(phi1));
        const double f2 = fidelity(run.received_2, single_qubit_state(phi2));
        sum[0] += f1;
        sum_sq[0] += f1 * f1;
        sum[1] += f2;
        sum_sq[1] += f2 * f2;
      }
      for (int stream = 1; stream <= 2; ++stream) {
        const double mean = sum[stream - 1] / trials;
        double sigma = 0.0;
        if (trials > 1) {
          const double variance =
              std::max(0.0, (sum_sq[stream - 1] - trials * mean * mean) / (trials - 1));
          sigma = std::sqrt(variance / trials);
          // per-trial fidelities are deterministic given the input label, so
          // scatter below the structural tolerance is floating-point dust
          if (sigma < 1e-9) sigma = 0.0;
        }
        sweep.rows.push_back(SituationResult{"baseline", to_string(phi1), to_string(phi2), "-",
                                             "-", stream, 1.0 / 72.0, Estimate{mean, sigma}});
      }
      ++pair_index;
    }
  }
  detail_exp::finish_sweep(sweep, config.thresholds.single, build_butterfly());
  return sweep;
}

struct ClassicalCheck {
  bool all_correct = true;
  std::vector<NetworkEvent> transcript;
  int audit_violations = 0;
};

/// Bit-level butterfly over all four input pairs, one round each.
inline ClassicalCheck run_classical_check() {
  ClassicalCheck check;
  int round = 0;
  for (int b1 = 0; b1 <= 1; ++b1) {
    for (int b2 = 0; b2 <= 1; ++b2) {
      const ClassicalRunResult r = classical_butterfly(b1, b2, round);
      check.all_correct = check.all_correct && r.at_r1 == b1 && r.at_r2 == b2;
      check.transcript.insert(check.transcript.end(), r.transcript.begin(), r.transcript.end());
      ++round;
    }
  }
  check.audit_violations =
      static_cast<int>(audit(check.transcript, build_classical_butterfly()).size());
  return check;
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

namespace detail_exp {

inline std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace detail_exp

inline constexpr const char* kResultsCsvHeader =
    "mode,phi1,phi2,m1n1,m2n2,stream,weight,fidelity,sigma";

inline std::string results_to_csv(const std::vector<SituationResult>& rows) {
  std::string out = kResultsCsvHeader;
  out += '\n';
  for (const SituationResult& r : rows) {
    out += r.mode + ',' + r.phi1 + ',' + r.phi2 + ',' + r.m1n1 + ',' + r.m2n2 + ',' +
           std::to_string(r.stream) + ',' + detail_exp::format_double(r.weight) + ',' +
           detail_exp::format_double(r.fidelity.value) + ',' +
           detail_exp::format_double(r.fidelity.sigma) + '\n';
  }
  return out;
}

inline std::vector<SituationResult> results_from_csv(const std::string& text) {
  std::vector<SituationResult> rows;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kResultsCsvHeader) {
    throw std::runtime_error("results file is missing the expected header");
  }
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto fields = detail_exp::split_csv_line(line);
    if (fields.size() != 9) {
      throw std::runtime_error("corrupt results row: '" + line + "'");
    }
    SituationResult r;
    r.mode = fields[0];
    r.phi1 = fields[1];
    r.phi2 = fields[2];
    r.m1n1 = fields[3];
    r.m2n2 = fields[4];
    r.stream = std::stoi(fields[5]);
    r.weight = std::stod(fields[6]);
    r.fidelity = Estimate{std::stod(fields[7]), std::stod(fields[8])};
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string histogram_to_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_lo,bin_hi,mass\n";
  for (const HistogramBin& b : bins) {
    out += detail_exp::format_double(b.lo) + ',' + detail_exp::format_double(b.hi) + ',' +
           detail_exp::format_double(b.mass) + '\n';
  }
  return out;
}

inline nlohmann::json summary_to_json(const SweepResult& sweep, const RunConfig& config) {
  nlohmann::json j;
  j["mode"] = sweep.mode;
  j["f_bar"] = sweep.f_bar.value;
  j["sigma"] = sweep.f_bar.sigma;
  j["threshold"] = sweep.threshold;
  if (sweep.sig) {
    j["significance"] = *sweep.sig;
    j["deterministic"] = false;
  } else {
    j["significance"] = nullptr;
    j["deterministic"] = true;
  }
  j["rows"] = sweep.rows.size();
  j["audit_violations"] = sweep.audit_violations;
  j["seed"] = config.seed;
  j["counts_per_situation"] = config.counts_per_situation;
  return j;
}

// ---------------------------------------------------------------------------
// Report: per-situation bar pairs plus plot-ready histogram
// ---------------------------------------------------------------------------

struct ReportResult {
  std::string table;
  std::vector<HistogramBin> bins;
};

/// Aggregates rows into stream-1/stream-2 bar pairs: state and baseline
/// results are keyed by input pair (fidelities averaged over BSM outcomes),
/// entanglement results by outcome pair.
inline ReportResult report_results(const std::vector<SituationResult>& rows, double bin_width) {
  struct Bar {
    double weight = 0.0;
    double weighted_value = 0.0;
  };
  std::vector<std::string> key_order;
  std::map<std::string, std::array<Bar, 2>> bars;
  for (const SituationResult& r : rows) {
    const std::string key = r.mode == "entanglement" ? r.m1n1 + " " + r.m2n2
                                                     : r.phi1 + " " + r.phi2;
    if (bars.find(key) == bars.end()) key_order.push_back(key);
    Bar& bar = bars[key][static_cast<std::size_t>(r.stream - 1)];
    bar.weight += r.weight;
    bar.weighted_value += r.weight * r.fidelity.value;
  }

  std::string table = "situation  F_stream1  F_stream2\n";
  for (const std::string& key : key_order) {
    const auto& pair = bars[key];
    char line[96];
    std::snprintf(line, sizeof(line), "%-9s  %9.6f  %9.6f\n", key.c_str(),
                  pair[0].weighted_value / pair[0].weight,
                  pair[1].weighted_value / pair[1].weight);
    table += line;
  }
  return ReportResult{std::move(table), histogram(rows, bin_width)};
}

// ---------------------------------------------------------------------------
// Small file helpers
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qnc
