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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qnc/experiment.hpp"

using namespace qnc;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

int bell_index(BellKind k) {
  switch (k) {
    case BellKind::PhiPlus: return 0;
    case BellKind::PhiMinus: return 1;
    case BellKind::PsiPlus: return 2;
    case BellKind::PsiMinus: return 3;
  }
  return 0;
}

// 1. Ideal protocol delivers every one of the 36 x 16 situations perfectly.
bool perfect_state_mode(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int situations = 0;
  for (StateLabel phi1 : kAllStateLabels) {
    for (StateLabel phi2 : kAllStateLabels) {
      for (BellKind k1 : kAllBellKinds) {
        for (BellKind k2 : kAllBellKinds) {
          const ProtocolRun run = run_state_mode(phi1, phi2, NoiseModel::ideal(), 0,
                                                 std::make_pair(k1, k2));
          worst = std::max(worst,
                           std::abs(1.0 - fidelity(run.received_1, single_qubit_state(phi1))));
          worst = std::max(worst,
                           std::abs(1.0 - fidelity(run.received_2, single_qubit_state(phi2))));
          ++situations;
        }
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%d/576 situations, max |1-F| = %.2e, %.1f s",
                situations, worst, seconds);
  detail = buffer;
  return situations == 576 && worst <= 1e-9 && seconds < 10.0;
}

// 2. Ideal entanglement distribution is perfect for all 16 outcome pairs.
bool perfect_entanglement(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int checks = 0;
  const PureState phi_plus = bell_pair(BellKind::PhiPlus);
  for (BellKind k1 : kAllBellKinds) {
    for (BellKind k2 : kAllBellKinds) {
      const ProtocolRun run =
          run_entanglement_mode(NoiseModel::ideal(), 0, std::make_pair(k1, k2));
      worst = std::max(worst, std::abs(1.0 - fidelity(run.received_1, phi_plus)));
      worst = std::max(worst, std::abs(1.0 - fidelity(run.received_2, phi_plus)));
      checks += 2;
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%d/32 checks, max |1-F_ent| = %.2e, %.1f s", checks,
                worst, seconds);
  detail = buffer;
  return checks == 32 && worst <= 1e-9 && seconds < 10.0;
}

// 3. Frame composition: correcting with f2 then f1 xor f2 equals correcting
// with f1, exactly, on all 16 frame pairs and 6 test states.
bool frame_composition(std::string& detail) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const PauliFrame f1{a & 1, (a >> 1) & 1};
      const PauliFrame f2{b & 1, (b >> 1) & 1};
      for (StateLabel label : kAllStateLabels) {
        const DensityMatrix rho = to_density(single_qubit_state(label));
        const DensityMatrix via_two =
            apply_unitary(apply_unitary(rho, correction_unitary(f2), {0}),
                          correction_unitary(combine_frames(f1, f2)), {0});
        const DensityMatrix direct = apply_unitary(rho, correction_unitary(f1), {0});
        worst = std::max(worst,
                         (via_two.entries() - direct.entries()).cwiseAbs().maxCoeff());
      }
    }
  }
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "96 cases, max deviation = %.2e", worst);
  detail = buffer;
  return worst <= 1e-12;
}

// 4. Witness decomposition (II + XX - YY + ZZ)/4 equals Tr(rho |Phi+><Phi+|).
bool witness_decomposition(std::string& detail) {
  const Operator xx = Operator::observable(2, qnc::detail::kron_low_first(pauli_x(), pauli_x(), 1));
  const Operator yy = Operator::observable(2, qnc::detail::kron_low_first(pauli_y(), pauli_y(), 1));
  const Operator zz = Operator::observable(2, qnc::detail::kron_low_first(pauli_z(), pauli_z(), 1));
  const PureState phi_plus = bell_pair(BellKind::PhiPlus);

  Rng rng = make_rng(400);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = Complex{gauss(rng), gauss(rng)};
    }
    Matrix raw = a * a.adjoint();
    raw /= raw.trace().real();
    const DensityMatrix rho(2, std::move(raw));
    const double decomposed = (1.0 + expectation(rho, xx) - expectation(rho, yy) +
                               expectation(rho, zz)) / 4.0;
    worst = std::max(worst, std::abs(decomposed - fidelity(rho, phi_plus)));
  }
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "100 random states, max deviation = %.2e", worst);
  detail = buffer;
  return worst <= 1e-9;
}

// 5. The published significance arithmetic.
bool significance_arithmetic(std::string& detail) {
  const double single = significance({0.9685, 0.0013}, 0.9503);
  const double ent = significance({0.9611, 0.0061}, 0.9256);
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "single: %.3f sigma, entanglement: %.3f sigma", single,
                ent);
  detail = buffer;
  return std::abs(single - 14.0) <= 0.1 && std::abs(ent - 5.8) <= 0.05;
}

// 6. With 0.993-fidelity Werner pairs, the count-sampled sweep mean matches
// the brute-force density-matrix oracle, and the exact per-situation
// fidelities agree to 1e-9.
bool noisy_oracle_equivalence(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const NoiseModel noise{0.993, 0.993, 0.0, 0};
  const double counts = 1e4;
  const std::uint64_t base_seed = 20260806;

  double worst_exact = 0.0;
  double mc_mean = 0.0;
  double mc_variance = 0.0;
  double oracle_mean = 0.0;
  double weight_sum = 0.0;
  int situation = 0;
  for (StateLabel phi1 : kAllStateLabels) {
    for (StateLabel phi2 : kAllStateLabels) {
      const oracle::V ref1 = single_qubit_state(phi1).amplitudes();
      const oracle::V ref2 = single_qubit_state(phi2).amplitudes();
      for (BellKind k1 : kAllBellKinds) {
        for (BellKind k2 : kAllBellKinds) {
          const ProtocolRun run =
              run_state_mode(phi1, phi2, noise, 0, std::make_pair(k1, k2));
          const oracle::PairFidelities ref = oracle::state_mode_exact(
              ref1, ref2, 0.993, 0.993, 0.0, bell_index(k1), bell_index(k2));
          const double impl[2] = {fidelity(run.received_1, single_qubit_state(phi1)),
                                  fidelity(run.received_2, single_qubit_state(phi2))};
          const double exact[2] = {ref.f1, ref.f2};
          const double weight = run.outcome_weight() / 36.0 / 2.0;
          const std::uint64_t situation_seed = split_seed(base_seed, situation);
          for (int stream = 0; stream < 2; ++stream) {
            worst_exact = std::max(worst_exact, std::abs(impl[stream] - exact[stream]));
            Rng rng = make_rng(split_seed(situation_seed, stream + 1));
            const Estimate estimate =
                fidelity_from_counts(simulate_counts(impl[stream], counts, rng));
            mc_mean += weight * estimate.value;
            mc_variance += weight * weight * estimate.sigma * estimate.sigma;
            oracle_mean += weight * exact[stream];
            weight_sum += weight;
          }
          ++situation;
        }
      }
    }
  }
  const double mc_sigma = std::sqrt(mc_variance);
  const double z = std::abs(mc_mean - oracle_mean) / mc_sigma;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buffer[200];
  std::snprintf(buffer, sizeof(buffer),
                "max |impl-oracle| = %.2e, MC mean %.6f vs oracle %.6f (%.2f sigma), %.1f s",
                worst_exact, mc_mean, oracle_mean, z, seconds);
  detail = buffer;
  return worst_exact <= 1e-9 && z <= 3.0 && std::abs(weight_sum - 1.0) <= 1e-9 &&
         seconds < 120.0;
}

// 7. Fourfold coincidence estimate sits in the published ballpark.
bool rate_check(std::string& detail) {
  const double rate = estimate_fourfold_rate(SourceParams{80e6, 0.0036, 0.28, 0.25});
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f counts/s", rate);
  detail = buffer;
  return rate >= 1.4 && rate <= 1.8;
}

// 8. Measure-resend averages 2/3, strictly below the no-entanglement bound,
// which the entangled protocol beats at 1.
bool baseline_separation(std::string& detail) {
  Rng rng = make_rng(800);
  std::uniform_int_distribution<int> label(0, 5);
  const int trials = 100000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const StateLabel phi1 = kAllStateLabels[label(rng)];
    const StateLabel phi2 = kAllStateLabels[label(rng)];
    const ProtocolRun run = run_baseline_measure_resend(phi1, phi2, rng());
    sum += 0.5 * (fidelity(run.received_1, single_qubit_state(phi1)) +
                  fidelity(run.received_2, single_qubit_state(phi2)));
  }
  const double mean = sum / trials;

  const ProtocolRun ideal = run_state_mode(StateLabel::L, StateLabel::Minus,
                                           NoiseModel::ideal(), 1);
  const double qnc_fidelity = 0.5 * (fidelity(ideal.received_1, single_qubit_state(StateLabel::L)) +
                                     fidelity(ideal.received_2, single_qubit_state(StateLabel::Minus)));

  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "baseline mean %.4f (1e5 runs), QNC %.6f", mean,
                qnc_fidelity);
  detail = buffer;
  return std::abs(mean - 2.0 / 3.0) <= 0.01 && mean < 0.9503 && 0.9503 < qnc_fidelity + 1e-9 &&
         std::abs(qnc_fidelity - 1.0) <= 1e-9;
}

// 9. Transcripts audit clean; injected duplicate-send and qubit-copy faults
// are each flagged exactly once.
bool audit_checks(std::string& detail) {
  const ProtocolRun state_run =
      run_state_mode(StateLabel::Plus, StateLabel::R, NoiseModel::ideal(), 90);
  const ProtocolRun ent_run = run_entanglement_mode(NoiseModel::ideal(), 91);
  const ProtocolRun base_run = run_baseline_measure_resend(StateLabel::L, StateLabel::H, 92);
  const std::size_t clean = audit(state_run.transcript).size() +
                            audit(ent_run.transcript).size() +
                            audit(base_run.transcript).size();

  std::vector<NetworkEvent> duplicated = state_run.transcript;
  duplicated.push_back(NetworkEvent::send_event(
      0, *build_butterfly().find_edge("S2", "R1"), Payload::qubit(2)));
  const auto dup_violations = audit(duplicated);
  const bool dup_ok = dup_violations.size() == 1 &&
                      dup_violations[0].kind == Violation::Kind::CapacityExceeded;

  std::vector<NetworkEvent> cloned = state_run.transcript;
  cloned.push_back(NetworkEvent::copy_event(0, "C2", Payload::qubit(3)));
  const auto clone_violations = audit(cloned);
  const bool clone_ok = clone_violations.size() == 1 &&
                        clone_violations[0].kind == Violation::Kind::NoCloning;

  char buffer[128];
  std::snprintf(buffer, sizeof(buffer),
                "clean transcripts: %zu violations; faults flagged: %s / %s", clean,
                dup_ok ? "dup once" : "dup WRONG", clone_ok ? "clone once" : "clone WRONG");
  detail = buffer;
  return clean == 0 && dup_ok && clone_ok;
}

// 10. Classical butterfly decodes all four bit pairs within unit capacity.
bool classical_butterfly_check(std::string& detail) {
  int correct = 0;
  bool capacity_ok = true;
  for (int b1 = 0; b1 <= 1; ++b1) {
    for (int b2 = 0; b2 <= 1; ++b2) {
      const ClassicalRunResult r = classical_butterfly(b1, b2);
      if (r.at_r1 == b1 && r.at_r2 == b2) ++correct;
      if (!audit(r.transcript, r.topology).empty()) capacity_ok = false;
      for (const EdgeSpec& e : r.topology.edges) {
        if (r.ledger.bits_carried(e.from, e.to, 0) > 1) capacity_ok = false;
      }
    }
  }
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "%d/4 decoded, capacity %s", correct,
                capacity_ok ? "ok" : "VIOLATED");
  detail = buffer;
  return correct == 4 && capacity_ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "perfect state transmission (576 ideal situations)", perfect_state_mode},
      {2, "perfect entanglement distribution (16 outcome pairs)", perfect_entanglement},
      {3, "frame composition cancels exactly", frame_composition},
      {4, "witness decomposition equals projector fidelity", witness_decomposition},
      {5, "published significance arithmetic", significance_arithmetic},
      {6, "noisy-run oracle equivalence (0.993 pairs)", noisy_oracle_equivalence},
      {7, "fourfold coincidence rate in [1.4, 1.8]", rate_check},
      {8, "baseline separation: 2/3 < threshold < 1", baseline_separation},
      {9, "capacity and no-cloning audits", audit_checks},
      {10, "classical butterfly decodes 4/4", classical_butterfly_check},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures != 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", criteria.size());
  return 0;
}
