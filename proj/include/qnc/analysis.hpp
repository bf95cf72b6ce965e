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

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnc/rng.hpp"

namespace qnc {

/// Detector counts in the +/- eigenbasis of the measured observable.
struct CountRecord {
  long long n_plus = 0;
  long long n_minus = 0;

  long long total() const { return n_plus + n_minus; }
};

/// A value with its one-standard-deviation statistical error. sigma == 0
/// marks a deterministic estimate.
struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

namespace detail_stats {

inline void check_counts(const CountRecord& c) {
  if (c.n_plus < 0 || c.n_minus < 0) {
    throw std::invalid_argument("counts must be nonnegative");
  }
  if (c.total() == 0) {
    throw std::invalid_argument("estimator needs at least one count");
  }
}

}  // namespace detail_stats

/// F = N+ / (N+ + N-), with sigma from Gaussian propagation of independent
/// Poisson counts: sqrt(N+ N- / (N+ + N-)^3).
inline Estimate fidelity_from_counts(const CountRecord& c) {
  detail_stats::check_counts(c);
  const double a = static_cast<double>(c.n_plus);
  const double b = static_cast<double>(c.n_minus);
  const double total = a + b;
  return {a / total, std::sqrt(a * b / (total * total * total))};
}

/// <O> = (N+ - N-) / (N+ + N-); sigma = 2 sqrt(N+ N- / (N+ + N-)^3), twice
/// the fidelity sigma since <O> = 2F - 1.
inline Estimate expectation_from_counts(const CountRecord& c) {
  detail_stats::check_counts(c);
  const double a = static_cast<double>(c.n_plus);
  const double b = static_cast<double>(c.n_minus);
  const double total = a + b;
  return {(a - b) / total, 2.0 * std::sqrt(a * b / (total * total * total))};
}

struct WitnessEstimate {
  Estimate f_ent;
  Estimate witness;
};

/// Entanglement fidelity from local Pauli correlations,
/// F_ent = (1 + <XX> - <YY> + <ZZ>)/4, and the witness <W> = 1/2 - F_ent.
inline WitnessEstimate witness_fidelity(const Estimate& exx, const Estimate& eyy,
                                        const Estimate& ezz) {
  for (const Estimate* e : {&exx, &eyy, &ezz}) {
    if (e->value < -1.0 - 1e-9 || e->value > 1.0 + 1e-9) {
      throw std::invalid_argument("correlation expectation outside [-1, 1]");
    }
  }
  const double value = (1.0 + exx.value - eyy.value + ezz.value) / 4.0;
  const double sigma =
      0.25 * std::sqrt(exx.sigma * exx.sigma + eyy.sigma * eyy.sigma + ezz.sigma * ezz.sigma);
  return {Estimate{value, sigma}, Estimate{0.5 - value, sigma}};
}

/// One measured fidelity of one transmission situation: which inputs were
/// sent, on which forced BSM outcome pair, for which of the two streams.
struct SituationResult {
  std::string mode;
  std::string phi1;
  std::string phi2;
  std::string m1n1;
  std::string m2n2;
  int stream = 1;
  double weight = 0.0;
  Estimate fidelity;
};

/// F-bar = sum_i p_i F_i with sigma = sqrt(sum_i p_i^2 sigma_i^2). Weights
/// must form a probability distribution.
inline Estimate weighted_average(const std::vector<SituationResult>& results) {
  double weight_sum = 0.0;
  for (const SituationResult& r : results) weight_sum += r.weight;
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("situation weights sum to " + std::to_string(weight_sum) +
                                ", expected 1");
  }
  double value = 0.0;
  double variance = 0.0;
  for (const SituationResult& r : results) {
    value += r.weight * r.fidelity.value;
    variance += r.weight * r.weight * r.fidelity.sigma * r.fidelity.sigma;
  }
  return {value, std::sqrt(variance)};
}

/// Number of standard deviations by which the estimate exceeds the threshold.
inline double significance(const Estimate& fbar, double threshold) {
  if (!(fbar.sigma > 0.0)) {
    throw std::invalid_argument("significance is undefined for a deterministic estimate");
  }
  return (fbar.value - threshold) / fbar.sigma;
}

/// Draws a Poisson total around total_expected and splits it binomially with
/// true_prob into (N+, N-), mimicking a timed coincidence accumulation.
inline CountRecord simulate_counts(double true_prob, double total_expected, Rng& rng) {
  if (true_prob < 0.0 || true_prob > 1.0) {
    throw std::invalid_argument("true_prob must lie in [0, 1]");
  }
  if (!(total_expected > 0.0)) {
    throw std::invalid_argument("total_expected must be positive");
  }
  std::poisson_distribution<long long> total_dist(total_expected);
  const long long total = total_dist(rng);
  if (total == 0) return CountRecord{0, 0};
  std::binomial_distribution<long long> plus_dist(total, true_prob);
  const long long plus = plus_dist(rng);
  return CountRecord{plus, total - plus};
}

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

/// Probability-weighted histogram of the fidelity values; bins are
/// left-closed right-open multiples of bin_width.
inline std::vector<HistogramBin> histogram(const std::vector<SituationResult>& results,
                                           double bin_width) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("bin_width must be positive");
  }
  std::map<long long, double> mass;
  for (const SituationResult& r : results) {
    const long long bin = static_cast<long long>(std::floor(r.fidelity.value / bin_width));
    mass[bin] += r.weight;
  }
  std::vector<HistogramBin> bins;
  bins.reserve(mass.size());
  for (const auto& [bin, m] : mass) {
    bins.push_back(HistogramBin{static_cast<double>(bin) * bin_width,
                                static_cast<double>(bin + 1) * bin_width, m});
  }
  return bins;
}

}  // namespace qnc
