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
#include <string>

#include "qnc/quantum.hpp"

namespace qnc {

/// Imperfection parameters for a protocol run. Entangled pairs are modeled as
/// Werner states at the given fidelity; transmitted qubits optionally pass
/// through a depolarizing channel.
struct NoiseModel {
  /// Fidelity of the pre-shared pairs with an ideal |Phi+>.
  double shared_pair_fidelity = 1.0;
  /// Fidelity of the source pairs feeding the state preparation / the
  /// retained entangled arms.
  double source_pair_fidelity = 1.0;
  /// Depolarizing probability applied to each qubit crossing a quantum edge.
  double depolarizing_p = 0.0;
  /// Base seed for sampling paths driven by this model.
  std::uint64_t seed = 0;

  static NoiseModel ideal() { return NoiseModel{}; }

  void validate() const {
    if (!(shared_pair_fidelity > 0.25) || shared_pair_fidelity > 1.0) {
      detail::fail("shared_pair_fidelity must lie in (0.25, 1], got " +
                   std::to_string(shared_pair_fidelity));
    }
    if (!(source_pair_fidelity > 0.25) || source_pair_fidelity > 1.0) {
      detail::fail("source_pair_fidelity must lie in (0.25, 1], got " +
                   std::to_string(source_pair_fidelity));
    }
    if (depolarizing_p < 0.0 || depolarizing_p > 1.0) {
      detail::fail("depolarizing_p must lie in [0, 1], got " +
                   std::to_string(depolarizing_p));
    }
  }
};

/// Photon-source figures used by the coincidence-rate estimate.
struct SourceParams {
  double rep_rate_hz = 80e6;
  double pair_prob = 0.0036;
  double collection_eff = 0.28;
  double bsm_success = 0.25;

  void validate() const {
    if (rep_rate_hz < 0.0 || pair_prob < 0.0) {
      detail::fail("source rates must be nonnegative");
    }
    if (collection_eff < 0.0 || collection_eff > 1.0 ||
        bsm_success < 0.0 || bsm_success > 1.0) {
      detail::fail("efficiencies must lie in [0, 1]");
    }
  }
};

/// v |Phi+><Phi+| + (1 - v) I/4.
inline DensityMatrix werner_state(double v) {
  if (v < 0.0 || v > 1.0) {
    detail::fail("Werner parameter must lie in [0, 1], got " + std::to_string(v));
  }
  Vector phi_plus(4);
  const double s = 1.0 / std::sqrt(2.0);
  phi_plus << s, 0.0, 0.0, s;
  Matrix rho = v * (phi_plus * phi_plus.adjoint()) + (1.0 - v) * 0.25 * Matrix::Identity(4, 4);
  return DensityMatrix(2, std::move(rho));
}

/// Inverse of f = (1 + 3v)/4, the fidelity of werner_state(v) with |Phi+>.
inline double v_from_fidelity(double f) {
  if (!(f > 0.25) || f > 1.0) {
    detail::fail("pair fidelity must lie in (0.25, 1] to be a Werner state, got " +
                 std::to_string(f));
  }
  return (4.0 * f - 1.0) / 3.0;
}

/// (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on the target qubit.
inline DensityMatrix depolarize(const DensityMatrix& rho, double p, int target) {
  if (p < 0.0 || p > 1.0) {
    detail::fail("depolarizing probability must lie in [0, 1], got " + std::to_string(p));
  }
  detail::check_targets(rho.n_qubits(), {target});
  Matrix x_term = rho.entries();
  Matrix y_term = rho.entries();
  Matrix z_term = rho.entries();
  detail::conjugate_density(x_term, pauli_x(), {target}, rho.n_qubits());
  detail::conjugate_density(y_term, pauli_y(), {target}, rho.n_qubits());
  detail::conjugate_density(z_term, pauli_z(), {target}, rho.n_qubits());
  Matrix out = (1.0 - p) * rho.entries() + (p / 3.0) * (x_term + y_term + z_term);
  return DensityMatrix(rho.n_qubits(), std::move(out));
}

/// Multiplicative fourfold-coincidence model: two independent pair emissions,
/// four collected photons, one heralding Bell measurement. Order-of-magnitude
/// only; detector asymmetries and filter transmissions are folded into the
/// single collection efficiency.
inline double estimate_fourfold_rate(const SourceParams& sp) {
  sp.validate();
  return sp.rep_rate_hz * sp.pair_prob * sp.pair_prob *
         sp.collection_eff * sp.collection_eff * sp.collection_eff * sp.collection_eff *
         sp.bsm_success;
}

}  // namespace qnc
