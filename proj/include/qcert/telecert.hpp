// Copyright 2026 The qcert Authors
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

#include <optional>
#include <string>
#include <vector>

#include "qcert/effective.hpp"
#include "qcert/sdp.hpp"

namespace qcert {

/// Subnormalized teleported states phi[a][x] with Tr phi = p(a|psi_x).
struct TeleportationData {
    std::size_t d = 2;  // input dimension
    InputEnsemble ensemble;
    std::vector<std::vector<ComplexMatrix>> phi;

    std::size_t n_outcomes() const { return phi.size(); }
    std::size_t d_out() const { return phi.empty() || phi[0].empty() ? 0 : static_cast<std::size_t>(phi[0][0].rows()); }
    /// Throws DataError when an invariant fails by more than `tol`.
    void validate(double tol = 1e-8) const;
    /// Bob's marginal sum_a phi[a][x], averaged over x.
    ComplexMatrix bob_marginal() const;
};

struct FidelityBound {
    std::optional<double> value;  // set only when the solver reports optimal
    double raw_value = 0;
    bool clamped = false;
    SdpStatus status = SdpStatus::numerical_failure;
    double gap = 0;
    double max_residual = 0;
    double min_eigenvalue = 0;
    int iterations = 0;
};

struct HhhFidelity {
    double fs = 0;
    bool clamped = false;
    /// Validity needs a tomographically complete ensemble and a d x d shared state.
    std::string assumption = "complete ensemble and d*d-dimensional shared state";
};

TeleportationData teleport(const DensityMatrix &rho, const Povm &povm_a, const InputEnsemble &ensemble);

/// (1/|x|) sum_{a,x} <psi_x|U_a phi_{a|x} U_a^dag|psi_x>, skipping branches with
/// probability below 1e-12 (counted in `skipped`).
double average_fidelity(const TeleportationData &data, std::size_t *skipped = nullptr);

HhhFidelity hhh_state_fidelity(double f_tel, std::size_t d);

/// (1/d) sum_a V_a M_a^{T_A'} V_a^dag on (A'', B) with V_a = U_a^T (x) 1.
DensityMatrix rho_o(const EffectiveSet &eff, std::size_t d);

/// Exact recovery of the effective teleportation measurements from a
/// tomographically complete data set.
EffectiveSet reconstruct_teleport(const TeleportationData &data);

/// Complex program over Y_a = M_a^{T_A'} (PSD blocks on A' (x) B).
ComplexSDP build_sdp(const TeleportationData &data);
FidelityBound fidelity_lower_bound(const TeleportationData &data, const SolverOptions &opt = {});

}  // namespace qcert
