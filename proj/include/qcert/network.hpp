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

#include <string>
#include <vector>

#include "qcert/telecert.hpp"

namespace qcert {

/// Linear repeater chain. Source k is shared between node k and node k+1;
/// the intermediate nodes perform (noisy) Bell state measurements.
struct ChainSpec {
    std::size_t d = 2;
    std::vector<DensityMatrix> sources;  // one bipartite state per source
    std::vector<double> eta;             // one visibility per intermediate node
    bool first_trusted = true;           // trusted quantum inputs at the first node
    bool last_trusted = false;           // trusted quantum inputs at the last node

    std::size_t n_sources() const { return sources.size(); }
    void validate() const;
};

/// n isotropic(d, p) links with ideal intermediate measurements.
ChainSpec isotropic_chain(std::size_t d, std::size_t n_sources, double p = 1.0);

struct CertificationPlan {
    std::vector<std::string> sources;  // "qc", "steering", "standard-DI" or "MDI"
    std::string end_to_end;            // "teleportation-sdp" or "none"
};

DensityMatrix swap_once(const DensityMatrix &rho_ab, const DensityMatrix &rho_cd, const Povm &bsm_povm);
DensityMatrix chain_state(const ChainSpec &spec);
CertificationPlan plan(const ChainSpec &spec);
FidelityBound certify_chain(const ChainSpec &spec, const InputEnsemble &ensemble, const SolverOptions &opt = {});

}  // namespace qcert
