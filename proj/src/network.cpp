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

#include "qcert/network.hpp"

#include "qcert/errors.hpp"

namespace qcert {

void ChainSpec::validate() const {
    if (sources.empty()) throw ArgumentError("chain needs at least one source");
    if (eta.size() != sources.size() - 1)
        throw ArgumentError("chain needs one visibility per intermediate node (" + std::to_string(sources.size() - 1) +
                            "), got " + std::to_string(eta.size()));
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const auto &dims = sources[k].shape().dims();
        if (dims.size() != 2 || dims[0] != d || dims[1] != d)
            throw ArgumentError("source " + std::to_string(k + 1) + " is not a " + std::to_string(d) + "x" +
                                std::to_string(d) + " bipartite state");
    }
    for (double e : eta)
        if (!(e >= 0 && e <= 1)) throw ArgumentError("visibility must lie in [0,1]");
}

ChainSpec isotropic_chain(std::size_t d, std::size_t n_sources, double p) {
    ChainSpec s;
    s.d = d;
    s.sources.assign(n_sources, isotropic_state(d, p));
    s.eta.assign(n_sources ? n_sources - 1 : 0, 1.0);
    return s;
}

DensityMatrix swap_once(const DensityMatrix &rho_ab, const DensityMatrix &rho_cd, const Povm &bsm_povm) {
    const auto &s1 = rho_ab.shape().dims(), &s2 = rho_cd.shape().dims();
    if (s1.size() != 2 || s2.size() != 2) throw ArgumentError("swap_once expects two bipartite states");
    if (bsm_povm.shape().size() != 2 || bsm_povm.shape().dim(0) != s1[1] || bsm_povm.shape().dim(1) != s2[0])
        throw ArgumentError("Bell measurement does not act on the two middle registers");
    const std::size_t d = s2[1];
    if (bsm_povm.size() != d * d || s1[1] != d || s2[0] != d)
        throw ArgumentError("swap_once needs equal local dimensions and d^2 outcomes");
    const std::vector<std::size_t> dims{s1[0], s1[1], s2[0], s2[1]};
    SystemShape(dims).total();
    const ComplexMatrix joint = kron(rho_ab.matrix(), rho_cd.matrix());
    ComplexMatrix out = ComplexMatrix::Zero(s1[0] * d, s1[0] * d);
    for (std::size_t m = 0; m < bsm_povm.size(); ++m) {
        ComplexMatrix M = embed_operator(bsm_povm.effect(m), dims, {1, 2});
        ComplexMatrix branch = partial_trace(ComplexMatrix(M * joint), dims, {0, 3});
        ComplexMatrix V = kron(ComplexMatrix::Identity(s1[0], s1[0]), extraction_unitary(m, d, InputSlot::second));
        out += V * branch * V.adjoint();
    }
    return DensityMatrix(ComplexMatrix(0.5 * (out + out.adjoint())), SystemShape({s1[0], d}));
}

DensityMatrix chain_state(const ChainSpec &spec) {
    spec.validate();
    DensityMatrix acc = spec.sources[0];
    for (std::size_t k = 1; k < spec.sources.size(); ++k)
        acc = swap_once(acc, spec.sources[k], noisy_bsm(spec.d, spec.eta[k - 1]));
    return acc;
}

CertificationPlan plan(const ChainSpec &spec) {
    spec.validate();
    CertificationPlan p;
    const std::size_t n = spec.n_sources();
    if (n == 1) {
        p.sources = {spec.first_trusted && spec.last_trusted ? "MDI" : spec.first_trusted ? "qc" : "standard-DI"};
    } else {
        p.sources.assign(n, "standard-DI");
        if (spec.first_trusted) p.sources.front() = "qc";
        p.sources.back() = "steering";
    }
    p.end_to_end = spec.first_trusted && spec.last_trusted ? "teleportation-sdp" : "none";
    return p;
}

FidelityBound certify_chain(const ChainSpec &spec, const InputEnsemble &ensemble, const SolverOptions &opt) {
    const DensityMatrix rho = chain_state(spec);
    if (ensemble.d() != spec.d) throw ArgumentError("ensemble dimension does not match the chain");
    return fidelity_lower_bound(teleport(rho, bsm(spec.d), ensemble), opt);
}

}  // namespace qcert
