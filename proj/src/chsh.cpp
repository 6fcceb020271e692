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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcert/errors.hpp"
#include "qcert/selftest.hpp"

namespace qcert {

ChshObservables chsh_observables(const Povm &povm_a, const Povm &povm_b, const std::vector<std::size_t> &perm_a,
                                 const std::vector<std::size_t> &perm_b) {
    auto ens = named_ensemble("chsh", 2);
    ChshObservables o;
    auto build = [&](const Povm &p, const std::vector<std::size_t> &perm, ComplexMatrix &X0, ComplexMatrix &X1) {
        if (p.size() != 4 || p.shape().size() != 2 || p.shape().dim(0) != 2)
            throw ArgumentError("CHSH construction needs four-outcome measurements on (X', X) with a qubit X'");
        if (perm.size() != 4) throw ArgumentError("outcome relabeling must have four entries");
        const auto dx = p.shape().dim(1);
        const std::vector<std::size_t> dims{2, dx};
        auto part = [&](std::size_t x, std::size_t k1, std::size_t k2) {
            ComplexMatrix in = kron(ens.state(x).projector().matrix(), ComplexMatrix::Identity(dx, dx));
            ComplexMatrix m = partial_trace(ComplexMatrix(in * (p.effect(perm[k1]) + p.effect(perm[k2]))), dims, {1});
            return ComplexMatrix(0.5 * (m + m.adjoint()));
        };
        const ComplexMatrix P0 = part(0, 0, 1), N0 = part(0, 2, 3), P1 = part(1, 0, 2), N1 = part(1, 1, 3);
        const ComplexMatrix I = ComplexMatrix::Identity(dx, dx);
        for (auto *m : {&P0, &N0, &P1, &N1})
            o.validity_defect = std::max(o.validity_defect, std::max(0.0, -hermitian_eigen(*m).values(0)));
        o.validity_defect = std::max({o.validity_defect, max_abs(P0 + N0 - I), max_abs(P1 + N1 - I)});
        X0 = P0 - N0;
        X1 = P1 - N1;
    };
    build(povm_a, perm_a, o.A0, o.A1);
    build(povm_b, perm_b, o.B0, o.B1);
    return o;
}

double chsh_value(const DensityMatrix &rho, const ChshObservables &o) {
    ComplexMatrix W = kron(o.A0, o.B0) + kron(o.A0, o.B1) + kron(o.A1, o.B0) - kron(o.A1, o.B1);
    if (W.rows() != rho.matrix().rows()) throw ArgumentError("CHSH observables do not match the state");
    return (rho.matrix() * W).trace().real();
}

CertReport chsh_quantum_inputs(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b, double tol) {
    auto o = chsh_observables(povm_a, povm_b);
    CertReport r;
    r.scenario = "chsh";
    r.tolerance = tol;
    const double S = chsh_value(rho, o);
    const double tsirelson = 2 * std::numbers::sqrt2;
    r.diagnostics["chsh"] = S;
    r.diagnostics["validity_defect"] = o.validity_defect;
    r.residuals["chsh_shortfall"] = tsirelson - S;
    r.residuals["validity"] = o.validity_defect;
    // Extractable-fidelity bound for +-1 observables; trivial (1/2) below its threshold.
    const double beta = (16 + 14 * std::numbers::sqrt2) / 17;
    r.fidelity_estimate = S > beta ? std::min(1.0, 0.5 * (1 + (S - beta) / (tsirelson - beta))) : 0.5;
    r.notes.push_back("fidelity_estimate is the CHSH extractable-fidelity lower bound");
    r.finalize();
    return r;
}

PureState chsh_reference_state(const ChshConvention &c) {
    auto bell = bell_basis(2);
    const double ang = std::numbers::pi / 8;
    ComplexVector v = std::cos(ang) * bell.at(c.phi_index).amplitudes() +
                      static_cast<double>(c.sign) * std::sin(ang) * bell.at(c.psi_index).amplitudes();
    return PureState(v.normalized(), SystemShape({2, 2}));
}

ChshConvention chsh_convention_search(double tol) {
    const Povm B = bsm(2);
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p{0, 1, 2, 3};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const double target = 2 * std::numbers::sqrt2;
    for (auto &pa : perms)
        for (auto &pb : perms) {
            auto o = chsh_observables(B, B, pa, pb);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) {
                    if (i == j) continue;
                    for (int sign : {1, -1}) {
                        ChshConvention c{i, j, sign, pa, pb, 0, false};
                        auto psi = chsh_reference_state(c);
                        c.value = chsh_value(DensityMatrix(psi.projector()), o);
                        if (std::abs(c.value - target) <= tol) {
                            c.found = true;
                            return c;
                        }
                    }
                }
        }
    return {};
}

}  // namespace qcert
