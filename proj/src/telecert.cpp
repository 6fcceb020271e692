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

#include "qcert/telecert.hpp"

#include <algorithm>
#include <cmath>

#include "qcert/errors.hpp"

namespace qcert {

void TeleportationData::validate(double tol) const {
    if (ensemble.size() == 0) throw PreconditionError("teleportation data has no inputs");
    if (phi.empty()) throw DataError("teleportation data has no outcomes");
    const auto n = d_out();
    ComplexMatrix ref;
    for (std::size_t x = 0; x < ensemble.size(); ++x) {
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (std::size_t a = 0; a < phi.size(); ++a) {
            if (phi[a].size() != ensemble.size()) throw DataError("teleportation data is missing inputs");
            const auto &m = phi[a][x];
            if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols())
                throw DataError("teleported states differ in dimension");
            if (hermiticity_defect(m) > tol) throw DataError("teleported state is not Hermitian");
            auto r = psd_check(ComplexMatrix(0.5 * (m + m.adjoint())), std::max(tol, 1e-9));
            if (!r.psd) throw DataError("teleported state phi[" + std::to_string(a) + "][" + std::to_string(x) +
                                        "] is not PSD");
            sum += m;
        }
        if (std::abs(sum.trace().real() - 1) > tol)
            throw DataError("outcome probabilities for input " + std::to_string(x) + " do not sum to 1");
        if (x == 0) ref = sum;
        else if (max_abs(sum - ref) > std::max(tol, 1e-6))
            throw DataError("teleportation data violates no-signalling (input " + std::to_string(x) + ")");
    }
}

ComplexMatrix TeleportationData::bob_marginal() const {
    const auto n = d_out();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (auto &row : phi)
        for (auto &m : row) sum += m;
    return sum / static_cast<double>(ensemble.size());
}

TeleportationData teleport(const DensityMatrix &rho, const Povm &povm_a, const InputEnsemble &ensemble) {
    auto eff = effective_teleport(rho, povm_a);
    if (ensemble.d() != eff.dims[0]) throw ArgumentError("ensemble dimension does not match Alice's input register");
    TeleportationData t;
    t.d = ensemble.d();
    t.ensemble = ensemble;
    const auto dB = eff.dims[1];
    const ComplexMatrix IB = ComplexMatrix::Identity(dB, dB);
    t.phi.resize(povm_a.size());
    for (std::size_t a = 0; a < povm_a.size(); ++a)
        for (std::size_t x = 0; x < ensemble.size(); ++x) {
            ComplexMatrix prod = eff.at({a}) * kron(ensemble.state(x).projector().matrix(), IB);
            ComplexMatrix m = partial_trace(prod, eff.dims, {1});
            t.phi[a].push_back(0.5 * (m + m.adjoint()));
        }
    return t;
}

double average_fidelity(const TeleportationData &data, std::size_t *skipped) {
    if (data.d_out() != data.d) throw ArgumentError("average fidelity needs Bob's output dimension to equal d");
    if (data.n_outcomes() > data.d * data.d) throw ArgumentError("more outcomes than correcting unitaries");
    std::size_t skip = 0;
    double total = 0;
    for (std::size_t x = 0; x < data.ensemble.size(); ++x) {
        const auto &psi = data.ensemble.state(x).amplitudes();
        double px_total = 0, fx = 0;
        for (std::size_t a = 0; a < data.n_outcomes(); ++a) {
            const auto &m = data.phi[a][x];
            const double p = m.trace().real();
            if (p < 1e-12) {
                ++skip;
                continue;
            }
            ComplexMatrix U = correcting_unitary(a, data.d).matrix();
            ComplexVector v = U.adjoint() * psi;
            const double f = v.dot(m * v).real() / p;  // normalized branch fidelity
            fx += p * f;
            px_total += p;
        }
        if (px_total <= 0) throw DataError("input " + std::to_string(x) + " has no outcome with nonzero probability");
        total += fx;
    }
    if (skipped) *skipped = skip;
    return total / static_cast<double>(data.ensemble.size());
}

HhhFidelity hhh_state_fidelity(double f_tel, std::size_t d) {
    if (d < 2) throw ArgumentError("dimension must be at least 2");
    HhhFidelity h;
    const double dd = static_cast<double>(d);
    double fs = (f_tel * (dd + 1) - 1) / dd;
    h.clamped = fs < 0 || fs > 1;
    h.fs = std::clamp(fs, 0.0, 1.0);
    return h;
}

DensityMatrix rho_o(const EffectiveSet &eff, std::size_t d) {
    if (eff.scenario != Scenario::teleport) throw ArgumentError("rho_o needs a teleportation effective set");
    if (eff.dims.size() != 2 || eff.dims[0] != d) throw ArgumentError("effective set does not act on a d-dim input");
    const auto dB = eff.dims[1];
    const ComplexMatrix IB = ComplexMatrix::Identity(dB, dB);
    const auto n = eff.outcome_counts.at(0);
    if (n > d * d) throw ArgumentError("more outcomes than correcting unitaries");
    ComplexMatrix out = ComplexMatrix::Zero(d * dB, d * dB);
    for (std::size_t a = 0; a < n; ++a) {
        ComplexMatrix V = kron(extraction_unitary(a, d, InputSlot::first), IB);
        out += V * partial_transpose(eff.at({a}), eff.dims, 0) * V.adjoint();
    }
    out /= static_cast<double>(d);
    return DensityMatrix(ComplexMatrix(0.5 * (out + out.adjoint())), SystemShape({d, dB}));
}

EffectiveSet reconstruct_teleport(const TeleportationData &data) {
    auto rep = is_tomographically_complete(data.ensemble);
    if (!rep.complete)
        throw PreconditionError("teleportation ensemble is not tomographically complete: rank " +
                                std::to_string(rep.rank) + " < " + std::to_string(rep.required));
    std::vector<ComplexMatrix> proj;
    for (auto &s : data.ensemble.states()) proj.push_back(s.projector().matrix());
    auto inv = make_inversion(proj);
    const auto d = data.d, dB = data.d_out();
    EffectiveSet eff;
    eff.scenario = Scenario::teleport;
    eff.dims = {d, dB};
    eff.slots = {InputSlot::first};
    eff.outcome_counts = {data.n_outcomes()};
    for (std::size_t a = 0; a < data.n_outcomes(); ++a) {
        ComplexMatrix M = ComplexMatrix::Zero(d * dB, d * dB);
        for (std::size_t j = 0; j < dB; ++j)
            for (std::size_t k = 0; k < dB; ++k) {
                ComplexVector rhs(data.ensemble.size());
                for (std::size_t x = 0; x < data.ensemble.size(); ++x) rhs(x) = data.phi[a][x](j, k);
                ComplexVector n = inv.pinv * rhs;  // N_{i,i'} = M[(i,j),(i',k)]
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t i2 = 0; i2 < d; ++i2) M(i * dB + j, i2 * dB + k) = n(i * d + i2);
            }
        eff.entries.emplace(OutcomeKey{a}, LabeledOperator(0.5 * (M + M.adjoint()), SystemShape(eff.dims), true));
    }
    eff.refresh_positivity();
    return eff;
}

namespace {
// Hermitian test matrices whose traces against phi give Re phi_jk (j<=k) and Im phi_jk (j<k).
std::vector<std::pair<ComplexMatrix, std::string>> entry_functionals(std::size_t n) {
    std::vector<std::pair<ComplexMatrix, std::string>> out;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
            ComplexMatrix E = ComplexMatrix::Zero(n, n);
            if (j == k) {
                E(j, j) = 1;
                out.emplace_back(E, "re" + std::to_string(j) + std::to_string(k));
                continue;
            }
            E(k, j) = 0.5;
            E(j, k) = 0.5;
            out.emplace_back(E, "re" + std::to_string(j) + std::to_string(k));
            ComplexMatrix F = ComplexMatrix::Zero(n, n);
            F(k, j) = cplx(0, -0.5);
            F(j, k) = cplx(0, 0.5);
            out.emplace_back(F, "im" + std::to_string(j) + std::to_string(k));
        }
    return out;
}
}  // namespace

ComplexSDP build_sdp(const TeleportationData &data) {
    data.validate(1e-6);
    const auto d = data.d, dB = data.d_out();
    const auto n = d * dB;
    if (data.n_outcomes() > d * d) throw ArgumentError("more outcomes than correcting unitaries");
    ComplexSDP p;
    p.blocks.assign(data.n_outcomes(), n);
    p.metadata = {"qcert teleportation fidelity bound",
                  "d=" + std::to_string(d) + " outcomes=" + std::to_string(data.n_outcomes()) +
                      " inputs=" + std::to_string(data.ensemble.size())};
    const ComplexVector phi = maximally_entangled(d).amplitudes();
    const ComplexMatrix IB = ComplexMatrix::Identity(dB, dB);
    ComplexVector ref = phi;
    if (dB != d) throw ArgumentError("fidelity bound needs Bob's output dimension to equal d");
    for (std::size_t a = 0; a < data.n_outcomes(); ++a) {
        ComplexMatrix V = kron(extraction_unitary(a, d, InputSlot::first), IB);
        ComplexVector w = V.adjoint() * ref;
        p.objective.push_back({a, ComplexMatrix(w * w.adjoint() / static_cast<double>(d))});
    }
    auto fB = entry_functionals(dB);
    for (std::size_t a = 0; a < data.n_outcomes(); ++a)
        for (std::size_t x = 0; x < data.ensemble.size(); ++x) {
            ComplexMatrix psiT = data.ensemble.state(x).projector().matrix().transpose();
            for (auto &[E, name] : fB) {
                ComplexEquality q;
                q.terms.push_back({a, kron(psiT, E)});
                q.rhs = (E * data.phi[a][x]).trace().real();
                q.label = "data a=" + std::to_string(a) + " x=" + std::to_string(x) + " " + name;
                p.equalities.push_back(std::move(q));
            }
        }
    const ComplexMatrix marg = kron(ComplexMatrix::Identity(d, d), data.bob_marginal());
    for (auto &[E, name] : entry_functionals(n)) {
        ComplexEquality q;
        for (std::size_t a = 0; a < data.n_outcomes(); ++a) q.terms.push_back({a, E});
        q.rhs = (E * marg).trace().real();
        q.label = "marginal " + name;
        p.equalities.push_back(std::move(q));
    }
    return p;
}

FidelityBound fidelity_lower_bound(const TeleportationData &data, const SolverOptions &opt) {
    auto sol = solve(realify(build_sdp(data)), opt);
    FidelityBound fb;
    fb.status = sol.status;
    fb.raw_value = sol.primal_value;
    fb.gap = sol.gap;
    fb.max_residual = sol.max_residual;
    fb.min_eigenvalue = sol.min_eigenvalue;
    fb.iterations = sol.iterations;
    if (sol.status == SdpStatus::optimal) {
        fb.clamped = sol.primal_value < 0 || sol.primal_value > 1;
        fb.value = std::clamp(sol.primal_value, 0.0, 1.0);
    }
    return fb;
}

}  // namespace qcert
