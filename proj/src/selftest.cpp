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

#include "qcert/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "qcert/errors.hpp"

namespace qcert {

double CertReport::max_residual() const {
    double m = 0;
    for (auto &[k, v] : residuals) m = std::max(m, std::abs(v));
    return m;
}

void CertReport::finalize() { pass = max_residual() <= tolerance; }

namespace {

std::string key_string(const OutcomeKey &k) {
    std::string s;
    for (auto v : k) s += (s.empty() ? "" : ",") + std::to_string(v);
    return s;
}

ComplexMatrix correction(const EffectiveSet &eff, const OutcomeKey &k) {
    ComplexMatrix V = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < eff.dims.size(); ++i)
        V = kron(V, extraction_unitary(k[i], eff.dims[i], eff.slots.at(i)));
    return V;
}

void require_complete_bell(const EffectiveSet &eff) {
    if (eff.scenario != Scenario::joint && eff.scenario != Scenario::multipartite)
        throw ArgumentError("expected a joint or multipartite effective set");
    for (std::size_t i = 0; i < eff.dims.size(); ++i)
        if (eff.outcome_counts.at(i) != eff.dims[i] * eff.dims[i])
            throw ArgumentError("each party needs d^2 outcomes for the correcting unitaries");
    std::size_t n = 1;
    for (auto c : eff.outcome_counts) n *= c;
    if (eff.entries.size() != n) throw ArgumentError("effective set is missing outcome entries");
}

ComplexMatrix swap_matrix(const EffectiveSet &eff) {
    require_complete_bell(eff);
    const auto n = SystemShape(eff.dims).total();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (auto &[k, op] : eff.entries) {
        ComplexMatrix V = correction(eff, k);
        out += V * op.matrix().transpose() * V.adjoint();
    }
    out /= static_cast<double>(n);
    return 0.5 * (out + out.adjoint());
}
}  // namespace

DensityMatrix swap_output(const EffectiveSet &eff, std::size_t d) {
    for (auto di : eff.dims)
        if (di != d) throw ArgumentError("swap_output: party dimension differs from d");
    return DensityMatrix(swap_matrix(eff), SystemShape(eff.dims));
}

CertReport check_theorem1(const EffectiveSet &eff, const PureState &reference, double tol) {
    require_complete_bell(eff);
    const auto n = SystemShape(eff.dims).total();
    if (reference.dim() != n) throw ArgumentError("reference state dimension does not match the input registers");
    CertReport r;
    r.scenario = eff.scenario == Scenario::joint ? "mdi" : "multipartite";
    r.tolerance = tol;
    const ComplexMatrix target = reference.projector().matrix() / static_cast<double>(n);
    double min_pt = INFINITY;
    for (auto &[k, op] : eff.entries) {
        ComplexMatrix V = correction(eff, k);
        r.residuals["cond " + key_string(k)] = max_abs(V * op.matrix().transpose() * V.adjoint() - target);
        if (eff.dims.size() == 2)
            min_pt = std::min(min_pt, hermitian_eigen(partial_transpose(op.matrix(), eff.dims, 1)).values(0));
    }
    // Reconstructed data may be slightly unphysical, so the raw matrix is used.
    const ComplexMatrix out = swap_matrix(eff);
    const ComplexVector &psi = reference.amplitudes();
    r.fidelity_estimate = psi.dot(out * psi).real();
    r.diagnostics["swap_output_trace"] = out.trace().real();
    r.diagnostics["swap_output_min_eigenvalue"] = hermitian_eigen(out).values(0);
    if (eff.dims.size() == 2) r.diagnostics["min_pt_eigenvalue"] = min_pt;
    r.diagnostics["effective_min_eigenvalue"] = eff.min_eigenvalue;
    r.finalize();
    return r;
}

DensityMatrix circuit_output(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b, CircuitMode mode) {
    const auto &sd = rho.shape().dims();
    if (sd.size() != 2) throw ArgumentError("circuit_output expects a bipartite state");
    if (povm_a.shape().size() != 2 || povm_b.shape().size() != 2) throw ArgumentError("POVMs must act on two registers");
    const std::size_t dA = sd[0], dB = sd[1];
    const std::size_t d = povm_a.shape().dim(0);
    if (povm_a.shape().dim(1) != dA || povm_b.shape().dim(0) != dB) throw ArgumentError("POVMs do not match the state");
    if (povm_b.shape().dim(1) != d) throw ArgumentError("both input registers must have the same dimension");
    if (povm_a.size() != d * d || povm_b.size() != d * d) throw ArgumentError("circuit needs d^2 outcomes per party");

    auto kraus = [&](const Povm &p) {
        std::vector<ComplexMatrix> K;
        if (mode == CircuitMode::kraus) {
            for (std::size_t a = 0; a < p.size(); ++a) K.push_back(hermitian_sqrt(p.effect(a)));
        } else {
            auto nd = naimark_dilate(p);
            for (std::size_t a = 0; a < p.size(); ++a) K.push_back(nd.projective.effect(a) * nd.isometry);
        }
        return K;
    };
    const auto Ka = kraus(povm_a), Kb = kraus(povm_b);

    const std::size_t PA = d * dA, QB = dB * d;
    auto eig = hermitian_eigen(rho.matrix());
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index br = 0; br < eig.values.size(); ++br) {
        const double lam = eig.values(br);
        if (lam <= 1e-15) continue;
        const ComplexVector v = eig.vectors.col(br);
        // T[a2][b2] over (A' A) x (B B') for |phi+>_{A''A'} |v>_{AB} |phi+>_{B'B''}.
        std::vector<ComplexMatrix> T(d * d, ComplexMatrix::Zero(PA, QB));
        for (std::size_t a2 = 0; a2 < d; ++a2)
            for (std::size_t b2 = 0; b2 < d; ++b2)
                for (std::size_t A = 0; A < dA; ++A)
                    for (std::size_t B = 0; B < dB; ++B)
                        T[a2 * d + b2](a2 * dA + A, B * d + b2) = v(A * dB + B) / static_cast<double>(d);
        for (std::size_t a = 0; a < Ka.size(); ++a)
            for (std::size_t b = 0; b < Kb.size(); ++b) {
                std::vector<ComplexMatrix> Tp(d * d);
                for (std::size_t r = 0; r < d * d; ++r) Tp[r] = Ka[a] * T[r] * Kb[b].transpose();
                ComplexMatrix red(d * d, d * d);
                for (std::size_t r = 0; r < d * d; ++r)
                    for (std::size_t c = 0; c < d * d; ++c) red(r, c) = (Tp[r].array() * Tp[c].conjugate().array()).sum();
                ComplexMatrix V = kron(extraction_unitary(a, d, InputSlot::first), extraction_unitary(b, d, InputSlot::second));
                out += lam * V * red * V.adjoint();
            }
    }
    return DensityMatrix(ComplexMatrix(0.5 * (out + out.adjoint())), SystemShape({d, d}));
}

namespace {
struct QcIdx {
    std::size_t p0, p0b, p1, p1b;
};
QcIdx qc_indices(const ProbabilityTable &t) {
    if (t.scenario != Scenario::qc) throw ArgumentError("expected a quantum-classical probability table");
    if (t.n_a != 4 || t.n_b != 2 || t.n_settings != 2)
        throw ArgumentError("quantum-classical table needs 4 Alice outcomes, 2 Bob outcomes and 2 settings");
    return {t.alice.index_of("psi0"), t.alice.index_of("psi0bar"), t.alice.index_of("psi1"),
            t.alice.index_of("psi1bar")};
}
// Required (a, b) pairs per group; the groups use inputs psi0, psi0bar (y=0), psi1, psi1bar (y=1).
constexpr std::size_t kGroups[4][4][2] = {
    {{0, 0}, {1, 0}, {2, 1}, {3, 1}},
    {{0, 1}, {1, 1}, {2, 0}, {3, 0}},
    {{0, 0}, {2, 0}, {1, 1}, {3, 1}},
    {{0, 1}, {2, 1}, {1, 0}, {3, 0}},
};
}  // namespace

std::array<double, 4> iqc_groups(const ProbabilityTable &table) {
    auto ix = qc_indices(table);
    const std::size_t xs[4] = {ix.p0, ix.p0b, ix.p1, ix.p1b};
    const std::size_t ys[4] = {0, 0, 1, 1};
    std::vector<std::string> missing;
    std::array<double, 4> g{};
    for (int k = 0; k < 4; ++k)
        for (auto &ab : kGroups[k]) {
            auto v = table.find(ab[0], ab[1], xs[k], ys[k]);
            if (!v) {
                missing.push_back("(a=" + std::to_string(ab[0]) + ",b=" + std::to_string(ab[1]) + "|" +
                                  table.alice.labels()[xs[k]] + ",y=" + std::to_string(ys[k]) + ")");
                continue;
            }
            g[k] += *v;
        }
    if (!missing.empty()) {
        std::string s;
        for (auto &m : missing) s += " " + m;
        throw ArgumentError("I_qc needs missing entries:" + s);
    }
    return g;
}

double iqc(const ProbabilityTable &table) {
    auto g = iqc_groups(table);
    return g[0] + g[1] + g[2] + g[3];
}

CertReport qc_analyze(const ProbabilityTable &table, double tol) {
    auto ix = qc_indices(table);
    CertReport r;
    r.scenario = "qc";
    r.tolerance = tol;
    auto g = iqc_groups(table);
    const double I = g[0] + g[1] + g[2] + g[3];
    r.diagnostics["I_qc"] = I;
    for (int k = 0; k < 4; ++k) r.diagnostics["group" + std::to_string(k + 1)] = g[k];
    r.residuals["iqc_shortfall"] = 4 - I;
    const std::size_t xs[4] = {ix.p0, ix.p0b, ix.p1, ix.p1b};
    // Each (a,b,y) belongs to exactly one group; the other input of the same
    // setting must then never produce it.
    for (int k = 0; k < 4; ++k) {
        const std::size_t y = k / 2, other = xs[k ^ 1];
        for (auto &ab : kGroups[k])
            r.residuals["prop a=" + std::to_string(ab[0]) + " b=" + std::to_string(ab[1]) + " y=" + std::to_string(y)] =
                table.at(ab[0], ab[1], other, y);
    }
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const double mu = table.at(a, b, ix.p0, 0) + table.at(a, b, ix.p0b, 0);
            const double nu = table.at(a, b, ix.p1, 1) + table.at(a, b, ix.p1b, 1);
            const std::string s = std::to_string(a) + "," + std::to_string(b);
            r.diagnostics["mu " + s] = mu;
            r.diagnostics["nu " + s] = nu;
            r.residuals["mu " + s] = mu - 0.25;
            r.residuals["nu " + s] = nu - 0.25;
        }
    r.fidelity_estimate = 0;
    r.notes.push_back("fidelity requires the measurement model; table-only analysis");
    r.finalize();
    return r;
}

QcCircuit qc_circuit(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings) {
    const auto &sd = rho.shape().dims();
    if (sd.size() != 2) throw ArgumentError("qc circuit expects a bipartite state");
    if (povm_a.size() != 4 || povm_a.shape().dim(0) != 2 || povm_a.shape().dim(1) != sd[0])
        throw ArgumentError("qc circuit needs a four-outcome measurement on a qubit input and A");
    if (bob_settings.size() != 2 || bob_settings[0].size() != 2 || bob_settings[1].size() != 2)
        throw ArgumentError("qc circuit needs two binary settings for Bob");
    const std::size_t dA = sd[0], dB = sd[1];
    // Registers: A'', A'1, A'2, A, B, B'.
    const std::vector<std::size_t> dims{2, 2, 2, dA, dB, 2};
    const ComplexMatrix &M0 = povm_a.effect(0), &M1 = povm_a.effect(1), &M2 = povm_a.effect(2), &M3 = povm_a.effect(3);
    const ComplexMatrix Mz = M0 + M1 - M2 - M3, Mx = M0 - M1 + M2 - M3;
    const ComplexMatrix B0 = bob_settings[0].effect(0) - bob_settings[0].effect(1);
    const ComplexMatrix B1 = bob_settings[1].effect(0) - bob_settings[1].effect(1);
    ComplexMatrix H(2, 2);
    H << 1, 1, 1, -1;
    H /= std::sqrt(2.0);
    auto controlled = [&](std::size_t ctrl, const ComplexMatrix &U, const std::vector<std::size_t> &targets) {
        std::vector<std::size_t> regs{ctrl};
        regs.insert(regs.end(), targets.begin(), targets.end());
        const auto n = U.rows();
        ComplexMatrix C = ComplexMatrix::Zero(2 * n, 2 * n);
        C.topLeftCorner(n, n).setIdentity();
        C.bottomRightCorner(n, n) = U;
        return embed_operator(C, dims, regs);
    };
    const ComplexMatrix HH = embed_operator(kron(H, H), dims, {0, 5});
    const ComplexMatrix K = controlled(0, Mx, {2, 3}) * controlled(5, B1, {4}) * HH * controlled(0, Mz, {1, 3}) *
                            controlled(5, B0, {4}) * HH;
    ComplexVector zero(2), plus(2);
    zero << 1, 0;
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    ComplexMatrix P0 = zero * zero.adjoint(), Pp = plus * plus.adjoint();
    ComplexMatrix init = kron(kron(kron(kron(P0, P0), Pp), rho.matrix()), P0);
    ComplexMatrix fin = K * init * K.adjoint();
    ComplexMatrix red = partial_trace(fin, dims, {0, 5});
    QcCircuit out;
    out.trace = red.trace().real();
    if (out.trace <= 1e-12) throw NumericalError("qc circuit output has vanishing trace");
    red /= out.trace;
    out.output = DensityMatrix(ComplexMatrix(0.5 * (red + red.adjoint())), SystemShape({2, 2}));
    out.fidelity = pure_fidelity(out.output.op(), maximally_entangled(2).amplitudes());
    return out;
}

double anticommutator_norm(const DensityMatrix &rho, const std::vector<Povm> &bob_settings) {
    if (bob_settings.size() != 2) throw ArgumentError("anticommutator needs two settings");
    const ComplexMatrix B0 = bob_settings[0].effect(0) - bob_settings[0].effect(1);
    const ComplexMatrix B1 = bob_settings[1].effect(0) - bob_settings[1].effect(1);
    ComplexMatrix rhoB = partial_trace(rho.matrix(), rho.shape().dims(), {1});
    return max_abs((B0 * B1 + B1 * B0) * rhoB);
}

CertReport qc_certify(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings, double tol) {
    if (povm_a.shape().dim(0) != 2) throw ArgumentError("quantum-classical certification needs a qubit input register");
    auto table = table_qc(rho, povm_a, bob_settings, named_ensemble("qc", 2));
    auto r = qc_analyze(table, tol);
    r.notes.clear();
    const double ac = anticommutator_norm(rho, bob_settings);
    auto circ = qc_circuit(rho, povm_a, bob_settings);
    r.diagnostics["anticommutator_norm"] = ac;
    r.diagnostics["circuit_trace"] = circ.trace;
    r.residuals["anticommutator"] = ac;
    r.residuals["circuit_fidelity_shortfall"] = 1 - circ.fidelity;
    r.fidelity_estimate = circ.fidelity;
    r.finalize();
    return r;
}

std::vector<InputSlot> default_slots(std::size_t n) {
    std::vector<InputSlot> s(n, InputSlot::first);
    if (n >= 2) s.back() = InputSlot::second;
    return s;
}

CertReport multipartite_certify(const DensityMatrix &rho, const std::vector<PartyMeasurement> &parties,
                                const PureState &reference, double tol) {
    if (parties.size() < 2) throw ArgumentError("multipartite certification needs at least two parties");
    auto eff = effective_multipartite(rho, parties);
    auto r = check_theorem1(eff, reference, tol);
    r.scenario = "multipartite";
    r.diagnostics["parties"] = static_cast<double>(parties.size());
    return r;
}

}  // namespace qcert
