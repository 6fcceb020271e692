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

#include "qcert/qobjects.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "qcert/errors.hpp"

namespace qcert {

namespace {

void require_dim(std::size_t d) {
    if (d < 2) throw ArgumentError("dimension must be at least 2");
}

ComplexVector basis(std::size_t d, std::size_t j) {
    ComplexVector v = ComplexVector::Zero(d);
    v(j) = 1;
    return v;
}

PureState ket(std::initializer_list<cplx> amps) {
    ComplexVector v(amps.size());
    std::size_t i = 0;
    for (auto a : amps) v(i++) = a;
    return PureState(v.normalized());
}

}  // namespace

PureState::PureState(ComplexVector amplitudes, SystemShape shape)
    : psi_(std::move(amplitudes)), shape_(std::move(shape)) {
    if (static_cast<std::size_t>(psi_.size()) != shape_.total())
        throw ArgumentError("state length does not match its shape");
    check_finite(psi_, "state");
    if (std::abs(psi_.norm() - 1.0) > 1e-10) throw ArgumentError("state is not normalized");
}

PureState::PureState(ComplexVector amplitudes)
    : PureState(amplitudes, SystemShape({static_cast<std::size_t>(amplitudes.size())})) {}

LabeledOperator PureState::projector() const {
    return LabeledOperator(psi_ * psi_.adjoint(), shape_, true);
}

DensityMatrix::DensityMatrix(LabeledOperator op) : op_(std::move(op)) {
    const auto &m = op_.matrix();
    if (hermiticity_defect(m) > 1e-9) throw ArgumentError("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0)) > 1e-9) throw ArgumentError("density matrix trace is not 1");
    auto r = psd_check(ComplexMatrix(0.5 * (m + m.adjoint())), 1e-9);
    if (!r.psd) throw ArgumentError("density matrix is not PSD (min eigenvalue " +
                                    std::to_string(r.min_eigenvalue) + ")");
    op_ = LabeledOperator(0.5 * (m + m.adjoint()), op_.shape(), true);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, SystemShape shape)
    : DensityMatrix(LabeledOperator(std::move(m), std::move(shape))) {}

Povm::Povm(std::vector<ComplexMatrix> effects, SystemShape shape, std::vector<std::string> labels)
    : labels_(std::move(labels)), shape_(std::move(shape)) {
    if (effects.empty()) throw ArgumentError("POVM needs at least one effect");
    if (labels_.empty())
        for (std::size_t a = 0; a < effects.size(); ++a) labels_.push_back(std::to_string(a));
    if (labels_.size() != effects.size()) throw ArgumentError("POVM label count mismatch");
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
        throw ArgumentError("POVM outcome labels must be unique");
    const auto n = static_cast<Eigen::Index>(shape_.total());
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t a = 0; a < effects.size(); ++a) {
        auto &e = effects[a];
        if (e.rows() != n || e.cols() != n) throw ArgumentError("POVM effect has wrong dimension");
        if (hermiticity_defect(e) > 1e-9) throw ArgumentError("POVM effect " + labels_[a] + " is not Hermitian");
        ComplexMatrix h = 0.5 * (e + e.adjoint());
        auto r = psd_check(h, 1e-9);
        if (!r.psd) throw ArgumentError("POVM effect " + labels_[a] + " is not PSD");
        sum += h;
        effects_.emplace_back(std::move(h), shape_, true);
    }
    double defect = max_abs(sum - ComplexMatrix::Identity(n, n));
    if (defect > 1e-9) throw ArgumentError("POVM effects do not sum to identity (defect " +
                                           std::to_string(defect) + ")");
}

bool Povm::is_projective(double tol) const {
    for (auto &e : effects_)
        if (max_abs(e.matrix() * e.matrix() - e.matrix()) > tol) return false;
    return true;
}

InputEnsemble::InputEnsemble(std::vector<PureState> states, std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
    if (states_.empty()) throw PreconditionError("input ensemble is empty");
    for (auto &s : states_)
        if (s.dim() != states_.front().dim()) throw ArgumentError("ensemble states differ in dimension");
    if (labels_.empty())
        for (std::size_t x = 0; x < states_.size(); ++x) labels_.push_back("x" + std::to_string(x));
    if (labels_.size() != states_.size()) throw ArgumentError("ensemble label count mismatch");
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
        throw ArgumentError("ensemble labels must be unique");
}

std::size_t InputEnsemble::index_of(const std::string &label) const {
    for (std::size_t x = 0; x < labels_.size(); ++x)
        if (labels_[x] == label) return x;
    throw ArgumentError("ensemble has no state labelled '" + label + "'");
}

WeylPair weyl_operators(std::size_t d) {
    require_dim(d);
    const cplx omega = std::polar(1.0, 2 * std::numbers::pi / static_cast<double>(d));
    ComplexMatrix X = ComplexMatrix::Zero(d, d), Z = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        X((j + 1) % d, j) = 1;
        Z(j, j) = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
    }
    return {LabeledOperator(X), LabeledOperator(Z), omega};
}

ComplexMatrix weyl(std::size_t k, std::size_t l, std::size_t d) {
    require_dim(d);
    // X^k Z^l |j> = omega^{jl} |j + k>
    ComplexMatrix U = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j)
        U((j + k) % d, j) = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((j * l) % d) /
                                                static_cast<double>(d));
    return U;
}

PureState maximally_entangled(std::size_t d) {
    require_dim(d);
    ComplexVector v = ComplexVector::Zero(d * d);
    for (std::size_t j = 0; j < d; ++j) v(j * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
    return PureState(v, SystemShape({d, d}));
}

std::vector<PureState> bell_basis(std::size_t d) {
    auto phi = maximally_entangled(d);
    std::vector<PureState> out;
    const ComplexMatrix I = ComplexMatrix::Identity(d, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
            out.emplace_back(kron(weyl(k, l, d), I) * phi.amplitudes(), phi.shape());
    return out;
}

LabeledOperator correcting_unitary(std::size_t m, std::size_t d) {
    require_dim(d);
    if (m >= d * d) throw ArgumentError("Bell outcome index out of range");
    return LabeledOperator(weyl(m / d, m % d, d));
}

ComplexMatrix extraction_unitary(std::size_t m, std::size_t d, InputSlot slot) {
    ComplexMatrix U = correcting_unitary(m, d).matrix();
    if (slot == InputSlot::first) return U.transpose();
    return U;
}

Povm bsm(std::size_t d) { return noisy_bsm(d, 1.0); }

Povm noisy_bsm(std::size_t d, double eta) {
    if (!(eta >= 0 && eta <= 1)) throw ArgumentError("visibility must lie in [0,1]");
    std::vector<ComplexMatrix> eff;
    const auto n = d * d;
    const ComplexMatrix noise = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    for (auto &b : bell_basis(d)) {
        ComplexMatrix P = b.amplitudes() * b.amplitudes().adjoint();
        eff.push_back(eta == 1.0 ? P : ComplexMatrix(eta * P + (1 - eta) * noise));
    }
    return Povm(std::move(eff), SystemShape({d, d}));
}

InputEnsemble standard_complete_set(std::size_t d) {
    require_dim(d);
    std::vector<PureState> s;
    std::vector<std::string> labels;
    const double r = 1 / std::sqrt(2.0);
    for (std::size_t j = 0; j < d; ++j) {
        s.emplace_back(basis(d, j));
        labels.push_back("e" + std::to_string(j));
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            s.emplace_back(ComplexVector(r * (basis(d, j) + basis(d, k))));
            labels.push_back("p" + std::to_string(j) + std::to_string(k));
        }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            s.emplace_back(ComplexVector(r * (basis(d, j) + cplx(0, 1) * basis(d, k))));
            labels.push_back("i" + std::to_string(j) + std::to_string(k));
        }
    return InputEnsemble(std::move(s), std::move(labels));
}

CompletenessReport is_tomographically_complete(const InputEnsemble &e) {
    const auto d = e.d();
    ComplexMatrix rows(e.size(), d * d);
    for (std::size_t x = 0; x < e.size(); ++x) {
        ComplexMatrix P = e.state(x).projector().matrix();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) rows(x, i * d + j) = P(i, j);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(rows);
    const auto &sv = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0)) ++rank;
    return {rank == d * d, rank, d * d};
}

InputEnsemble named_ensemble(const std::string &name, std::size_t d) {
    const double r = 1 / std::sqrt(2.0);
    const cplx i(0, 1);
    if (name == "standard") return standard_complete_set(d);
    if (name == "pauli6") {
        if (d != 2) throw ArgumentError("pauli6 ensemble is qubit only");
        return InputEnsemble({ket({1, 0}), ket({0, 1}), ket({r, r}), ket({r, -r}), ket({r, i * r}),
                              ket({r, -i * r})},
                             {"z+", "z-", "x+", "x-", "y+", "y-"});
    }
    if (name == "qc") {
        if (d != 2) throw ArgumentError("qc ensemble is qubit only");
        return InputEnsemble({ket({1, 0}), ket({0, 1}), ket({r, r}), ket({r, -r})},
                             {"psi0", "psi0bar", "psi1", "psi1bar"});
    }
    if (name == "chsh") {
        if (d != 2) throw ArgumentError("chsh ensemble is qubit only");
        return InputEnsemble({ket({1, 0}), ket({r, r})}, {"psi0", "psi1"});
    }
    if (name == "case1" || name == "case2") {
        if (d != 3) throw ArgumentError(name + " ensemble is qutrit only");
        const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
        std::vector<PureState> s{ket({1, 0, 0}), ket({0, 1, 0}), ket({1, 1, 1}),
                                 ket({1, w, std::conj(w)})};
        std::vector<std::string> l{"k0", "k1", "f0", "f1"};
        if (name == "case2") {
            s.push_back(ket({1, 1, w}));
            s.push_back(ket({w, 1, 1}));
            l.push_back("g0");
            l.push_back("g1");
        }
        return InputEnsemble(std::move(s), std::move(l));
    }
    throw ArgumentError("unknown ensemble '" + name + "'");
}

DensityMatrix isotropic_state(std::size_t d, double p) {
    if (!(p >= 0 && p <= 1)) throw ArgumentError("isotropic weight must lie in [0,1]");
    auto phi = maximally_entangled(d);
    const auto n = d * d;
    ComplexMatrix m = p * phi.projector().matrix() +
                      (1 - p) * ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    return DensityMatrix(m, SystemShape({d, d}));
}

PureState ghz_state(std::size_t n, std::size_t d) {
    require_dim(d);
    if (n < 1) throw ArgumentError("GHZ state needs at least one party");
    std::vector<std::size_t> dims(n, d);
    SystemShape shape(dims);
    ComplexVector v = ComplexVector::Zero(shape.total());
    std::size_t step = 0;
    for (std::size_t k = 0; k < n; ++k) step = step * d + 1;
    for (std::size_t j = 0; j < d; ++j) v(j * step) = 1 / std::sqrt(static_cast<double>(d));
    return PureState(v, shape);
}

Povm observable_povm(const ComplexMatrix &observable, double visibility) {
    if (!(visibility >= 0 && visibility <= 1)) throw ArgumentError("visibility must lie in [0,1]");
    const auto n = observable.rows();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    ComplexMatrix Pp = 0.5 * (I + observable), Pm = 0.5 * (I - observable);
    if (max_abs(Pp * Pp - Pp) > 1e-9) throw ArgumentError("observable does not square to identity");
    return Povm({visibility * Pp + (1 - visibility) * I / 2.0, visibility * Pm + (1 - visibility) * I / 2.0},
                SystemShape({static_cast<std::size_t>(n)}));
}

std::vector<Povm> qc_bob_settings(double visibility) {
    ComplexMatrix Z(2, 2), X(2, 2);
    Z << 1, 0, 0, -1;
    X << 0, 1, 1, 0;
    return {observable_povm(Z, visibility), observable_povm(X, visibility)};
}

PureEquivalent pure_equivalent(const DensityMatrix &rho, const Povm &bob_povm) {
    const auto &sh = rho.shape();
    if (sh.size() != 2) throw ArgumentError("pure_equivalent expects a bipartite state");
    const std::size_t dA = sh.dim(0), dB = sh.dim(1);
    if (dA > dB) throw ArgumentError("pure_equivalent requires d_A <= d_B; swap the parties");
    if (bob_povm.shape().size() != 2 || bob_povm.shape().dim(0) != dB)
        throw ArgumentError("Bob's POVM must act on B (x) B'");
    const std::size_t dBp = bob_povm.shape().dim(1);

    // Purification |psi> = sum_k sqrt(q_k) |e_k>_{AB} |k>_P over the support of rho.
    auto eig = hermitian_eigen(rho.matrix());
    std::vector<Eigen::Index> support;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        if (eig.values(k) > 1e-14) support.push_back(k);
    const std::size_t r = support.size();
    // Amplitude matrix over A x (B P).
    ComplexMatrix amp = ComplexMatrix::Zero(dA, dB * r);
    for (std::size_t k = 0; k < r; ++k) {
        const double w = std::sqrt(eig.values(support[k]));
        for (std::size_t a = 0; a < dA; ++a)
            for (std::size_t b = 0; b < dB; ++b)
                amp(a, b * r + k) += w * eig.vectors(a * dB + b, support[k]);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    std::size_t schmidt = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-12) ++schmidt;

    ComplexVector phi = ComplexVector::Zero(dA * dB);
    ComplexMatrix V = ComplexMatrix::Zero(dB, dB * r);  // BP -> B
    for (std::size_t i = 0; i < schmidt; ++i) {
        for (std::size_t a = 0; a < dA; ++a) phi(a * dB + i) += sv(i) * svd.matrixU()(a, i);
        V.row(i) = svd.matrixV().col(i).transpose();  // <b_i| with |b_i> = conj(v_i)
    }
    phi.normalize();

    // M_b (x) 1_P reordered to (B, P, B'), then compressed by V (x) 1_B'.
    const ComplexMatrix VV = kron(V, ComplexMatrix::Identity(dBp, dBp));
    const ComplexMatrix Ipr = ComplexMatrix::Identity(r, r);
    const ComplexMatrix comp =
        kron(ComplexMatrix(ComplexMatrix::Identity(dB, dB) - V * V.adjoint()),
             ComplexMatrix::Identity(dBp, dBp));
    std::vector<ComplexMatrix> eff;
    for (std::size_t b = 0; b < bob_povm.size(); ++b) {
        ComplexMatrix big = permute_subsystems(kron(bob_povm.effect(b), Ipr), {dB, dBp, r}, {0, 2, 1});
        ComplexMatrix m = VV * big * VV.adjoint();
        if (b == 0) m += comp;
        eff.push_back(m);
    }
    return {PureState(phi, sh), Povm(std::move(eff), bob_povm.shape(), bob_povm.labels())};
}

NaimarkDilation naimark_dilate(const Povm &p) {
    const auto n = static_cast<Eigen::Index>(p.dim());
    if (p.is_projective()) return {p, ComplexMatrix::Identity(n, n)};
    std::vector<ComplexMatrix> rows;
    std::vector<std::size_t> ranks;
    for (std::size_t a = 0; a < p.size(); ++a) {
        auto e = hermitian_eigen(p.effect(a));
        std::size_t rk = 0;
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            if (e.values(i) <= 1e-12) continue;
            rows.push_back(std::sqrt(e.values(i)) * e.vectors.col(i).adjoint());
            ++rk;
        }
        ranks.push_back(rk);
    }
    const auto N = static_cast<Eigen::Index>(rows.size());
    ComplexMatrix V(N, n);
    for (Eigen::Index i = 0; i < N; ++i) V.row(i) = rows[i];
    std::vector<ComplexMatrix> proj;
    Eigen::Index off = 0;
    for (auto rk : ranks) {
        ComplexMatrix P = ComplexMatrix::Zero(N, N);
        for (std::size_t i = 0; i < rk; ++i) P(off + i, off + i) = 1;
        off += static_cast<Eigen::Index>(rk);
        proj.push_back(P);
    }
    return {Povm(std::move(proj), SystemShape({static_cast<std::size_t>(N)}), p.labels()), V};
}

}  // namespace qcert
