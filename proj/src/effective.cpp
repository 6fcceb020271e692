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

#include "qcert/effective.hpp"

#include <cmath>
#include <random>

#include "qcert/errors.hpp"

namespace qcert {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::joint: return "joint";
        case Scenario::qc: return "qc";
        case Scenario::teleport: return "teleport";
        case Scenario::multipartite: return "multipartite";
    }
    return "?";
}

const ComplexMatrix &EffectiveSet::at(const OutcomeKey &k) const {
    auto it = entries.find(k);
    if (it == entries.end()) {
        std::string s;
        for (auto v : k) s += (s.empty() ? "" : ",") + std::to_string(v);
        throw ArgumentError("effective set has no entry (" + s + ")");
    }
    return it->second.matrix();
}

void EffectiveSet::refresh_positivity(double tol) {
    psd = true;
    min_eigenvalue = INFINITY;
    for (auto &[k, op] : entries) {
        auto r = psd_check(ComplexMatrix(0.5 * (op.matrix() + op.matrix().adjoint())), tol);
        min_eigenvalue = std::min(min_eigenvalue, r.min_eigenvalue);
        psd = psd && r.psd;
    }
}

namespace {

ComplexMatrix eye(std::size_t n) { return ComplexMatrix::Identity(n, n); }

std::size_t prod(const std::vector<std::size_t> &d, std::size_t lo, std::size_t hi) {
    std::size_t p = 1;
    for (std::size_t k = lo; k < hi; ++k) p *= d[k];
    return p;
}

// Tr_sys[(M (x) 1)(1_prime (x) T)] where T lives on `dims` and the party's
// untrusted register is dims[pos]. M acts on (prime, sys), (sys, prime) or
// on sys alone when dprime == 0. The prime register takes the place of sys.
ComplexMatrix absorb(const ComplexMatrix &T, const std::vector<std::size_t> &dims, std::size_t pos,
                     const ComplexMatrix &M, InputSlot slot, std::size_t dprime) {
    const std::size_t left = prod(dims, 0, pos), right = prod(dims, pos + 1, dims.size());
    const std::size_t ds = dims[pos];
    if (dprime == 0) {
        ComplexMatrix big = kron(kron(eye(left), M), eye(right)) * T;
        return partial_trace(big, {left, ds, right}, {0, 2});
    }
    const std::size_t in_first = slot == InputSlot::first;
    // Lift T with an identity on the prime register next to sys.
    ComplexMatrix lifted = in_first ? permute_subsystems(kron(eye(dprime), T), {dprime, left, ds, right}, {1, 0, 2, 3})
                                    : permute_subsystems(kron(eye(dprime), T), {dprime, left, ds, right}, {1, 2, 0, 3});
    ComplexMatrix big = kron(kron(eye(left), M), eye(right)) * lifted;
    if (in_first) return partial_trace(big, {left, dprime, ds, right}, {0, 1, 3});
    return partial_trace(big, {left, ds, dprime, right}, {0, 2, 3});
}

void check_party(const Povm &p, std::size_t dsys, InputSlot slot, const char *who) {
    if (p.shape().size() != 2) throw ArgumentError(std::string(who) + " POVM must act on two registers");
    const std::size_t s = slot == InputSlot::first ? 1 : 0;
    if (p.shape().dim(s) != dsys)
        throw ArgumentError(std::string(who) + " POVM does not match the state's register dimension");
}

LabeledOperator herm(ComplexMatrix m, const std::vector<std::size_t> &dims) {
    return LabeledOperator(0.5 * (m + m.adjoint()), SystemShape(dims), true);
}

}  // namespace

EffectiveSet effective_joint(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b) {
    if (rho.shape().size() != 2) throw ArgumentError("effective_joint expects a bipartite state");
    return effective_multipartite(rho, {{povm_a, InputSlot::first}, {povm_b, InputSlot::second}});
}

EffectiveSet effective_multipartite(const DensityMatrix &rho, const std::vector<PartyMeasurement> &parties) {
    const auto &sd = rho.shape().dims();
    if (sd.size() != parties.size()) throw ArgumentError("one measurement per party required");
    if (parties.size() < 1) throw ArgumentError("no parties");
    EffectiveSet out;
    out.scenario = parties.size() == 2 ? Scenario::joint : Scenario::multipartite;
    for (std::size_t i = 0; i < parties.size(); ++i) {
        check_party(parties[i].povm, sd[i], parties[i].slot, "party");
        const std::size_t ps = parties[i].slot == InputSlot::first ? 0 : 1;
        out.dims.push_back(parties[i].povm.shape().dim(ps));
        out.slots.push_back(parties[i].slot);
        out.outcome_counts.push_back(parties[i].povm.size());
    }
    SystemShape(out.dims).total();  // cap check
    // Breadth-first over parties; each stage replaces one register.
    std::vector<std::pair<OutcomeKey, ComplexMatrix>> stage{{{}, rho.matrix()}};
    std::vector<std::size_t> dims = sd;
    for (std::size_t i = 0; i < parties.size(); ++i) {
        std::vector<std::pair<OutcomeKey, ComplexMatrix>> next;
        for (auto &[key, T] : stage)
            for (std::size_t a = 0; a < parties[i].povm.size(); ++a) {
                OutcomeKey k = key;
                k.push_back(a);
                next.emplace_back(std::move(k), absorb(T, dims, i, parties[i].povm.effect(a), parties[i].slot,
                                                       out.dims[i]));
            }
        dims[i] = out.dims[i];
        stage.swap(next);
    }
    for (auto &[k, m] : stage) out.entries.emplace(k, herm(m, out.dims));
    out.refresh_positivity();
    return out;
}

EffectiveSet effective_qc(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings) {
    const auto &sd = rho.shape().dims();
    if (sd.size() != 2) throw ArgumentError("effective_qc expects a bipartite state");
    check_party(povm_a, sd[0], InputSlot::first, "Alice's");
    if (bob_settings.empty()) throw ArgumentError("Bob needs at least one setting");
    EffectiveSet out;
    out.scenario = Scenario::qc;
    const std::size_t dp = povm_a.shape().dim(0);
    out.dims = {dp};
    out.slots = {InputSlot::first};
    out.outcome_counts = {povm_a.size(), bob_settings.front().size(), bob_settings.size()};
    for (auto &s : bob_settings) {
        if (s.dim() != sd[1]) throw ArgumentError("Bob's setting does not act on B");
        if (s.size() != bob_settings.front().size()) throw ArgumentError("Bob's settings differ in outcome count");
    }
    for (std::size_t a = 0; a < povm_a.size(); ++a) {
        ComplexMatrix Ta = absorb(rho.matrix(), sd, 0, povm_a.effect(a), InputSlot::first, dp);
        for (std::size_t y = 0; y < bob_settings.size(); ++y)
            for (std::size_t b = 0; b < bob_settings[y].size(); ++b)
                out.entries.emplace(OutcomeKey{a, b, y},
                                    herm(absorb(Ta, {dp, sd[1]}, 1, bob_settings[y].effect(b), InputSlot::first, 0),
                                         out.dims));
    }
    out.refresh_positivity();
    return out;
}

EffectiveSet effective_teleport(const DensityMatrix &rho, const Povm &povm_a) {
    const auto &sd = rho.shape().dims();
    if (sd.size() != 2) throw ArgumentError("effective_teleport expects a bipartite state");
    check_party(povm_a, sd[0], InputSlot::first, "Alice's");
    EffectiveSet out;
    out.scenario = Scenario::teleport;
    const std::size_t dp = povm_a.shape().dim(0);
    out.dims = {dp, sd[1]};
    out.slots = {InputSlot::first};
    out.outcome_counts = {povm_a.size()};
    for (std::size_t a = 0; a < povm_a.size(); ++a)
        out.entries.emplace(OutcomeKey{a}, herm(absorb(rho.matrix(), sd, 0, povm_a.effect(a), InputSlot::first, dp),
                                                out.dims));
    out.refresh_positivity();
    return out;
}

std::optional<double> ProbabilityTable::find(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    if (index_.size() != entries.size()) const_cast<ProbabilityTable *>(this)->reindex();
    auto it = index_.find({a, b, x, y});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double ProbabilityTable::at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    auto v = find(a, b, x, y);
    if (!v)
        throw ArgumentError("probability table lacks entry a=" + std::to_string(a) + " b=" + std::to_string(b) +
                            " x=" + std::to_string(x) + " y=" + std::to_string(y));
    return *v;
}

void ProbabilityTable::reindex() {
    index_.clear();
    for (auto &e : entries) {
        if (!index_.emplace(std::array<std::size_t, 4>{e.a, e.b, e.x, e.y}, e.p).second)
            throw DataError("duplicate probability entry a=" + std::to_string(e.a) + " b=" + std::to_string(e.b) +
                            " x=" + std::to_string(e.x) + " y=" + std::to_string(e.y));
    }
}

ProbabilityTable table_joint(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b,
                             const InputEnsemble &ens_a, const InputEnsemble &ens_b) {
    auto eff = effective_joint(rho, povm_a, povm_b);
    ProbabilityTable t;
    t.scenario = Scenario::joint;
    t.d = ens_a.d();
    t.n_a = povm_a.size();
    t.n_b = povm_b.size();
    t.alice = ens_a;
    t.bob = ens_b;
    if (ens_a.d() != eff.dims[0] || ens_b.d() != eff.dims[1])
        throw ArgumentError("ensemble dimension does not match the input registers");
    for (std::size_t x = 0; x < ens_a.size(); ++x)
        for (std::size_t y = 0; y < ens_b.size(); ++y) {
            ComplexVector in = kron(ComplexMatrix(ens_a.state(x).amplitudes()), ComplexMatrix(ens_b.state(y).amplitudes()));
            for (std::size_t a = 0; a < t.n_a; ++a)
                for (std::size_t b = 0; b < t.n_b; ++b)
                    t.entries.push_back({a, b, x, y, in.dot(eff.at({a, b}) * in).real()});
        }
    t.reindex();
    return t;
}

ProbabilityTable table_qc(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings,
                          const InputEnsemble &ens_a) {
    auto eff = effective_qc(rho, povm_a, bob_settings);
    ProbabilityTable t;
    t.scenario = Scenario::qc;
    t.d = ens_a.d();
    t.n_a = povm_a.size();
    t.n_b = bob_settings.front().size();
    t.n_settings = bob_settings.size();
    t.alice = ens_a;
    if (ens_a.d() != eff.dims[0]) throw ArgumentError("ensemble dimension does not match Alice's input register");
    for (std::size_t x = 0; x < ens_a.size(); ++x) {
        const auto &in = ens_a.state(x).amplitudes();
        for (std::size_t y = 0; y < t.n_settings; ++y)
            for (std::size_t a = 0; a < t.n_a; ++a)
                for (std::size_t b = 0; b < t.n_b; ++b)
                    t.entries.push_back({a, b, x, y, in.dot(eff.at({a, b, y}) * in).real()});
    }
    t.reindex();
    return t;
}

ProbabilityTable sample_table(const ProbabilityTable &t, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw ArgumentError("shot count must be positive");
    std::mt19937_64 rng(seed);
    ProbabilityTable out = t;
    for (std::size_t x = 0; x < t.n_x(); ++x)
        for (std::size_t y = 0; y < t.n_y(); ++y) {
            std::vector<std::size_t> idx;
            std::vector<double> w;
            for (std::size_t i = 0; i < t.entries.size(); ++i)
                if (t.entries[i].x == x && t.entries[i].y == y) {
                    idx.push_back(i);
                    w.push_back(std::max(0.0, t.entries[i].p));
                }
            if (idx.empty()) continue;
            std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
            std::vector<std::uint64_t> counts(idx.size(), 0);
            for (std::uint64_t s = 0; s < shots; ++s) ++counts[dist(rng)];
            for (std::size_t k = 0; k < idx.size(); ++k)
                out.entries[idx[k]].p = static_cast<double>(counts[k]) / static_cast<double>(shots);
        }
    out.reindex();
    return out;
}

LinearInversion make_inversion(const std::vector<ComplexMatrix> &projectors) {
    if (projectors.empty()) throw PreconditionError("no input states");
    const auto n = static_cast<std::size_t>(projectors.front().rows());
    ComplexMatrix G(projectors.size(), n * n);
    for (std::size_t r = 0; r < projectors.size(); ++r)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) G(r, i * n + j) = projectors[r](j, i);
    Eigen::JacobiSVD<ComplexMatrix> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    LinearInversion inv;
    inv.n = n;
    const double cut = 1e-10 * sv(0);
    RealVector sinv = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) {
            sinv(i) = 1 / sv(i);
            ++inv.rank;
        }
    inv.condition_number = inv.rank ? sv(0) / sv(static_cast<Eigen::Index>(inv.rank) - 1) : INFINITY;
    inv.pinv = svd.matrixV() * sinv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
    return inv;
}

ComplexMatrix apply_inversion(const LinearInversion &inv, const RealVector &data) {
    ComplexVector m = inv.pinv * data.cast<cplx>();
    const auto n = static_cast<Eigen::Index>(inv.n);
    ComplexMatrix M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = m(i * n + j);
    return 0.5 * (M + M.adjoint());
}

namespace {
void require_complete(const InputEnsemble &e, const char *who) {
    auto r = is_tomographically_complete(e);
    if (!r.complete)
        throw PreconditionError(std::string(who) + " ensemble is not tomographically complete: rank " +
                                std::to_string(r.rank) + " < " + std::to_string(r.required) + " (deficit " +
                                std::to_string(r.required - r.rank) + ")");
}
}  // namespace

Reconstruction reconstruct(const ProbabilityTable &table) {
    Reconstruction out;
    auto &set = out.set;
    std::vector<ComplexMatrix> proj;
    std::vector<std::pair<std::size_t, std::size_t>> rows;
    require_complete(table.alice, "Alice's");
    if (table.scenario == Scenario::joint) {
        if (!table.bob) throw ArgumentError("joint table needs Bob's ensemble");
        require_complete(*table.bob, "Bob's");
        for (std::size_t x = 0; x < table.n_x(); ++x)
            for (std::size_t y = 0; y < table.n_y(); ++y) {
                proj.push_back(kron(table.alice.state(x).projector().matrix(), table.bob->state(y).projector().matrix()));
                rows.emplace_back(x, y);
            }
        set.scenario = Scenario::joint;
        set.dims = {table.alice.d(), table.bob->d()};
        set.slots = {InputSlot::first, InputSlot::second};
        set.outcome_counts = {table.n_a, table.n_b};
    } else if (table.scenario == Scenario::qc) {
        for (std::size_t x = 0; x < table.n_x(); ++x) proj.push_back(table.alice.state(x).projector().matrix());
        set.scenario = Scenario::qc;
        set.dims = {table.alice.d()};
        set.slots = {InputSlot::first};
        set.outcome_counts = {table.n_a, table.n_b, table.n_settings};
    } else {
        throw ArgumentError("reconstruct supports joint and qc tables");
    }
    auto inv = make_inversion(proj);
    out.condition_number = inv.condition_number;
    out.rank = inv.rank;
    out.unknowns = inv.n * inv.n;
    double res2 = 0;
    auto solve_one = [&](const RealVector &p, OutcomeKey key) {
        ComplexMatrix M = apply_inversion(inv, p);
        for (std::size_t r = 0; r < proj.size(); ++r) {
            double e = (proj[r] * M).trace().real() - p(static_cast<Eigen::Index>(r));
            res2 += e * e;
        }
        set.entries.emplace(std::move(key), LabeledOperator(M, SystemShape(set.dims), true));
    };
    if (table.scenario == Scenario::joint) {
        for (std::size_t a = 0; a < table.n_a; ++a)
            for (std::size_t b = 0; b < table.n_b; ++b) {
                RealVector p(rows.size());
                for (std::size_t r = 0; r < rows.size(); ++r) p(r) = table.at(a, b, rows[r].first, rows[r].second);
                solve_one(p, {a, b});
            }
    } else {
        for (std::size_t a = 0; a < table.n_a; ++a)
            for (std::size_t b = 0; b < table.n_b; ++b)
                for (std::size_t y = 0; y < table.n_settings; ++y) {
                    RealVector p(table.n_x());
                    for (std::size_t x = 0; x < table.n_x(); ++x) p(x) = table.at(a, b, x, y);
                    solve_one(p, {a, b, y});
                }
    }
    out.residual_norm = std::sqrt(res2);
    set.refresh_positivity();
    return out;
}

}  // namespace qcert
