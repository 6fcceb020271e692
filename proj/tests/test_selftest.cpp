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

#include <numbers>

#include "gtest/gtest.h"
#include "qcert/errors.hpp"
#include "testing.hpp"

using namespace qcert;
using namespace qcert::testing;

namespace {

DensityMatrix phi_plus(std::size_t d) { return DensityMatrix(maximally_entangled(d).projector()); }

}  // namespace

TEST(bsm_conditions, ideal_passes) {
    for (std::size_t d : {2, 3}) {
        auto e = standard_complete_set(d);
        auto rec = reconstruct(table_joint(phi_plus(d), bsm(d), bsm(d), e, e));
        const double tol = d == 2 ? 1e-9 : 1e-8;
        auto r = check_theorem1(rec.set, maximally_entangled(d), tol);
        EXPECT_TRUE(r.pass) << d << " " << r.max_residual();
        EXPECT_NEAR(r.fidelity_estimate, 1, 1e-9);
        EXPECT_EQ(r.residuals.size(), d * d * d * d);
    }
}

TEST(bsm_conditions, noisy_fails) {
    auto nb = noisy_bsm(2, 0.95);
    auto r = check_theorem1(effective_joint(phi_plus(2), nb, nb), maximally_entangled(2), 1e-6);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.max_residual(), 1e-3);
}

TEST(bsm_conditions, missing_entries) {
    auto eff = effective_joint(phi_plus(2), bsm(2), bsm(2));
    eff.entries.erase(eff.entries.begin());
    EXPECT_THROW(check_theorem1(eff, maximally_entangled(2)), ArgumentError);
}

TEST(bsm_conditions, invariant_under_pure_equivalent) {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 5; ++t) {
        auto rho = random_density({2, 2}, rng);
        auto pa = random_povm({2, 2}, rng, 0.1), pb = random_povm({2, 2}, rng, 0.2);
        auto pe = pure_equivalent(rho, pb);
        auto r1 = check_theorem1(effective_joint(rho, pa, pb), maximally_entangled(2));
        auto r2 = check_theorem1(effective_joint(DensityMatrix(pe.state.projector()), pa, pe.bob), maximally_entangled(2));
        for (auto &[k, v] : r1.residuals) EXPECT_NEAR(v, r2.residuals.at(k), 1e-10) << k;
        EXPECT_NEAR(r1.fidelity_estimate, r2.fidelity_estimate, 1e-10);
    }
}

TEST(swap_output, examples) {
    auto ideal = swap_output(effective_joint(phi_plus(2), bsm(2), bsm(2)), 2);
    EXPECT_LE(max_diff(ideal.matrix(), maximally_entangled(2).projector().matrix()), 1e-10);
    const double eta = 0.95;
    auto nb = noisy_bsm(2, eta);
    auto noisy = swap_output(effective_joint(phi_plus(2), nb, nb), 2);
    ComplexMatrix expect = eta * eta * maximally_entangled(2).projector().matrix() +
                           (1 - eta * eta) * ComplexMatrix::Identity(4, 4) / 4.0;
    EXPECT_LE(max_diff(noisy.matrix(), expect), 1e-12);
    EXPECT_NEAR(pure_fidelity(noisy.op(), maximally_entangled(2).amplitudes()), eta * eta + (1 - eta * eta) / 4, 1e-12);
    DensityMatrix mixed(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0), SystemShape({2, 2}));
    EXPECT_LE(max_diff(swap_output(effective_joint(mixed, bsm(2), bsm(2)), 2).matrix(),
                       ComplexMatrix::Identity(4, 4) / 4.0),
              1e-12);
}

TEST(swap_output, unit_trace) {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 2 + t % 2;
        auto out = swap_output(effective_joint(random_density({d, d}, rng), random_povm({d, d}, rng, 0.3),
                                               random_povm({d, d}, rng)),
                               d);
        EXPECT_NEAR(out.matrix().trace().real(), 1, 1e-9);
        EXPECT_LE(hermiticity_defect(out.matrix()), 1e-12);
    }
}

TEST(circuit_output, ideal_and_local_projective) {
    auto c = circuit_output(phi_plus(2), bsm(2), bsm(2));
    EXPECT_LE(max_diff(c.matrix(), maximally_entangled(2).projector().matrix()), 1e-10);
    // sigma_z (x) sigma_z eigenprojectors as a four-outcome joint measurement.
    std::vector<ComplexMatrix> zz;
    for (int k = 0; k < 4; ++k) {
        ComplexMatrix P = ComplexMatrix::Zero(4, 4);
        P(k, k) = 1;
        zz.push_back(P);
    }
    Povm local(zz, SystemShape({2, 2}));
    std::mt19937_64 rng(107);
    auto rho = random_density({2, 2}, rng);
    auto co = circuit_output(rho, local, local);
    auto so = swap_output(effective_joint(rho, local, local), 2);
    EXPECT_LE(max_diff(co.matrix(), so.matrix()), 1e-10);
}

TEST(circuit_output, matches_swap_output_projective) {
    std::mt19937_64 rng(109);
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 2 + t % 2;
        auto rho = random_density({d, d}, rng);
        auto pa = random_povm({d, d}, rng), pb = random_povm({d, d}, rng);
        auto co = circuit_output(rho, pa, pb);
        auto so = swap_output(effective_joint(rho, pa, pb), d);
        EXPECT_LE(max_diff(co.matrix(), so.matrix()), 1e-10) << t;
        auto cn = circuit_output(rho, pa, pb, CircuitMode::naimark);
        EXPECT_LE(max_diff(cn.matrix(), co.matrix()), 1e-10) << t;
    }
}

TEST(circuit_output, brute_force_contraction) {
    const double eta = 0.95;
    auto nb = noisy_bsm(2, eta);
    auto kraus = circuit_output(phi_plus(2), nb, nb, CircuitMode::kraus);
    auto oracle = brute_force_isometry(phi_plus(2), nb, nb);
    EXPECT_LE(max_diff(kraus.matrix(), oracle), 1e-9);
    const double fk = pure_fidelity(kraus.op(), maximally_entangled(2).amplitudes());
    const double fe = pure_fidelity(swap_output(effective_joint(phi_plus(2), nb, nb), 2).op(),
                                    maximally_entangled(2).amplitudes());
    EXPECT_NEAR(fe, eta * eta + (1 - eta * eta) / 4, 1e-9);
    // Both estimators coincide here and differ from the quoted 0.893.
    EXPECT_NEAR(fk, fe, 1e-9);
    EXPECT_GT(std::abs(fk - 0.893), 0.01);

    std::mt19937_64 rng(113);
    for (int t = 0; t < 5; ++t) {
        auto rho = random_density({2, 2}, rng);
        auto pa = random_povm({2, 2}, rng, 0.25), pb = random_povm({2, 2}, rng, t % 2 ? 0.1 : 0.0);
        EXPECT_LE(max_diff(circuit_output(rho, pa, pb).matrix(), brute_force_isometry(rho, pa, pb)), 1e-9) << t;
    }
}

TEST(circuit_output, shape_errors) {
    EXPECT_THROW(circuit_output(phi_plus(2), bsm(3), bsm(2)), ArgumentError);
}

namespace {

ProbabilityTable qc_table(const DensityMatrix &rho, double v = 1.0) {
    return table_qc(rho, bsm(2), qc_bob_settings(v), named_ensemble("qc", 2));
}

// Direct Born-rule evaluation of the four groups.
double iqc_oracle(const DensityMatrix &rho) {
    auto ens = named_ensemble("qc", 2);
    auto bob = qc_bob_settings();
    auto p = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
        return born_qc(rho, bsm(2).effect(a), bob[y].effect(b), ens.state(x).amplitudes());
    };
    return p(0, 0, 0, 0) + p(1, 0, 0, 0) + p(2, 1, 0, 0) + p(3, 1, 0, 0) + p(0, 1, 1, 0) + p(1, 1, 1, 0) +
           p(2, 0, 1, 0) + p(3, 0, 1, 0) + p(0, 0, 2, 1) + p(2, 0, 2, 1) + p(1, 1, 2, 1) + p(3, 1, 2, 1) +
           p(0, 1, 3, 1) + p(2, 1, 3, 1) + p(1, 0, 3, 1) + p(3, 0, 3, 1);
}

}  // namespace

TEST(iqc, examples) {
    EXPECT_NEAR(iqc(qc_table(phi_plus(2))), 4, 1e-12);
    DensityMatrix mixed(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0), SystemShape({2, 2}));
    EXPECT_NEAR(iqc(qc_table(mixed)), 2, 1e-12);
    ComplexMatrix p00 = ComplexMatrix::Zero(4, 4);
    p00(0, 0) = 1;
    DensityMatrix prod(p00, SystemShape({2, 2}));
    const double v = iqc(qc_table(prod));
    EXPECT_NEAR(v, iqc_oracle(prod), 1e-12);
    EXPECT_LT(v, 4 - 1e-3);
}

TEST(iqc, group_sums_ideal) {
    auto g = iqc_groups(qc_table(phi_plus(2)));
    for (double s : g) EXPECT_NEAR(s, 1, 1e-10);
}

TEST(iqc, linear_in_table) {
    std::mt19937_64 rng(127);
    auto r1 = random_density({2, 2}, rng), r2 = random_density({2, 2}, rng);
    auto t1 = qc_table(r1), t2 = qc_table(r2), mix = t1;
    for (std::size_t k = 0; k < mix.entries.size(); ++k) mix.entries[k].p = 0.3 * t1.entries[k].p + 0.7 * t2.entries[k].p;
    mix.reindex();
    EXPECT_NEAR(iqc(mix), 0.3 * iqc(t1) + 0.7 * iqc(t2), 1e-12);
    EXPECT_NEAR(iqc(t1), iqc_oracle(r1), 1e-12);
}

TEST(iqc, relabeling_invariance) {
    // Swapping Alice's outcomes within the pairs of one setting while flipping
    // Bob's outcome for the other setting maps every group onto itself.
    std::mt19937_64 rng(131);
    auto t = qc_table(random_density({2, 2}, rng));
    const std::size_t perm_z[4] = {1, 0, 3, 2}, perm_x[4] = {2, 3, 0, 1};
    for (int which = 0; which < 2; ++which) {
        auto u = t;
        for (auto &e : u.entries) {
            e.a = which == 0 ? perm_z[e.a] : perm_x[e.a];
            if (e.y == static_cast<std::size_t>(which == 0 ? 1 : 0)) e.b = 1 - e.b;
        }
        u.reindex();
        EXPECT_NEAR(iqc(u), iqc(t), 1e-12);
    }
}

TEST(iqc, missing_entries_listed) {
    auto t = qc_table(phi_plus(2));
    std::erase_if(t.entries, [](const ProbabilityEntry &e) { return e.a == 2 && e.b == 1 && e.x == 0 && e.y == 0; });
    t.reindex();
    try {
        iqc(t);
        FAIL();
    } catch (const ArgumentError &e) {
        EXPECT_NE(std::string(e.what()).find("a=2,b=1|psi0,y=0"), std::string::npos) << e.what();
    }
}

TEST(qc_certify, ideal) {
    auto r = qc_certify(phi_plus(2), bsm(2), qc_bob_settings(), 1e-9);
    EXPECT_TRUE(r.pass) << r.max_residual();
    EXPECT_NEAR(r.diagnostics.at("I_qc"), 4, 1e-9);
    for (std::size_t a = 0; a < 4; ++a) {
        double mu = 0, nu = 0;
        for (std::size_t b = 0; b < 2; ++b) {
            mu += r.diagnostics.at("mu " + std::to_string(a) + "," + std::to_string(b));
            nu += r.diagnostics.at("nu " + std::to_string(a) + "," + std::to_string(b));
        }
        EXPECT_NEAR(r.diagnostics.at("mu " + std::to_string(a) + ",0"), 0.25, 1e-9);
        EXPECT_NEAR(mu, 0.5, 1e-9);
        EXPECT_NEAR(nu, 0.5, 1e-9);
    }
    EXPECT_LE(r.diagnostics.at("anticommutator_norm"), 1e-9);
    EXPECT_NEAR(r.fidelity_estimate, 1, 1e-9);
}

TEST(qc_certify, noisy_bob) {
    auto r = qc_certify(phi_plus(2), bsm(2), qc_bob_settings(0.9), 1e-6);
    EXPECT_FALSE(r.pass);
    // Each group: 0.5 * (1 + v) per setting pair -> 2 (1 + v).
    EXPECT_NEAR(r.diagnostics.at("I_qc"), 2 * (1 + 0.9), 1e-12);
    EXPECT_NEAR(r.residuals.at("iqc_shortfall"), 4 - 3.8, 1e-12);
    auto c = qc_circuit(phi_plus(2), bsm(2), qc_bob_settings(0.9));
    EXPECT_NEAR(c.trace, 0.819025, 1e-9);
    EXPECT_NEAR(c.fidelity, 0.994482769146, 1e-9);
}

TEST(qc_certify, separable) {
    ComplexVector pp = ComplexVector::Constant(4, 0.5);
    DensityMatrix rho(ComplexMatrix(pp * pp.adjoint()), SystemShape({2, 2}));
    auto r = qc_certify(rho, bsm(2), qc_bob_settings(), 1e-6);
    EXPECT_LT(r.diagnostics.at("I_qc"), 4 - 1e-3);
    EXPECT_NEAR(r.diagnostics.at("I_qc"), iqc_oracle(rho), 1e-12);
    EXPECT_FALSE(r.pass);
}

TEST(qc_certify, wrong_labels) {
    auto t = qc_table(phi_plus(2));
    t.alice = named_ensemble("standard", 2);
    EXPECT_THROW(qc_analyze(t), ArgumentError);
}

TEST(qc_certify, anticommutator) {
    EXPECT_LE(anticommutator_norm(phi_plus(2), qc_bob_settings()), 1e-12);
    std::vector<Povm> same{qc_bob_settings()[0], qc_bob_settings()[0]};
    EXPECT_NEAR(anticommutator_norm(phi_plus(2), same), 1, 1e-12);
}

TEST(chsh, ideal_observables) {
    auto o = chsh_observables(bsm(2), bsm(2));
    EXPECT_LE(max_diff(o.A0, pauli('z')), 1e-12);
    EXPECT_LE(max_diff(o.A1, pauli('x')), 1e-12);
    EXPECT_LE(max_diff(o.B0, pauli('z')), 1e-12);
    EXPECT_LE(max_diff(o.B1, pauli('x')), 1e-12);
    EXPECT_LE(o.validity_defect, 1e-12);
}

TEST(chsh, reference_state_reaches_tsirelson) {
    auto c = chsh_convention_search(1e-9);
    ASSERT_TRUE(c.found);
    auto psi = chsh_reference_state(c);
    auto r = chsh_quantum_inputs(DensityMatrix(psi.projector()), bsm(2), bsm(2), 1e-9);
    EXPECT_NEAR(r.diagnostics.at("chsh"), 2 * std::numbers::sqrt2, 1e-9);
    EXPECT_TRUE(r.pass);
    // The state is maximally entangled, as required for a maximal violation.
    auto red = partial_trace(psi.projector(), {0});
    EXPECT_LE(max_diff(red.matrix(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(chsh, phi_plus_and_mixed) {
    // <zz> + <zx> + <xz> - <xx> on phi+ = 1 + 0 + 0 - 1.
    auto o = chsh_observables(bsm(2), bsm(2));
    auto phi = maximally_entangled(2).amplitudes();
    auto ev = [&](const ComplexMatrix &A, const ComplexMatrix &B) { return phi.dot(naive_kron(A, B) * phi).real(); };
    const double oracle = ev(pauli('z'), pauli('z')) + ev(pauli('z'), pauli('x')) + ev(pauli('x'), pauli('z')) -
                          ev(pauli('x'), pauli('x'));
    EXPECT_NEAR(chsh_value(phi_plus(2), o), oracle, 1e-12);
    DensityMatrix mixed(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0), SystemShape({2, 2}));
    EXPECT_NEAR(chsh_value(mixed, o), 0, 1e-12);
}

TEST(chsh, observables_square_to_identity) {
    std::mt19937_64 rng(137);
    for (int t = 0; t < 10; ++t) {
        auto o = chsh_observables(random_povm({2, 2}, rng), random_povm({2, 2}, rng));
        for (auto *A : {&o.A0, &o.A1, &o.B0, &o.B1}) {
            // Valid +-1 measurements: spectrum inside [-1, 1].
            auto v = hermitian_eigen(*A).values;
            EXPECT_GE(v(0), -1 - 1e-9);
            EXPECT_LE(v(v.size() - 1), 1 + 1e-9);
        }
        EXPECT_LE(o.validity_defect, 1e-9);
    }
    auto o = chsh_observables(bsm(2), bsm(2));
    for (auto *A : {&o.A0, &o.A1, &o.B0, &o.B1}) EXPECT_LE(max_diff(*A * *A, ComplexMatrix::Identity(2, 2)), 1e-9);
}

TEST(multipartite, ghz_three_parties) {
    auto ghz = ghz_state(3, 2);
    auto slots = default_slots(3);
    std::vector<PartyMeasurement> parties;
    for (auto s : slots) parties.push_back({bsm(2), s});
    auto r = multipartite_certify(DensityMatrix(ghz.projector()), parties, ghz, 1e-8);
    EXPECT_TRUE(r.pass) << r.max_residual();
    EXPECT_NEAR(r.fidelity_estimate, 1, 1e-8);
    EXPECT_EQ(r.residuals.size(), 64u);
}

TEST(multipartite, noisy_party_fails) {
    auto ghz = ghz_state(3, 2);
    auto slots = default_slots(3);
    std::vector<PartyMeasurement> parties{{bsm(2), slots[0]}, {noisy_bsm(2, 0.9), slots[1]}, {bsm(2), slots[2]}};
    auto r = multipartite_certify(DensityMatrix(ghz.projector()), parties, ghz, 1e-8);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.max_residual(), 1e-4);
    EXPECT_LT(r.fidelity_estimate, 1 - 1e-3);
}

TEST(multipartite, two_parties_match_joint) {
    std::mt19937_64 rng(139);
    for (int t = 0; t < 3; ++t) {
        auto rho = t == 0 ? phi_plus(2) : random_density({2, 2}, rng);
        auto pa = t == 0 ? bsm(2) : random_povm({2, 2}, rng, 0.1), pb = t == 0 ? bsm(2) : random_povm({2, 2}, rng);
        auto slots = default_slots(2);
        auto m = effective_multipartite(rho, {{pa, slots[0]}, {pb, slots[1]}});
        auto j = effective_joint(rho, pa, pb);
        for (auto &[k, op] : j.entries) EXPECT_LE(max_diff(m.at(k), op.matrix()), 1e-10);
        auto r1 = multipartite_certify(rho, {{pa, slots[0]}, {pb, slots[1]}}, maximally_entangled(2));
        auto r2 = check_theorem1(j, maximally_entangled(2));
        for (auto &[k, v] : r2.residuals) EXPECT_NEAR(v, r1.residuals.at(k), 1e-10);
        EXPECT_NEAR(r1.fidelity_estimate, r2.fidelity_estimate, 1e-10);
    }
}

TEST(multipartite, capacity) {
    auto ghz = ghz_state(3, 2);
    DensityMatrix rho(ghz.projector());
    std::vector<PartyMeasurement> parties;
    for (auto s : default_slots(3)) parties.push_back({bsm(2), s});
    // The contraction never forms the full register space; only the output
    // space (dimension 8) is subject to the cap.
    set_dim_cap(4);
    EXPECT_THROW(multipartite_certify(rho, parties, ghz), CapacityError);
    set_dim_cap(4096);
}
