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

#include "gtest/gtest.h"
#include "qcert/errors.hpp"
#include "testing.hpp"

using namespace qcert;
using namespace qcert::testing;

namespace {

double singlet_fraction(const DensityMatrix &rho, std::size_t d) {
    return pure_fidelity(rho.op(), maximally_entangled(d).amplitudes());
}

}  // namespace

TEST(swap_once, ideal_links) {
    for (std::size_t d : {2, 3}) {
        auto phi = DensityMatrix(maximally_entangled(d).projector());
        auto out = swap_once(phi, phi, bsm(d));
        EXPECT_LE(max_diff(out.matrix(), phi.matrix()), 1e-12);
        EXPECT_EQ(out.shape().dims(), (std::vector<std::size_t>{d, d}));
    }
}

TEST(swap_once, isotropic_product_rule) {
    for (std::size_t d : {2, 3})
        for (double p : {0.0, 0.5, 0.9})
            for (double q : {0.3, 1.0}) {
                auto out = swap_once(isotropic_state(d, p), isotropic_state(d, q), bsm(d));
                EXPECT_LE(max_diff(out.matrix(), isotropic_state(d, p * q).matrix()), 1e-12) << d << p << q;
            }
}

TEST(swap_once, noise_absorbed_into_visibility) {
    for (double eta : {0.5, 0.9, 1.0}) {
        auto out = swap_once(isotropic_state(2, 0.8), isotropic_state(2, 0.7), noisy_bsm(2, eta));
        EXPECT_LE(max_diff(out.matrix(), isotropic_state(2, 0.8 * 0.7 * eta).matrix()), 1e-12);
    }
}

TEST(swap_once, preserves_trace_and_positivity) {
    std::mt19937_64 rng(401);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 2 + t % 2;
        auto out = swap_once(random_density({d, d}, rng), random_density({d, d}, rng), random_povm({d, d}, rng, 0.2));
        EXPECT_NEAR(out.matrix().trace().real(), 1, 1e-10);
        EXPECT_GE(hermitian_eigen(out.matrix()).values(0), -1e-10);
    }
}

TEST(swap_once, shape_errors) {
    EXPECT_THROW(swap_once(isotropic_state(2, 1), isotropic_state(3, 1), bsm(2)), ArgumentError);
    EXPECT_THROW(swap_once(isotropic_state(2, 1), isotropic_state(2, 1), bsm(3)), ArgumentError);
}

TEST(chain, ideal_chains) {
    for (std::size_t d : {2, 3})
        for (std::size_t n = 1; n <= 4; ++n) {
            auto rho = chain_state(isotropic_chain(d, n));
            EXPECT_LE(max_diff(rho.matrix(), maximally_entangled(d).projector().matrix()), 1e-12) << d << " " << n;
        }
}

TEST(chain, visibility_decays_with_links) {
    for (std::size_t d : {2, 3}) {
        double prev = 2;
        for (std::size_t n = 1; n <= 4; ++n) {
            auto spec = isotropic_chain(d, n, 0.9);
            for (auto &e : spec.eta) e = 0.95;
            auto rho = chain_state(spec);
            const double P = std::pow(0.9, n) * std::pow(0.95, n - 1);
            EXPECT_LE(max_diff(rho.matrix(), isotropic_state(d, P).matrix()), 1e-12);
            const double f = singlet_fraction(rho, d);
            EXPECT_LT(f, prev);
            prev = f;
        }
    }
}

TEST(chain, validation) {
    auto spec = isotropic_chain(2, 3);
    spec.eta.pop_back();
    EXPECT_THROW(chain_state(spec), ArgumentError);
    spec = isotropic_chain(2, 2);
    spec.eta[0] = 1.5;
    EXPECT_THROW(chain_state(spec), ArgumentError);
    spec = isotropic_chain(2, 2);
    spec.sources[1] = isotropic_state(3, 1);
    EXPECT_THROW(plan(spec), ArgumentError);
    EXPECT_THROW(chain_state(ChainSpec{}), ArgumentError);
}

TEST(plan, labels) {
    auto one = isotropic_chain(2, 1);
    one.last_trusted = true;
    auto p = plan(one);
    EXPECT_EQ(p.sources, std::vector<std::string>{"MDI"});
    EXPECT_EQ(p.end_to_end, "teleportation-sdp");
    one.last_trusted = false;
    EXPECT_EQ(plan(one).sources, std::vector<std::string>{"qc"});
    EXPECT_EQ(plan(one).end_to_end, "none");
    one.first_trusted = false;
    EXPECT_EQ(plan(one).sources, std::vector<std::string>{"standard-DI"});

    auto three = isotropic_chain(2, 3);
    p = plan(three);
    EXPECT_EQ(p.sources, (std::vector<std::string>{"qc", "standard-DI", "steering"}));
    EXPECT_EQ(p.end_to_end, "none");
    three.last_trusted = true;
    EXPECT_EQ(plan(three).end_to_end, "teleportation-sdp");
    three.first_trusted = false;
    EXPECT_EQ(plan(three).sources, (std::vector<std::string>{"standard-DI", "standard-DI", "steering"}));
    EXPECT_EQ(plan(isotropic_chain(2, 2)).sources, (std::vector<std::string>{"qc", "steering"}));
}

TEST(certify_chain, ideal_and_single_link) {
    auto ideal = certify_chain(isotropic_chain(2, 3), standard_complete_set(2));
    ASSERT_TRUE(ideal.value.has_value());
    EXPECT_NEAR(*ideal.value, 1, 1e-4);
    auto one = certify_chain(isotropic_chain(2, 1, 0.8), standard_complete_set(2));
    ASSERT_TRUE(one.value.has_value());
    EXPECT_NEAR(*one.value, 0.85, 1e-6);
    ChainSpec two = isotropic_chain(2, 2);
    two.sources = {isotropic_state(2, 0.8), isotropic_state(2, 0.9)};
    auto b = certify_chain(two, standard_complete_set(2));
    ASSERT_TRUE(b.value.has_value());
    EXPECT_NEAR(*b.value, 0.72 + 0.28 / 4, 1e-6);
}

TEST(certify_chain, monotone_in_visibility) {
    double prev = -1;
    for (double eta : {0.6, 0.7, 0.8, 0.9, 1.0}) {
        auto spec = isotropic_chain(2, 2, 0.95);
        spec.eta[0] = eta;
        auto b = certify_chain(spec, standard_complete_set(2));
        ASSERT_TRUE(b.value.has_value());
        EXPECT_GT(*b.value, prev - 1e-8);
        prev = *b.value;
    }
}

TEST(certify_chain, sound_for_incomplete_ensembles) {
    std::mt19937_64 rng(409);
    for (int t = 0; t < 5; ++t) {
        ChainSpec spec;
        spec.d = 2;
        spec.sources = {random_density({2, 2}, rng), random_density({2, 2}, rng)};
        spec.eta = {0.9};
        auto b = certify_chain(spec, three_qubit_states());
        ASSERT_TRUE(b.value.has_value());
        const double truth = singlet_fraction(rho_o(effective_teleport(chain_state(spec), bsm(2)), 2), 2);
        EXPECT_LE(*b.value, truth + 1e-6);
    }
    EXPECT_THROW(certify_chain(isotropic_chain(2, 2), standard_complete_set(3)), ArgumentError);
}
