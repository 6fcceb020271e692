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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcert/qobjects.hpp"

namespace qcert {

enum class Scenario { joint, qc, teleport, multipartite };
std::string to_string(Scenario s);

using OutcomeKey = std::vector<std::size_t>;

/// Outcome-indexed effective measurements on the trusted registers.
/// Keys: joint (a,b); qc (a,b,y); teleport (a); multipartite (a_1..a_n).
struct EffectiveSet {
    Scenario scenario = Scenario::joint;
    std::vector<std::size_t> dims;            // registers the entries act on
    std::vector<InputSlot> slots;             // per party carrying a trusted input
    std::vector<std::size_t> outcome_counts;  // per key position
    std::map<OutcomeKey, LabeledOperator> entries;
    bool psd = true;
    double min_eigenvalue = 0;

    const ComplexMatrix &at(const OutcomeKey &k) const;
    /// Recomputes psd / min_eigenvalue over all entries.
    void refresh_positivity(double tol = 1e-9);
};

/// One party of a multipartite scenario: POVM on its trusted input register
/// and its share of the state, with the input register at `slot`.
struct PartyMeasurement {
    Povm povm;
    InputSlot slot = InputSlot::first;
};

EffectiveSet effective_joint(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b);
EffectiveSet effective_qc(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings);
EffectiveSet effective_teleport(const DensityMatrix &rho, const Povm &povm_a);
EffectiveSet effective_multipartite(const DensityMatrix &rho, const std::vector<PartyMeasurement> &parties);

struct ProbabilityEntry {
    std::size_t a = 0, b = 0, x = 0, y = 0;
    double p = 0;
};

/// p(a,b|x,y). In the joint scenario x and y index quantum inputs from the
/// two ensembles; in the qc scenario y is Bob's classical setting.
struct ProbabilityTable {
    Scenario scenario = Scenario::joint;
    std::size_t d = 2;
    std::size_t n_a = 0, n_b = 0, n_settings = 0;
    InputEnsemble alice;
    std::optional<InputEnsemble> bob;
    std::vector<ProbabilityEntry> entries;

    std::size_t n_x() const { return alice.size(); }
    std::size_t n_y() const { return bob ? bob->size() : n_settings; }
    std::optional<double> find(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const;
    double at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const;
    /// Rebuilds the lookup index after entries change.
    void reindex();

   private:
    std::map<std::array<std::size_t, 4>, double> index_;
};

ProbabilityTable table_joint(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b,
                             const InputEnsemble &ens_a, const InputEnsemble &ens_b);
ProbabilityTable table_qc(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings,
                          const InputEnsemble &ens_a);
/// Multinomial resampling of every (x,y) row with `shots` draws.
ProbabilityTable sample_table(const ProbabilityTable &t, std::uint64_t shots, std::uint64_t seed);

struct Reconstruction {
    EffectiveSet set;
    double condition_number = 0;
    double residual_norm = 0;
    std::size_t rank = 0;
    std::size_t unknowns = 0;
};

/// Linear inversion of p = Tr[M (psi_x (x) psi_y)] via the pseudo-inverse
/// (cutoff 1e-10 sigma_max). Throws PreconditionError on incomplete ensembles.
Reconstruction reconstruct(const ProbabilityTable &table);

/// Solves the least-squares system rows * vec(M) = data for Hermitian M.
/// `states` are the input projectors (one per row), possibly on a product space.
struct LinearInversion {
    ComplexMatrix pinv;
    double condition_number = 0;
    std::size_t rank = 0;
    std::size_t n = 0;
};
LinearInversion make_inversion(const std::vector<ComplexMatrix> &projectors);
ComplexMatrix apply_inversion(const LinearInversion &inv, const RealVector &data);

}  // namespace qcert
