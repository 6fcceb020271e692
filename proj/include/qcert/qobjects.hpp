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

#include "qcert/tensor.hpp"

namespace qcert {

class PureState {
   public:
    PureState() = default;
    PureState(ComplexVector amplitudes, SystemShape shape);
    explicit PureState(ComplexVector amplitudes);

    const ComplexVector &amplitudes() const { return psi_; }
    const SystemShape &shape() const { return shape_; }
    std::size_t dim() const { return static_cast<std::size_t>(psi_.size()); }
    LabeledOperator projector() const;

   private:
    ComplexVector psi_;
    SystemShape shape_;
};

/// Hermitian, PSD (1e-9) and unit trace (1e-9).
class DensityMatrix {
   public:
    DensityMatrix() = default;
    explicit DensityMatrix(LabeledOperator op);
    DensityMatrix(ComplexMatrix m, SystemShape shape);

    const LabeledOperator &op() const { return op_; }
    const ComplexMatrix &matrix() const { return op_.matrix(); }
    const SystemShape &shape() const { return op_.shape(); }
    std::size_t dim() const { return op_.dim(); }

   private:
    LabeledOperator op_;
};

class Povm {
   public:
    Povm() = default;
    Povm(std::vector<ComplexMatrix> effects, SystemShape shape, std::vector<std::string> labels = {});

    std::size_t size() const { return effects_.size(); }
    const ComplexMatrix &effect(std::size_t a) const { return effects_.at(a).matrix(); }
    const std::vector<LabeledOperator> &effects() const { return effects_; }
    const std::vector<std::string> &labels() const { return labels_; }
    const SystemShape &shape() const { return shape_; }
    std::size_t dim() const { return shape_.total(); }
    bool is_projective(double tol = 1e-9) const;

   private:
    std::vector<LabeledOperator> effects_;
    std::vector<std::string> labels_;
    SystemShape shape_;
};

class InputEnsemble {
   public:
    InputEnsemble() = default;
    InputEnsemble(std::vector<PureState> states, std::vector<std::string> labels = {});

    std::size_t size() const { return states_.size(); }
    std::size_t d() const { return states_.front().dim(); }
    const PureState &state(std::size_t x) const { return states_.at(x); }
    const std::vector<PureState> &states() const { return states_; }
    const std::vector<std::string> &labels() const { return labels_; }
    /// Index of the state with the given label, or throws ArgumentError.
    std::size_t index_of(const std::string &label) const;

   private:
    std::vector<PureState> states_;
    std::vector<std::string> labels_;
};

/// Position of the trusted input register inside a party's measured pair.
/// Alice measures A'(x)A (input first); Bob measures B(x)B' (input second).
enum class InputSlot { first, second };

struct WeylPair {
    LabeledOperator X;
    LabeledOperator Z;
    cplx omega;
};

struct CompletenessReport {
    bool complete = false;
    std::size_t rank = 0;
    std::size_t required = 0;
};

struct PureEquivalent {
    PureState state;  // on A (x) B
    Povm bob;         // on B (x) B'
};

struct NaimarkDilation {
    Povm projective;        // on the extended space
    ComplexMatrix isometry; // extended_dim x original_dim
};

WeylPair weyl_operators(std::size_t d);
ComplexMatrix weyl(std::size_t k, std::size_t l, std::size_t d);  // X^k Z^l

PureState maximally_entangled(std::size_t d);
std::vector<PureState> bell_basis(std::size_t d);

/// U_m = X^k Z^l with k = m / d, l = m % d, so that U_m|phi+> = |psi_m>.
LabeledOperator correcting_unitary(std::size_t m, std::size_t d);

/// Correction that maps a party's effective operator back onto the reference
/// frame: U_m^T when the input register comes first, U_m when it comes second.
ComplexMatrix extraction_unitary(std::size_t m, std::size_t d, InputSlot slot);

Povm bsm(std::size_t d);
Povm noisy_bsm(std::size_t d, double eta);

InputEnsemble standard_complete_set(std::size_t d);
CompletenessReport is_tomographically_complete(const InputEnsemble &e);

/// Built-in ensembles: "standard" (any d), "pauli6" (d=2), "qc" (d=2),
/// "chsh" (d=2), "case1" and "case2" (d=3).
InputEnsemble named_ensemble(const std::string &name, std::size_t d);

DensityMatrix isotropic_state(std::size_t d, double p);
PureState ghz_state(std::size_t n, std::size_t d);

/// Two-outcome qubit measurement of a +-1 observable with white-noise
/// visibility v: M_0 = v P_+ + (1 - v) I/2.
Povm observable_povm(const ComplexMatrix &observable, double visibility = 1.0);
/// Bob's settings of the quantum-classical scenario: y=0 sigma_z, y=1 sigma_x.
std::vector<Povm> qc_bob_settings(double visibility = 1.0);

PureEquivalent pure_equivalent(const DensityMatrix &rho, const Povm &bob_povm);
NaimarkDilation naimark_dilate(const Povm &p);

}  // namespace qcert
