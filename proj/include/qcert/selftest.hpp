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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcert/effective.hpp"

namespace qcert {

struct CertReport {
    std::string scenario;
    double fidelity_estimate = 0;
    std::map<std::string, double> residuals;
    double tolerance = 1e-6;
    bool pass = false;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;

    double max_residual() const;
    /// Sets pass from the residuals and the tolerance.
    void finalize();
};

/// Residuals of (V_a (x) V_b) M_ab^T (V_a (x) V_b)^dag - |psi><psi| / d^n for every
/// outcome tuple; works for joint and multipartite sets.
CertReport check_theorem1(const EffectiveSet &eff, const PureState &reference, double tol = 1e-6);

/// (1/d^n) sum (V_a (x) ...) M^T (V_a (x) ...)^dag.
DensityMatrix swap_output(const EffectiveSet &eff, std::size_t d);

enum class CircuitMode { kraus, naimark };

/// Output of the extraction circuit on the fresh registers, with the
/// measurements applied as instruments (sqrt(M) Kraus operators, or the
/// projectors of a Naimark dilation).
DensityMatrix circuit_output(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b,
                             CircuitMode mode = CircuitMode::kraus);

/// Sum of the four group sums; needs the qc ensemble labels psi0, psi0bar, psi1, psi1bar.
double iqc(const ProbabilityTable &table);
/// The four group sums individually.
std::array<double, 4> iqc_groups(const ProbabilityTable &table);

/// Table-only part of the quantum-classical certificate: I_qc, proportionality
/// residuals, mu/nu weights.
CertReport qc_analyze(const ProbabilityTable &table, double tol = 1e-6);

struct QcCircuit {
    DensityMatrix output;  // normalized, on (A'', B')
    double trace = 0;      // trace before normalization
    double fidelity = 0;
};
QcCircuit qc_circuit(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings);
double anticommutator_norm(const DensityMatrix &rho, const std::vector<Povm> &bob_settings);

CertReport qc_certify(const DensityMatrix &rho, const Povm &povm_a, const std::vector<Povm> &bob_settings,
                      double tol = 1e-6);

struct ChshObservables {
    ComplexMatrix A0, A1, B0, B1;
    double validity_defect = 0;  // worst completeness / positivity violation
};
/// Builds the observables from four-outcome measurements on (X', X) with the
/// chsh ensemble {|0>, |+>}. `perm_a` and `perm_b` relabel outcomes.
ChshObservables chsh_observables(const Povm &povm_a, const Povm &povm_b,
                                 const std::vector<std::size_t> &perm_a = {0, 1, 2, 3},
                                 const std::vector<std::size_t> &perm_b = {0, 1, 2, 3});
double chsh_value(const DensityMatrix &rho, const ChshObservables &o);

CertReport chsh_quantum_inputs(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b, double tol = 1e-6);

/// Assignment of Bell-basis indices to the names "phi+" and "psi+" in the
/// reference state cos(pi/8)|phi+> + sign sin(pi/8)|psi+>, plus outcome relabelings.
struct ChshConvention {
    std::size_t phi_index = 0;
    std::size_t psi_index = 2;
    int sign = 1;
    std::vector<std::size_t> perm_a{0, 1, 2, 3}, perm_b{0, 1, 2, 3};
    double value = 0;
    bool found = false;
};
PureState chsh_reference_state(const ChshConvention &c);
/// Deterministic search (identity relabelings first) for a convention reaching
/// 2 sqrt(2) within `tol` on ideal Bell measurements.
ChshConvention chsh_convention_search(double tol = 1e-9);

/// Slot assignment used for n parties: the last party holds its input second.
std::vector<InputSlot> default_slots(std::size_t n);

CertReport multipartite_certify(const DensityMatrix &rho, const std::vector<PartyMeasurement> &parties,
                                const PureState &reference, double tol = 1e-6);

}  // namespace qcert
