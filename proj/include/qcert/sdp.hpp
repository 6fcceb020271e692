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

/// Upper-triangle entry (i <= j) of a symmetric coefficient matrix in one block.
struct SymEntry {
    std::size_t block = 0;
    std::size_t i = 0, j = 0;
    double v = 0;
};

struct SdpEquality {
    std::vector<SymEntry> coeffs;
    double rhs = 0;
};

/// min <C, X>  s.t.  <A_k, X> = b_k,  X = diag(X_1..X_B) PSD.
struct SDPProblem {
    std::vector<std::size_t> blocks;
    std::vector<SymEntry> objective;
    std::vector<SdpEquality> equalities;
    std::vector<std::string> metadata;

    /// Throws ArgumentError on out-of-range indices or lower-triangle entries.
    void validate() const;
};

enum class SdpStatus { optimal, infeasible, max_iter, numerical_failure };
std::string to_string(SdpStatus s);

struct SDPSolution {
    SdpStatus status = SdpStatus::numerical_failure;
    double primal_value = 0;
    double dual_value = 0;
    std::vector<RealMatrix> X;
    std::vector<RealMatrix> S;
    RealVector y;
    double max_residual = 0;
    double min_eigenvalue = 0;
    double gap = 0;
    int iterations = 0;
    std::size_t dropped_rows = 0;
};

struct SolverOptions {
    double tol = 1e-8;
    int max_iter = 200;
    double step_fraction = 0.98;
};

SDPSolution solve(const SDPProblem &p, double tol = 1e-8, int max_iter = 200);
SDPSolution solve(const SDPProblem &p, const SolverOptions &opt);

/// Complex-Hermitian program: min sum_b Re Tr(C_b X_b) s.t. sum_b Re Tr(A_kb X_b) = b_k.
struct ComplexTerm {
    std::size_t block = 0;
    ComplexMatrix coeff;  // Hermitian
};
struct ComplexEquality {
    std::vector<ComplexTerm> terms;
    double rhs = 0;
    std::string label;
};
struct ComplexSDP {
    std::vector<std::size_t> blocks;
    std::vector<ComplexTerm> objective;
    std::vector<ComplexEquality> equalities;
    std::vector<std::string> metadata;
};

/// Embeds each n-dim Hermitian block as the 2n-dim real block [[Re,-Im],[Im,Re]]
/// with coefficients halved so that optimal values coincide.
SDPProblem realify(const ComplexSDP &p);
/// Recovers the Hermitian blocks from a realified solution.
std::vector<ComplexMatrix> complexify(const std::vector<RealMatrix> &X);

/// SDPA sparse format. The problem is written as the SDPA dual
/// (max <F0,Y> s.t. <Fk,Y> = c_k) with F0 = -C, so external solvers report
/// the negated optimum.
std::string export_sdpa(const SDPProblem &p);
SDPProblem import_sdpa(const std::string &text);

}  // namespace qcert
