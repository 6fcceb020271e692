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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcert {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Current cap on the total dimension of any constructed operator.
/// Defaults to 4096; the QCERT_DIM_CAP environment variable overrides it.
std::size_t dim_cap();
void set_dim_cap(std::size_t cap);

/// Ordered subsystem dimensions with optional register names.
/// Basis index of |j1...jn> is the mixed-radix number with dims as radices
/// (last subsystem varies fastest).
class SystemShape {
   public:
    SystemShape() = default;
    explicit SystemShape(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t k) const { return dims_.at(k); }
    std::size_t total() const;

    SystemShape concat(const SystemShape &other) const;
    SystemShape select(const std::vector<std::size_t> &keep) const;
    std::vector<std::size_t> strides() const;

    bool operator==(const SystemShape &o) const { return dims_ == o.dims_; }

   private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
};

/// Square complex matrix tagged with a subsystem shape.
class LabeledOperator {
   public:
    LabeledOperator() = default;
    LabeledOperator(ComplexMatrix m, SystemShape shape, bool hermitian = false);
    /// Single-register convenience constructor.
    explicit LabeledOperator(ComplexMatrix m, bool hermitian = false);

    const ComplexMatrix &matrix() const { return m_; }
    const SystemShape &shape() const { return shape_; }
    bool hermitian() const { return hermitian_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

    LabeledOperator relabeled(SystemShape shape) const;

   private:
    ComplexMatrix m_;
    SystemShape shape_;
    bool hermitian_ = false;
};

struct PsdReport {
    bool psd = false;
    double min_eigenvalue = 0;
};

struct HermitianEigen {
    RealVector values;     // ascending
    ComplexMatrix vectors; // columns
};

LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order. An empty keep set yields the 1x1 matrix [Tr m].
LabeledOperator partial_trace(const LabeledOperator &m, std::vector<std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                            std::vector<std::size_t> keep);

LabeledOperator partial_transpose(const LabeledOperator &m, std::size_t subsystem);
ComplexMatrix partial_transpose(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                                std::size_t subsystem);

/// Reorders subsystems: new subsystem k is old subsystem order[k].
ComplexMatrix permute_subsystems(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                                 const std::vector<std::size_t> &order);
ComplexVector permute_subsystems(const ComplexVector &v, const std::vector<std::size_t> &dims,
                                 const std::vector<std::size_t> &order);

/// Lifts `op`, acting on the listed registers (in that order), to the full space.
ComplexMatrix embed_operator(const ComplexMatrix &op, const std::vector<std::size_t> &dims,
                             const std::vector<std::size_t> &targets);

/// <psi|rho|psi>. Throws NumericalError if the imaginary part exceeds 1e-10.
double pure_fidelity(const LabeledOperator &rho, const ComplexVector &psi);

PsdReport psd_check(const LabeledOperator &m, double tol);
PsdReport psd_check(const ComplexMatrix &m, double tol);

HermitianEigen hermitian_eigen(const ComplexMatrix &m);
ComplexMatrix hermitian_sqrt(const ComplexMatrix &m);

double hermiticity_defect(const ComplexMatrix &m);
double max_abs(const ComplexMatrix &m);
void check_finite(const ComplexMatrix &m, const char *what);

}  // namespace qcert
