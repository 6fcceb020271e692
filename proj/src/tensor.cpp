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

#include "qcert/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>

#include <Eigen/Eigenvalues>

#include "qcert/errors.hpp"

namespace qcert {

namespace {

std::size_t initial_cap() {
    if (const char *env = std::getenv("QCERT_DIM_CAP")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return 4096;
}

std::atomic<std::size_t> &cap_ref() {
    static std::atomic<std::size_t> cap{initial_cap()};
    return cap;
}

void check_cap(std::size_t n) {
    if (n > dim_cap()) {
        throw CapacityError("total dimension " + std::to_string(n) + " exceeds cap " +
                            std::to_string(dim_cap()));
    }
}

std::size_t product(const std::vector<std::size_t> &dims) {
    std::size_t n = 1;
    for (auto d : dims)
        if (__builtin_mul_overflow(n, d, &n)) throw CapacityError("dimension overflow");
    return n;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

// Offsets of every multi-index over the subsystems `subs`, in row-major order.
std::vector<std::size_t> offsets(const std::vector<std::size_t> &dims,
                                 const std::vector<std::size_t> &subs) {
    auto st = strides_of(dims);
    std::vector<std::size_t> out{0};
    for (auto s : subs) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * dims[s]);
        for (auto o : out)
            for (std::size_t j = 0; j < dims[s]; ++j) next.push_back(o + j * st[s]);
        out.swap(next);
    }
    return out;
}

}  // namespace

std::size_t dim_cap() { return cap_ref().load(); }
void set_dim_cap(std::size_t cap) { cap_ref().store(cap); }

SystemShape::SystemShape(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    for (auto d : dims_)
        if (d < 1) throw ArgumentError("subsystem dimension must be positive");
    if (!labels_.empty()) {
        if (labels_.size() != dims_.size()) throw ArgumentError("label count does not match dims");
        std::set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size()) throw ArgumentError("subsystem labels must be unique");
    }
    check_cap(product(dims_));
}

std::size_t SystemShape::total() const { return product(dims_); }

SystemShape SystemShape::concat(const SystemShape &other) const {
    std::vector<std::size_t> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    std::vector<std::string> l;
    if (!labels_.empty() && !other.labels_.empty()) {
        l = labels_;
        l.insert(l.end(), other.labels_.begin(), other.labels_.end());
        std::set<std::string> seen(l.begin(), l.end());
        if (seen.size() != l.size()) l.clear();
    }
    return SystemShape(std::move(d), std::move(l));
}

SystemShape SystemShape::select(const std::vector<std::size_t> &keep) const {
    std::vector<std::size_t> d;
    std::vector<std::string> l;
    for (auto k : keep) {
        d.push_back(dims_.at(k));
        if (!labels_.empty()) l.push_back(labels_[k]);
    }
    return SystemShape(std::move(d), std::move(l));
}

std::vector<std::size_t> SystemShape::strides() const { return strides_of(dims_); }

LabeledOperator::LabeledOperator(ComplexMatrix m, SystemShape shape, bool hermitian)
    : m_(std::move(m)), shape_(std::move(shape)), hermitian_(hermitian) {
    if (m_.rows() != m_.cols()) throw ArgumentError("operator must be square");
    if (static_cast<std::size_t>(m_.rows()) != shape_.total())
        throw ArgumentError("operator dimension " + std::to_string(m_.rows()) +
                            " does not match shape total " + std::to_string(shape_.total()));
    check_finite(m_, "operator");
    if (hermitian_ && hermiticity_defect(m_) > 1e-10)
        throw ArgumentError("operator flagged Hermitian but M - M^dag is " +
                            std::to_string(hermiticity_defect(m_)));
}

LabeledOperator::LabeledOperator(ComplexMatrix m, bool hermitian)
    : LabeledOperator(m, SystemShape({static_cast<std::size_t>(m.rows())}), hermitian) {}

LabeledOperator LabeledOperator::relabeled(SystemShape shape) const {
    return LabeledOperator(m_, std::move(shape), hermitian_);
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    check_cap(static_cast<std::size_t>(std::max(ra * rb, ca * cb)));
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b) {
    check_cap(a.dim() * b.dim());
    return LabeledOperator(kron(a.matrix(), b.matrix()), a.shape().concat(b.shape()),
                           a.hermitian() && b.hermitian());
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                            std::vector<std::size_t> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
        if (k >= dims.size()) throw ArgumentError("partial_trace: subsystem index out of range");
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
    auto ok = offsets(dims, keep);
    auto ot = offsets(dims, traced);
    const auto n = static_cast<Eigen::Index>(ok.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            cplx s = 0;
            for (auto t : ot) s += m(ok[r] + t, ok[c] + t);
            out(r, c) = s;
        }
    return out;
}

LabeledOperator partial_trace(const LabeledOperator &m, std::vector<std::size_t> keep) {
    for (auto k : keep)
        if (k >= m.shape().size()) throw ArgumentError("partial_trace: subsystem index out of range");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    ComplexMatrix r = partial_trace(m.matrix(), m.shape().dims(), keep);
    SystemShape shape = keep.empty() ? SystemShape({1}) : m.shape().select(keep);
    return LabeledOperator(std::move(r), std::move(shape), m.hermitian());
}

ComplexMatrix partial_transpose(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                                std::size_t subsystem) {
    if (subsystem >= dims.size()) throw ArgumentError("partial_transpose: subsystem index out of range");
    const auto st = strides_of(dims)[subsystem];
    const auto d = dims[subsystem];
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const std::size_t di = (static_cast<std::size_t>(i) / st) % d;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const std::size_t dj = (static_cast<std::size_t>(j) / st) % d;
            const std::size_t i2 = i - di * st + dj * st;
            const std::size_t j2 = j - dj * st + di * st;
            out(i, j) = m(i2, j2);
        }
    }
    return out;
}

LabeledOperator partial_transpose(const LabeledOperator &m, std::size_t subsystem) {
    return LabeledOperator(partial_transpose(m.matrix(), m.shape().dims(), subsystem), m.shape(),
                           m.hermitian());
}

namespace {
std::vector<std::size_t> permuted_index_map(const std::vector<std::size_t> &dims,
                                            const std::vector<std::size_t> &order) {
    if (order.size() != dims.size()) throw ArgumentError("permutation length mismatch");
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t k = 0; k < check.size(); ++k)
        if (check[k] != k) throw ArgumentError("invalid subsystem permutation");
    // new index -> old index
    return offsets(dims, order);
}
}  // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix &m, const std::vector<std::size_t> &dims,
                                 const std::vector<std::size_t> &order) {
    auto map = permuted_index_map(dims, order);
    const auto n = static_cast<Eigen::Index>(map.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(map[i], map[j]);
    return out;
}

ComplexVector permute_subsystems(const ComplexVector &v, const std::vector<std::size_t> &dims,
                                 const std::vector<std::size_t> &order) {
    auto map = permuted_index_map(dims, order);
    ComplexVector out(static_cast<Eigen::Index>(map.size()));
    for (std::size_t i = 0; i < map.size(); ++i) out(i) = v(map[i]);
    return out;
}

ComplexMatrix embed_operator(const ComplexMatrix &op, const std::vector<std::size_t> &dims,
                             const std::vector<std::size_t> &targets) {
    std::vector<std::size_t> order = targets, rest;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (std::find(targets.begin(), targets.end(), k) == targets.end()) rest.push_back(k);
    std::size_t dt = 1, dr = 1;
    for (auto t : targets) dt *= dims.at(t);
    for (auto r : rest) dr *= dims[r];
    if (static_cast<std::size_t>(op.rows()) != dt) throw ArgumentError("embed_operator: operator size mismatch");
    order.insert(order.end(), rest.begin(), rest.end());
    std::vector<std::size_t> pd;
    for (auto o : order) pd.push_back(dims[o]);
    std::vector<std::size_t> inverse(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
    return permute_subsystems(kron(op, ComplexMatrix::Identity(dr, dr)), pd, inverse);
}

double pure_fidelity(const LabeledOperator &rho, const ComplexVector &psi) {
    if (static_cast<std::size_t>(psi.size()) != rho.dim())
        throw ArgumentError("pure_fidelity: state and operator dimensions differ");
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw ArgumentError("pure_fidelity: state not normalized");
    if (hermiticity_defect(rho.matrix()) > 1e-10) throw ArgumentError("pure_fidelity: rho not Hermitian");
    if (std::abs(rho.matrix().trace() - cplx(1.0)) > 1e-8)
        throw ArgumentError("pure_fidelity: rho does not have unit trace");
    cplx f = psi.dot(rho.matrix() * psi);
    if (std::abs(f.imag()) > 1e-10) throw NumericalError("pure_fidelity: complex expectation value");
    return f.real();
}

HermitianEigen hermitian_eigen(const ComplexMatrix &m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix &m) {
    auto e = hermitian_eigen(m);
    RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * s.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

PsdReport psd_check(const ComplexMatrix &m, double tol) {
    if (hermiticity_defect(m) > 1e-10) throw ArgumentError("psd_check: operator is not Hermitian");
    if (m.rows() == 0) return {true, 0};
    auto e = hermitian_eigen(m);
    double lo = e.values(0);
    return {lo >= -tol, lo};
}

PsdReport psd_check(const LabeledOperator &m, double tol) { return psd_check(m.matrix(), tol); }

double hermiticity_defect(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) return INFINITY;
    return m.rows() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_finite(const ComplexMatrix &m, const char *what) {
    if (!m.allFinite()) throw ArgumentError(std::string(what) + " contains NaN or Inf");
}

}  // namespace qcert
