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

#include <charconv>
#include <cmath>
#include <sstream>

#include "qcert/errors.hpp"
#include "qcert/sdp.hpp"

namespace qcert {

namespace {

void push_realified(std::vector<SymEntry> &out, std::size_t block, std::size_t n, const ComplexMatrix &A) {
    if (static_cast<std::size_t>(A.rows()) != n || A.rows() != A.cols())
        throw ArgumentError("complex SDP coefficient has the wrong size");
    if (hermiticity_defect(A) > 1e-12) throw ArgumentError("complex SDP coefficient is not Hermitian");
    // R(A)/2 = 1/2 [[Re A, -Im A], [Im A, Re A]], upper triangle only.
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i; j < 2 * n; ++j) {
            const std::size_t r = i % n, c = j % n;
            const bool top = i < n, left = j < n;
            double v;
            if (top == left) v = A(r, c).real();
            else if (top) v = -A(r, c).imag();
            else v = A(r, c).imag();
            if (v != 0) out.push_back({block, i, j, 0.5 * v});
        }
}

std::string fmt(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string &tok, std::size_t line) {
    double v = 0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
        throw SchemaError("line " + std::to_string(line), "cannot parse number '" + tok + "'");
    return v;
}

long parse_int(const std::string &tok, std::size_t line) {
    double v = parse_double(tok, line);
    if (v != std::floor(v)) throw SchemaError("line " + std::to_string(line), "expected an integer, got '" + tok + "'");
    return static_cast<long>(v);
}

std::vector<std::string> tokens(std::string s) {
    for (auto &ch : s)
        if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

}  // namespace

SDPProblem realify(const ComplexSDP &p) {
    SDPProblem out;
    for (auto n : p.blocks) out.blocks.push_back(2 * n);
    for (auto &t : p.objective) {
        if (t.block >= p.blocks.size()) throw ArgumentError("objective term refers to a missing block");
        push_realified(out.objective, t.block, p.blocks[t.block], t.coeff);
    }
    for (auto &q : p.equalities) {
        SdpEquality e;
        e.rhs = q.rhs;
        for (auto &t : q.terms) {
            if (t.block >= p.blocks.size()) throw ArgumentError("constraint term refers to a missing block");
            push_realified(e.coeffs, t.block, p.blocks[t.block], t.coeff);
        }
        out.equalities.push_back(std::move(e));
    }
    out.metadata = p.metadata;
    return out;
}

std::vector<ComplexMatrix> complexify(const std::vector<RealMatrix> &X) {
    std::vector<ComplexMatrix> out;
    for (auto &B : X) {
        const auto n = B.rows() / 2;
        ComplexMatrix Z(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                Z(i, j) = cplx(0.5 * (B(i, j) + B(n + i, n + j)), 0.5 * (B(n + i, j) - B(i, n + j)));
        out.push_back(0.5 * (Z + Z.adjoint()));
    }
    return out;
}

std::string export_sdpa(const SDPProblem &p) {
    p.validate();
    std::ostringstream os;
    for (auto &m : p.metadata) os << "* " << m << "\n";
    os << p.equalities.size() << "\n" << p.blocks.size() << "\n";
    for (std::size_t b = 0; b < p.blocks.size(); ++b) os << (b ? " " : "") << p.blocks[b];
    os << "\n";
    for (std::size_t k = 0; k < p.equalities.size(); ++k) os << (k ? " " : "") << fmt(p.equalities[k].rhs);
    os << "\n";
    for (auto &e : p.objective)
        if (e.v != 0) os << "0 " << e.block + 1 << " " << e.i + 1 << " " << e.j + 1 << " " << fmt(-e.v) << "\n";
    for (std::size_t k = 0; k < p.equalities.size(); ++k)
        for (auto &e : p.equalities[k].coeffs)
            if (e.v != 0) os << k + 1 << " " << e.block + 1 << " " << e.i + 1 << " " << e.j + 1 << " " << fmt(e.v) << "\n";
    return os.str();
}

SDPProblem import_sdpa(const std::string &text) {
    SDPProblem p;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    int stage = 0;
    long m = 0, nblocks = 0;
    std::vector<std::string> pending;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (stage == 0 && (line.empty() || line[0] == '"' || line[0] == '*')) {
            if (line.rfind("* ", 0) == 0) p.metadata.push_back(line.substr(2));
            continue;
        }
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (stage == 0) {
            m = parse_int(tok[0], lineno);
            if (m < 0) throw SchemaError("line " + std::to_string(lineno), "negative constraint count");
            p.equalities.resize(static_cast<std::size_t>(m));
            stage = 1;
        } else if (stage == 1) {
            nblocks = parse_int(tok[0], lineno);
            if (nblocks <= 0) throw SchemaError("line " + std::to_string(lineno), "block count must be positive");
            stage = 2;
        } else if (stage == 2) {
            pending.insert(pending.end(), tok.begin(), tok.end());
            if (static_cast<long>(pending.size()) >= nblocks) {
                for (long b = 0; b < nblocks; ++b) {
                    long n = parse_int(pending[b], lineno);
                    if (n <= 0) throw SchemaError("line " + std::to_string(lineno), "diagonal (LP) blocks are not supported");
                    p.blocks.push_back(static_cast<std::size_t>(n));
                }
                pending.clear();
                stage = m ? 3 : 4;
            }
        } else if (stage == 3) {
            pending.insert(pending.end(), tok.begin(), tok.end());
            if (static_cast<long>(pending.size()) >= m) {
                for (long k = 0; k < m; ++k) p.equalities[k].rhs = parse_double(pending[k], lineno);
                pending.clear();
                stage = 4;
            }
        } else {
            if (tok.size() != 5) throw SchemaError("line " + std::to_string(lineno), "expected 'matno blkno i j value'");
            long mat = parse_int(tok[0], lineno), blk = parse_int(tok[1], lineno);
            long i = parse_int(tok[2], lineno), j = parse_int(tok[3], lineno);
            double v = parse_double(tok[4], lineno);
            if (mat < 0 || mat > m || blk < 1 || blk > nblocks || i < 1 || j < 1 ||
                i > static_cast<long>(p.blocks[blk - 1]) || j > static_cast<long>(p.blocks[blk - 1]))
                throw SchemaError("line " + std::to_string(lineno), "entry index out of range");
            if (i > j) std::swap(i, j);
            SymEntry e{static_cast<std::size_t>(blk - 1), static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v};
            if (mat == 0) {
                e.v = -v;
                p.objective.push_back(e);
            } else {
                p.equalities[mat - 1].coeffs.push_back(e);
            }
        }
    }
    if (stage < 4) throw SchemaError("", "truncated SDPA file");
    return p;
}

}  // namespace qcert
