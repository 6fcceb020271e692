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

// Dense primal-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps, for  min <C,X> s.t. A(X) = b, X PSD.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qcert/errors.hpp"
#include "qcert/sdp.hpp"

namespace qcert {

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::infeasible: return "infeasible";
        case SdpStatus::max_iter: return "max_iter";
        case SdpStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

void SDPProblem::validate() const {
    auto check = [&](const SymEntry &e) {
        if (e.block >= blocks.size()) throw ArgumentError("SDP entry refers to a missing block");
        if (e.i > e.j) throw ArgumentError("SDP entries must be upper triangular");
        if (e.j >= blocks[e.block]) throw ArgumentError("SDP entry index outside its block");
        if (!std::isfinite(e.v)) throw ArgumentError("SDP coefficient is not finite");
    };
    for (auto b : blocks)
        if (b == 0) throw ArgumentError("SDP block of size zero");
    for (auto &e : objective) check(e);
    for (auto &q : equalities) {
        for (auto &e : q.coeffs) check(e);
        if (!std::isfinite(q.rhs)) throw ArgumentError("SDP right-hand side is not finite");
    }
}

namespace {

using Blocks = std::vector<RealMatrix>;

struct Constraint {
    std::vector<std::size_t> touched;            // blocks
    std::vector<std::vector<SymEntry>> entries;  // per touched block
};

double inner(const Constraint &c, const Blocks &X) {
    double s = 0;
    for (std::size_t t = 0; t < c.touched.size(); ++t) {
        const auto &B = X[c.touched[t]];
        for (auto &e : c.entries[t]) s += (e.i == e.j ? 1.0 : 2.0) * e.v * B(e.i, e.j);
    }
    return s;
}

void add_scaled(Blocks &out, const Constraint &c, double w) {
    for (std::size_t t = 0; t < c.touched.size(); ++t) {
        auto &B = out[c.touched[t]];
        for (auto &e : c.entries[t]) {
            B(e.i, e.j) += w * e.v;
            if (e.i != e.j) B(e.j, e.i) += w * e.v;
        }
    }
}

Constraint make_constraint(const std::vector<SymEntry> &coeffs) {
    Constraint c;
    std::vector<SymEntry> sorted = coeffs;
    std::stable_sort(sorted.begin(), sorted.end(), [](auto &a, auto &b) { return a.block < b.block; });
    for (auto &e : sorted) {
        if (e.v == 0) continue;
        if (c.touched.empty() || c.touched.back() != e.block) {
            c.touched.push_back(e.block);
            c.entries.emplace_back();
        }
        c.entries.back().push_back(e);
    }
    return c;
}

Blocks zeros(const std::vector<std::size_t> &n) {
    Blocks b;
    for (auto k : n) b.push_back(RealMatrix::Zero(k, k));
    return b;
}

double dot(const Blocks &a, const Blocks &b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
    return s;
}

double fro(const Blocks &a) { return std::sqrt(dot(a, a)); }

RealMatrix sym(const RealMatrix &m) { return 0.5 * (m + m.transpose()); }

// Largest alpha with X + alpha dX PSD, given the Cholesky factor of X.
double max_step(const RealMatrix &L, const RealMatrix &dX) {
    RealMatrix t = L.triangularView<Eigen::Lower>().solve(dX);
    RealMatrix m = L.triangularView<Eigen::Lower>().solve(t.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(m), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    return lo >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

struct Scaling {
    RealMatrix G, Ginv, W, Lx;
    RealVector d;
};

bool nt_scaling(const RealMatrix &X, const RealMatrix &S, Scaling &sc) {
    Eigen::LLT<RealMatrix> cx(X), cs(S);
    if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) return false;
    RealMatrix Lx = cx.matrixL(), Ls = cs.matrixL();
    Eigen::JacobiSVD<RealMatrix> svd(Ls.transpose() * Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sc.d = svd.singularValues();
    if (sc.d.minCoeff() <= 0) return false;
    RealVector isq = sc.d.cwiseSqrt().cwiseInverse();
    sc.G = Lx * svd.matrixV() * isq.asDiagonal();
    sc.Ginv = sc.d.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
              Lx.triangularView<Eigen::Lower>().solve(RealMatrix::Identity(X.rows(), X.cols()));
    sc.W = sc.G * sc.G.transpose();
    sc.Lx = Lx;
    return true;
}

struct Presolved {
    std::vector<std::size_t> kept;
    std::size_t dropped = 0;
};

Presolved presolve(const SDPProblem &p) {
    std::vector<std::size_t> offset(p.blocks.size() + 1, 0);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) offset[b + 1] = offset[b] + p.blocks[b] * (p.blocks[b] + 1) / 2;
    const auto m = static_cast<Eigen::Index>(p.equalities.size());
    Presolved out;
    if (m == 0) return out;
    RealMatrix At = RealMatrix::Zero(static_cast<Eigen::Index>(offset.back()), m);
    for (Eigen::Index k = 0; k < m; ++k)
        for (auto &e : p.equalities[k].coeffs) {
            const std::size_t n = p.blocks[e.block];
            // column-major packed upper triangle index
            const std::size_t idx = offset[e.block] + e.j * (e.j + 1) / 2 + e.i;
            (void)n;
            At(static_cast<Eigen::Index>(idx), k) += (e.i == e.j ? 1.0 : std::sqrt(2.0)) * e.v;
        }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(At);
    qr.setThreshold(1e-10);
    const auto r = qr.rank();
    for (Eigen::Index k = 0; k < r; ++k) out.kept.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(k)));
    std::sort(out.kept.begin(), out.kept.end());
    out.dropped = static_cast<std::size_t>(m - r);
    return out;
}

}  // namespace

SDPSolution solve(const SDPProblem &p, double tol, int max_iter) {
    SolverOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return solve(p, o);
}

SDPSolution solve(const SDPProblem &p, const SolverOptions &opt) {
    p.validate();
    const auto &nb = p.blocks;
    const std::size_t nblk = nb.size();
    std::size_t ntot = 0;
    for (auto n : nb) ntot += n;
    if (ntot > 1000) throw ArgumentError("SDP too large for the dense solver (total dimension > 1000)");

    SDPSolution sol;
    auto pre = presolve(p);
    sol.dropped_rows = pre.dropped;
    std::vector<Constraint> A;
    std::vector<double> bvec;
    for (auto k : pre.kept) {
        A.push_back(make_constraint(p.equalities[k].coeffs));
        bvec.push_back(p.equalities[k].rhs);
    }
    const auto m = static_cast<Eigen::Index>(A.size());
    RealVector b = Eigen::Map<RealVector>(bvec.data(), m);
    Blocks C = zeros(nb);
    add_scaled(C, make_constraint(p.objective), 1.0);

    // Identity-multiple start sized by the data norms.
    Blocks X = zeros(nb), S = zeros(nb);
    for (std::size_t bk = 0; bk < nblk; ++bk) {
        const double n = static_cast<double>(nb[bk]);
        double xi = std::max(10.0, std::sqrt(n)), eta = std::max(10.0, std::sqrt(n));
        eta = std::max(eta, C[bk].norm());
        for (Eigen::Index k = 0; k < m; ++k) {
            double na = 0;
            const auto &c = A[k];
            for (std::size_t t = 0; t < c.touched.size(); ++t)
                if (c.touched[t] == bk)
                    for (auto &e : c.entries[t]) na += (e.i == e.j ? 1.0 : 2.0) * e.v * e.v;
            na = std::sqrt(na);
            if (na == 0) continue;
            xi = std::max(xi, std::sqrt(n) * (1 + std::abs(b(k))) / (1 + na));
            eta = std::max(eta, na);
        }
        X[bk] = xi * RealMatrix::Identity(nb[bk], nb[bk]);
        S[bk] = eta * RealMatrix::Identity(nb[bk], nb[bk]);
    }
    RealVector y = RealVector::Zero(m);

    auto Aop = [&](const Blocks &Y) {
        RealVector r(m);
        for (Eigen::Index k = 0; k < m; ++k) r(k) = inner(A[k], Y);
        return r;
    };
    auto ATop = [&](const RealVector &v) {
        Blocks out = zeros(nb);
        for (Eigen::Index k = 0; k < m; ++k)
            if (v(k) != 0) add_scaled(out, A[k], v(k));
        return out;
    };

    const double nrm_b = b.size() ? b.norm() : 0.0, nrm_c = fro(C);
    int stall = 0;
    bool finished = false;
    sol.status = SdpStatus::max_iter;
    std::vector<Scaling> sc(nblk);
    for (int it = 0; it < opt.max_iter; ++it) {
        sol.iterations = it;
        RealVector rp = b - Aop(X);
        Blocks ATy = ATop(y);
        Blocks Rd = zeros(nb);
        for (std::size_t k = 0; k < nblk; ++k) Rd[k] = C[k] - S[k] - ATy[k];
        const double pobj = dot(C, X), dobj = m ? b.dot(y) : 0.0;
        const double xs = dot(X, S);
        const double mu = xs / static_cast<double>(ntot);
        const double pinf = rp.size() ? rp.norm() / (1 + nrm_b) : 0.0;
        const double dinf = fro(Rd) / (1 + nrm_c);
        const double scale = std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));
        if (pinf <= opt.tol && dinf <= opt.tol && std::abs(pobj - dobj) <= opt.tol * scale && xs <= opt.tol * scale) {
            sol.status = SdpStatus::optimal;
            finished = true;
            break;
        }
        // Primal infeasibility: y / b'y approaches a dual ray.
        if (dobj > 0) {
            Blocks ray = zeros(nb);
            for (std::size_t k = 0; k < nblk; ++k) ray[k] = C[k] - Rd[k];
            if (fro(ray) / dobj < opt.tol) {
                sol.status = SdpStatus::infeasible;
                finished = true;
                break;
            }
        }
        // Dual infeasibility: X approaches a primal ray.
        if (pobj < 0 && rp.size() && (b - rp).norm() / -pobj < opt.tol && fro(X) > 1e8) {
            sol.status = SdpStatus::infeasible;
            finished = true;
            break;
        }

        bool ok = true;
        for (std::size_t k = 0; k < nblk && ok; ++k) ok = nt_scaling(X[k], S[k], sc[k]);
        if (!ok) {
            sol.status = SdpStatus::numerical_failure;
            break;
        }

        // Schur complement M_ij = sum_b <A_i, W A_j W>.
        RealMatrix M = RealMatrix::Zero(m, m);
        std::vector<std::vector<RealMatrix>> WAW(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto &c = A[i];
            WAW[i].resize(c.touched.size());
            for (std::size_t t = 0; t < c.touched.size(); ++t) {
                const auto bk = c.touched[t];
                RealMatrix Ad = RealMatrix::Zero(nb[bk], nb[bk]);
                for (auto &e : c.entries[t]) {
                    Ad(e.i, e.j) += e.v;
                    if (e.i != e.j) Ad(e.j, e.i) += e.v;
                }
                WAW[i][t] = sc[bk].W * Ad * sc[bk].W;
            }
        }
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                double s = 0;
                const auto &ci = A[i], &cj = A[j];
                for (std::size_t ti = 0; ti < ci.touched.size(); ++ti)
                    for (std::size_t tj = 0; tj < cj.touched.size(); ++tj) {
                        if (ci.touched[ti] != cj.touched[tj]) continue;
                        const auto &B = WAW[i][ti];
                        for (auto &e : cj.entries[tj]) s += (e.i == e.j ? 1.0 : 2.0) * e.v * B(e.i, e.j);
                    }
                M(i, j) = M(j, i) = s;
            }
        // Near a degenerate optimum M loses definiteness to rounding; retry with a
        // small diagonal shift before giving up.
        Eigen::LLT<RealMatrix> chol(M);
        const double mdiag = m ? M.diagonal().cwiseAbs().maxCoeff() : 0.0;
        for (double shift = 1e-14; chol.info() != Eigen::Success && shift <= 1e-8; shift *= 100) {
            RealMatrix Mr = M;
            Mr.diagonal().array() += shift * std::max(mdiag, 1.0);
            chol.compute(Mr);
        }
        if (chol.info() != Eigen::Success) {
            sol.status = SdpStatus::numerical_failure;
            break;
        }
        auto schur_solve = [&](const RealVector &r) -> RealVector { return chol.solve(r); };

        // Search direction for a scaled complementarity target H (per block).
        auto direction = [&](const Blocks &H, Blocks &dX, RealVector &dy, Blocks &dS) {
            Blocks GHG(nblk), WRW(nblk);
            for (std::size_t k = 0; k < nblk; ++k) {
                GHG[k] = sc[k].G * H[k] * sc[k].G.transpose();
                WRW[k] = sc[k].W * Rd[k] * sc[k].W;
            }
            RealVector rhs = rp - Aop(GHG) + Aop(WRW);
            dy = m ? schur_solve(rhs) : RealVector();
            Blocks ATdy = ATop(dy);
            dS.resize(nblk);
            dX.resize(nblk);
            for (std::size_t k = 0; k < nblk; ++k) {
                dS[k] = sym(Rd[k] - ATdy[k]);
                dX[k] = sym(GHG[k] - sc[k].W * dS[k] * sc[k].W);
            }
        };
        auto steps = [&](const Blocks &dX, const Blocks &dS, double frac, double &ap, double &ad) {
            double sp = std::numeric_limits<double>::infinity(), sd = sp;
            for (std::size_t k = 0; k < nblk; ++k) {
                sp = std::min(sp, max_step(sc[k].Lx, dX[k]));
                Eigen::LLT<RealMatrix> cs(S[k]);
                RealMatrix Ls = cs.matrixL();
                sd = std::min(sd, max_step(Ls, dS[k]));
            }
            ap = std::min(1.0, frac * sp);
            ad = std::min(1.0, frac * sd);
        };

        // Predictor.
        Blocks H(nblk);
        for (std::size_t k = 0; k < nblk; ++k) H[k] = RealMatrix((-sc[k].d).asDiagonal());
        Blocks dXp, dSp, dX, dS;
        RealVector dyp, dy;
        direction(H, dXp, dyp, dSp);
        double ap, ad;
        steps(dXp, dSp, 1.0, ap, ad);
        double xs_aff = 0;
        for (std::size_t k = 0; k < nblk; ++k)
            xs_aff += (X[k] + ap * dXp[k]).cwiseProduct(S[k] + ad * dSp[k]).sum();
        const double mu_aff = xs_aff / static_cast<double>(ntot);
        const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

        // Corrector.
        for (std::size_t k = 0; k < nblk; ++k) {
            const auto &s = sc[k];
            RealMatrix dXt = s.Ginv * dXp[k] * s.Ginv.transpose();
            RealMatrix dSt = s.G.transpose() * dSp[k] * s.G;
            RealMatrix Rc = -sym(dXt * dSt);
            for (Eigen::Index i = 0; i < Rc.rows(); ++i) Rc(i, i) += sigma * mu - s.d(i) * s.d(i);
            RealMatrix Hk(Rc.rows(), Rc.cols());
            for (Eigen::Index i = 0; i < Rc.rows(); ++i)
                for (Eigen::Index j = 0; j < Rc.cols(); ++j) Hk(i, j) = 2 * Rc(i, j) / (s.d(i) + s.d(j));
            H[k] = Hk;
        }
        direction(H, dX, dy, dS);
        steps(dX, dS, opt.step_fraction, ap, ad);
        for (std::size_t k = 0; k < nblk; ++k) {
            X[k] = sym(X[k] + ap * dX[k]);
            S[k] = sym(S[k] + ad * dS[k]);
        }
        if (m) y += ad * dy;
        stall = (ap < 1e-10 && ad < 1e-10) ? stall + 1 : 0;
        if (stall >= 5) {
            sol.status = SdpStatus::numerical_failure;
            break;
        }
        sol.iterations = it + 1;
    }
    (void)finished;

    // Final report against every original (including dropped) row.
    sol.X = X;
    sol.S = S;
    sol.y = RealVector::Zero(static_cast<Eigen::Index>(p.equalities.size()));
    for (std::size_t k = 0; k < pre.kept.size(); ++k) sol.y(static_cast<Eigen::Index>(pre.kept[k])) = y(k);
    sol.primal_value = dot(C, X);
    sol.dual_value = m ? b.dot(y) : 0.0;
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
    sol.max_residual = 0;
    for (auto &q : p.equalities)
        sol.max_residual = std::max(sol.max_residual, std::abs(inner(make_constraint(q.coeffs), X) - q.rhs));
    sol.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (auto &B : X) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(B, Eigen::EigenvaluesOnly);
        sol.min_eigenvalue = std::min(sol.min_eigenvalue, es.eigenvalues()(0));
    }
    if (sol.status == SdpStatus::optimal) {
        const double scale = std::max(1.0, 0.5 * (std::abs(sol.primal_value) + std::abs(sol.dual_value)));
        if (sol.max_residual > opt.tol * std::max(1.0, 1 + nrm_b)) sol.status = SdpStatus::infeasible;
        else if (sol.gap > opt.tol * scale || sol.min_eigenvalue < -opt.tol) sol.status = SdpStatus::numerical_failure;
    }
    return sol;
}

}  // namespace qcert
