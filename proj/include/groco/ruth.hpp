#pragma once

#include <map>
#include <memory>
#include <vector>

#include "groco/groupoid.hpp"
#include "groco/homology.hpp"
#include "groco/matrix.hpp"

namespace groco {

/* Graded vector bundle over the objects of a groupoid, degrees in [lo, hi].
   Out-of-range degrees are zero-dimensional. */
struct GradedBundle {
    int lo = 0, hi = 0;
    std::vector<std::vector<int>> dims;  // [object][degree - lo]

    int width() const { return hi - lo; }
    bool operator==(const GradedBundle&) const = default;
    int dim(int obj, int n) const {
        if (n < lo || n > hi) return 0;
        return dims.at(obj).at(n - lo);
    }
};

struct RuthViolation {
    int m = 0;
    NerveChain chain;
    int degree = 0;
    std::string rule;
};

/* Representation up to homotopy: structure operators R_m assign to every
   m-chain g a degree-(m-1) map E(src g) -> E(tgt g), stored blockwise by
   degree.  Absent blocks are zero; R_0 is the fiberwise differential, R_1 the
   quasi-action, R_2 the first homotopy, and so on. */
struct RepUpToHomotopy {
    std::shared_ptr<const FiniteGroupoid> base;
    GradedBundle bundle;
    std::map<int, std::map<NerveChain, std::map<int, QMat>>> blocks;  // m -> chain -> degree
    std::shared_ptr<const RepUpToHomotopy> dual_of;  // set when built by dual_ruth

    int max_m() const { return bundle.width() + 1; }

    QMat block(int m, const NerveChain& g, int n) const {
        int rows = bundle.dim(g.vertex(*base, g.length()), n + m - 1);
        int cols = bundle.dim(g.base, n);
        auto itm = blocks.find(m);
        if (itm != blocks.end()) {
            auto itc = itm->second.find(g);
            if (itc != itm->second.end()) {
                auto itd = itc->second.find(n);
                if (itd != itc->second.end()) {
                    if (itd->second.rows() != rows || itd->second.cols() != cols)
                        throw InputError("stored block has wrong shape");
                    return itd->second;
                }
            }
        }
        return QMat(rows, cols);
    }

    void set_block(int m, const NerveChain& g, int n, QMat mat) {
        if (g.length() != m) throw InputError("chain length disagrees with operator index");
        if (!validate_chain(*base, g).empty()) throw InputError("broken chain in block");
        int rows = bundle.dim(g.vertex(*base, m), n + m - 1);
        int cols = bundle.dim(g.base, n);
        if (mat.rows() != rows || mat.cols() != cols)
            throw InputError("block shape mismatch at m=" + std::to_string(m) +
                             " degree=" + std::to_string(n));
        if (mat.is_zero()) return;  // sparse convention: zero blocks stay absent
        blocks[m][g][n] = std::move(mat);
    }
};

// Trivial one-dimensional representation in degree zero.
inline RepUpToHomotopy trivial_ruth(std::shared_ptr<const FiniteGroupoid> G) {
    RepUpToHomotopy R;
    R.base = std::move(G);
    R.bundle.lo = R.bundle.hi = 0;
    R.bundle.dims.assign(R.base->n_objects(), {1});
    for (int a = 0; a < R.base->n_arrows(); ++a) {
        NerveChain c{R.base->src[a], {a}};
        R.set_block(1, c, 0, QMat::identity(1));
    }
    return R;
}

/* Axiom check.  Normalization: unit chains act as the identity in R_1 and
   kill R_m for m >= 2 on degenerate chains.  Coherence at level m equates the
   alternating sum of R_{m-1} over inner faces with the alternating
   convolution of front/back splittings; levels are checked up to
   2*(width+1), beyond which every term vanishes for shape reasons. */
inline std::vector<RuthViolation> check_ruth(const RepUpToHomotopy& R, int level_cap = -1) {
    std::vector<RuthViolation> out;
    const auto& G = *R.base;
    int width = R.bundle.width();
    int cap = level_cap >= 0 ? level_cap : 2 * (width + 1);
    Nerve nerve(G, cap);

    // stored block shapes (zero-shaped blocks must not carry entries)
    for (const auto& [m, per_chain] : R.blocks)
        for (const auto& [g, per_deg] : per_chain) {
            if (g.length() != m || !validate_chain(G, g).empty()) {
                out.push_back({m, g, 0, "block attached to a broken chain"});
                continue;
            }
            for (const auto& [n, mat] : per_deg) {
                int rows = R.bundle.dim(g.vertex(G, m), n + m - 1);
                int cols = R.bundle.dim(g.base, n);
                if (mat.rows() != rows || mat.cols() != cols)
                    out.push_back({m, g, n, "block shape"});
            }
        }
    if (!out.empty()) return out;

    // normalization
    for (int x = 0; x < G.n_objects(); ++x) {
        NerveChain u{x, {G.unit[x]}};
        for (int n = R.bundle.lo; n <= R.bundle.hi; ++n) {
            if (R.bundle.dim(x, n) == 0) continue;
            if (!(R.block(1, u, n) == QMat::identity(R.bundle.dim(x, n))))
                out.push_back({1, u, n, "unit does not act as identity"});
        }
    }
    for (int m = 2; m <= std::min(cap, width + 1); ++m)
        for (const auto& g : nerve.level(m)) {
            if (!g.degenerate(G)) continue;
            for (int n = R.bundle.lo; n <= R.bundle.hi; ++n)
                if (!R.block(m, g, n).is_zero())
                    out.push_back({m, g, n, "nonzero operator on a degenerate chain"});
        }

    // coherence
    for (int m = 0; m <= cap; ++m)
        for (const auto& g : nerve.level(m))
            for (int n = R.bundle.lo; n <= R.bundle.hi; ++n) {
                int rows = R.bundle.dim(g.vertex(G, m), n + m - 2);
                int cols = R.bundle.dim(g.base, n);
                if (rows == 0 || cols == 0) continue;
                QMat lhs(rows, cols);
                for (int k = 1; k <= m - 1; ++k) {
                    QMat t = R.block(m - 1, chain_face(G, g, k), n);
                    lhs = (k % 2) ? lhs - t : lhs + t;
                }
                QMat rhs(rows, cols);
                for (int k = 0; k <= m; ++k) {
                    QMat front = R.block(k, chain_along(G, g, ordinal_iota(k, m)), n);
                    QMat back = R.block(m - k, chain_along(G, g, ordinal_tau(m - k, m)), n + k - 1);
                    QMat t = back * front;
                    rhs = (k % 2) ? rhs - t : rhs + t;
                }
                if (!(lhs == rhs)) out.push_back({m, g, n, "structure identity"});
            }
    return out;
}

/* Dual representation on the reflected bundle: degree j of the dual is the
   dual of degree -j, and the operator over g is the transpose of the primal
   operator over the inverse chain.  Keeps a handle to the primal so cochain
   differentials over the dual can be cross-checked through it. */
inline RepUpToHomotopy dual_ruth(std::shared_ptr<const RepUpToHomotopy> R) {
    RepUpToHomotopy D;
    D.base = R->base;
    D.bundle.lo = -R->bundle.hi;
    D.bundle.hi = -R->bundle.lo;
    D.bundle.dims.assign(R->base->n_objects(), {});
    for (int x = 0; x < R->base->n_objects(); ++x)
        for (int j = D.bundle.lo; j <= D.bundle.hi; ++j)
            D.bundle.dims[x].push_back(R->bundle.dim(x, -j));
    const auto& G = *R->base;
    for (const auto& [m, per_chain] : R->blocks)
        for (const auto& [g, per_deg] : per_chain) {
            NerveChain gi = chain_inverse(G, g);
            for (const auto& [n, mat] : per_deg) {
                // primal degree n over g^{-1} lands in dual degree j = 1 - n - m
                D.set_block(m, gi, 1 - n - m, mat.transpose());
            }
        }
    D.dual_of = std::move(R);
    return D;
}

// Pullback along a groupoid morphism: fibers and operators transported from
// the image; materializes blocks on all chains of the domain up to width+1.
inline RepUpToHomotopy pullback_ruth(const GroupoidMorphism& f, const RepUpToHomotopy& R) {
    if (f.cod.get() != R.base.get() && !(*f.cod == *R.base))
        throw DomainError("pullback along mismatched morphism");
    RepUpToHomotopy P;
    P.base = f.dom;
    P.bundle.lo = R.bundle.lo;
    P.bundle.hi = R.bundle.hi;
    P.bundle.dims.assign(f.dom->n_objects(), {});
    for (int x = 0; x < f.dom->n_objects(); ++x)
        P.bundle.dims[x] = R.bundle.dims[f.obj_map[x]];
    Nerve nerve(*f.dom, R.max_m());
    for (int m = 0; m <= R.max_m(); ++m)
        for (const auto& g : nerve.level(m)) {
            NerveChain img = apply_morphism(f, g);
            for (int n = R.bundle.lo; n <= R.bundle.hi; ++n) {
                QMat b = R.block(m, img, n);
                if (!b.is_zero()) P.set_block(m, g, n, std::move(b));
            }
        }
    return P;
}

// Degree shift: E[k]_n = E_{n-k}, operators reindexed without sign twists.
inline RepUpToHomotopy shift_ruth(const RepUpToHomotopy& R, int k) {
    RepUpToHomotopy S;
    S.base = R.base;
    S.bundle.lo = R.bundle.lo + k;
    S.bundle.hi = R.bundle.hi + k;
    S.bundle.dims = R.bundle.dims;
    for (const auto& [m, per_chain] : R.blocks)
        for (const auto& [g, per_deg] : per_chain)
            for (const auto& [n, mat] : per_deg) S.set_block(m, g, n + k, mat);
    return S;
}

struct CompleteTwoTermResult {
    bool feasible = false;
    RepUpToHomotopy rep;
    RuthViolation witness;  // meaningful when infeasible
};

/* Completion of two-term data (degrees {1, 0}: fiber differential R_0 and
   quasi-action R_1) to a full representation up to homotopy by solving for
   the homotopies R_2 on nondegenerate 2-chains.  Every occurrence of R_2 in
   the structure identities is linear because composites of two homotopies
   land in degree 2 = 0, so this is one exact linear system.  Returns the
   least-index solution, or the first equation (in canonical chain order) that
   makes the system infeasible. */
inline CompleteTwoTermResult complete_two_term(const RepUpToHomotopy& input) {
    if (input.bundle.lo != 0 || input.bundle.hi != 1)
        throw DomainError("two-term completion expects degrees {1, 0}");
    const auto& G = *input.base;
    CompleteTwoTermResult res;
    res.rep = input;
    res.rep.blocks.erase(2);

    // hard preconditions that involve no unknowns: unit action and m <= 1 identities
    {
        RepUpToHomotopy probe = input;
        probe.blocks.erase(2);
        for (auto& v : check_ruth(probe, 1)) {
            res.feasible = false;
            res.witness = v;
            return res;
        }
    }

    Nerve nerve(G, 3);
    // unknown layout: nondegenerate 2-chains, block dim(tgt,1) x dim(src,0)
    std::map<NerveChain, std::pair<int, std::pair<int, int>>> slot;  // chain -> (offset, shape)
    int total = 0;
    for (const auto& g : nerve.level(2)) {
        if (g.degenerate(G)) continue;
        int rows = input.bundle.dim(g.vertex(G, 2), 1);
        int cols = input.bundle.dim(g.base, 0);
        if (rows * cols == 0) continue;
        slot[g] = {total, {rows, cols}};
        total += rows * cols;
    }
    auto unknown_col = [&](const NerveChain& g, int r, int c) -> int {
        auto it = slot.find(g);
        if (it == slot.end()) return -1;  // degenerate or zero-shaped: identically zero
        return it->second.first + r * it->second.second.second + c;
    };

    struct Eq {
        QMat row;  // 1 x total
        Rat rhs;
        int m;
        NerveChain chain;
        int degree;
    };
    std::vector<Eq> eqs;

    // m = 2: R_1 failure of functoriality equals the boundary of R_2
    for (const auto& g : nerve.level(2)) {
        NerveChain g1{g.base, {g.arrows[0]}};
        NerveChain g2{g.vertex(G, 1), {g.arrows[1]}};
        NerveChain d1 = chain_face(G, g, 1);
        int s = g.base, t = g.vertex(G, 2);
        for (int n = 0; n <= 1; ++n) {
            QMat want = input.block(1, g2, n) * input.block(1, g1, n) - input.block(1, d1, n);
            // want = d o R_2 (n = 0) or R_2 o d (n = 1), as matrices on E_n(s) -> E_n(t)
            for (int r = 0; r < want.rows(); ++r)
                for (int c = 0; c < want.cols(); ++c) {
                    Eq e{QMat(1, total), want.at(r, c), 2, g, n};
                    if (n == 0) {
                        QMat del = input.block(0, NerveChain{t, {}}, 1);  // E_1(t) -> E_0(t)
                        for (int k = 0; k < del.cols(); ++k)
                            if (del.at(r, k) != 0) {
                                int u = unknown_col(g, k, c);
                                if (u >= 0) e.row.add_at(0, u, del.at(r, k));
                            }
                    } else {
                        // (R_2 o d)(r, c) = sum_k R_2(r, k) d(k, c)
                        QMat del = input.block(0, NerveChain{s, {}}, 1);  // E_1(s) -> E_0(s)
                        for (int k = 0; k < del.rows(); ++k) {
                            Rat v = del.at(k, c);
                            if (v != 0) {
                                int u = unknown_col(g, r, k);
                                if (u >= 0) e.row.add_at(0, u, v);
                            }
                        }
                    }
                    eqs.push_back(std::move(e));
                }
        }
    }

    // m = 3: coherence of the homotopies across faces, degree 0 only
    for (const auto& g : nerve.level(3)) {
        NerveChain d1 = chain_face(G, g, 1), d2 = chain_face(G, g, 2);
        NerveChain i1 = chain_along(G, g, ordinal_iota(1, 3));
        NerveChain t2 = chain_along(G, g, ordinal_tau(2, 3));
        NerveChain i2 = chain_along(G, g, ordinal_iota(2, 3));
        NerveChain t1 = chain_along(G, g, ordinal_tau(1, 3));
        QMat a1 = input.block(1, i1, 0);  // E_0(x0) -> E_0(x1)
        QMat b1 = input.block(1, t1, 1);  // E_1(x2) -> E_1(x3)
        int rows = input.bundle.dim(g.vertex(G, 3), 1);
        int cols = input.bundle.dim(g.base, 0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                Eq e{QMat(1, total), Rat(0), 3, g, 0};
                auto add_plain = [&](const NerveChain& ch, const Rat& sgn) {
                    int u = unknown_col(ch, r, c);
                    if (u >= 0) e.row.add_at(0, u, sgn);
                };
                add_plain(d1, Rat(-1));
                add_plain(d2, Rat(1));
                // + R_2(t2) a1 : column mix
                for (int k = 0; k < a1.rows(); ++k) {
                    Rat v = a1.at(k, c);
                    if (v != 0) {
                        int u = unknown_col(t2, r, k);
                        if (u >= 0) e.row.add_at(0, u, v);
                    }
                }
                // - b1 R_2(i2) : row mix
                for (int k = 0; k < b1.cols(); ++k) {
                    Rat v = b1.at(r, k);
                    if (v != 0) {
                        int u = unknown_col(i2, k, c);
                        if (u >= 0) e.row.add_at(0, u, -v);
                    }
                }
                eqs.push_back(std::move(e));
            }
    }

    // incremental feasibility scan so the witness is the first bad equation
    detail::IncSpan span;
    QMat amat(static_cast<int>(eqs.size()), total);
    QMat bmat(static_cast<int>(eqs.size()), 1);
    for (size_t i = 0; i < eqs.size(); ++i) {
        QMat::Row aug;
        for (const auto& [c, v] : eqs[i].row.row(0)) aug.push_back({c, v});
        if (eqs[i].rhs != 0) aug.push_back({total, eqs[i].rhs});
        bool indep = span.add(aug);
        if (indep && !span.pivots.empty() && span.pivots.back().front().first == total) {
            res.feasible = false;
            res.witness = {eqs[i].m, eqs[i].chain, eqs[i].degree, "inconsistent equation"};
            return res;
        }
        for (const auto& [c, v] : eqs[i].row.row(0)) amat.set(static_cast<int>(i), c, v);
        bmat.set(static_cast<int>(i), 0, eqs[i].rhs);
    }

    auto x = solve(amat, bmat);
    if (!x) throw InternalError("feasibility scan and solver disagree");
    for (const auto& [g, info] : slot) {
        auto [off, shape] = info;
        QMat blockmat(shape.first, shape.second);
        for (int r = 0; r < shape.first; ++r)
            for (int c = 0; c < shape.second; ++c)
                blockmat.set(r, c, x->at(off + r * shape.second + c, 0));
        res.rep.set_block(2, g, 0, std::move(blockmat));
    }
    res.feasible = true;
    if (!check_ruth(res.rep).empty())
        throw InternalError("completed representation fails its own axioms");
    return res;
}

}  // namespace groco
