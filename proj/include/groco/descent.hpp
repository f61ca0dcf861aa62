#pragma once

#include <map>
#include <vector>

#include "groco/matrix.hpp"
#include "groco/sset.hpp"

namespace groco {

/* ---------- cochains of level functions ----------
   C^n(X) = functions on the full level set (degenerate simplices included),
   with the alternating-sum coboundary. */
inline QMat sset_delta(const TruncatedSSet& X, int n) {
    if (n + 1 > X.cap) throw DomainError("coboundary needs one level above the degree");
    QMat d((int)X.level(n + 1).size(), (int)X.level(n).size());
    int r = 0;
    for (const auto& x : X.level(n + 1)) {
        for (int i = 0; i <= n + 1; ++i)
            d.add_at(r, X.level_index(n, X.face_of(x, i)), i % 2 == 0 ? Rat(1) : Rat(-1));
        ++r;
    }
    return d;
}

inline QMat sset_pullback(const SimplicialMap& f, int n) {
    QMat p((int)f.dom->level(n).size(), (int)f.cod->level(n).size());
    int r = 0;
    for (const auto& x : f.dom->level(n)) p.add_at(r++, f.cod->level_index(n, f.apply(x)), Rat(1));
    return p;
}

inline std::vector<int> sset_cohomology_dims(const TruncatedSSet& X, int max_degree) {
    if (max_degree + 1 > X.cap)
        throw DomainError("cohomology needs one level above the top degree");
    std::vector<int> ranks(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n) ranks[n] = rank_of(sset_delta(X, n));
    std::vector<int> dims(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n)
        dims[n] = (int)X.level(n).size() - ranks[n] - (n ? ranks[n - 1] : 0);
    return dims;
}

/* ---------- transfer along a simple hypercover ----------
   A simple hypercover admits a canonical fiberwise-uniform transfer on
   level functions: weight 1/|fiber| at the single non-bijective stage,
   products of stage weights above it via the fibered-product structure.
   The verifier builds the transfer, the cylinder homotopy, and checks the
   four identities exactly. */
struct DescentReport {
    int stage = 0;               // the non-bijective matching level
    bool trivial = false;        // every matching map bijective
    bool injective_alpha = true; // index maps used for the product weights
    std::vector<QMat> transfer;  // per degree: C(dom) -> C(cod)
    std::vector<QMat> homotopy;  // homotopy[n]: C^n(dom) -> C^{n-1}(dom)
    bool section_ok = false;     // transfer after pullback is the identity
    bool chain_map_ok = false;   // transfer commutes with the coboundaries
    bool homotopy_ok = false;    // 1 - pullback transfer = d h + h d
    bool dims_ok = false;        // cohomology dimensions agree
    std::vector<int> dims_dom, dims_cod;
    std::vector<std::map<long long, long long>> fiber_hist;  // size -> count

    bool all_ok() const { return section_ok && chain_map_ok && homotopy_ok && dims_ok; }
};

namespace detail {

inline std::vector<int> val_key(const SimplexVal& v) {
    std::vector<int> k;
    encode_val(k, v);
    return k;
}

}  // namespace detail

inline DescentReport descent_verify(const SimplicialMap& f, int max_degree) {
    const int D = max_degree;
    const int top = D + 1;
    if (top > f.dom->cap || top > f.cod->cap)
        throw DomainError("descent check needs one level above the top degree");
    const TruncatedSSet& X = *f.dom;
    const TruncatedSSet& Y = *f.cod;

    SSetMapClass cls = classify_sset_map(f, top);
    if (!cls.is_hypercover())
        throw DomainError("descent transfer is only defined along hypercovers");
    int m = cls.simple_stage();
    if (m == -2)
        throw DomainError(
            "hypercover is not simple; factor it through its coskeleton tower");

    DescentReport rep;
    rep.trivial = m < 0;
    rep.stage = std::max(m, 0);

    rep.fiber_hist.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        std::map<std::vector<int>, long long> count;
        for (const auto& x : X.level(n)) count[detail::val_key(f.apply(x))] += 1;
        for (const auto& [k, c] : count) rep.fiber_hist[n][c] += 1;
    }

    // per-level weights on the domain
    std::vector<std::map<std::vector<int>, Rat>> w(top + 1);
    if (!rep.trivial) {
        for (int n = 0; n <= top; ++n) {
            if (n < m) {
                for (const auto& x : X.level(n)) w[n][detail::val_key(x)] = Rat(1);
            } else if (n == m) {
                std::map<std::vector<int>, long long> fiber;
                for (const auto& x : X.level(m)) fiber[detail::val_key(f.apply(x))] += 1;
                for (const auto& x : X.level(m)) {
                    long long size = fiber.at(detail::val_key(f.apply(x)));
                    w[m][detail::val_key(x)] = Rat(1) / Rat((long)size);
                }
            } else {
                SquareReport sq = simple_square(f, m, n);
                if (!sq.cartesian)
                    throw InternalError("simple hypercover level is not a fibered product");
                if (!sq.injective_alpha) rep.injective_alpha = false;
                auto alphas = sq.injective_alpha ? detail::monotone_injections(m, n)
                                                 : detail::monotone_maps(m, n);
                for (const auto& x : X.level(n)) {
                    Rat prod(1);
                    for (const auto& a : alphas) prod *= w[m].at(detail::val_key(X.eval(x, a)));
                    w[n][detail::val_key(x)] = prod;
                }
            }
        }
    } else {
        for (int n = 0; n <= top; ++n)
            for (const auto& x : X.level(n)) w[n][detail::val_key(x)] = Rat(1);
    }

    // exact mass: the weights integrate to one along every fiber
    for (int n = 0; n <= top; ++n) {
        std::map<std::vector<int>, Rat> mass;
        for (const auto& x : X.level(n))
            mass[detail::val_key(f.apply(x))] += w[n].at(detail::val_key(x));
        for (const auto& [k, v] : mass)
            if (v != 1) throw InternalError("transfer weights do not integrate to one");
        if (mass.size() != Y.level(n).size())
            throw InternalError("hypercover misses part of a level");
    }

    rep.transfer.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        QMat t((int)Y.level(n).size(), (int)X.level(n).size());
        int c = 0;
        for (const auto& x : X.level(n)) {
            t.add_at(Y.level_index(n, f.apply(x)), c, w[n].at(detail::val_key(x)));
            ++c;
        }
        rep.transfer[n] = std::move(t);
    }

    std::vector<QMat> F(top + 1), DX(top), DY(top);
    for (int n = 0; n <= top; ++n) F[n] = sset_pullback(f, n);
    for (int n = 0; n < top; ++n) {
        DX[n] = sset_delta(X, n);
        DY[n] = sset_delta(Y, n);
    }

    rep.section_ok = true;
    for (int n = 0; n <= top; ++n)
        if (!(rep.transfer[n] * F[n] == QMat::identity((int)Y.level(n).size())))
            rep.section_ok = false;
    rep.chain_map_ok = true;
    for (int n = 0; n < top; ++n)
        if (!(DY[n] * rep.transfer[n] == rep.transfer[n + 1] * DX[n]))
            rep.chain_map_ok = false;

    /* cylinder homotopy: relative prisms weighted by the off-bottom stage
       simplices, pushed down along the bottom face with a sign per shuffle */
    rep.homotopy.resize(top + 1);
    rep.homotopy[0] = QMat(0, (int)X.level(0).size());
    for (int q = 0; q <= D; ++q) {
        QMat H((int)X.level(q).size(), (int)X.level(q + 1).size());
        if (!rep.trivial) {
            PosetSSet P = prism_sset(q);
            std::vector<int> bottom(q + 1);
            for (int i = 0; i <= q; ++i) bottom[i] = i;
            int bottom_id = P.find(q, bottom);
            // shuffle chains: bottom up to position j, then the top row
            std::vector<int> shuffle_id(q + 1);
            for (int j = 0; j <= q; ++j) {
                std::vector<int> ch;
                for (int i = 0; i <= j; ++i) ch.push_back(i);
                for (int i = j; i <= q; ++i) ch.push_back(q + 1 + i);
                shuffle_id[j] = P.find(q + 1, ch);
            }
            std::map<std::vector<int>, Rat> mass;
            HomSpace homs = hom_space(P.S, f.dom);
            for (const auto& phi : homs.maps) {
                SimplexVal bottom_val = phi.val[q][bottom_id];
                SimplexVal y = f.apply(bottom_val);
                bool over = true;
                for (int d = 0; d <= P.S->cap && over; ++d)
                    for (int id = 0; id < P.S->n_nondeg(d) && over; ++id) {
                        std::vector<int> proj;
                        for (int v : P.chain_of[d][id]) proj.push_back(v % (q + 1));
                        if (!(f.apply(phi.val[d][id]) ==
                              Y.eval(y, OrdinalMap(q, std::move(proj)))))
                            over = false;
                    }
                if (!over) continue;
                Rat wt(1);
                if (m <= P.S->cap)
                    for (int id = 0; id < P.S->n_nondeg(m); ++id) {
                        bool off_bottom = false;
                        for (int v : P.chain_of[m][id])
                            if (v > q) off_bottom = true;
                        if (off_bottom) wt *= w[m].at(detail::val_key(phi.val[m][id]));
                    }
                mass[detail::val_key(bottom_val)] += wt;
                int row = X.level_index(q, bottom_val);
                for (int j = 0; j <= q; ++j) {
                    int col = X.level_index(q + 1, phi.val[q + 1][shuffle_id[j]]);
                    H.add_at(row, col, j % 2 == 0 ? -wt : wt);
                }
            }
            for (const auto& x : X.level(q)) {
                auto it = mass.find(detail::val_key(x));
                if (it == mass.end())
                    throw InternalError("level simplex bounds no relative prism");
                if (it->second != 1)
                    throw InternalError("prism weights do not integrate to one");
            }
        }
        rep.homotopy[q + 1] = std::move(H);
    }

    rep.homotopy_ok = true;
    for (int n = 0; n <= D; ++n) {
        QMat lhs = QMat::identity((int)X.level(n).size()) - F[n] * rep.transfer[n];
        QMat rhs = rep.homotopy[n + 1] * DX[n];
        if (n >= 1) rhs = rhs + DX[n - 1] * rep.homotopy[n];
        if (!(lhs == rhs)) rep.homotopy_ok = false;
    }

    rep.dims_dom = sset_cohomology_dims(X, D);
    rep.dims_cod = sset_cohomology_dims(Y, D);
    rep.dims_ok = rep.dims_dom == rep.dims_cod;
    return rep;
}

}  // namespace groco
