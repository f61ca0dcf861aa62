#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "groco/homology.hpp"
#include "groco/ruth.hpp"

namespace groco {

namespace detail {

inline Rat parity_sign(int k) { return ((k % 2) + 2) % 2 == 0 ? Rat(1) : Rat(-1); }

// all chains obtained from g by appending m arrows at the top
inline void extend_chains(const FiniteGroupoid& G, const NerveChain& g, int m,
                          std::vector<NerveChain>& out) {
    if (m == 0) {
        out.push_back(g);
        return;
    }
    int top = g.vertex(G, g.length());
    for (int a = 0; a < G.n_arrows(); ++a) {
        if (G.src[a] != top) continue;
        NerveChain e = g;
        e.arrows.push_back(a);
        extend_chains(G, e, m - 1, out);
    }
}

// chains h one level above g with d_r(h) = g, for 0 <= r <= length(g)
inline std::vector<NerveChain> face_preimages(const FiniteGroupoid& G, const NerveChain& g,
                                              int r) {
    std::vector<NerveChain> out;
    int i = g.length();
    if (r == 0) {
        for (int a = 0; a < G.n_arrows(); ++a) {
            if (G.tgt[a] != g.base) continue;
            NerveChain h{G.src[a], {a}};
            h.arrows.insert(h.arrows.end(), g.arrows.begin(), g.arrows.end());
            out.push_back(h);
        }
    } else {
        // split arrow g_r through a middle object: g_r = c o b over all b out of its source
        int gr = g.arrows[r - 1];
        int from = g.vertex(G, r - 1);
        for (int b = 0; b < G.n_arrows(); ++b) {
            if (G.src[b] != from) continue;
            int c = G.compose(gr, G.inv[b]);
            NerveChain h{g.base, {}};
            h.arrows.assign(g.arrows.begin(), g.arrows.begin() + (r - 1));
            h.arrows.push_back(b);
            h.arrows.push_back(c);
            h.arrows.insert(h.arrows.end(), g.arrows.begin() + r, g.arrows.end());
            out.push_back(h);
        }
    }
    return out;
}

}  // namespace detail

/* Bigraded cochain: component (i, j) assigns to each i-chain a value column in
   degree -j of the fiber over the chain's top vertex.  Total degree n = i+j. */
struct Cochain {
    std::shared_ptr<const RepUpToHomotopy> rep;
    std::map<std::pair<int, int>, std::map<NerveChain, QMat>> comp;

    void add_value(int i, int j, const NerveChain& g, const QMat& v) {
        if (v.rows() == 0) return;
        auto [it, fresh] = comp[{i, j}].try_emplace(g, v);
        if (!fresh) it->second = it->second + v;
    }
    void prune() {
        for (auto it = comp.begin(); it != comp.end();) {
            auto& table = it->second;
            for (auto jt = table.begin(); jt != table.end();)
                jt = jt->second.is_zero() ? table.erase(jt) : std::next(jt);
            it = table.empty() ? comp.erase(it) : std::next(it);
        }
    }
    bool operator==(const Cochain& o) const { return comp == o.comp; }
};

namespace detail {

enum class DiffPath { direct, via_primal };

/* One evaluation path of the degree-raising differential d = sum of d_m.
   For every m the leading term is (-1)^j R_m over the back m-subchain applied
   to the value on the front subchain; m = 1 additionally carries the
   alternating face sum with global sign (-1)^{i+j+1}.  The via_primal path
   rewrites each R-application through the primal representation of a dual:
   apply the primal operator over the inverted back subchain and transpose. */
inline Cochain differential_path(const Cochain& c, DiffPath path) {
    const RepUpToHomotopy& E = *c.rep;
    const RepUpToHomotopy* primal = E.dual_of.get();
    const FiniteGroupoid& G = *E.base;
    Cochain out;
    out.rep = c.rep;
    for (const auto& [ij, table] : c.comp) {
        auto [i, j] = ij;
        for (const auto& [g, v] : table) {
            if (g.length() != i || !validate_chain(G, g).empty())
                throw InputError("cochain component indexed by a broken chain");
            if (v.cols() != 1 ||
                v.rows() != E.bundle.dim(g.vertex(G, i), -j))
                throw InputError("cochain value does not match the fiber");
            Rat sj = parity_sign(j);
            for (int m = 0; m <= E.max_m(); ++m) {
                int j2 = j - m + 1;
                if (-j2 < E.bundle.lo || -j2 > E.bundle.hi) continue;
                std::vector<NerveChain> exts;
                extend_chains(G, g, m, exts);
                for (const NerveChain& h : exts) {
                    NerveChain back = chain_along(G, h, ordinal_tau(m, i + m));
                    QMat op = path == DiffPath::direct
                                  ? E.block(m, back, -j)
                                  : primal->block(m, chain_inverse(G, back), j2).transpose();
                    out.add_value(i + m, j2, h, sj * (op * v));
                }
            }
            Rat s2 = parity_sign(i + j + 1);
            for (int r = 0; r <= i; ++r) {
                Rat sr = parity_sign(r) * s2;
                for (const NerveChain& h : face_preimages(G, g, r))
                    out.add_value(i + 1, j, h, sr * v);
            }
        }
    }
    out.prune();
    return out;
}

}  // namespace detail

// Total differential.  On duals the primal-side evaluation path is run as an
// independent check; disagreement means an internal inconsistency.
inline Cochain differential(const Cochain& c) {
    Cochain d = detail::differential_path(c, detail::DiffPath::direct);
    if (c.rep->dual_of) {
        Cochain d2 = detail::differential_path(c, detail::DiffPath::via_primal);
        if (!(d == d2)) throw InternalError("differential paths disagree on a dual representation");
    }
    return d;
}

/* Scalar cochains (rational-valued functions on chains, by degree) with the
   front/back convolution product, and their action on coefficient cochains. */
using ScalarCochain = std::map<int, std::map<NerveChain, Rat>>;

// (f cup g)(x) = f(back q-subchain) * g(front p-subchain)
inline ScalarCochain cup(const FiniteGroupoid& G, const ScalarCochain& f, const ScalarCochain& g) {
    ScalarCochain out;
    for (const auto& [q, ftab] : f)
        for (const auto& [p, gtab] : g) {
            Nerve nerve(G, q + p);
            for (const NerveChain& x : nerve.level(q + p)) {
                auto itf = ftab.find(chain_along(G, x, ordinal_tau(q, q + p)));
                if (itf == ftab.end()) continue;
                auto itg = gtab.find(chain_along(G, x, ordinal_iota(p, q + p)));
                if (itg == gtab.end()) continue;
                Rat v = itf->second * itg->second;
                if (v != 0) out[q + p][x] += v;
            }
        }
    for (auto it = out.begin(); it != out.end();) {
        auto& tab = it->second;
        for (auto jt = tab.begin(); jt != tab.end();)
            jt = jt->second == 0 ? tab.erase(jt) : std::next(jt);
        it = tab.empty() ? out.erase(it) : std::next(it);
    }
    return out;
}

// (c . f)(x) = c(back q-subchain) scaled by f(front p-subchain)
inline Cochain module_action(const Cochain& c, const ScalarCochain& f) {
    const FiniteGroupoid& G = *c.rep->base;
    Cochain out;
    out.rep = c.rep;
    for (const auto& [ij, table] : c.comp) {
        auto [q, j] = ij;
        for (const auto& [p, ftab] : f) {
            Nerve nerve(G, q + p);
            for (const NerveChain& x : nerve.level(q + p)) {
                auto itc = table.find(chain_along(G, x, ordinal_tau(q, q + p)));
                if (itc == table.end()) continue;
                auto itf = ftab.find(chain_along(G, x, ordinal_iota(p, q + p)));
                if (itf == ftab.end()) continue;
                out.add_value(q + p, j, x, itf->second * itc->second);
            }
        }
    }
    out.prune();
    return out;
}

/* Matrix presentation of the total complex on canonical bases.  Bases exist
   for total degrees lo..cap with lo = -top_degree(E); differentials for
   lo..cap-1, so dimension reports are trustworthy through degree cap-1.
   Basis order: components by chain length i ascending, then chains in nerve
   order, then fiber coordinates. */
struct ComplexBasisElem {
    int i = 0, j = 0;
    NerveChain chain;
    int coord = 0;
};

struct ComplexPresentation {
    std::shared_ptr<const RepUpToHomotopy> rep;
    bool normalized = false;
    int lo = 0, cap = 0;
    std::vector<std::vector<ComplexBasisElem>> basis;
    std::vector<std::map<std::tuple<int, int, NerveChain>, int>> offset;  // -> first column
    std::vector<QMat> d;

    int dim(int n) const {
        if (n < lo || n > cap) return 0;
        return static_cast<int>(basis[n - lo].size());
    }
    // differential out of degree n, zero-shaped at the window edges
    QMat diff(int n) const {
        if (n >= lo && n < cap) return d[n - lo];
        return QMat(dim(n + 1), dim(n));
    }
};

inline ComplexPresentation build_complex(std::shared_ptr<const RepUpToHomotopy> rep, int cap,
                                         bool normalized = false) {
    ComplexPresentation P;
    P.rep = std::move(rep);
    P.normalized = normalized;
    const RepUpToHomotopy& E = *P.rep;
    const FiniteGroupoid& G = *E.base;
    P.lo = -E.bundle.hi;
    P.cap = cap;
    if (cap < P.lo) throw InputError("degree cap below the lowest degree of the complex");

    Nerve nerve(G, cap + E.bundle.hi);
    for (int n = P.lo; n <= cap; ++n) {
        std::vector<ComplexBasisElem> elems;
        std::map<std::tuple<int, int, NerveChain>, int> off;
        for (int i = std::max(0, n + E.bundle.lo); i <= n + E.bundle.hi; ++i) {
            int j = n - i;
            for (const NerveChain& g : nerve.level(i)) {
                if (normalized && g.degenerate(G)) continue;
                int fdim = E.bundle.dim(g.vertex(G, i), -j);
                if (fdim == 0) continue;
                off[{i, j, g}] = static_cast<int>(elems.size());
                for (int c = 0; c < fdim; ++c) elems.push_back({i, j, g, c});
            }
        }
        P.basis.push_back(std::move(elems));
        P.offset.push_back(std::move(off));
    }

    for (int n = P.lo; n < cap; ++n) {
        const auto& from = P.basis[n - P.lo];
        const auto& to_off = P.offset[n + 1 - P.lo];
        QMat D(P.dim(n + 1), P.dim(n));
        for (int col = 0; col < static_cast<int>(from.size()); ++col) {
            const ComplexBasisElem& e = from[col];
            Cochain unit;
            unit.rep = P.rep;
            QMat v(E.bundle.dim(e.chain.vertex(G, e.i), -e.j), 1);
            v.set(e.coord, 0, Rat(1));
            unit.comp[{e.i, e.j}][e.chain] = std::move(v);
            Cochain image = differential(unit);
            for (const auto& [ij, table] : image.comp) {
                auto [i2, j2] = ij;
                for (const auto& [h, val] : table) {
                    if (normalized && h.degenerate(G)) {
                        if (!val.is_zero())
                            throw InternalError(
                                "normalized differential leaks onto a degenerate chain");
                        continue;
                    }
                    auto it = to_off.find({i2, j2, h});
                    if (it == to_off.end()) throw InternalError("differential image misses the basis");
                    for (int r = 0; r < val.rows(); ++r)
                        if (val.at(r, 0) != 0) D.set(it->second + r, col, val.at(r, 0));
                }
            }
        }
        P.d.push_back(std::move(D));
    }
    return P;
}

// coordinates of a cochain's degree-n part in the presentation basis
inline QMat coordinates_of(const ComplexPresentation& P, const Cochain& c, int n) {
    QMat x(P.dim(n), 1);
    for (const auto& [ij, table] : c.comp) {
        auto [i, j] = ij;
        if (i + j != n) continue;
        for (const auto& [g, v] : table) {
            if (v.is_zero()) continue;
            auto it = P.offset[n - P.lo].find({i, j, g});
            if (it == P.offset[n - P.lo].end())
                throw DomainError("cochain is supported outside the presentation basis");
            for (int r = 0; r < v.rows(); ++r) x.set(it->second + r, 0, v.at(r, 0));
        }
    }
    return x;
}

// cochain with the given coordinate column in degree n
inline Cochain cochain_from_coordinates(const ComplexPresentation& P, const QMat& x, int n) {
    if (x.rows() != P.dim(n) || x.cols() != 1)
        throw DomainError("coordinate column does not match the basis");
    Cochain c;
    c.rep = P.rep;
    for (int r = 0; r < x.rows(); ++r) {
        if (x.at(r, 0) == 0) continue;
        const ComplexBasisElem& e = P.basis[n - P.lo][r];
        int fdim = P.rep->bundle.dim(e.chain.vertex(*P.rep->base, e.i), -e.j);
        QMat v(fdim, 1);
        v.set(e.coord, 0, x.at(r, 0));
        c.add_value(e.i, e.j, e.chain, v);
    }
    return c;
}

// dim H^n for n in [lo, cap-1]; validates d o d = 0 on the way
inline std::map<int, int> cohomology_dims(const ComplexPresentation& P) {
    std::map<int, int> dims;
    for (int n = P.lo; n < P.cap; ++n) dims[n] = cohomology_dim(P.diff(n - 1), P.diff(n));
    return dims;
}

inline std::map<int, int> cohomology_dims(std::shared_ptr<const RepUpToHomotopy> rep, int cap,
                                          bool normalized = false) {
    return cohomology_dims(build_complex(std::move(rep), cap, normalized));
}

/* Restriction along a groupoid morphism: cochains pull back by precomposition
   with the chain image, fibers identified via the pulled-back bundle.  The
   result records the degreewise matrices, checks they commute with the
   differentials, and tests whether every induced map on cohomology through
   degree cap-1 is bijective. */
struct PullbackMapResult {
    ComplexPresentation source, target;
    std::vector<QMat> maps;  // per degree lo..cap
    std::map<int, bool> bijective;
    bool quasi_iso = false;
};

inline PullbackMapResult pullback_map(const GroupoidMorphism& f,
                                      std::shared_ptr<const RepUpToHomotopy> R, int cap,
                                      bool normalized = false) {
    if (!validate_morphism(f).empty()) throw InputError("pullback along an invalid morphism");
    PullbackMapResult res;
    auto P = std::make_shared<RepUpToHomotopy>(pullback_ruth(f, *R));
    res.source = build_complex(std::move(R), cap, normalized);
    res.target = build_complex(std::move(P), cap, normalized);

    for (int n = res.source.lo; n <= cap; ++n) {
        const auto& rows = res.target.basis[n - res.target.lo];
        const auto& src_off = res.source.offset[n - res.source.lo];
        QMat M(res.target.dim(n), res.source.dim(n));
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            const ComplexBasisElem& e = rows[r];
            auto it = src_off.find({e.i, e.j, apply_morphism(f, e.chain)});
            if (it != src_off.end()) M.set(r, it->second + e.coord, Rat(1));
        }
        res.maps.push_back(std::move(M));
    }

    for (int n = res.source.lo; n < cap; ++n) {
        int k = n - res.source.lo;
        if (!(res.maps[k + 1] * res.source.d[k] == res.target.d[k] * res.maps[k]))
            throw InternalError("restriction map fails to commute with the differential");
    }

    res.quasi_iso = true;
    for (int n = res.source.lo; n < cap; ++n) {
        auto ind = induced_cohomology_map(res.source.diff(n - 1), res.source.diff(n),
                                          res.target.diff(n - 1), res.target.diff(n),
                                          res.maps[n - res.source.lo]);
        res.bijective[n] = ind.bijective;
        res.quasi_iso = res.quasi_iso && ind.bijective;
    }
    return res;
}

}  // namespace groco
