#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "groco/cochain.hpp"

namespace groco {

/* Semi-direct product of a finite groupoid with a nonnegatively graded
   coefficient system: a simplicial vector bundle over the nerve whose level-n
   fiber splits over the injective monotone 0-preserving index maps [k] -> [n].
   This header builds the bundle with explicit face and degeneracy matrices,
   the complex of fiberwise-linear cochains with its structured differential,
   the projectable subcomplex and its identification with coefficient-valued
   cochains, and the regularity filtration together with the homotopy operator
   that contracts it stage by stage. */

/* ---------- index bookkeeping ---------- */

// alpha equals the inclusion of an initial segment.
inline bool regular_index(const OrdinalMap& a) {
    for (int i = 0; i <= a.source_size; ++i)
        if (a(i) != i) return false;
    return true;
}

// alpha(i) = i for every i <= min(k, m): no gap before position m + 1.
inline bool m_regular_index(const OrdinalMap& a, int m) {
    int q = std::min(a.source_size, m);
    for (int i = 0; i <= q; ++i)
        if (a(i) != i) return false;
    return true;
}

// Size of the gap of alpha just after position m (zero when alpha stops there).
inline int index_gap(const OrdinalMap& a, int m) {
    return a.source_size >= m + 1 ? a(m + 1) - (m + 1) : 0;
}

/* ---------- the bundle ---------- */

struct SdpLevel {
    int n = 0;
    std::vector<OrdinalMap> index_list;
    std::vector<std::vector<int>> offset;  // per chain, per index: block start
    std::vector<int> fiber_dim;            // per chain
    std::vector<int> chain_offset;         // start of each chain's block in the
    int total_dim = 0;                     // whole-level coordinate space

    int index_pos(const OrdinalMap& a) const {
        auto it = std::lower_bound(index_list.begin(), index_list.end(), a);
        if (it == index_list.end() || !(*it == a)) return -1;
        return static_cast<int>(it - index_list.begin());
    }
    // index block containing a fiber coordinate of the given chain
    const OrdinalMap& index_at(int chain_idx, int col) const {
        const auto& off = offset.at(chain_idx);
        for (size_t ai = 0; ai < index_list.size(); ++ai) {
            int hi = ai + 1 < off.size() ? off[ai + 1] : fiber_dim.at(chain_idx);
            if (off[ai] <= col && col < hi) return index_list[ai];
        }
        throw InternalError("fiber coordinate outside every index block");
    }
};

struct SdpBundle {
    std::shared_ptr<const RepUpToHomotopy> rep;
    std::shared_ptr<const RepUpToHomotopy> dual;
    Nerve nerve;
    int cap = 0;
    std::vector<SdpLevel> levels;
    // face_mat[n][i][chain] : fiber(n, chain) -> fiber(n-1, d_i chain)
    std::vector<std::vector<std::vector<QMat>>> face_mat;
    // degen_mat[n][j][chain] : fiber(n, chain) -> fiber(n+1, s_j chain)
    std::vector<std::vector<std::vector<QMat>>> degen_mat;

    const SdpLevel& level(int n) const { return levels.at(n); }
    const QMat& face(int n, int i, int chain_idx) const {
        return face_mat.at(n).at(i).at(chain_idx);
    }
    const QMat& degeneracy(int n, int j, int chain_idx) const {
        return degen_mat.at(n).at(j).at(chain_idx);
    }
};

namespace detail {

inline void add_block_scaled(QMat& M, int r0, int c0, const QMat& b, const Rat& s) {
    for (int i = 0; i < b.rows(); ++i)
        for (const auto& [j, v] : b.row(i)) M.add_at(r0 + i, c0 + j, s * v);
}

inline void add_identity_block(QMat& M, int r0, int c0, int d, const Rat& s) {
    for (int t = 0; t < d; ++t) M.add_at(r0 + t, c0 + t, s);
}

}  // namespace detail

/* The level-n fiber over a chain g is the direct sum over indices alpha of the
   degree-k coefficient space at vertex alpha(k) of g.  Faces and degeneracies
   act by index composition on coordinates; the bottom face additionally folds
   in the structure operators: for a target index beta of size l,

     (d_0 v)_beta = (-1)^l sum_k R_{l+1-k} over the back window of beta'
                    applied to v at beta' iota_k,
                    minus sum_{r=1..l} (-1)^r v at beta' delta_r,

   every read through a non-admissible index being zero. */
inline SdpBundle sdp_build(std::shared_ptr<const RepUpToHomotopy> rep, int cap) {
    if (!rep) throw InputError("sdp_build requires a coefficient system");
    if (rep->bundle.lo < 0)
        throw DomainError(
            "semi-direct product requires coefficient degrees >= 0; "
            "apply shift_ruth first");
    if (cap < 0) throw InputError("sdp_build cap must be nonnegative");
    SdpBundle V;
    V.rep = std::move(rep);
    V.dual = std::make_shared<RepUpToHomotopy>(dual_ruth(V.rep));
    V.cap = cap;
    V.nerve = Nerve(*V.rep->base, cap);
    const FiniteGroupoid& G = *V.rep->base;
    const GradedBundle& B = V.rep->bundle;

    V.levels.resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
        SdpLevel& L = V.levels[n];
        L.n = n;
        L.index_list = sdp_indices(n);
        const auto& chains = V.nerve.level(n);
        L.offset.resize(chains.size());
        L.fiber_dim.resize(chains.size());
        L.chain_offset.resize(chains.size());
        for (size_t ci = 0; ci < chains.size(); ++ci) {
            int off = 0;
            L.offset[ci].resize(L.index_list.size());
            for (size_t ai = 0; ai < L.index_list.size(); ++ai) {
                const OrdinalMap& a = L.index_list[ai];
                L.offset[ci][ai] = off;
                off += B.dim(chains[ci].vertex(G, a(a.source_size)), a.source_size);
            }
            L.fiber_dim[ci] = off;
            L.chain_offset[ci] = L.total_dim;
            L.total_dim += off;
        }
    }

    V.face_mat.resize(cap + 1);
    for (int n = 1; n <= cap; ++n) {
        const SdpLevel& Ls = V.levels[n];
        const SdpLevel& Lt = V.levels[n - 1];
        const auto& chains = V.nerve.level(n);
        V.face_mat[n].assign(n + 1, std::vector<QMat>(chains.size()));
        for (size_t ci = 0; ci < chains.size(); ++ci) {
            const NerveChain& g = chains[ci];
            for (int i = 0; i <= n; ++i) {
                NerveChain fg = chain_face(G, g, i);
                int fci = V.nerve.index_of(n - 1, fg);
                QMat M(Lt.fiber_dim[fci], Ls.fiber_dim[ci]);
                for (size_t bi = 0; bi < Lt.index_list.size(); ++bi) {
                    const OrdinalMap& beta = Lt.index_list[bi];
                    int l = beta.source_size;
                    int bdim = B.dim(fg.vertex(G, beta(l)), l);
                    if (bdim == 0) continue;
                    auto pos = [&](const OrdinalMap& a) {
                        int si = Ls.index_pos(a);
                        if (si < 0) throw InternalError("face read misses the index set");
                        return si;
                    };
                    if (i > 0) {
                        int si = pos(compose(beta, ordinal_delta(i, n)));
                        detail::add_identity_block(M, Lt.offset[fci][bi],
                                                   Ls.offset[ci][si], bdim, Rat(1));
                        continue;
                    }
                    OrdinalMap bp = ordinal_prime(beta);
                    Rat sl = detail::parity_sign(l);
                    for (int k = 0; k <= l + 1; ++k) {
                        int mm = l + 1 - k;
                        NerveChain back =
                            chain_along(G, g, compose(ordinal_tau(mm, l + 1), bp));
                        QMat R = V.rep->block(mm, back, k);
                        if (R.is_zero()) continue;
                        int si = pos(compose(ordinal_iota(k, l + 1), bp));
                        detail::add_block_scaled(M, Lt.offset[fci][bi],
                                                 Ls.offset[ci][si], R, sl);
                    }
                    for (int r = 1; r <= l; ++r) {
                        int si = pos(compose(ordinal_delta(r, l + 1), bp));
                        detail::add_identity_block(M, Lt.offset[fci][bi],
                                                   Ls.offset[ci][si], bdim,
                                                   -detail::parity_sign(r));
                    }
                }
                V.face_mat[n][i][ci] = std::move(M);
            }
        }
    }

    V.degen_mat.resize(cap + 1);
    for (int n = 0; n < cap; ++n) {
        const SdpLevel& Ls = V.levels[n];
        const SdpLevel& Lt = V.levels[n + 1];
        const auto& chains = V.nerve.level(n);
        V.degen_mat[n].assign(n + 1, std::vector<QMat>(chains.size()));
        for (size_t ci = 0; ci < chains.size(); ++ci) {
            const NerveChain& g = chains[ci];
            for (int j = 0; j <= n; ++j) {
                NerveChain sg = chain_degeneracy(G, g, j);
                int sci = V.nerve.index_of(n + 1, sg);
                QMat M(Lt.fiber_dim[sci], Ls.fiber_dim[ci]);
                for (size_t bi = 0; bi < Lt.index_list.size(); ++bi) {
                    const OrdinalMap& beta = Lt.index_list[bi];
                    OrdinalMap src = compose(beta, ordinal_sigma(j, n));
                    if (!src.is_sdp_index()) continue;
                    int k = beta.source_size;
                    int bdim = B.dim(sg.vertex(G, beta(k)), k);
                    if (bdim == 0) continue;
                    int si = Ls.index_pos(src);
                    if (si < 0) throw InternalError("degeneracy read misses the index set");
                    detail::add_identity_block(M, Lt.offset[sci][bi],
                                               Ls.offset[ci][si], bdim, Rat(1));
                }
                V.degen_mat[n][j][ci] = std::move(M);
            }
        }
    }
    return V;
}

/* ---------- simplicial identity audit ---------- */

struct SdpViolation {
    std::string identity;
    NerveChain chain;
    OrdinalMap alpha;  // index block of the first disagreeing source coordinate
};

namespace detail {

inline std::optional<int> first_diff_col(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return 0;
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            if (a.at(i, j) != b.at(i, j)) return j;
    return std::nullopt;
}

}  // namespace detail

inline std::optional<SdpViolation> verify_simplicial_identities(const SdpBundle& V,
                                                                int cap = -1) {
    if (cap < 0 || cap > V.cap) cap = V.cap;
    auto report = [&](const std::string& id, int n, int ci, int col) {
        return SdpViolation{id, V.nerve.level(n).at(ci), V.level(n).index_at(ci, col)};
    };
    for (int n = 0; n <= cap; ++n) {
        const auto& chains = V.nerve.level(n);
        for (size_t ci = 0; ci < chains.size(); ++ci) {
            const NerveChain& g = chains[ci];
            // d_i d_j = d_{j-1} d_i for i < j
            if (n >= 2)
                for (int j = 1; j <= n; ++j) {
                    int cj = V.nerve.index_of(n - 1, chain_face(*V.nerve.G, g, j));
                    for (int i = 0; i < j; ++i) {
                        int cif = V.nerve.index_of(n - 1, chain_face(*V.nerve.G, g, i));
                        QMat lhs = V.face(n - 1, i, cj) * V.face(n, j, (int)ci);
                        QMat rhs = V.face(n - 1, j - 1, cif) * V.face(n, i, (int)ci);
                        if (auto col = detail::first_diff_col(lhs, rhs))
                            return report("d" + std::to_string(i) + " d" + std::to_string(j),
                                          n, (int)ci, *col);
                    }
                }
            // s_i s_j = s_{j+1} s_i for i <= j
            if (n + 2 <= cap)
                for (int j = 0; j <= n; ++j) {
                    int cj = V.nerve.index_of(n + 1, chain_degeneracy(*V.nerve.G, g, j));
                    for (int i = 0; i <= j; ++i) {
                        int cis = V.nerve.index_of(n + 1, chain_degeneracy(*V.nerve.G, g, i));
                        QMat lhs = V.degeneracy(n + 1, i, cj) * V.degeneracy(n, j, (int)ci);
                        QMat rhs = V.degeneracy(n + 1, j + 1, cis) * V.degeneracy(n, i, (int)ci);
                        if (auto col = detail::first_diff_col(lhs, rhs))
                            return report("s" + std::to_string(i) + " s" + std::to_string(j),
                                          n, (int)ci, *col);
                    }
                }
            // d_i s_j: identity when i = j, j+1; shifted degeneracy otherwise
            if (n + 1 <= cap)
                for (int j = 0; j <= n; ++j) {
                    int cj = V.nerve.index_of(n + 1, chain_degeneracy(*V.nerve.G, g, j));
                    for (int i = 0; i <= n + 1; ++i) {
                        QMat lhs = V.face(n + 1, i, cj) * V.degeneracy(n, j, (int)ci);
                        QMat rhs;
                        if (i == j || i == j + 1) {
                            rhs = QMat::identity(V.level(n).fiber_dim[ci]);
                        } else if (i < j) {
                            int cf = V.nerve.index_of(n - 1, chain_face(*V.nerve.G, g, i));
                            rhs = V.degeneracy(n - 1, j - 1, cf) * V.face(n, i, (int)ci);
                        } else {
                            int cf = V.nerve.index_of(n - 1, chain_face(*V.nerve.G, g, i - 1));
                            rhs = V.degeneracy(n - 1, j, cf) * V.face(n, i - 1, (int)ci);
                        }
                        std::string id = "d" + std::to_string(i) + " s" + std::to_string(j);
                        if (auto col = detail::first_diff_col(lhs, rhs))
                            return report(id, n, (int)ci, *col);
                    }
                }
        }
    }
    return std::nullopt;
}

/* ---------- linear cochains ---------- */

struct LinearCochain {
    int n = 0;
    // index -> chain -> row functional on the degree-k block at vertex alpha(k)
    std::map<OrdinalMap, std::map<NerveChain, QMat>> comp;

    void add_value(const OrdinalMap& a, const NerveChain& g, const QMat& v) {
        if (v.cols() == 0) return;
        auto [it, fresh] = comp[a].try_emplace(g, v);
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
    std::set<OrdinalMap> support() const {
        std::set<OrdinalMap> s;
        for (const auto& [a, table] : comp)
            for (const auto& [g, v] : table)
                if (!v.is_zero()) {
                    s.insert(a);
                    break;
                }
        return s;
    }
    bool operator==(const LinearCochain& o) const { return n == o.n && comp == o.comp; }
};

namespace detail {

inline void lin_validate(const SdpBundle& V, const LinearCochain& c) {
    if (c.n < 0 || c.n > V.cap)
        throw InputError("linear cochain level outside the built bundle");
    const FiniteGroupoid& G = *V.rep->base;
    const GradedBundle& B = V.rep->bundle;
    for (const auto& [a, table] : c.comp) {
        if (a.target_size != c.n || !a.is_sdp_index())
            throw InputError("linear cochain component at a non-admissible index");
        for (const auto& [g, v] : table) {
            if (g.length() != c.n || !validate_chain(G, g).empty())
                throw InputError("linear cochain component over an invalid chain");
            int d = B.dim(g.vertex(G, a(a.source_size)), a.source_size);
            if (v.rows() != 1 || v.cols() != d)
                throw InputError("linear cochain component has the wrong shape");
        }
    }
}

inline QMat row_segment(const QMat& row, int off, int d) {
    QMat s(1, d);
    for (int t = 0; t < d; ++t) {
        Rat v = row.at(0, off + t);
        if (v != 0) s.set(0, t, v);
    }
    return s;
}

}  // namespace detail

// Row of all fiber coordinates of c over one chain of its level.
inline QMat lin_row(const SdpBundle& V, const LinearCochain& c, int chain_idx) {
    const SdpLevel& L = V.level(c.n);
    QMat row(1, L.fiber_dim.at(chain_idx));
    const NerveChain& g = V.nerve.level(c.n).at(chain_idx);
    for (const auto& [a, table] : c.comp) {
        auto it = table.find(g);
        if (it == table.end()) continue;
        int ai = L.index_pos(a);
        for (int t = 0; t < it->second.cols(); ++t) {
            Rat v = it->second.at(0, t);
            if (v != 0) row.add_at(0, L.offset[chain_idx][ai] + t, v);
        }
    }
    return row;
}

inline void lin_scatter_row(const SdpBundle& V, int n, int chain_idx, const QMat& row,
                            LinearCochain& out) {
    const SdpLevel& L = V.level(n);
    const NerveChain& g = V.nerve.level(n).at(chain_idx);
    for (size_t ai = 0; ai < L.index_list.size(); ++ai) {
        int off = L.offset[chain_idx][ai];
        int hi = ai + 1 < L.index_list.size() ? L.offset[chain_idx][ai + 1]
                                              : L.fiber_dim[chain_idx];
        if (hi == off) continue;
        QMat seg = detail::row_segment(row, off, hi - off);
        if (!seg.is_zero()) out.add_value(L.index_list[ai], g, seg);
    }
}

// Whole-level coordinate column of a cochain (basis order: chains, then blocks).
inline QMat lin_to_column(const SdpBundle& V, const LinearCochain& c) {
    const SdpLevel& L = V.level(c.n);
    QMat col(L.total_dim, 1);
    for (size_t ci = 0; ci < V.nerve.level(c.n).size(); ++ci) {
        QMat row = lin_row(V, c, static_cast<int>(ci));
        for (const auto& [j, v] : row.row(0)) col.set(L.chain_offset[ci] + j, 0, v);
    }
    return col;
}

inline LinearCochain lin_from_column(const SdpBundle& V, int n, const QMat& col) {
    const SdpLevel& L = V.level(n);
    if (col.rows() != L.total_dim || col.cols() != 1)
        throw InputError("coordinate column has the wrong length");
    LinearCochain out;
    out.n = n;
    for (size_t ci = 0; ci < V.nerve.level(n).size(); ++ci) {
        QMat row(1, L.fiber_dim[ci]);
        for (int t = 0; t < L.fiber_dim[ci]; ++t) {
            Rat v = col.at(L.chain_offset[ci] + t, 0);
            if (v != 0) row.set(0, t, v);
        }
        lin_scatter_row(V, n, static_cast<int>(ci), row, out);
    }
    return out;
}

inline LinearCochain lin_add(const LinearCochain& a, const LinearCochain& b) {
    LinearCochain out = a;
    for (const auto& [al, table] : b.comp)
        for (const auto& [g, v] : table) out.add_value(al, g, v);
    out.prune();
    return out;
}

inline LinearCochain lin_scale(const Rat& s, const LinearCochain& c) {
    LinearCochain out;
    out.n = c.n;
    if (s == 0) return out;
    for (const auto& [a, table] : c.comp)
        for (const auto& [g, v] : table) out.add_value(a, g, s * v);
    out.prune();
    return out;
}

/* Differential of a linear cochain.  Two independent evaluation paths are
   computed on every call: the alternating pullback through the stored face
   matrices, and the graded decomposition whose m-th piece twists the value on
   d_0 of the chain by the m-th structure operator over the back window of the
   primed index (the m = 1 piece additionally carries the face sum).  The two
   results must agree exactly. */
inline LinearCochain lin_delta(const SdpBundle& V, const LinearCochain& c) {
    detail::lin_validate(V, c);
    int n = c.n;
    if (n + 1 > V.cap)
        throw DomainError("bundle capped below the level needed by the differential");
    const FiniteGroupoid& G = *V.rep->base;

    LinearCochain faces_path;
    faces_path.n = n + 1;
    const auto& chains1 = V.nerve.level(n + 1);
    for (size_t ci = 0; ci < chains1.size(); ++ci) {
        const NerveChain& h = chains1[ci];
        QMat acc(1, V.level(n + 1).fiber_dim[ci]);
        for (int r = 0; r <= n + 1; ++r) {
            int fci = V.nerve.index_of(n, chain_face(G, h, r));
            QMat row = lin_row(V, c, fci);
            if (row.is_zero()) continue;
            acc = acc + detail::parity_sign(r) * (row * V.face(n + 1, r, (int)ci));
        }
        if (!acc.is_zero()) lin_scatter_row(V, n + 1, (int)ci, acc, faces_path);
    }
    faces_path.prune();

    LinearCochain graded_path;
    graded_path.n = n + 1;
    for (const auto& [beta, table] : c.comp) {
        int j = beta.source_size;
        OrdinalMap bp = ordinal_prime(beta);  // [j+1] -> [n+1]
        for (size_t ci = 0; ci < chains1.size(); ++ci) {
            const NerveChain& h = chains1[ci];
            NerveChain d0h = chain_face(G, h, 0);
            auto v0 = table.find(d0h);
            if (v0 != table.end() && !v0->second.is_zero()) {
                for (int m = 0; m <= j + 1; ++m) {
                    if (m == 1) continue;
                    NerveChain back =
                        chain_along(G, h, compose(ordinal_tau(m, j + 1), bp));
                    QMat R = V.rep->block(m, back, j - m + 1);
                    if (R.is_zero()) continue;
                    graded_path.add_value(compose(ordinal_iota(j - m + 1, j + 1), bp),
                                          h, detail::parity_sign(j) * (v0->second * R));
                }
                for (int r = 1; r <= j; ++r)
                    graded_path.add_value(compose(ordinal_delta(r, j + 1), bp), h,
                                          detail::parity_sign(r - 1) * v0->second);
                NerveChain back1 = chain_along(G, h, compose(ordinal_tau(1, j + 1), bp));
                QMat R1 = V.rep->block(1, back1, j);
                graded_path.add_value(compose(ordinal_iota(j, j + 1), bp), h,
                                      detail::parity_sign(j) * (v0->second * R1));
            }
            for (int r = 1; r <= n + 1; ++r) {
                auto vr = table.find(chain_face(G, h, r));
                if (vr == table.end() || vr->second.is_zero()) continue;
                graded_path.add_value(compose(beta, ordinal_delta(r, n + 1)), h,
                                      detail::parity_sign(r) * vr->second);
            }
        }
    }
    graded_path.prune();

    if (!(faces_path == graded_path))
        throw InternalError("linear differential paths disagree");
    return faces_path;
}

// Columns are images of the coordinate basis; both evaluation paths vouch for
// every entry because the columns are produced by lin_delta.
inline QMat lin_delta_matrix(const SdpBundle& V, int n) {
    const SdpLevel& Ls = V.level(n);
    const SdpLevel& Lt = V.level(n + 1);
    QMat D(Lt.total_dim, Ls.total_dim);
    for (int col = 0; col < Ls.total_dim; ++col) {
        QMat x(Ls.total_dim, 1);
        x.set(col, 0, Rat(1));
        QMat y = lin_to_column(V, lin_delta(V, lin_from_column(V, n, x)));
        for (int i = 0; i < y.rows(); ++i) {
            Rat v = y.at(i, 0);
            if (v != 0) D.set(i, col, v);
        }
    }
    return D;
}

/* ---------- the projectable subcomplex and its coefficient model ---------- */

namespace detail {

inline void require_dual_input(const SdpBundle& V, const Cochain& c) {
    const RepUpToHomotopy& D = *c.rep;
    bool ok = D.dual_of && (D.dual_of.get() == V.rep.get() ||
                            (*D.dual_of->base == *V.rep->base &&
                             D.dual_of->bundle == V.rep->bundle));
    if (!ok)
        throw DomainError("expected a cochain valued in the dual of the bundled coefficients");
}

// Chain with the first q arrows replaced by units at vertex q.
inline NerveChain unitify_first(const FiniteGroupoid& G, const NerveChain& g, int q) {
    int n = g.length();
    std::vector<int> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = std::max(i, q);
    return chain_along(G, g, OrdinalMap(n, std::move(v)));
}

inline QMat lin_value(const SdpBundle& V, const LinearCochain& c, const OrdinalMap& a,
                      const NerveChain& g) {
    int d = V.rep->bundle.dim(g.vertex(*V.rep->base, a(a.source_size)), a.source_size);
    auto it = c.comp.find(a);
    if (it != c.comp.end()) {
        auto jt = it->second.find(g);
        if (jt != it->second.end()) return jt->second;
    }
    return QMat(1, d);
}

}  // namespace detail

/* Bidegree-(i, j) values over the dual coefficients become homogeneous linear
   cochains of type iota_j at level i + j: the value over a chain g is the
   input's value over the chain obtained by discarding the first j arrows of g
   and inverting the remaining ones in reverse order. */
inline LinearCochain lambda(const SdpBundle& V, const Cochain& c) {
    detail::require_dual_input(V, c);
    const FiniteGroupoid& G = *V.rep->base;
    const GradedBundle& B = V.rep->bundle;
    Cochain cc = c;
    cc.prune();
    int n = -1;
    for (const auto& [key, table] : cc.comp) {
        int total = key.first + key.second;
        if (key.first < 0 || key.second < 0)
            throw DomainError("expected nonnegative bidegrees");
        if (n >= 0 && total != n)
            throw DomainError("expected a cochain concentrated in one total degree");
        n = total;
    }
    LinearCochain out;
    out.n = std::max(n, 0);
    if (n < 0) return out;
    if (n > V.cap) throw DomainError("bundle capped below the cochain's total degree");
    for (const auto& [key, table] : cc.comp) {
        auto [i, j] = key;
        for (const auto& [h, v] : table)
            if (v.cols() != 1 || v.rows() != B.dim(h.vertex(G, i), j))
                throw InputError("cochain value has the wrong shape");
        OrdinalMap down = ordinal_iota(i, n);
        for (const auto& g : V.nerve.level(n)) {
            NerveChain tg = chain_along(G, chain_inverse(G, g), down);
            auto it = table.find(tg);
            if (it == table.end() || it->second.is_zero()) continue;
            out.add_value(ordinal_iota(j, n), g, it->second.transpose());
        }
    }
    out.prune();
    return out;
}

struct ProjectabilityFlags {
    bool regular_support = false;
    bool projectable = false;
};

struct MRegularityFlags {
    bool m_regular = false;
    bool m_projectable = false;
};

/* Both predicates are computed twice: directly (the differential keeps the
   support condition) and through the equivariance characterization (each
   component is unchanged when the first min(k, m) arrows are replaced by
   units).  The two routes must agree. */
inline MRegularityFlags m_regularity(const SdpBundle& V, const LinearCochain& c, int m) {
    detail::lin_validate(V, c);
    if (m < 0) throw DomainError("regularity stage must be nonnegative");
    const FiniteGroupoid& G = *V.rep->base;
    LinearCochain cc = c;
    cc.prune();
    MRegularityFlags out;
    out.m_regular = true;
    for (const auto& a : cc.support())
        if (!m_regular_index(a, m)) out.m_regular = false;
    if (!out.m_regular) return out;

    LinearCochain dc = lin_delta(V, cc);
    bool direct = true;
    for (const auto& a : dc.support())
        if (!m_regular_index(a, m)) direct = false;

    bool character = true;
    for (const auto& [a, table] : cc.comp) {
        int q = std::min(a.source_size, m);
        for (const auto& g : V.nerve.level(cc.n))
            if (!(detail::lin_value(V, cc, a, g) ==
                  detail::lin_value(V, cc, a, detail::unitify_first(G, g, q))))
                character = false;
    }
    if (direct != character)
        throw InternalError("regularity characterization disagrees with the direct check");
    out.m_projectable = direct;
    return out;
}

inline ProjectabilityFlags projectability(const SdpBundle& V, const LinearCochain& c) {
    detail::lin_validate(V, c);
    const FiniteGroupoid& G = *V.rep->base;
    LinearCochain cc = c;
    cc.prune();
    ProjectabilityFlags out;
    out.regular_support = true;
    for (const auto& a : cc.support())
        if (!regular_index(a)) out.regular_support = false;
    if (!out.regular_support) return out;

    LinearCochain dc = lin_delta(V, cc);
    bool direct = true;
    for (const auto& a : dc.support())
        if (!regular_index(a)) direct = false;

    bool character = true;
    for (const auto& [a, table] : cc.comp)
        for (const auto& g : V.nerve.level(cc.n))
            if (!(detail::lin_value(V, cc, a, g) ==
                  detail::lin_value(V, cc, a, detail::unitify_first(G, g, a.source_size))))
                character = false;
    if (direct != character)
        throw InternalError("projectability characterization disagrees with the direct check");
    out.projectable = direct;
    return out;
}

/* Inverse of lambda on projectable cochains: the type-iota_k component does
   not depend on the first k arrows, so its value on the canonical
   representative (k units below the reversed-and-inverted chain) descends to
   a bidegree-(n-k, k) value over the dual coefficients. */
inline Cochain lambda_inverse(const SdpBundle& V, const LinearCochain& c) {
    auto flags = projectability(V, c);
    if (!flags.projectable) throw DomainError("cochain is not projectable");
    const FiniteGroupoid& G = *V.rep->base;
    LinearCochain cc = c;
    cc.prune();
    Cochain out;
    out.rep = V.dual;
    int n = cc.n;
    for (const auto& [a, table] : cc.comp) {
        int k = a.source_size;
        int i = n - k;
        for (const auto& h : V.nerve.level(i)) {
            NerveChain rep_chain;
            int top = h.vertex(G, i);
            rep_chain.base = top;
            rep_chain.arrows.assign(k, G.unit[top]);
            for (int r = i - 1; r >= 0; --r)
                rep_chain.arrows.push_back(G.inv[h.arrows[r]]);
            auto it = table.find(rep_chain);
            if (it == table.end() || it->second.is_zero()) continue;
            out.add_value(i, k, h, it->second.transpose());
        }
    }
    out.prune();
    return out;
}

/* ---------- the regularity filtration ---------- */

// Largest gap after position m in the support (how far c is from stage m+1).
inline int lin_defect(const LinearCochain& c, int m) {
    int best = 0;
    LinearCochain cc = c;
    cc.prune();
    for (const auto& a : cc.support()) best = std::max(best, index_gap(a, m));
    return best;
}

// [n+1] -> [n]: identity below m, then m -> n, then shift down; for n <= m
// the last-vertex collapse.  The non-monotone middle step travels backwards
// along the chain, which is meaningful because the groupoid has inverses.
inline OrdinalMap eta_map(int m, int n) {
    if (n <= m) return ordinal_sigma(n, n);
    std::vector<int> v(n + 2);
    for (int i = 0; i <= n + 1; ++i) v[i] = i < m ? i : (i == m ? n : i - 1);
    return OrdinalMap(n, std::move(v));
}

struct HImage {
    NerveChain chain;  // the level-(n+1) chain the homotopy lands over
    QMat mat;          // fiber(n, g) -> fiber(n+1, that chain)
};

/* Homotopy operator at stage m: a vector over (alpha, g) with alpha ending
   above m is sent, with sign (-1)^{m+1}, to the same vector placed at index
   delta_{m+1} alpha over the chain reindexed along eta; all other blocks die. */
inline HImage h_matrix(const SdpBundle& V, int m, int n, int chain_idx) {
    if (n + 1 > V.cap)
        throw DomainError("bundle capped below the level needed by the homotopy");
    if (m < 0) throw DomainError("regularity stage must be nonnegative");
    const FiniteGroupoid& G = *V.rep->base;
    const GradedBundle& B = V.rep->bundle;
    const NerveChain& g = V.nerve.level(n).at(chain_idx);
    NerveChain ge = chain_along(G, g, eta_map(m, n), true);
    int gei = V.nerve.index_of(n + 1, ge);
    const SdpLevel& Ls = V.level(n);
    const SdpLevel& Lt = V.level(n + 1);
    QMat M(Lt.fiber_dim[gei], Ls.fiber_dim[chain_idx]);
    Rat sign = detail::parity_sign(m + 1);
    for (size_t ai = 0; ai < Ls.index_list.size(); ++ai) {
        const OrdinalMap& a = Ls.index_list[ai];
        int k = a.source_size;
        if (a(k) <= m) continue;
        int d = B.dim(g.vertex(G, a(k)), k);
        if (d == 0) continue;
        int ti = Lt.index_pos(compose(a, ordinal_delta(m + 1, n + 1)));
        if (ti < 0) throw InternalError("homotopy target misses the index set");
        detail::add_identity_block(M, Lt.offset[gei][ti], Ls.offset[chain_idx][ai], d,
                                   sign);
    }
    return {ge, M};
}

// Degree -1 operator pairing a level-(n+1) cochain with the homotopy.
inline LinearCochain h_star(const SdpBundle& V, const LinearCochain& c, int m) {
    detail::lin_validate(V, c);
    if (c.n < 1) throw DomainError("degree too low for the homotopy pairing");
    LinearCochain out;
    out.n = c.n - 1;
    for (size_t ci = 0; ci < V.nerve.level(out.n).size(); ++ci) {
        HImage H = h_matrix(V, m, out.n, static_cast<int>(ci));
        QMat row = lin_row(V, c, V.nerve.index_of(c.n, H.chain)) * H.mat;
        if (!row.is_zero()) lin_scatter_row(V, out.n, static_cast<int>(ci), row, out);
    }
    out.prune();
    return out;
}

struct RegularizeResult {
    LinearCochain image;   // c twisted by the homotopy: one smoothing step
    LinearCochain h_term;  // the homotopy pairing of c itself (the primitive
    int defect_before = 0;  // increment when c is closed)
    int defect_after = 0;
};

/* One application of the smoothing map id + h-pairing of the differential +
   differential of the h-pairing.  Requires an m-projectable input; the image
   stays m-projectable and its defect strictly drops while positive. */
inline RegularizeResult regularize(const SdpBundle& V, const LinearCochain& c, int m) {
    auto fl = m_regularity(V, c, m);
    if (!fl.m_projectable)
        throw DomainError("regularize expects a cochain whose differential keeps "
                          "its regularity stage");
    RegularizeResult res;
    res.defect_before = lin_defect(c, m);
    LinearCochain dc = lin_delta(V, c);
    LinearCochain acc = c;
    acc.prune();
    if (dc.n >= 1) acc = lin_add(acc, h_star(V, dc, m));
    res.h_term.n = std::max(c.n - 1, 0);
    if (c.n >= 1) {
        res.h_term = h_star(V, c, m);
        acc = lin_add(acc, lin_delta(V, res.h_term));
    }
    res.image = std::move(acc);
    res.defect_after = lin_defect(res.image, m);
    for (const auto& a : res.image.support())
        if (!m_regular_index(a, m))
            throw InternalError("smoothing left the regularity stage");
    if (res.defect_before > 0 && res.defect_after >= res.defect_before)
        throw InternalError("smoothing failed to decrease the defect");
    return res;
}

struct RegularizeIteratedResult {
    LinearCochain image;      // the fully smoothed cochain
    LinearCochain primitive;  // sum of the per-step homotopy pairings: for a
    int iterations = 0;       // closed input, image - input = d(primitive)
};

inline RegularizeIteratedResult regularize_iterated(const SdpBundle& V,
                                                    const LinearCochain& c, int m,
                                                    int iterations = -1) {
    if (iterations < 0) iterations = c.n;
    RegularizeIteratedResult out;
    out.iterations = iterations;
    out.primitive.n = std::max(c.n - 1, 0);
    LinearCochain cur = c;
    cur.prune();
    for (int t = 0; t < iterations; ++t) {
        RegularizeResult step = regularize(V, cur, m);
        out.primitive = lin_add(out.primitive, step.h_term);
        cur = std::move(step.image);
    }
    out.image = std::move(cur);
    return out;
}

/* ---------- filtration cohomology ---------- */

namespace detail {

// Columns spanning the level-n cochains with admissible support whose
// differential keeps admissible support.  good(alpha) picks the stage.
template <class Pred>
QMat stage_basis(const SdpBundle& V, const QMat& Dn, int n, Pred good) {
    const SdpLevel& Ls = V.level(n);
    const SdpLevel& Lt = V.level(n + 1);
    std::vector<int> good_cols;
    for (size_t ci = 0; ci < V.nerve.level(n).size(); ++ci)
        for (int t = 0; t < Ls.fiber_dim[ci]; ++t)
            if (good(Ls.index_at(static_cast<int>(ci), t)))
                good_cols.push_back(Ls.chain_offset[ci] + t);
    QMat J(Ls.total_dim, static_cast<int>(good_cols.size()));
    for (size_t k = 0; k < good_cols.size(); ++k) J.set(good_cols[k], (int)k, Rat(1));

    std::vector<int> bad_rows;
    for (size_t ci = 0; ci < V.nerve.level(n + 1).size(); ++ci)
        for (int t = 0; t < Lt.fiber_dim[ci]; ++t)
            if (!good(Lt.index_at(static_cast<int>(ci), t)))
                bad_rows.push_back(Lt.chain_offset[ci] + t);
    QMat DJ = Dn * J;
    QMat A(static_cast<int>(bad_rows.size()), DJ.cols());
    for (size_t i = 0; i < bad_rows.size(); ++i)
        for (const auto& [j, v] : DJ.row(bad_rows[i])) A.set((int)i, j, v);
    return J * rank_and_kernel(A).kernel;
}

// Cohomology dims of the subcomplex spanned by the stage bases.
inline std::vector<int> stage_dims(const std::vector<QMat>& basis,
                                   const std::vector<QMat>& D, int upto) {
    std::vector<QMat> X(upto + 1);
    for (int n = 0; n <= upto; ++n) {
        auto sol = solve(basis[n + 1], D[n] * basis[n]);
        if (!sol) throw InternalError("differential leaves the filtration stage");
        X[n] = *sol;
    }
    std::vector<int> dims(upto + 1);
    for (int n = 0; n <= upto; ++n) {
        QMat prev = n == 0 ? QMat(basis[0].cols(), 0) : X[n - 1];
        dims[n] = cohomology_dim(prev, X[n]);
    }
    return dims;
}

}  // namespace detail

struct FiltrationTable {
    int cap = 0;
    std::map<int, std::vector<int>> rows;  // stage m -> dims for n = 0..cap-1
    std::vector<int> lin_row;              // full linear complex
    std::vector<int> proj_row;             // projectable subcomplex
};

/* Cohomology of every filtration stage, of the full linear complex, and of
   the projectable subcomplex, in degrees below cap.  Stage subspaces are cut
   out as kernels: admissible support plus the linear conditions that the
   differential keep admissible support. */
inline FiltrationTable filtration_cohomology(std::shared_ptr<const RepUpToHomotopy> rep,
                                             int cap) {
    if (cap < 1) throw InputError("filtration table needs cap >= 1");
    SdpBundle V = sdp_build(std::move(rep), cap + 1);
    std::vector<QMat> D(cap + 1);
    for (int n = 0; n <= cap; ++n) D[n] = lin_delta_matrix(V, n);

    FiltrationTable table;
    table.cap = cap;
    table.lin_row.resize(cap);
    for (int n = 0; n < cap; ++n) {
        QMat prev = n == 0 ? QMat(D[0].cols(), 0) : D[n - 1];
        table.lin_row[n] = cohomology_dim(prev, D[n]);
    }

    auto run = [&](auto good) {
        std::vector<QMat> basis(cap + 1);
        for (int n = 0; n <= cap; ++n)
            basis[n] = detail::stage_basis(V, D[n], n, good);
        return detail::stage_dims(basis, D, cap - 1);
    };
    for (int m = 0; m <= cap; ++m)
        table.rows[m] = run([m](const OrdinalMap& a) { return m_regular_index(a, m); });
    table.proj_row = run([](const OrdinalMap& a) { return regular_index(a); });
    return table;
}

/* ---------- base change ---------- */

struct SdpPullbackResult {
    SdpBundle bundle;  // semi-direct product over the domain groupoid
    bool cartesian = false;
    bool linear_hypercover = false;
};

/* The semi-direct product of the pulled-back coefficients is levelwise the
   fiber product of the domain nerve with the original bundle: over each
   domain chain the fiber is coordinate-for-coordinate the fiber over the
   image chain, and all structure matrices coincide.  Verified entrywise. */
inline SdpPullbackResult sdp_pullback(const GroupoidMorphism& f,
                                      std::shared_ptr<const RepUpToHomotopy> R,
                                      int cap) {
    auto errs = validate_morphism(f);
    if (!errs.empty()) throw InputError("invalid morphism: " + errs.front());
    auto P = std::make_shared<RepUpToHomotopy>(pullback_ruth(f, *R));
    SdpPullbackResult out{sdp_build(P, cap)};
    SdpBundle W = sdp_build(std::move(R), cap);
    const SdpBundle& U = out.bundle;
    for (int n = 0; n <= cap; ++n) {
        const auto& chains = U.nerve.level(n);
        for (size_t ci = 0; ci < chains.size(); ++ci) {
            NerveChain img = apply_morphism(f, chains[ci]);
            int wi = W.nerve.index_of(n, img);
            bool ok = U.level(n).fiber_dim[ci] == W.level(n).fiber_dim[wi] &&
                      U.level(n).offset[ci] == W.level(n).offset[wi];
            for (int i = 0; ok && n >= 1 && i <= n; ++i)
                ok = U.face(n, i, (int)ci) == W.face(n, i, wi);
            for (int j = 0; ok && n < cap && j <= n; ++j)
                ok = U.degeneracy(n, j, (int)ci) == W.degeneracy(n, j, wi);
            if (!ok)
                throw InternalError("semi-direct product failed to commute with base change");
        }
    }
    out.cartesian = true;
    out.linear_hypercover = classify_morphism(f).hypercover();
    return out;
}

/* ---------- polynomial cochains ---------- */

struct PolyCochain {
    int n = 0;
    int r = 0;  // fiberwise-homogeneous polynomial degree
    // chain -> sorted coordinate multiset of size r -> coefficient
    std::map<NerveChain, std::map<std::vector<int>, Rat>> coeff;

    Rat eval(const NerveChain& g, const std::vector<Rat>& w) const {
        auto it = coeff.find(g);
        if (it == coeff.end()) return Rat(0);
        Rat total(0);
        for (const auto& [mono, cc] : it->second) {
            Rat term = cc;
            for (int p : mono) term *= w.at(p);
            total += term;
        }
        return total;
    }
};

namespace detail {

// Sorted multisets of size r over {0..dim-1}, lex order.
inline std::vector<std::vector<int>> monomials(int dim, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == r) {
            out.push_back(cur);
            return;
        }
        for (int p = start; p < dim; ++p) {
            cur.push_back(p);
            self(self, p);
            cur.pop_back();
        }
    };
    if (r == 0)
        out.push_back({});
    else
        rec(rec, 0);
    return out;
}

/* Matrix of substitution: a degree-r functional on the target of F becomes a
   degree-r functional on the source.  Rows and columns run over the monomial
   bases of the source and target coordinate spaces. */
inline QMat sym_pullback(const QMat& F, int r) {
    auto src = monomials(F.cols(), r);
    auto tgt = monomials(F.rows(), r);
    std::map<std::vector<int>, int> src_pos;
    for (size_t i = 0; i < src.size(); ++i) src_pos[src[i]] = static_cast<int>(i);
    QMat T(static_cast<int>(src.size()), static_cast<int>(tgt.size()));
    for (size_t mj = 0; mj < tgt.size(); ++mj) {
        // expand the product of the linear forms rows tgt[mj] of F
        std::map<std::vector<int>, Rat> expanded{{{}, Rat(1)}};
        for (int p : tgt[mj]) {
            std::map<std::vector<int>, Rat> next;
            for (const auto& [mono, cc] : expanded)
                for (const auto& [q, v] : F.row(p)) {
                    std::vector<int> m2 = mono;
                    m2.insert(std::upper_bound(m2.begin(), m2.end(), q), q);
                    next[m2] += cc * v;
                }
            expanded = std::move(next);
        }
        for (const auto& [mono, cc] : expanded)
            if (cc != 0) T.add_at(src_pos.at(mono), static_cast<int>(mj), cc);
    }
    return T;
}

// Alternating-sum differential on degree-r polynomial cochains at level n.
inline QMat poly_delta_matrix(const SdpBundle& V, int n, int r) {
    const FiniteGroupoid& G = *V.rep->base;
    std::vector<int> src_off(V.nerve.level(n).size() + 1, 0);
    for (size_t ci = 0; ci < V.nerve.level(n).size(); ++ci)
        src_off[ci + 1] =
            src_off[ci] + static_cast<int>(monomials(V.level(n).fiber_dim[ci], r).size());
    std::vector<int> tgt_off(V.nerve.level(n + 1).size() + 1, 0);
    for (size_t ci = 0; ci < V.nerve.level(n + 1).size(); ++ci)
        tgt_off[ci + 1] =
            tgt_off[ci] +
            static_cast<int>(monomials(V.level(n + 1).fiber_dim[ci], r).size());
    QMat D(tgt_off.back(), src_off.back());
    for (size_t ci = 0; ci < V.nerve.level(n + 1).size(); ++ci) {
        const NerveChain& h = V.nerve.level(n + 1)[ci];
        for (int rf = 0; rf <= n + 1; ++rf) {
            int fci = V.nerve.index_of(n, chain_face(G, h, rf));
            QMat T = sym_pullback(V.face(n + 1, rf, (int)ci), r);
            add_block_scaled(D, tgt_off[ci], src_off[fci], T, parity_sign(rf));
        }
    }
    return D;
}

}  // namespace detail

struct PolySplitReport {
    int r_max = 0;
    int cap = 0;
    bool degree_preserved = false;      // substitution keeps each polynomial
    bool degree1_matches_linear = false;  // degree and squares to zero
    bool degree0_matches_scalar = false;
};

/* The polynomial-degree decomposition of fiberwise-polynomial cochains is
   respected by the differential because the faces are fiberwise linear; this
   verifies it per degree r <= r_max, identifies the degree-1 matrices with
   the linear complex, and the degree-0 matrices with the scalar complex of
   the base groupoid. */
inline PolySplitReport poly_split(const SdpBundle& V, int r_max, int cap) {
    if (r_max < 0) throw InputError("poly_split needs r_max >= 0");
    if (cap < 0 || cap > V.cap) cap = V.cap;
    PolySplitReport rep{r_max, cap, true, true, true};
    const FiniteGroupoid& G = *V.nerve.G;
    for (int r = 0; r <= r_max; ++r)
        for (int n = 0; n + 2 <= cap; ++n) {
            QMat a = detail::poly_delta_matrix(V, n, r);
            QMat b = detail::poly_delta_matrix(V, n + 1, r);
            if (!(b * a).is_zero()) rep.degree_preserved = false;
        }
    // evaluation identity, spot-checked against direct substitution
    for (int r = 1; r <= std::min(r_max, 2); ++r)
        for (int n = 0; n + 1 <= std::min(cap, 2); ++n) {
            QMat Dm = detail::poly_delta_matrix(V, n, r);
            // one test cochain spread over the whole level, coefficients 1, 2, ...
            PolyCochain c{n, r, {}};
            QMat x(Dm.cols(), 1);
            int seed = 1, off = 0;
            for (size_t cj = 0; cj < V.nerve.level(n).size(); ++cj)
                for (const auto& mo :
                     detail::monomials(V.level(n).fiber_dim[cj], r)) {
                    c.coeff[V.nerve.level(n)[cj]][mo] = Rat(seed);
                    x.set(off++, 0, Rat(seed++));
                }
            QMat y = Dm * x;
            off = 0;
            for (size_t hi = 0; hi < V.nerve.level(n + 1).size(); ++hi) {
                const NerveChain& h = V.nerve.level(n + 1)[hi];
                int dh = V.level(n + 1).fiber_dim[hi];
                std::vector<Rat> w(dh);
                for (int t = 0; t < dh; ++t) w[t] = Rat(t + 2);
                Rat via_matrix(0);
                for (const auto& mo : detail::monomials(dh, r)) {
                    Rat cc = y.at(off++, 0);
                    for (int p : mo) cc *= w[p];
                    via_matrix += cc;
                }
                Rat direct(0);
                for (int rf = 0; rf <= n + 1; ++rf) {
                    const QMat& F = V.face(n + 1, rf, (int)hi);
                    std::vector<Rat> fw(F.rows(), Rat(0));
                    for (int p = 0; p < F.rows(); ++p)
                        for (const auto& [q, v] : F.row(p)) fw[p] += v * w[q];
                    direct +=
                        detail::parity_sign(rf) * c.eval(chain_face(G, h, rf), fw);
                }
                if (via_matrix != direct) rep.degree_preserved = false;
            }
        }
    for (int n = 0; n + 1 <= cap; ++n) {
        if (!(detail::poly_delta_matrix(V, n, 1) == lin_delta_matrix(V, n)))
            rep.degree1_matches_linear = false;
        // scalar comparison: the degree-0 matrix against the bare nerve sum
        QMat S((int)V.nerve.level(n + 1).size(), (int)V.nerve.level(n).size());
        for (size_t hi = 0; hi < V.nerve.level(n + 1).size(); ++hi)
            for (int rf = 0; rf <= n + 1; ++rf)
                S.add_at((int)hi,
                         V.nerve.index_of(n, chain_face(G, V.nerve.level(n + 1)[hi], rf)),
                         detail::parity_sign(rf));
        if (!(detail::poly_delta_matrix(V, n, 0) == S)) rep.degree0_matches_scalar = false;
    }
    return rep;
}

/* ---------- canonical dump ---------- */

inline std::string dump_sdp(const SdpBundle& V) {
    std::string s;
    auto mat_str = [](const QMat& m) {
        std::string t = "[";
        for (int i = 0; i < m.rows(); ++i) {
            if (i) t += "; ";
            for (int j = 0; j < m.cols(); ++j) {
                if (j) t += " ";
                t += m.at(i, j).get_str();
            }
        }
        return t + "]";
    };
    auto chain_str = [&](const NerveChain& c) {
        std::string t = "<" + std::to_string(c.base);
        for (int a : c.arrows) t += "|" + std::to_string(a);
        return t + ">";
    };
    for (int n = 0; n <= V.cap; ++n) {
        const SdpLevel& L = V.level(n);
        s += "level " + std::to_string(n) + ": chains " +
             std::to_string(V.nerve.level(n).size()) + ", total dim " +
             std::to_string(L.total_dim) + "\n  indices:";
        for (const auto& a : L.index_list) s += " " + a.str();
        s += "\n";
        for (size_t ci = 0; ci < V.nerve.level(n).size(); ++ci) {
            s += "  " + chain_str(V.nerve.level(n)[ci]) + " dim " +
                 std::to_string(L.fiber_dim[ci]) + "\n";
            for (int i = 0; n >= 1 && i <= n; ++i)
                s += "    d" + std::to_string(i) + " " +
                     mat_str(V.face(n, i, (int)ci)) + "\n";
        }
    }
    return s;
}

}  // namespace groco
