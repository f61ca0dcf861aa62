#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "groco/ordinal.hpp"

namespace groco {

/* A finite groupoid with explicit composition table.  Objects and arrows are
   dense integer ids; names are carried only for file round trips.  comp[h][g]
   is the composite "h after g", or -1 when src(h) != tgt(g). */
struct FiniteGroupoid {
    std::vector<std::string> object_names;
    std::vector<std::string> arrow_names;
    std::vector<int> src, tgt;
    std::vector<std::vector<int>> comp;
    std::vector<int> unit;  // per object
    std::vector<int> inv;   // per arrow

    int n_objects() const { return static_cast<int>(object_names.size()); }
    int n_arrows() const { return static_cast<int>(arrow_names.size()); }

    int compose(int h, int g) const {
        if (h < 0 || h >= n_arrows() || g < 0 || g >= n_arrows())
            throw DomainError("arrow id out of range");
        int r = comp[h][g];
        if (r < 0) throw DomainError("arrows not composable");
        return r;
    }
    bool composable(int h, int g) const { return src[h] == tgt[g]; }
    bool operator==(const FiniteGroupoid&) const = default;
};

// Structured violation list; empty means the axioms hold.
inline std::vector<std::string> validate_groupoid(const FiniteGroupoid& G) {
    std::vector<std::string> bad;
    int no = G.n_objects(), na = G.n_arrows();
    auto chk = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    chk(static_cast<int>(G.src.size()) == na && static_cast<int>(G.tgt.size()) == na,
        "shape: src/tgt tables sized to arrow count");
    chk(static_cast<int>(G.comp.size()) == na, "shape: composition table sized to arrow count");
    chk(static_cast<int>(G.unit.size()) == no, "shape: unit table sized to object count");
    chk(static_cast<int>(G.inv.size()) == na, "shape: inverse table sized to arrow count");
    if (!bad.empty()) return bad;

    for (int a = 0; a < na; ++a) {
        chk(G.src[a] >= 0 && G.src[a] < no && G.tgt[a] >= 0 && G.tgt[a] < no,
            "range: endpoints of arrow " + G.arrow_names[a]);
        chk(static_cast<int>(G.comp[a].size()) == na, "shape: composition row of " + G.arrow_names[a]);
    }
    if (!bad.empty()) return bad;

    for (int h = 0; h < na; ++h)
        for (int g = 0; g < na; ++g) {
            int r = G.comp[h][g];
            if (G.src[h] != G.tgt[g]) {
                chk(r == -1, "composition defined on non-composable pair (" + G.arrow_names[h] +
                                 "," + G.arrow_names[g] + ")");
            } else {
                chk(r >= 0 && r < na, "composition missing on composable pair (" +
                                          G.arrow_names[h] + "," + G.arrow_names[g] + ")");
                if (r >= 0 && r < na)
                    chk(G.src[r] == G.src[g] && G.tgt[r] == G.tgt[h],
                        "composition endpoints wrong at (" + G.arrow_names[h] + "," +
                            G.arrow_names[g] + ")");
            }
        }
    if (!bad.empty()) return bad;

    // associativity on all composable triples
    for (int f = 0; f < na; ++f)
        for (int g = 0; g < na; ++g) {
            if (G.src[f] != G.tgt[g]) continue;
            for (int h = 0; h < na; ++h) {
                if (G.src[g] != G.tgt[h]) continue;
                if (G.comp[G.comp[f][g]][h] != G.comp[f][G.comp[g][h]])
                    bad.push_back("associativity fails at (" + G.arrow_names[f] + "," +
                                  G.arrow_names[g] + "," + G.arrow_names[h] + ")");
            }
        }

    for (int x = 0; x < no; ++x) {
        int u = G.unit[x];
        if (u < 0 || u >= na || G.src[u] != x || G.tgt[u] != x) {
            bad.push_back("unit of object " + G.object_names[x] + " is not an endo-arrow");
            continue;
        }
        for (int g = 0; g < na; ++g) {
            if (G.src[g] == x && G.comp[g][u] != g)
                bad.push_back("right unit law fails for " + G.arrow_names[g]);
            if (G.tgt[g] == x && G.comp[u][g] != g)
                bad.push_back("left unit law fails for " + G.arrow_names[g]);
        }
    }

    for (int g = 0; g < na; ++g) {
        int i = G.inv[g];
        if (i < 0 || i >= na || G.src[i] != G.tgt[g] || G.tgt[i] != G.src[g]) {
            bad.push_back("inverse of " + G.arrow_names[g] + " has wrong endpoints");
            continue;
        }
        if (G.comp[i][g] != G.unit[G.src[g]] || G.comp[g][i] != G.unit[G.tgt[g]])
            bad.push_back("inverse law fails for " + G.arrow_names[g]);
    }
    return bad;
}

inline bool is_unit_arrow(const FiniteGroupoid& G, int a) { return G.unit[G.src[a]] == a; }

/* A chain (g_n, ..., g_1) in the nerve, stored bottom-up: arrows[i] runs from
   vertex i to vertex i+1.  Canonical order on a fixed level is lexicographic
   on the stored arrow sequence (g_1, ..., g_n); level 0 chains order by
   object. */
struct NerveChain {
    int base = 0;             // object at vertex 0
    std::vector<int> arrows;  // arrows[i] : vertex i -> vertex i+1

    int length() const { return static_cast<int>(arrows.size()); }
    int vertex(const FiniteGroupoid& G, int i) const {
        if (i < 0 || i > length()) throw DomainError("chain vertex out of range");
        return i == 0 ? base : G.tgt[arrows[i - 1]];
    }
    bool degenerate(const FiniteGroupoid& G) const {
        for (int a : arrows)
            if (is_unit_arrow(G, a)) return true;
        return false;
    }
    auto operator<=>(const NerveChain& o) const {
        if (auto c = arrows <=> o.arrows; c != 0) return c;
        return base <=> o.base;
    }
    bool operator==(const NerveChain& o) const = default;
};

inline std::vector<std::string> validate_chain(const FiniteGroupoid& G, const NerveChain& c) {
    std::vector<std::string> bad;
    if (c.base < 0 || c.base >= G.n_objects()) bad.push_back("chain base out of range");
    for (size_t i = 0; i < c.arrows.size(); ++i) {
        int a = c.arrows[i];
        if (a < 0 || a >= G.n_arrows()) {
            bad.push_back("chain arrow id out of range");
            return bad;
        }
        int want = i == 0 ? c.base : G.tgt[c.arrows[i - 1]];
        if (G.src[a] != want) bad.push_back("chain breaks at position " + std::to_string(i + 1));
    }
    return bad;
}

// Arrow of G from vertex a to vertex b along the chain: the composite of the
// spanned arrows, a unit when a = b, the inverse composite when a > b.
inline int span_arrow(const FiniteGroupoid& G, const NerveChain& c, int a, int b) {
    if (a == b) return G.unit[c.vertex(G, a)];
    if (a < b) {
        int r = c.arrows[a];
        for (int i = a + 1; i < b; ++i) r = G.compose(c.arrows[i], r);
        return r;
    }
    return G.inv[span_arrow(G, c, b, a)];
}

/* Reindex a chain along an ordinal map: the image chain's i-th arrow joins
   vertex beta(i-1) to beta(i).  Monotone maps give the simplicial action;
   non-monotone maps (inversions) are allowed only when requested. */
inline NerveChain chain_along(const FiniteGroupoid& G, const NerveChain& c, const OrdinalMap& beta,
                              bool allow_nonmonotone = false) {
    if (beta.target_size != c.length()) throw DomainError("chain_along size mismatch");
    if (!allow_nonmonotone && !beta.is_monotone())
        throw DomainError("chain_along requires a monotone map");
    NerveChain out;
    out.base = c.vertex(G, beta(0));
    out.arrows.reserve(beta.source_size);
    for (int i = 1; i <= beta.source_size; ++i)
        out.arrows.push_back(span_arrow(G, c, beta(i - 1), beta(i)));
    return out;
}

inline NerveChain chain_face(const FiniteGroupoid& G, const NerveChain& c, int i) {
    return chain_along(G, c, ordinal_delta(i, c.length()));
}
inline NerveChain chain_degeneracy(const FiniteGroupoid& G, const NerveChain& c, int j) {
    return chain_along(G, c, ordinal_sigma(j, c.length()));
}
inline NerveChain chain_inverse(const FiniteGroupoid& G, const NerveChain& c) {
    int n = c.length();
    std::vector<int> rev(n + 1);
    for (int i = 0; i <= n; ++i) rev[i] = n - i;
    return chain_along(G, c, OrdinalMap(n, std::move(rev)), true);
}

/* Nerve levels up to a cap, with canonical enumeration and index lookup. */
struct Nerve {
    const FiniteGroupoid* G = nullptr;
    std::vector<std::vector<NerveChain>> levels;
    std::vector<std::map<NerveChain, int>> lookup;

    Nerve() = default;
    Nerve(const FiniteGroupoid& g, int cap) : G(&g) { grow(cap); }

    int cap() const { return static_cast<int>(levels.size()) - 1; }

    void grow(int cap_to) {
        if (levels.empty()) {
            levels.emplace_back();
            lookup.emplace_back();
            for (int x = 0; x < G->n_objects(); ++x) {
                NerveChain c{x, {}};
                lookup[0][c] = static_cast<int>(levels[0].size());
                levels[0].push_back(c);
            }
        }
        while (cap() < cap_to) {
            const auto& prev = levels.back();
            std::vector<NerveChain> next;
            std::map<NerveChain, int> idx;
            for (const NerveChain& c : prev) {
                int top = c.vertex(*G, c.length());
                for (int a = 0; a < G->n_arrows(); ++a) {
                    if (G->src[a] != top) continue;
                    NerveChain ext = c;
                    ext.arrows.push_back(a);
                    idx[ext] = static_cast<int>(next.size());
                    next.push_back(std::move(ext));
                }
            }
            levels.push_back(std::move(next));
            lookup.push_back(std::move(idx));
        }
    }

    const std::vector<NerveChain>& level(int n) const {
        if (n < 0 || n > cap()) throw DomainError("nerve level out of range");
        return levels[n];
    }
    int index_of(int n, const NerveChain& c) const {
        auto it = lookup.at(n).find(c);
        if (it == lookup.at(n).end()) throw InternalError("chain missing from nerve index");
        return it->second;
    }
    // index-level simplicial action
    int act(int n, int chain_idx, const OrdinalMap& beta) const {
        NerveChain img = chain_along(*G, levels.at(n).at(chain_idx), beta);
        return index_of(beta.source_size, img);
    }
};

/* ---------- bundled constructions ---------- */

inline FiniteGroupoid build_unit_groupoid(int n_objects) {
    FiniteGroupoid G;
    for (int x = 0; x < n_objects; ++x) {
        G.object_names.push_back("x" + std::to_string(x));
        G.arrow_names.push_back("u" + std::to_string(x));
        G.src.push_back(x);
        G.tgt.push_back(x);
        G.unit.push_back(x);
        G.inv.push_back(x);
    }
    G.comp.assign(n_objects, std::vector<int>(n_objects, -1));
    for (int x = 0; x < n_objects; ++x) G.comp[x][x] = x;
    return G;
}

// Pair groupoid on n points: exactly one arrow between any two objects.
inline FiniteGroupoid build_pair_groupoid(int n) {
    FiniteGroupoid G;
    for (int x = 0; x < n; ++x) G.object_names.push_back("x" + std::to_string(x));
    auto aid = [n](int y, int x) { return y * n + x; };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            G.arrow_names.push_back("a" + std::to_string(y) + "_" + std::to_string(x));
            G.src.push_back(x);
            G.tgt.push_back(y);
            G.inv.push_back(aid(x, y));
        }
    for (int x = 0; x < n; ++x) G.unit.push_back(aid(x, x));
    G.comp.assign(n * n, std::vector<int>(n * n, -1));
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) G.comp[aid(z, y)][aid(y, x)] = aid(z, x);
    return G;
}

/* Cech groupoid of a surjection pi : U -> M given as the list pi(u) per point;
   arrows are pairs of points in one fiber. */
inline FiniteGroupoid build_cech_groupoid(const std::vector<int>& pi) {
    int n = static_cast<int>(pi.size());
    FiniteGroupoid G;
    for (int x = 0; x < n; ++x) G.object_names.push_back("u" + std::to_string(x));
    std::vector<std::vector<int>> aid(n, std::vector<int>(n, -1));
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            if (pi[y] != pi[x]) continue;
            aid[y][x] = G.n_arrows();
            G.arrow_names.push_back("c" + std::to_string(y) + "_" + std::to_string(x));
            G.src.push_back(x);
            G.tgt.push_back(y);
        }
    for (int a = 0; a < G.n_arrows(); ++a) G.inv.push_back(aid[G.src[a]][G.tgt[a]]);
    for (int x = 0; x < n; ++x) G.unit.push_back(aid[x][x]);
    G.comp.assign(G.n_arrows(), std::vector<int>(G.n_arrows(), -1));
    for (int h = 0; h < G.n_arrows(); ++h)
        for (int g = 0; g < G.n_arrows(); ++g)
            if (G.src[h] == G.tgt[g]) G.comp[h][g] = aid[G.tgt[h]][G.src[g]];
    return G;
}

// One-object groupoid from a group multiplication table m[h][g] = h*g.
inline FiniteGroupoid build_group_groupoid(const std::vector<std::vector<int>>& m,
                                           const std::vector<std::string>& names = {}) {
    int k = static_cast<int>(m.size());
    FiniteGroupoid G;
    G.object_names.push_back("x0");
    for (int g = 0; g < k; ++g)
        G.arrow_names.push_back(names.empty() ? "g" + std::to_string(g) : names[g]);
    G.src.assign(k, 0);
    G.tgt.assign(k, 0);
    G.comp = m;
    int e = -1;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int g = 0; g < k; ++g) ok = ok && m[c][g] == g && m[g][c] == g;
        if (ok) e = c;
    }
    if (e < 0) throw InputError("multiplication table has no identity");
    G.unit.assign(1, e);
    G.inv.assign(k, -1);
    for (int g = 0; g < k; ++g)
        for (int h = 0; h < k; ++h)
            if (m[h][g] == e && m[g][h] == e) G.inv[g] = h;
    for (int g = 0; g < k; ++g)
        if (G.inv[g] < 0) throw InputError("multiplication table has a non-invertible element");
    return G;
}

/* Action groupoid of a group acting on a set; act[g][x] is g.x.  Arrows are
   pairs (g, x) : x -> g.x with (h, g.x) o (g, x) = (h*g, x). */
inline FiniteGroupoid build_action_groupoid(const std::vector<std::vector<int>>& m,
                                            const std::vector<std::vector<int>>& act) {
    FiniteGroupoid K = build_group_groupoid(m);  // validates the table
    int k = static_cast<int>(m.size());
    int n = static_cast<int>(act.empty() ? 0 : act[0].size());
    FiniteGroupoid G;
    for (int x = 0; x < n; ++x) G.object_names.push_back("x" + std::to_string(x));
    auto aid = [n](int g, int x) { return g * n + x; };
    for (int g = 0; g < k; ++g)
        for (int x = 0; x < n; ++x) {
            G.arrow_names.push_back("g" + std::to_string(g) + "_x" + std::to_string(x));
            G.src.push_back(x);
            G.tgt.push_back(act[g][x]);
        }
    int e = K.unit[0];
    for (int x = 0; x < n; ++x) G.unit.push_back(aid(e, x));
    for (int g = 0; g < k; ++g)
        for (int x = 0; x < n; ++x) G.inv.push_back(aid(K.inv[g], act[g][x]));
    G.comp.assign(k * n, std::vector<int>(k * n, -1));
    for (int h = 0; h < k; ++h)
        for (int g = 0; g < k; ++g)
            for (int x = 0; x < n; ++x) G.comp[aid(h, act[g][x])][aid(g, x)] = aid(m[h][g], x);
    return G;
}

// Direct product, componentwise structure.  Object (a, b) has id a*|B_0|+b.
inline FiniteGroupoid product_groupoid(const FiniteGroupoid& A, const FiniteGroupoid& B) {
    FiniteGroupoid G;
    int nb = B.n_objects(), mb = B.n_arrows();
    for (int a = 0; a < A.n_objects(); ++a)
        for (int b = 0; b < nb; ++b)
            G.object_names.push_back(A.object_names[a] + "*" + B.object_names[b]);
    auto oid = [nb](int a, int b) { return a * nb + b; };
    auto aid = [mb](int f, int g) { return f * mb + g; };
    for (int f = 0; f < A.n_arrows(); ++f)
        for (int g = 0; g < mb; ++g) {
            G.arrow_names.push_back(A.arrow_names[f] + "*" + B.arrow_names[g]);
            G.src.push_back(oid(A.src[f], B.src[g]));
            G.tgt.push_back(oid(A.tgt[f], B.tgt[g]));
            G.inv.push_back(aid(A.inv[f], B.inv[g]));
        }
    for (int a = 0; a < A.n_objects(); ++a)
        for (int b = 0; b < nb; ++b) G.unit.push_back(aid(A.unit[a], B.unit[b]));
    G.comp.assign(G.n_arrows(), std::vector<int>(G.n_arrows(), -1));
    for (int f2 = 0; f2 < A.n_arrows(); ++f2)
        for (int g2 = 0; g2 < mb; ++g2)
            for (int f1 = 0; f1 < A.n_arrows(); ++f1)
                for (int g1 = 0; g1 < mb; ++g1) {
                    if (A.src[f2] != A.tgt[f1] || B.src[g2] != B.tgt[g1]) continue;
                    G.comp[aid(f2, g2)][aid(f1, g1)] = aid(A.comp[f2][f1], B.comp[g2][g1]);
                }
    return G;
}

/* ---------- morphisms ---------- */

struct GroupoidMorphism {
    std::shared_ptr<const FiniteGroupoid> dom, cod;
    std::vector<int> obj_map;    // per object of dom
    std::vector<int> arrow_map;  // per arrow of dom
};

inline std::vector<std::string> validate_morphism(const GroupoidMorphism& f) {
    std::vector<std::string> bad;
    const auto& G = *f.dom;
    const auto& H = *f.cod;
    if (static_cast<int>(f.obj_map.size()) != G.n_objects() ||
        static_cast<int>(f.arrow_map.size()) != G.n_arrows()) {
        bad.push_back("shape: morphism tables sized to domain");
        return bad;
    }
    for (int x : f.obj_map)
        if (x < 0 || x >= H.n_objects()) bad.push_back("range: object image");
    for (int a : f.arrow_map)
        if (a < 0 || a >= H.n_arrows()) bad.push_back("range: arrow image");
    if (!bad.empty()) return bad;
    for (int a = 0; a < G.n_arrows(); ++a) {
        if (H.src[f.arrow_map[a]] != f.obj_map[G.src[a]] ||
            H.tgt[f.arrow_map[a]] != f.obj_map[G.tgt[a]])
            bad.push_back("endpoints not preserved at " + G.arrow_names[a]);
    }
    for (int x = 0; x < G.n_objects(); ++x)
        if (f.arrow_map[G.unit[x]] != H.unit[f.obj_map[x]])
            bad.push_back("units not preserved at " + G.object_names[x]);
    for (int h = 0; h < G.n_arrows(); ++h)
        for (int g = 0; g < G.n_arrows(); ++g) {
            if (G.src[h] != G.tgt[g]) continue;
            if (f.arrow_map[G.comp[h][g]] != H.comp[f.arrow_map[h]][f.arrow_map[g]])
                bad.push_back("composition not preserved at (" + G.arrow_names[h] + "," +
                              G.arrow_names[g] + ")");
        }
    return bad;
}

inline NerveChain apply_morphism(const GroupoidMorphism& f, const NerveChain& c) {
    NerveChain out;
    out.base = f.obj_map[c.base];
    out.arrows.reserve(c.arrows.size());
    for (int a : c.arrows) out.arrows.push_back(f.arrow_map[a]);
    return out;
}

struct MorphismClass {
    bool f1 = false;  // surjective on objects
    bool f2 = false;  // arrow lifting against the source
    bool es = false;  // essentially surjective
    bool ff = false;  // fully faithful
    bool fibration() const { return f1 && f2; }
    bool morita() const { return es && ff; }
    bool hypercover() const { return f1 && ff; }
};

inline MorphismClass classify_morphism(const GroupoidMorphism& f) {
    const auto& G = *f.dom;
    const auto& H = *f.cod;
    MorphismClass c;

    std::vector<char> hit(H.n_objects(), 0);
    for (int x : f.obj_map) hit[x] = 1;
    c.f1 = true;
    for (char h : hit) c.f1 = c.f1 && h;

    c.f2 = true;
    for (int x = 0; x < G.n_objects() && c.f2; ++x)
        for (int h = 0; h < H.n_arrows() && c.f2; ++h) {
            if (H.src[h] != f.obj_map[x]) continue;
            bool lifted = false;
            for (int g = 0; g < G.n_arrows() && !lifted; ++g)
                lifted = G.src[g] == x && f.arrow_map[g] == h;
            c.f2 = lifted;
        }

    c.es = true;
    for (int y = 0; y < H.n_objects() && c.es; ++y) {
        bool reached = false;
        for (int h = 0; h < H.n_arrows() && !reached; ++h) {
            if (H.tgt[h] != y) continue;
            for (int x = 0; x < G.n_objects() && !reached; ++x)
                reached = H.src[h] == f.obj_map[x];
        }
        c.es = reached;
    }

    // fully faithful: arrows x -> y biject with arrows f(x) -> f(y)
    c.ff = true;
    for (int y = 0; y < G.n_objects() && c.ff; ++y)
        for (int x = 0; x < G.n_objects() && c.ff; ++x) {
            std::map<int, int> count;  // image arrow -> multiplicity
            int here = 0;
            for (int g = 0; g < G.n_arrows(); ++g)
                if (G.src[g] == x && G.tgt[g] == y) {
                    ++count[f.arrow_map[g]];
                    ++here;
                }
            int there = 0;
            for (int h = 0; h < H.n_arrows(); ++h)
                if (H.src[h] == f.obj_map[x] && H.tgt[h] == f.obj_map[y]) {
                    ++there;
                    auto it = count.find(h);
                    if (it == count.end() || it->second != 1) c.ff = false;
                }
            if (here != there) c.ff = false;
        }
    return c;
}

inline GroupoidMorphism cech_projection(std::shared_ptr<const FiniteGroupoid> cech,
                                        std::shared_ptr<const FiniteGroupoid> base,
                                        const std::vector<int>& pi) {
    GroupoidMorphism f;
    f.dom = std::move(cech);
    f.cod = std::move(base);
    f.obj_map = pi;
    for (int a = 0; a < f.dom->n_arrows(); ++a)
        f.arrow_map.push_back(f.cod->unit[pi[f.dom->src[a]]]);
    return f;
}

}  // namespace groco
