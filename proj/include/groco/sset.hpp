#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "groco/groupoid.hpp"
#include "groco/ordinal.hpp"

namespace groco {

/* ---------- simplex values ----------
   A possibly-degenerate simplex is stored in normal form: a nondegenerate
   simplex id at its own dimension together with a monotone surjection from
   the outer ordinal.  The identity surjection marks a nondegenerate value. */
struct SimplexVal {
    int dim = 0;       // dimension of the underlying nondegenerate simplex
    int id = 0;        // index among nondegenerate simplices of that dimension
    OrdinalMap s;      // monotone surjection [outer] -> [dim]

    int outer() const { return s.source_size; }
    bool nondegenerate() const { return s.source_size == dim; }

    auto operator<=>(const SimplexVal& o) const {
        if (auto c = dim <=> o.dim; c != 0) return c;
        if (auto c = id <=> o.id; c != 0) return c;
        return s <=> o.s;
    }
    bool operator==(const SimplexVal& o) const = default;
};

namespace detail {

inline bool is_identity_map(const OrdinalMap& m) {
    if (m.source_size != m.target_size) return false;
    for (int i = 0; i <= m.source_size; ++i)
        if (m(i) != i) return false;
    return true;
}

inline void encode_val(std::vector<int>& out, const SimplexVal& v) {
    out.push_back(v.dim);
    out.push_back(v.id);
    out.push_back(v.s.source_size);
    out.insert(out.end(), v.s.values.begin(), v.s.values.end());
}

inline std::vector<int> encode_vals(const std::vector<SimplexVal>& vs) {
    std::vector<int> out;
    for (const auto& v : vs) encode_val(out, v);
    return out;
}

// monotone surjections [n] ->> [k], canonical order (lexicographic on values)
inline std::vector<OrdinalMap> monotone_surjections(int n, int k) {
    std::vector<OrdinalMap> out;
    if (k > n || k < 0) return out;
    // choose the k positions (among 1..n) where the value rises
    std::vector<int> rises(k);
    for (int i = 0; i < k; ++i) rises[i] = i + 1;
    while (true) {
        std::vector<int> v(n + 1, 0);
        for (int i = 1; i <= n; ++i) {
            v[i] = v[i - 1];
            if (std::binary_search(rises.begin(), rises.end(), i)) ++v[i];
        }
        out.push_back(OrdinalMap(k, std::move(v)));
        int j = k - 1;
        while (j >= 0 && rises[j] == n - (k - 1 - j)) --j;
        if (j < 0) break;
        ++rises[j];
        for (int i = j + 1; i < k; ++i) rises[i] = rises[i - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<OrdinalMap> monotone_injections(int m, int n) {
    std::vector<OrdinalMap> out;
    if (m > n || m < 0) return out;
    std::vector<int> pick(m + 1);
    for (int i = 0; i <= m; ++i) pick[i] = i;
    while (true) {
        out.push_back(OrdinalMap(n, pick));
        int j = m;
        while (j >= 0 && pick[j] == n - (m - j)) --j;
        if (j < 0) break;
        ++pick[j];
        for (int i = j + 1; i <= m; ++i) pick[i] = pick[i - 1] + 1;
    }
    return out;
}

inline std::vector<OrdinalMap> monotone_maps(int m, int n) {
    std::vector<OrdinalMap> out;
    std::vector<int> v(m + 1, 0);
    while (true) {
        out.push_back(OrdinalMap(n, v));
        int j = m;
        while (j >= 0 && v[j] == n) --j;
        if (j < 0) break;
        ++v[j];
        for (int i = j + 1; i <= m; ++i) v[i] = v[j];
    }
    return out;
}

// nonempty subsets of {0..n} with at most maxsize elements, ordered by size
// then lexicographically; the canonical simplex list of a skeleton
inline std::vector<std::vector<int>> subsets_upto(int n, int maxsize) {
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= std::min(maxsize, n + 1); ++size) {
        std::vector<int> pick(size);
        for (int i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            out.push_back(pick);
            int j = size - 1;
            while (j >= 0 && pick[j] == n - (size - 1 - j)) --j;
            if (j < 0) break;
            ++pick[j];
            for (int i = j + 1; i < size; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    return out;
}

}  // namespace detail

/* ---------- truncated simplicial sets ----------
   Finite simplicial data up to a dimension cap.  Only nondegenerate
   simplices are stored; each face record is a simplex value, so the whole
   simplicial structure is recovered by the normal-form calculus below.
   Degeneracies are formal and never stored. */
struct TruncatedSSet {
    int cap = 0;
    // face[d][id][i] = the i-th face of nondegenerate simplex id at dim d
    std::vector<std::vector<std::vector<SimplexVal>>> face;
    std::vector<std::vector<std::string>> label;  // optional, parallel to face

    int n_nondeg(int d) const {
        return d >= 0 && d < (int)face.size() ? (int)face[d].size() : 0;
    }
    SimplexVal nondeg(int d, int id) const { return {d, id, ordinal_identity(d)}; }

    std::string name(int d, int id) const {
        if (d < (int)label.size() && id < (int)label[d].size()) return label[d][id];
        return "s" + std::to_string(d) + "." + std::to_string(id);
    }

    /* restrict a nondegenerate simplex along an injective monotone map by
       iterating stored faces */
    SimplexVal restrict_nondeg(int d, int id, const OrdinalMap& e) const {
        if (e.source_size == d) return nondeg(d, id);
        int missing = -1;
        for (int m = d; m >= 0; --m) {
            bool hit = false;
            for (int i = 0; i <= e.source_size; ++i)
                if (e(i) == m) hit = true;
            if (!hit) {
                missing = m;
                break;
            }
        }
        std::vector<int> v2(e.source_size + 1);
        for (int i = 0; i <= e.source_size; ++i) v2[i] = e(i) > missing ? e(i) - 1 : e(i);
        const SimplexVal& f = face.at(d).at(id).at(missing);
        return eval(f, OrdinalMap(d - 1, std::move(v2)));
    }

    /* value of a simplex after reindexing along a monotone map
       op : [p] -> [outer] */
    SimplexVal eval(const SimplexVal& v, const OrdinalMap& op) const {
        if (op.target_size != v.outer())
            throw DomainError("simplex reindexing arity mismatch");
        if (!op.is_monotone())
            throw DomainError("simplex reindexing requires a monotone map");
        OrdinalMap m = compose(op, v.s);  // [p] -> [dim]
        std::vector<int> image;
        for (int i = 0; i <= m.source_size; ++i)
            if (image.empty() || image.back() != m(i)) image.push_back(m(i));
        std::vector<int> u(m.source_size + 1);
        for (int i = 0; i <= m.source_size; ++i)
            u[i] = (int)(std::lower_bound(image.begin(), image.end(), m(i)) -
                         image.begin());
        int j = (int)image.size() - 1;
        SimplexVal w = restrict_nondeg(v.dim, v.id, OrdinalMap(v.dim, std::move(image)));
        return {w.dim, w.id, compose(OrdinalMap(j, std::move(u)), w.s)};
    }

    SimplexVal face_of(const SimplexVal& v, int i) const {
        return eval(v, ordinal_delta(i, v.outer()));
    }
    SimplexVal degen_of(const SimplexVal& v, int j) const {
        return eval(v, ordinal_sigma(j, v.outer()));
    }

    /* full level set at n (nondegenerate and degenerate), canonical order */
    const std::vector<SimplexVal>& level(int n) const {
        if (n < 0 || n > cap) throw DomainError("simplicial level beyond the cap");
        if ((int)level_cache_.size() <= n) level_cache_.resize(cap + 1);
        if ((int)level_pos_.size() <= n) level_pos_.resize(cap + 1);
        if (level_cache_[n].empty() && !built_.count(n)) {
            std::vector<SimplexVal> out;
            for (int k = 0; k <= std::min(n, cap); ++k) {
                if (n_nondeg(k) == 0) continue;
                for (const auto& s : detail::monotone_surjections(n, k))
                    for (int id = 0; id < n_nondeg(k); ++id)
                        out.push_back({k, id, s});
            }
            std::sort(out.begin(), out.end());
            for (size_t i = 0; i < out.size(); ++i) level_pos_[n][out[i]] = (int)i;
            level_cache_[n] = std::move(out);
            built_.insert(n);
        }
        return level_cache_[n];
    }

    int level_index(int n, const SimplexVal& v) const {
        level(n);
        auto it = level_pos_[n].find(v);
        if (it == level_pos_[n].end())
            throw InternalError("simplex value missing from its level");
        return it->second;
    }

  private:
    mutable std::vector<std::vector<SimplexVal>> level_cache_;
    mutable std::vector<std::map<SimplexVal, int>> level_pos_;
    mutable std::set<int> built_;
};

using SSetPtr = std::shared_ptr<const TruncatedSSet>;

struct SSetViolation {
    int dim = 0;
    int id = 0;
    std::string what;
};

inline std::optional<SSetViolation> validate_sset(const TruncatedSSet& X) {
    if ((int)X.face.size() != X.cap + 1)
        return SSetViolation{0, 0, "face table does not span the cap"};
    for (int d = 0; d <= X.cap; ++d)
        for (int id = 0; id < X.n_nondeg(d); ++id) {
            const auto& fs = X.face[d][id];
            if ((int)fs.size() != (d == 0 ? 0 : d + 1))
                return SSetViolation{d, id, "wrong number of face records"};
            for (const auto& v : fs) {
                if (v.dim < 0 || v.dim > X.cap || v.id < 0 || v.id >= X.n_nondeg(v.dim))
                    return SSetViolation{d, id, "face record points to a missing simplex"};
                if (v.outer() != d - 1 || !v.s.is_monotone() || !v.s.is_surjective() ||
                    v.s.target_size != v.dim)
                    return SSetViolation{d, id, "face record is not in normal form"};
            }
        }
    for (int d = 2; d <= X.cap; ++d)
        for (int id = 0; id < X.n_nondeg(d); ++id) {
            SimplexVal x = X.nondeg(d, id);
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    SimplexVal a = X.face_of(X.face_of(x, j), i);
                    SimplexVal b = X.face_of(X.face_of(x, i), j - 1);
                    if (!(a == b))
                        return SSetViolation{d, id,
                                             "face identity d" + std::to_string(i) +
                                                 " d" + std::to_string(j) + " fails"};
                }
        }
    return std::nullopt;
}

/* ---------- simplicial maps ---------- */
struct SimplicialMap {
    SSetPtr dom, cod;
    // val[d][id] = image of the nondegenerate d-simplex id, at outer dim d
    std::vector<std::vector<SimplexVal>> val;

    SimplexVal apply(const SimplexVal& v) const {
        return cod->eval(val.at(v.dim).at(v.id), v.s);
    }
};

inline std::optional<SSetViolation> validate_map(const SimplicialMap& f) {
    if ((int)f.val.size() != f.dom->cap + 1)
        return SSetViolation{0, 0, "assignment does not span the cap"};
    for (int d = 0; d <= f.dom->cap; ++d) {
        if ((int)f.val[d].size() != f.dom->n_nondeg(d))
            return SSetViolation{d, 0, "assignment misses simplices"};
        for (int id = 0; id < f.dom->n_nondeg(d); ++id) {
            const SimplexVal& w = f.val[d][id];
            if (w.outer() != d || w.dim > f.cod->cap || w.id >= f.cod->n_nondeg(w.dim))
                return SSetViolation{d, id, "assigned value is malformed"};
            for (int i = 0; d >= 1 && i <= d; ++i) {
                SimplexVal a = f.apply(f.dom->face_of(f.dom->nondeg(d, id), i));
                SimplexVal b = f.cod->face_of(w, i);
                if (!(a == b))
                    return SSetViolation{d, id,
                                         "face d" + std::to_string(i) + " not preserved"};
            }
        }
    }
    return std::nullopt;
}

inline SimplicialMap identity_map(SSetPtr X) {
    SimplicialMap f;
    f.dom = X;
    f.cod = X;
    f.val.resize(X->cap + 1);
    for (int d = 0; d <= X->cap; ++d)
        for (int id = 0; id < X->n_nondeg(d); ++id) f.val[d].push_back(X->nondeg(d, id));
    return f;
}

// g after f
inline SimplicialMap compose_maps(const SimplicialMap& g, const SimplicialMap& f) {
    if (g.dom != f.cod && g.dom.get() != f.cod.get())
        throw DomainError("simplicial maps do not compose");
    SimplicialMap h;
    h.dom = f.dom;
    h.cod = g.cod;
    h.val.resize(f.dom->cap + 1);
    for (int d = 0; d <= f.dom->cap; ++d)
        for (int id = 0; id < f.dom->n_nondeg(d); ++id)
            h.val[d].push_back(g.apply(f.val[d][id]));
    return h;
}

inline bool maps_equal(const SimplicialMap& a, const SimplicialMap& b) {
    return a.val == b.val;
}

// drop all cells above the cap; face records never point upward, so the
// lower part is self-contained
inline SSetPtr truncate_sset(SSetPtr X, int cap) {
    if (cap >= X->cap) return X;
    auto T = std::make_shared<TruncatedSSet>();
    T->cap = cap;
    T->face.assign(X->face.begin(), X->face.begin() + cap + 1);
    T->label.assign(X->label.begin(),
                    X->label.begin() + std::min((size_t)cap + 1, X->label.size()));
    return T;
}

inline SSetPtr point_sset(int cap) {
    auto X = std::make_shared<TruncatedSSet>();
    X->cap = cap;
    X->face.resize(cap + 1);
    X->face[0].push_back({});
    X->label.resize(cap + 1);
    X->label[0].push_back("pt");
    return X;
}

inline SimplicialMap to_point_map(SSetPtr X, SSetPtr P) {
    if (P->n_nondeg(0) != 1) throw DomainError("target of the collapse map is not a point");
    SimplicialMap f;
    f.dom = X;
    f.cod = P;
    f.val.resize(X->cap + 1);
    for (int d = 0; d <= X->cap; ++d)
        for (int id = 0; id < X->n_nondeg(d); ++id)
            f.val[d].push_back(P->eval(P->nondeg(0, 0), OrdinalMap(0, std::vector<int>(d + 1, 0))));
    return f;
}

/* ---------- chain complexes of a finite poset ----------
   Standard simplex shapes and their subcomplexes: nondegenerate d-simplices
   are the strictly increasing (d+1)-chains; faces delete an entry and are
   always nondegenerate.  Element ids must be a linear extension of the
   order. */
struct PosetSSet {
    SSetPtr S;
    std::vector<std::vector<std::vector<int>>> chain_of;  // [d][id]
    std::vector<std::map<std::vector<int>, int>> id_of;

    int find(int d, const std::vector<int>& ch) const {
        auto it = id_of.at(d).find(ch);
        if (it == id_of.at(d).end()) throw DomainError("chain is not in the complex");
        return it->second;
    }
    bool contains(int d, const std::vector<int>& ch) const {
        return d < (int)id_of.size() && id_of[d].count(ch) > 0;
    }
};

template <class Leq, class Admissible>
PosetSSet poset_chain_sset(int n_elems, Leq leq, Admissible admissible) {
    PosetSSet P;
    std::vector<std::vector<std::vector<int>>> chains;  // per dimension
    chains.push_back({});
    for (int v = 0; v < n_elems; ++v)
        if (admissible(std::vector<int>{v})) chains[0].push_back({v});
    while (true) {
        std::vector<std::vector<int>> next;
        for (const auto& c : chains.back())
            for (int v = c.back() + 1; v < n_elems; ++v) {
                if (!leq(c.back(), v)) continue;
                auto c2 = c;
                c2.push_back(v);
                if (admissible(c2)) next.push_back(std::move(c2));
            }
        if (next.empty()) break;
        chains.push_back(std::move(next));
    }
    int dim = (int)chains.size() - 1;
    auto X = std::make_shared<TruncatedSSet>();
    X->cap = dim;
    X->face.resize(dim + 1);
    X->label.resize(dim + 1);
    P.chain_of.resize(dim + 1);
    P.id_of.resize(dim + 1);
    for (int d = 0; d <= dim; ++d) {
        std::sort(chains[d].begin(), chains[d].end());
        for (int id = 0; id < (int)chains[d].size(); ++id) {
            P.id_of[d][chains[d][id]] = id;
            std::string nm;
            for (int v : chains[d][id]) nm += (nm.empty() ? "" : ".") + std::to_string(v);
            X->label[d].push_back(nm);
            std::vector<SimplexVal> fs;
            if (d >= 1)
                for (int i = 0; i <= d; ++i) {
                    auto sub = chains[d][id];
                    sub.erase(sub.begin() + i);
                    fs.push_back({d - 1, P.id_of[d - 1].at(sub), ordinal_identity(d - 1)});
                }
            X->face[d].push_back(std::move(fs));
        }
        P.chain_of[d] = chains[d];
    }
    P.S = X;
    return P;
}

namespace detail {
inline std::set<int> chain_support(const std::vector<int>& c) {
    return std::set<int>(c.begin(), c.end());
}
}  // namespace detail

inline PosetSSet delta_sset(int n) {
    return poset_chain_sset(
        n + 1, [](int, int) { return true; }, [](const std::vector<int>&) { return true; });
}

inline PosetSSet boundary_sset(int n) {
    return poset_chain_sset(
        n + 1, [](int, int) { return true; },
        [n](const std::vector<int>& c) { return (int)c.size() <= n; });
}

inline PosetSSet horn_sset(int n, int k) {
    return poset_chain_sset(
        n + 1, [](int, int) { return true; },
        [n, k](const std::vector<int>& c) {
            // must avoid at least one vertex other than k
            for (int v = 0; v <= n; ++v) {
                if (v == k) continue;
                if (!std::binary_search(c.begin(), c.end(), v)) return true;
            }
            return false;
        });
}

inline PosetSSet skeleton_sset(int m, int n) {
    return poset_chain_sset(
        n + 1, [](int, int) { return true; },
        [m](const std::vector<int>& c) { return (int)c.size() <= m + 1; });
}

/* the cylinder over the n-simplex: chains in the product order on
   {0..n} x {bottom, top}, element (i, e) encoded as e*(n+1)+i */
inline PosetSSet prism_sset(int n) {
    return poset_chain_sset(
        2 * (n + 1),
        [n](int a, int b) {
            return a % (n + 1) <= b % (n + 1) && a / (n + 1) <= b / (n + 1);
        },
        [](const std::vector<int>&) { return true; });
}

// inclusion of one chain complex into another over the same element set
inline SimplicialMap poset_inclusion(const PosetSSet& K, const PosetSSet& L) {
    SimplicialMap f;
    f.dom = K.S;
    f.cod = L.S;
    f.val.resize(K.S->cap + 1);
    for (int d = 0; d <= K.S->cap; ++d)
        for (int id = 0; id < K.S->n_nondeg(d); ++id)
            f.val[d].push_back({d, L.find(d, K.chain_of[d][id]), ordinal_identity(d)});
    return f;
}

/* the values of a single level-n simplex of Y on a subcomplex K of the
   n-simplex shape, listed in K's canonical (dim, id) order */
inline std::vector<SimplexVal> restrict_to_shape(const TruncatedSSet& Y,
                                                 const SimplexVal& y,
                                                 const PosetSSet& K) {
    std::vector<SimplexVal> out;
    for (int d = 0; d <= K.S->cap; ++d)
        for (int id = 0; id < K.S->n_nondeg(d); ++id)
            out.push_back(Y.eval(y, OrdinalMap(y.outer(), K.chain_of[d][id])));
    return out;
}

/* ---------- hom-space enumeration ----------
   All simplicial maps K -> X, found by assigning values to nondegenerate
   simplices of K in dimension order; candidates at each step are read off a
   face-indexed table of the target level, so the search never guesses. */
struct HomSpace {
    SSetPtr K, X;
    std::vector<SimplicialMap> maps;
};

inline HomSpace hom_space(SSetPtr K, SSetPtr X) {
    int top = 0;
    for (int d = 0; d <= K->cap; ++d)
        if (K->n_nondeg(d) > 0) top = d;
    if (top > X->cap) throw DomainError("hom domain exceeds the target's cap");

    // face-keyed candidate tables per dimension
    std::vector<std::map<std::vector<int>, std::vector<SimplexVal>>> table(top + 1);
    for (int d = 1; d <= top; ++d) {
        if (K->n_nondeg(d) == 0) continue;
        for (const auto& v : X->level(d)) {
            std::vector<int> key;
            for (int i = 0; i <= d; ++i) detail::encode_val(key, X->face_of(v, i));
            table[d][key].push_back(v);
        }
    }

    HomSpace out;
    out.K = K;
    out.X = X;
    std::vector<std::vector<SimplexVal>> cur(K->cap + 1);
    for (int d = 0; d <= K->cap; ++d) cur[d].resize(K->n_nondeg(d));

    auto image_of = [&](const SimplexVal& kv) { return X->eval(cur[kv.dim][kv.id], kv.s); };

    std::vector<std::pair<int, int>> order;  // nondeg simplices, dimension-major
    for (int d = 0; d <= top; ++d)
        for (int id = 0; id < K->n_nondeg(d); ++id) order.push_back({d, id});

    std::vector<std::vector<SimplexVal>> cands(order.size());
    size_t pos = 0;
    std::vector<size_t> choice(order.size(), 0);
    while (true) {
        if (pos == order.size()) {
            SimplicialMap m;
            m.dom = K;
            m.cod = X;
            m.val = cur;
            out.maps.push_back(std::move(m));
            if (pos == 0) break;
            --pos;
            ++choice[pos];
            continue;
        }
        auto [d, id] = order[pos];
        if (choice[pos] == 0) {
            if (d == 0) {
                cands[pos] = X->level(0);
            } else {
                std::vector<int> key;
                for (int i = 0; i <= d; ++i)
                    detail::encode_val(key, image_of(K->face[d][id][i]));
                auto it = table[d].find(key);
                cands[pos] = it == table[d].end() ? std::vector<SimplexVal>{} : it->second;
            }
        }
        if (choice[pos] >= cands[pos].size()) {
            choice[pos] = 0;
            if (pos == 0) break;
            --pos;
            ++choice[pos];
            continue;
        }
        cur[d][id] = cands[pos][choice[pos]];
        ++pos;
        if (pos < order.size()) choice[pos] = 0;
    }
    return out;
}

/* ---------- classification of a map ----------
   Per level: horn lifting (fibration), boundary lifting onto the relative
   matching space (hypercover), and bijectivity of the matching map. */
struct SSetMapClass {
    int cap = 0;
    std::vector<char> fibration, hypercover, matching_bijective;

    bool is_fibration() const {
        for (char c : fibration)
            if (!c) return false;
        return true;
    }
    bool is_hypercover() const {
        for (char c : hypercover)
            if (!c) return false;
        return true;
    }
    std::vector<int> nonbijective_levels() const {
        std::vector<int> out;
        for (int n = 0; n <= cap; ++n)
            if (!matching_bijective[n]) out.push_back(n);
        return out;
    }
    // stage of a simple hypercover: -1 when every matching map is bijective,
    // -2 when bijectivity fails at two or more levels
    int simple_stage() const {
        auto bad = nonbijective_levels();
        if (bad.empty()) return -1;
        if (bad.size() == 1) return bad[0];
        return -2;
    }
};

namespace detail {

struct RelCount {
    long long target = 0;  // size of the relative lifting space
    long long image = 0;   // distinct restrictions coming from the total level
    long long total = 0;   // size of the level being restricted
};

/* counts for the restriction map X_n -> X^K x_{Y^K} Y_n with K a subshape
   of the n-simplex */
inline RelCount relative_restriction_counts(const SimplicialMap& f, const PosetSSet& K,
                                            int n) {
    RelCount rc;
    const TruncatedSSet& X = *f.dom;
    const TruncatedSSet& Y = *f.cod;
    HomSpace homs = hom_space(K.S, f.dom);
    std::map<std::vector<int>, long long> by_push;
    for (const auto& phi : homs.maps) {
        std::vector<SimplexVal> push;
        for (int d = 0; d <= K.S->cap; ++d)
            for (int id = 0; id < K.S->n_nondeg(d); ++id)
                push.push_back(f.apply(phi.val[d][id]));
        by_push[encode_vals(push)] += 1;
    }
    for (const auto& y : Y.level(n)) {
        auto it = by_push.find(encode_vals(restrict_to_shape(Y, y, K)));
        if (it != by_push.end()) rc.target += it->second;
    }
    std::set<std::vector<int>> image;
    for (const auto& x : X.level(n)) {
        std::vector<int> key = encode_vals(restrict_to_shape(X, x, K));
        encode_val(key, f.apply(x));
        image.insert(std::move(key));
    }
    rc.image = (long long)image.size();
    rc.total = (long long)X.level(n).size();
    return rc;
}

}  // namespace detail

inline SSetMapClass classify_sset_map(const SimplicialMap& f, int cap) {
    if (cap > f.dom->cap || cap > f.cod->cap)
        throw DomainError("classification cap exceeds the stored truncation");
    SSetMapClass out;
    out.cap = cap;
    out.fibration.assign(cap + 1, 0);
    out.hypercover.assign(cap + 1, 0);
    out.matching_bijective.assign(cap + 1, 0);

    {  // level 0: both restriction maps are the map itself
        std::set<SimplexVal> image;
        for (const auto& x : f.dom->level(0)) image.insert(f.apply(x));
        bool surj = (long long)image.size() == (long long)f.cod->level(0).size();
        out.fibration[0] = surj;
        out.hypercover[0] = surj;
        out.matching_bijective[0] =
            surj && f.dom->level(0).size() == f.cod->level(0).size();
    }
    for (int n = 1; n <= cap; ++n) {
        auto rc = detail::relative_restriction_counts(f, boundary_sset(n), n);
        out.hypercover[n] = rc.image == rc.target;
        out.matching_bijective[n] = rc.image == rc.target && rc.total == rc.target;
        bool fib = true;
        for (int k = 0; k <= n; ++k) {
            auto h = detail::relative_restriction_counts(f, horn_sset(n, k), n);
            if (h.image != h.target) fib = false;
        }
        out.fibration[n] = fib;
    }
    return out;
}

/* ---------- collapse certificates and the lifting proposition ---------- */
struct CollapseStep {
    int dim = 0;        // dimension of the removed top simplex
    int id = 0;         // its id in the ambient complex
    int free_face = 0;  // which of its faces is removed with it
};

struct PropHomReport {
    bool surjective = false;
    long long dom_count = 0;
    long long target_count = 0;
};

namespace detail {

inline bool chain_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/* verify an elementary-collapse sequence taking L down to a single vertex
   while passing through K; sel tracks the surviving ambient simplex ids */
inline void verify_collapse(const PosetSSet& L, const PosetSSet& K,
                            const std::vector<CollapseStep>& cert) {
    std::vector<std::set<int>> sel(L.S->cap + 1);
    for (int d = 0; d <= L.S->cap; ++d)
        for (int id = 0; id < L.S->n_nondeg(d); ++id) sel[d].insert(id);
    auto matches_K = [&]() {
        for (int d = 0; d <= L.S->cap; ++d) {
            std::set<int> want;
            if (d < (int)K.chain_of.size())
                for (const auto& ch : K.chain_of[d]) want.insert(L.find(d, ch));
            if (sel[d] != want) return false;
        }
        return true;
    };
    bool passed_K = matches_K();
    for (const auto& st : cert) {
        if (st.dim < 1 || st.dim > L.S->cap || !sel[st.dim].count(st.id) ||
            st.free_face < 0 || st.free_face > st.dim)
            throw DomainError("invalid collapse certificate: step out of range");
        const auto& top = L.chain_of[st.dim][st.id];
        auto mu = top;
        mu.erase(mu.begin() + st.free_face);
        int mu_id = L.find(st.dim - 1, mu);
        if (!sel[st.dim - 1].count(mu_id))
            throw DomainError("invalid collapse certificate: free face already removed");
        // the free face may sit in the closure of no other surviving simplex
        for (int d = st.dim - 1; d <= L.S->cap; ++d)
            for (int id : sel[d]) {
                if (d == st.dim && id == st.id) continue;
                if (d == st.dim - 1 && id == mu_id) continue;
                if (chain_subset(mu, L.chain_of[d][id]))
                    throw DomainError("invalid collapse certificate: face is not free");
            }
        // every other boundary piece of the removed simplex must survive
        for (int i = 0; i <= st.dim; ++i) {
            if (i == st.free_face) continue;
            auto sub = top;
            sub.erase(sub.begin() + i);
            if (!sel[st.dim - 1].count(L.find(st.dim - 1, sub)))
                throw DomainError("invalid collapse certificate: boundary missing");
        }
        sel[st.dim].erase(st.id);
        sel[st.dim - 1].erase(mu_id);
        if (!passed_K && matches_K()) passed_K = true;
    }
    long long rest = 0;
    for (int d = 1; d <= L.S->cap; ++d) rest += (long long)sel[d].size();
    if (rest != 0 || sel[0].size() != 1)
        throw DomainError("invalid collapse certificate: does not end at a vertex");
    if (!passed_K)
        throw DomainError("invalid collapse certificate: never reaches the subcomplex");
}

}  // namespace detail

/* surjectivity of X^L -> X^K x_{Y^K} Y^L.  Without a certificate the map
   must classify as a hypercover up to dim L; with an elementary-collapse
   certificate (L down to a vertex through K) a fibration suffices. */
inline PropHomReport prop_hom_check(const SimplicialMap& f, const PosetSSet& L,
                                    const PosetSSet& K,
                                    const std::optional<std::vector<CollapseStep>>&
                                        collapse_cert = std::nullopt) {
    for (int d = 0; d <= K.S->cap; ++d)
        for (const auto& ch : d < (int)K.chain_of.size() ? K.chain_of[d]
                                                         : std::vector<std::vector<int>>{})
            L.find(d, ch);  // throws unless K sits inside L
    int top = 0;
    for (int d = 0; d <= L.S->cap; ++d)
        if (L.S->n_nondeg(d) > 0) top = d;
    SSetMapClass cls = classify_sset_map(f, std::min(top, std::min(f.dom->cap, f.cod->cap)));
    if (collapse_cert) {
        detail::verify_collapse(L, K, *collapse_cert);
        if (!cls.is_fibration())
            throw DomainError("collapse route requires a fibration");
    } else if (!cls.is_hypercover()) {
        throw DomainError("without a collapse certificate the map must be a hypercover");
    }

    HomSpace homL = hom_space(L.S, f.dom);
    HomSpace homK = hom_space(K.S, f.dom);
    HomSpace homLY = hom_space(L.S, f.cod);

    auto restrict_key = [&](const SimplicialMap& phi) {
        std::vector<SimplexVal> vals;
        for (int d = 0; d <= K.S->cap; ++d)
            for (int id = 0; id < K.S->n_nondeg(d); ++id)
                vals.push_back(phi.val[d][L.find(d, K.chain_of[d][id])]);
        return detail::encode_vals(vals);
    };
    auto push_key_K = [&](const SimplicialMap& phiK) {
        std::vector<SimplexVal> vals;
        for (int d = 0; d <= K.S->cap; ++d)
            for (int id = 0; id < K.S->n_nondeg(d); ++id)
                vals.push_back(f.apply(phiK.val[d][id]));
        return detail::encode_vals(vals);
    };
    auto psi_restrict_key = [&](const SimplicialMap& psi) {
        std::vector<SimplexVal> vals;
        for (int d = 0; d <= K.S->cap; ++d)
            for (int id = 0; id < K.S->n_nondeg(d); ++id)
                vals.push_back(psi.val[d][L.find(d, K.chain_of[d][id])]);
        return detail::encode_vals(vals);
    };

    std::map<std::vector<int>, long long> K_by_push;
    for (const auto& phiK : homK.maps) K_by_push[push_key_K(phiK)] += 1;
    PropHomReport rep;
    for (const auto& psi : homLY.maps) {
        auto it = K_by_push.find(psi_restrict_key(psi));
        if (it != K_by_push.end()) rep.target_count += it->second;
    }
    std::set<std::vector<int>> image;
    for (const auto& phi : homL.maps) {
        std::vector<int> key = restrict_key(phi);
        std::vector<SimplexVal> push;
        for (int d = 0; d <= L.S->cap; ++d)
            for (int id = 0; id < L.S->n_nondeg(d); ++id)
                push.push_back(f.apply(phi.val[d][id]));
        auto enc = detail::encode_vals(push);
        key.insert(key.end(), enc.begin(), enc.end());
        image.insert(std::move(key));
    }
    rep.dom_count = (long long)homL.maps.size();
    rep.surjective = (long long)image.size() == rep.target_count;
    return rep;
}

/* ---------- nerves of finite groupoids as simplicial sets ---------- */
struct NerveSSet {
    SSetPtr S;
    std::shared_ptr<const FiniteGroupoid> G;
    std::vector<std::vector<NerveChain>> chain_of;  // nondegenerate = unit-free
    std::vector<std::map<NerveChain, int>> id_of;

    SimplexVal normalize(const NerveChain& c) const {
        NerveChain core;
        core.base = c.base;
        std::vector<int> s{0};
        int k = 0;
        for (int a : c.arrows) {
            if (!is_unit_arrow(*G, a)) {
                core.arrows.push_back(a);
                ++k;
            }
            s.push_back(k);
        }
        return {k, id_of.at(k).at(core), OrdinalMap(k, std::move(s))};
    }
};

inline NerveSSet nerve_sset(std::shared_ptr<const FiniteGroupoid> G, int cap) {
    NerveSSet N;
    N.G = G;
    Nerve nerve(*G, cap);
    auto X = std::make_shared<TruncatedSSet>();
    X->cap = cap;
    X->face.resize(cap + 1);
    X->label.resize(cap + 1);
    N.chain_of.resize(cap + 1);
    N.id_of.resize(cap + 1);
    for (int d = 0; d <= cap; ++d)
        for (const auto& c : nerve.levels[d]) {
            bool unit_free = true;
            for (int a : c.arrows)
                if (is_unit_arrow(*G, a)) unit_free = false;
            if (!unit_free) continue;
            N.id_of[d][c] = (int)N.chain_of[d].size();
            N.chain_of[d].push_back(c);
        }
    for (int d = 0; d <= cap; ++d)
        for (const auto& c : N.chain_of[d]) {
            std::vector<SimplexVal> fs;
            if (d >= 1)
                for (int i = 0; i <= d; ++i) fs.push_back(N.normalize(chain_face(*G, c, i)));
            X->face[d].push_back(std::move(fs));
            std::string nm = G->object_names[c.base];
            for (int a : c.arrows) nm += "|" + G->arrow_names[a];
            X->label[d].push_back(nm);
        }
    N.S = X;
    return N;
}

inline SimplicialMap nerve_sset_map(const GroupoidMorphism& phi, const NerveSSet& dom,
                                    const NerveSSet& cod) {
    SimplicialMap f;
    f.dom = dom.S;
    f.cod = cod.S;
    f.val.resize(dom.S->cap + 1);
    for (int d = 0; d <= dom.S->cap; ++d)
        for (const auto& c : dom.chain_of[d])
            f.val[d].push_back(cod.normalize(apply_morphism(phi, c)));
    return f;
}

/* ---------- generic level-model construction ----------
   Products and coskeleta are assembled from abstract level descriptions:
   encoded elements per level with face and degeneracy callbacks.  The
   builder finds normal forms and face records. */
namespace detail {

template <class Model>
struct BuiltModel {
    SSetPtr S;
    std::vector<std::vector<std::vector<int>>> key_of;          // nondeg id -> key
    std::vector<std::map<std::vector<int>, SimplexVal>> norm;   // level key -> value

    SimplexVal normal(int n, const std::vector<int>& key) const {
        auto it = norm.at(n).find(key);
        if (it == norm.at(n).end()) throw InternalError("level element missing a normal form");
        return it->second;
    }
};

template <class Model>
BuiltModel<Model> build_from_model(const Model& M, int cap) {
    BuiltModel<Model> out;
    auto X = std::make_shared<TruncatedSSet>();
    X->cap = cap;
    X->face.resize(cap + 1);
    X->label.resize(cap + 1);
    out.key_of.resize(cap + 1);
    out.norm.resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
        std::vector<std::vector<int>> elems = M.level(n);
        std::sort(elems.begin(), elems.end());
        for (const auto& key : elems) {
            SimplexVal nf;
            bool degenerate = false;
            for (int j = 0; j < n && !degenerate; ++j) {
                std::vector<int> fk = M.face(n, key, j);
                if (M.degen(n - 1, fk, j) == key) {
                    SimplexVal w = out.norm[n - 1].at(fk);
                    nf = {w.dim, w.id, compose(ordinal_sigma(j, n - 1), w.s)};
                    degenerate = true;
                }
            }
            if (!degenerate) {
                int id = (int)out.key_of[n].size();
                nf = {n, id, ordinal_identity(n)};
                out.key_of[n].push_back(key);
                std::vector<SimplexVal> fs;
                if (n >= 1)
                    for (int i = 0; i <= n; ++i) fs.push_back(out.norm[n - 1].at(M.face(n, key, i)));
                X->face[n].push_back(std::move(fs));
                X->label[n].push_back(M.name(n, key));
            }
            out.norm[n][key] = nf;
        }
    }
    out.S = X;
    return out;
}

inline SimplexVal decode_val(const std::vector<int>& enc, size_t& at) {
    int dim = enc.at(at++);
    int id = enc.at(at++);
    int src = enc.at(at++);
    std::vector<int> vals(enc.begin() + at, enc.begin() + at + src + 1);
    at += src + 1;
    return {dim, id, OrdinalMap(dim, std::move(vals))};
}

}  // namespace detail

/* ---------- binary products ---------- */
namespace detail {

struct ProductModel {
    const TruncatedSSet* A;
    const TruncatedSSet* B;

    std::vector<std::vector<int>> level(int n) const {
        std::vector<std::vector<int>> out;
        for (const auto& a : A->level(n))
            for (const auto& b : B->level(n)) {
                std::vector<int> key;
                encode_val(key, a);
                encode_val(key, b);
                out.push_back(std::move(key));
            }
        return out;
    }
    std::vector<int> act(int /*n*/, const std::vector<int>& key, const OrdinalMap& op) const {
        size_t at = 0;
        SimplexVal a = decode_val(key, at);
        SimplexVal b = decode_val(key, at);
        std::vector<int> out;
        encode_val(out, A->eval(a, op));
        encode_val(out, B->eval(b, op));
        return out;
    }
    std::vector<int> face(int n, const std::vector<int>& key, int i) const {
        return act(n, key, ordinal_delta(i, n));
    }
    std::vector<int> degen(int n, const std::vector<int>& key, int j) const {
        return act(n, key, ordinal_sigma(j, n));
    }
    std::string name(int /*n*/, const std::vector<int>& key) const {
        size_t at = 0;
        SimplexVal a = decode_val(key, at);
        SimplexVal b = decode_val(key, at);
        return "(" + A->name(a.dim, a.id) + "," + B->name(b.dim, b.id) + ")";
    }
};

}  // namespace detail

struct ProductSSet {
    SSetPtr S;
    SSetPtr A, B;
    detail::BuiltModel<detail::ProductModel> built;
};

inline ProductSSet product_sset(SSetPtr A, SSetPtr B, int cap) {
    if (cap > A->cap || cap > B->cap)
        throw DomainError("product cap exceeds a factor's truncation");
    ProductSSet P;
    P.A = A;
    P.B = B;
    detail::ProductModel M{A.get(), B.get()};
    P.built = detail::build_from_model(M, cap);
    P.S = P.built.S;
    return P;
}

/* ---------- fibered products ---------- */
namespace detail {

struct FiberedModel {
    const SimplicialMap* f;  // X -> Y
    const SimplicialMap* g;  // Z -> Y

    std::vector<std::vector<int>> level(int n) const {
        std::vector<std::vector<int>> out;
        std::map<SimplexVal, std::vector<SimplexVal>> by_push;
        for (const auto& z : g->dom->level(n)) by_push[g->apply(z)].push_back(z);
        for (const auto& x : f->dom->level(n)) {
            auto it = by_push.find(f->apply(x));
            if (it == by_push.end()) continue;
            for (const auto& z : it->second) {
                std::vector<int> key;
                encode_val(key, x);
                encode_val(key, z);
                out.push_back(std::move(key));
            }
        }
        return out;
    }
    std::vector<int> act(int /*n*/, const std::vector<int>& key, const OrdinalMap& op) const {
        size_t at = 0;
        SimplexVal x = decode_val(key, at);
        SimplexVal z = decode_val(key, at);
        std::vector<int> out;
        encode_val(out, f->dom->eval(x, op));
        encode_val(out, g->dom->eval(z, op));
        return out;
    }
    std::vector<int> face(int n, const std::vector<int>& key, int i) const {
        return act(n, key, ordinal_delta(i, n));
    }
    std::vector<int> degen(int n, const std::vector<int>& key, int j) const {
        return act(n, key, ordinal_sigma(j, n));
    }
    std::string name(int /*n*/, const std::vector<int>& key) const {
        size_t at = 0;
        SimplexVal x = decode_val(key, at);
        SimplexVal z = decode_val(key, at);
        return "(" + f->dom->name(x.dim, x.id) + "," + g->dom->name(z.dim, z.id) + ")";
    }
};

}  // namespace detail

struct FiberedSSet {
    SSetPtr S;
    SimplicialMap to_first, to_second;  // the two projections
};

inline FiberedSSet fibered_sset(const SimplicialMap& f, const SimplicialMap& g, int cap) {
    if (f.cod != g.cod && f.cod.get() != g.cod.get())
        throw DomainError("fibered product needs a common target");
    if (cap > f.dom->cap || cap > g.dom->cap)
        throw DomainError("fibered product cap exceeds a factor's truncation");
    detail::FiberedModel M{&f, &g};
    auto built = detail::build_from_model(M, cap);
    FiberedSSet out;
    out.S = built.S;
    out.to_first.dom = out.S;
    out.to_first.cod = f.dom;
    out.to_second.dom = out.S;
    out.to_second.cod = g.dom;
    out.to_first.val.resize(cap + 1);
    out.to_second.val.resize(cap + 1);
    for (int d = 0; d <= cap; ++d)
        for (const auto& key : built.key_of[d]) {
            size_t at = 0;
            out.to_first.val[d].push_back(detail::decode_val(key, at));
            out.to_second.val[d].push_back(detail::decode_val(key, at));
        }
    return out;
}

/* ---------- relative coskeleta ----------
   Level n of the stage-m relative coskeleton of f : X -> Y holds the pairs
   (values of X on the m-skeleton of the n-simplex, a level-n simplex of Y)
   that agree under f.  Stage -1 is Y itself. */
namespace detail {

struct CoskModel {
    const SimplicialMap* f;
    int m = 0;
    // hom(sk_m Delta^n, X) grouped by pushforward, precomputed per level
    std::vector<std::map<std::vector<int>, std::vector<std::vector<SimplexVal>>>> homs;
    std::vector<std::vector<std::vector<int>>> subs;  // subsets per level

    const TruncatedSSet& X() const { return *f->dom; }
    const TruncatedSSet& Y() const { return *f->cod; }

    std::vector<int> encode(const SimplexVal& y, const std::vector<SimplexVal>& xs) const {
        std::vector<int> key;
        encode_val(key, y);
        for (const auto& v : xs) encode_val(key, v);
        return key;
    }

    std::vector<std::vector<int>> level(int n) const {
        std::vector<std::vector<int>> out;
        for (const auto& y : Y().level(n)) {
            if (m < 0) {
                out.push_back(encode(y, {}));
                continue;
            }
            std::vector<SimplexVal> want;
            for (const auto& S : subs[n])
                want.push_back(Y().eval(y, OrdinalMap(n, S)));
            auto it = homs[n].find(encode_vals(want));
            if (it == homs[n].end()) continue;
            for (const auto& xs : it->second) out.push_back(encode(y, xs));
        }
        return out;
    }

    std::vector<int> act(int n, const std::vector<int>& key, const OrdinalMap& op) const {
        size_t at = 0;
        SimplexVal y = decode_val(key, at);
        std::vector<SimplexVal> xs;
        if (m >= 0)
            for (size_t i = 0; i < subs[n].size(); ++i) xs.push_back(decode_val(key, at));
        int p = op.source_size;
        SimplexVal y2 = Y().eval(y, op);
        std::vector<SimplexVal> xs2;
        if (m >= 0)
            for (const auto& S : subs[p]) {
                // push the subset through op, collapse repeats
                std::vector<int> img;
                for (int v : S)
                    if (img.empty() || img.back() != op(v)) img.push_back(op(v));
                std::vector<int> u;
                for (int v : S)
                    u.push_back((int)(std::lower_bound(img.begin(), img.end(), op(v)) -
                                      img.begin()));
                size_t pos = std::lower_bound(subs[n].begin(), subs[n].end(), img,
                                              [](const std::vector<int>& a,
                                                 const std::vector<int>& b) {
                                                  if (a.size() != b.size())
                                                      return a.size() < b.size();
                                                  return a < b;
                                              }) -
                             subs[n].begin();
                xs2.push_back(X().eval(xs.at(pos),
                                       OrdinalMap((int)img.size() - 1, std::move(u))));
            }
        return encode(y2, xs2);
    }
    std::vector<int> face(int n, const std::vector<int>& key, int i) const {
        return act(n, key, ordinal_delta(i, n));
    }
    std::vector<int> degen(int n, const std::vector<int>& key, int j) const {
        return act(n, key, ordinal_sigma(j, n));
    }
    std::string name(int n, const std::vector<int>& key) const {
        size_t at = 0;
        SimplexVal y = decode_val(key, at);
        return "over " + Y().name(y.dim, y.id) + " #" + std::to_string(key.size());
    }
};

}  // namespace detail

struct CoskSSet {
    SSetPtr S;
    int m = 0;
    detail::BuiltModel<detail::CoskModel> built;
    std::vector<std::vector<std::vector<int>>> subsets;  // per level
    SSetPtr dom_X, cod_Y;                                // of the defining map
};

inline CoskSSet cosk_relative(const SimplicialMap& f, int m, int cap) {
    // level n only reads the domain through its m-skeleton, so a domain
    // truncated at dimension >= min(m, cap) suffices
    if (cap > f.cod->cap || std::min(m, cap) > f.dom->cap)
        throw DomainError("coskeleton cap exceeds the stored truncation");
    detail::CoskModel M;
    M.f = &f;
    M.m = m;
    M.subs.resize(cap + 1);
    M.homs.resize(cap + 1);
    for (int n = 0; n <= cap && m >= 0; ++n) {
        M.subs[n] = detail::subsets_upto(n, m + 1);
        PosetSSet sk = skeleton_sset(std::min(m, n), n);
        HomSpace hs = hom_space(sk.S, f.dom);
        for (const auto& phi : hs.maps) {
            std::vector<SimplexVal> flat, push;
            for (int d = 0; d <= sk.S->cap; ++d)
                for (int id = 0; id < sk.S->n_nondeg(d); ++id) {
                    flat.push_back(phi.val[d][id]);
                    push.push_back(f.apply(phi.val[d][id]));
                }
            M.homs[n][detail::encode_vals(push)].push_back(std::move(flat));
        }
    }
    CoskSSet out;
    out.m = m;
    out.built = detail::build_from_model(M, cap);
    out.S = out.built.S;
    out.subsets = M.subs;
    out.dom_X = f.dom;
    out.cod_Y = f.cod;
    return out;
}

namespace detail {

/* re-encode a stage-m coskeleton element as a stage-(m-1) element by
   dropping the top-size skeleton values */
inline std::vector<int> restrict_cosk_key(const CoskSSet& from, const CoskSSet& to, int n,
                                          const std::vector<int>& key) {
    size_t at = 0;
    SimplexVal y = decode_val(key, at);
    std::vector<int> out;
    encode_val(out, y);
    if (to.m < 0) return out;
    std::vector<SimplexVal> xs;
    for (size_t i = 0; i < from.subsets[n].size(); ++i) xs.push_back(decode_val(key, at));
    for (size_t i = 0; i < from.subsets[n].size(); ++i)
        if ((int)from.subsets[n][i].size() <= to.m + 1) encode_val(out, xs[i]);
    return out;
}

}  // namespace detail

// the forgetful step from the stage-m relative coskeleton to stage m-1
inline SimplicialMap cosk_step(const CoskSSet& from, const CoskSSet& to) {
    if (to.m != from.m - 1) throw DomainError("coskeleton step stages must be adjacent");
    SimplicialMap f;
    f.dom = from.S;
    f.cod = to.S;
    f.val.resize(from.S->cap + 1);
    for (int d = 0; d <= from.S->cap; ++d)
        for (int id = 0; id < from.S->n_nondeg(d); ++id)
            f.val[d].push_back(
                to.built.normal(d, detail::restrict_cosk_key(from, to, d, from.built.key_of[d][id])));
    return f;
}

// the canonical comparison X -> cosk_m(X/Y)
inline SimplicialMap cosk_canonical(const SimplicialMap& f, const CoskSSet& T) {
    SimplicialMap out;
    out.dom = f.dom;
    out.cod = T.S;
    out.val.resize(f.dom->cap + 1);
    for (int d = 0; d <= f.dom->cap; ++d)
        for (int id = 0; id < f.dom->n_nondeg(d); ++id) {
            SimplexVal x = f.dom->nondeg(d, id);
            std::vector<int> key;
            detail::encode_val(key, f.apply(x));
            if (T.m >= 0)
                for (const auto& S : T.subsets[d])
                    detail::encode_val(key, f.dom->eval(x, OrdinalMap(d, S)));
            out.val[d].push_back(T.built.normal(d, key));
        }
    return out;
}

// X agrees with its own stage-m coskeleton in all degrees up to the cap
inline bool coskeletal_within(SSetPtr X, int m, int cap) {
    X = truncate_sset(X, cap);
    SimplicialMap p = to_point_map(X, point_sset(cap));
    CoskSSet T = cosk_relative(p, m, cap);
    SimplicialMap c = cosk_canonical(p, T);
    for (int n = 0; n <= cap; ++n) {
        std::set<SimplexVal> image;
        for (const auto& x : X->level(n)) image.insert(T.S->eval(c.val[x.dim][x.id], x.s));
        if (image.size() != X->level(n).size() ||
            image.size() != T.S->level(n).size())
            return false;
    }
    return true;
}

/* ---------- the fibered-product square of a simple step ----------
   For a stage-m step and a level n > m, the square comparing the level to
   the product of its m-dimensional restrictions must be cartesian.  The
   index set tried first is the injective monotone maps; if that fails the
   full monotone set is used and recorded. */
struct SquareReport {
    int n = 0;
    bool cartesian = false;
    bool injective_alpha = true;
};

namespace detail {

inline bool square_cartesian(const SimplicialMap& r, int m, int n,
                             const std::vector<OrdinalMap>& alphas) {
    const TruncatedSSet& X = *r.dom;
    const TruncatedSSet& Y = *r.cod;
    std::map<std::vector<int>, long long> fiber;  // key of y_m -> size
    for (const auto& x : X.level(m)) {
        std::vector<int> key;
        encode_val(key, r.apply(x));
        fiber[key] += 1;
    }
    std::set<std::vector<int>> seen;
    for (const auto& x : X.level(n)) {
        std::vector<int> key;
        encode_val(key, r.apply(x));
        for (const auto& a : alphas) encode_val(key, X.eval(x, a));
        if (!seen.insert(key).second) return false;  // not injective
    }
    long long count = 0;
    for (const auto& y : Y.level(n)) {
        long long prod = 1;
        for (const auto& a : alphas) {
            std::vector<int> key;
            encode_val(key, Y.eval(y, a));
            auto it = fiber.find(key);
            prod *= it == fiber.end() ? 0 : it->second;
        }
        count += prod;
    }
    return count == (long long)X.level(n).size();
}

}  // namespace detail

inline SquareReport simple_square(const SimplicialMap& r, int m, int n) {
    SquareReport rep;
    rep.n = n;
    if (detail::square_cartesian(r, m, n, detail::monotone_injections(m, n))) {
        rep.cartesian = true;
        rep.injective_alpha = true;
        return rep;
    }
    rep.injective_alpha = false;
    rep.cartesian = detail::square_cartesian(r, m, n, detail::monotone_maps(m, n));
    return rep;
}

/* ---------- coskeleton towers ---------- */
struct TowerStep {
    int m = 0;
    SimplicialMap map;
    SSetMapClass flags;
    bool simple_ok = false;
    std::vector<SquareReport> squares;  // levels m+1 .. cap
};

struct CoskTower {
    int cap = 0;
    std::vector<CoskSSet> spaces;  // stages cap-1 down to -1
    std::vector<TowerStep> steps;  // stage m step: spaces[i] -> spaces[i+1]
    SimplicialMap top;             // X -> stage cap-1
    bool top_bijective = false;
    bool factors = false;

    bool all_ok() const {
        if (!top_bijective || !factors) return false;
        for (const auto& st : steps) {
            if (!st.flags.is_hypercover() || !st.simple_ok) return false;
            for (const auto& sq : st.squares)
                if (!sq.cartesian) return false;
        }
        return true;
    }
};

inline SimplicialMap truncate_map(const SimplicialMap& f, int cap) {
    if (cap >= f.dom->cap && cap >= f.cod->cap) return f;
    SimplicialMap g;
    g.dom = truncate_sset(f.dom, cap);
    g.cod = truncate_sset(f.cod, cap);
    g.val.assign(f.val.begin(), f.val.begin() + std::min(cap, f.dom->cap) + 1);
    return g;
}

inline CoskTower coskeleton_tower(const SimplicialMap& f_in, int cap) {
    if (cap < 1) throw DomainError("tower cap must be at least 1");
    if (!coskeletal_within(f_in.dom, cap - 1, cap) ||
        !coskeletal_within(f_in.cod, cap - 1, cap))
        throw DomainError("tower inputs must be coskeletal one step below the cap");
    SimplicialMap f = truncate_map(f_in, cap);
    CoskTower tower;
    tower.cap = cap;
    for (int m = cap - 1; m >= -1; --m) tower.spaces.push_back(cosk_relative(f, m, cap));
    for (size_t i = 0; i + 1 < tower.spaces.size(); ++i) {
        TowerStep st;
        st.m = tower.spaces[i].m;
        st.map = cosk_step(tower.spaces[i], tower.spaces[i + 1]);
        st.flags = classify_sset_map(st.map, cap);
        st.simple_ok = true;
        for (int n : st.flags.nonbijective_levels())
            if (n != st.m) st.simple_ok = false;
        for (int n = st.m + 1; n <= cap; ++n) st.squares.push_back(simple_square(st.map, st.m, n));
        tower.steps.push_back(std::move(st));
    }
    tower.top = cosk_canonical(f, tower.spaces[0]);
    tower.top_bijective = true;
    for (int n = 0; n <= cap; ++n) {
        std::set<SimplexVal> image;
        for (const auto& x : f.dom->level(n)) image.insert(tower.top.apply(x));
        if (image.size() != f.dom->level(n).size() ||
            image.size() != tower.spaces[0].S->level(n).size())
            tower.top_bijective = false;
    }
    SimplicialMap composite = tower.top;
    for (const auto& st : tower.steps) composite = compose_maps(st.map, composite);
    // identify stage -1 with Y: its elements are exactly Y's simplices
    const CoskSSet& last = tower.spaces.back();
    SimplicialMap ident;
    ident.dom = last.S;
    ident.cod = f.cod;
    ident.val.resize(last.S->cap + 1);
    for (int d = 0; d <= last.S->cap; ++d)
        for (int id = 0; id < last.S->n_nondeg(d); ++id) {
            size_t at = 0;
            ident.val[d].push_back(detail::decode_val(last.built.key_of[d][id], at));
        }
    tower.factors = maps_equal(compose_maps(ident, composite), f);
    return tower;
}

/* ---------- one-vertex-class graph completions ----------
   A finite graph completed coskeletally above dimension one: every triangle
   and higher simplex is determined by its edges.  This produces acyclic
   fibrant examples that are not nerves of groupoids. */
inline SSetPtr graph_cosk_sset(int n_vertices, const std::vector<std::pair<int, int>>& edges,
                               int cap) {
    auto T1 = std::make_shared<TruncatedSSet>();
    T1->cap = 1;
    T1->face.resize(2);
    T1->label.resize(2);
    for (int v = 0; v < n_vertices; ++v) {
        T1->face[0].push_back({});
        T1->label[0].push_back("v" + std::to_string(v));
    }
    int e = 0;
    for (auto [a, b] : edges) {
        T1->face[1].push_back({{0, b, OrdinalMap(0, {0})}, {0, a, OrdinalMap(0, {0})}});
        T1->label[1].push_back("e" + std::to_string(e++));
    }
    SSetPtr one = T1;
    SimplicialMap p = to_point_map(one, point_sset(cap));
    CoskSSet full = cosk_relative(p, 1, cap);
    return full.S;
}

}  // namespace groco
