#pragma once

#include <compare>
#include <string>
#include <vector>

#include "groco/rat.hpp"

namespace groco {

/* Maps between finite ordinals [l] = {0, 1, ..., l}.  Immutable value type;
   ordered first by source_size, then lexicographically by values, so index
   lists over a fixed level have one canonical enumeration order. */
struct OrdinalMap {
    int source_size = 0;  // domain is [source_size]
    int target_size = 0;  // codomain is [target_size]
    std::vector<int> values;  // length source_size + 1

    OrdinalMap() : values{0} {}
    OrdinalMap(int target, std::vector<int> vals)
        : source_size(static_cast<int>(vals.size()) - 1),
          target_size(target),
          values(std::move(vals)) {
        if (values.empty()) throw DomainError("ordinal map with empty value list");
        for (int v : values)
            if (v < 0 || v > target_size)
                throw DomainError("ordinal map value out of range");
    }

    int operator()(int i) const { return values.at(i); }

    bool is_monotone() const {
        for (size_t i = 1; i < values.size(); ++i)
            if (values[i - 1] > values[i]) return false;
        return true;
    }
    bool is_injective() const {
        for (size_t i = 0; i < values.size(); ++i)
            for (size_t j = i + 1; j < values.size(); ++j)
                if (values[i] == values[j]) return false;
        return true;
    }
    bool is_surjective() const {
        std::vector<char> hit(target_size + 1, 0);
        for (int v : values) hit[v] = 1;
        for (char h : hit)
            if (!h) return false;
        return true;
    }
    // index shape admissible for semi-direct product coordinates
    bool is_sdp_index() const {
        return values[0] == 0 && is_monotone() && is_injective();
    }

    auto operator<=>(const OrdinalMap& o) const {
        if (auto c = source_size <=> o.source_size; c != 0) return c;
        return values <=> o.values;
    }
    bool operator==(const OrdinalMap& o) const = default;

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(values[i]);
        }
        s += ")";
        return s;
    }
};

inline OrdinalMap ordinal_identity(int n) {
    std::vector<int> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = i;
    return OrdinalMap(n, std::move(v));
}

// compose(f, g) = g after f; f : [l] -> [n], g : [n] -> [p].
inline OrdinalMap compose(const OrdinalMap& f, const OrdinalMap& g) {
    if (f.target_size != g.source_size)
        throw DomainError("ordinal composition size mismatch");
    std::vector<int> v(f.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = g.values[f.values[i]];
    return OrdinalMap(g.target_size, std::move(v));
}

// delta(i, n) : [n-1] -> [n], the monotone injection missing i.
inline OrdinalMap ordinal_delta(int i, int n) {
    if (n < 1 || i < 0 || i > n) throw DomainError("delta index out of range");
    std::vector<int> v(n);
    for (int j = 0; j < n; ++j) v[j] = j < i ? j : j + 1;
    return OrdinalMap(n, std::move(v));
}

// sigma(j, n) : [n+1] -> [n], the monotone surjection repeating j.
inline OrdinalMap ordinal_sigma(int j, int n) {
    if (j < 0 || j > n) throw DomainError("sigma index out of range");
    std::vector<int> v(n + 2);
    for (int k = 0; k <= n + 1; ++k) v[k] = k <= j ? k : k - 1;
    return OrdinalMap(n, std::move(v));
}

// iota(p, n) : [p] -> [n], inclusion onto the first p+1 vertices.
inline OrdinalMap ordinal_iota(int p, int n) {
    if (p < 0 || p > n) throw DomainError("iota index out of range");
    std::vector<int> v(p + 1);
    for (int k = 0; k <= p; ++k) v[k] = k;
    return OrdinalMap(n, std::move(v));
}

// tau(q, n) : [q] -> [n], inclusion onto the last q+1 vertices.
inline OrdinalMap ordinal_tau(int q, int n) {
    if (q < 0 || q > n) throw DomainError("tau index out of range");
    std::vector<int> v(q + 1);
    for (int k = 0; k <= q; ++k) v[k] = n - q + k;
    return OrdinalMap(n, std::move(v));
}

// chi(i, n) : [0] -> [n], the vertex i.
inline OrdinalMap ordinal_chi(int i, int n) {
    if (i < 0 || i > n) throw DomainError("chi index out of range");
    return OrdinalMap(n, {i});
}

/* prime(beta) : [l+1] -> [m+1] for beta : [l] -> [m]; fixes 0 and shifts the
   whole of beta up by one, i.e. beta'(0) = 0 and beta'(i+1) = beta(i) + 1.
   Applied uniformly, including i = 0. */
inline OrdinalMap ordinal_prime(const OrdinalMap& beta) {
    std::vector<int> v(beta.values.size() + 1);
    v[0] = 0;
    for (size_t i = 0; i < beta.values.size(); ++i) v[i + 1] = beta.values[i] + 1;
    return OrdinalMap(beta.target_size + 1, std::move(v));
}

// All monotone injections [k] -> [n] with value 0 at 0, over k = 0..n,
// in canonical order (source_size, then lex).  These index the semi-direct
// product coordinates at level n.
inline std::vector<OrdinalMap> sdp_indices(int n) {
    std::vector<OrdinalMap> out{OrdinalMap(n, {0})};
    std::vector<std::vector<int>> frontier{{0}};
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<int>> next;
        for (auto& c : frontier)
            for (int v = c.back() + 1; v <= n; ++v) {
                auto c2 = c;
                c2.push_back(v);
                next.push_back(std::move(c2));
            }
        for (auto& c : next) out.push_back(OrdinalMap(n, c));
        frontier = std::move(next);
    }
    return out;
}

}  // namespace groco
