#pragma once

/* JSON file formats for every artifact the command-line driver consumes --
   groupoids, coefficient systems, morphisms, truncated simplicial sets, and
   simplicial maps -- plus content digests and the report structure every
   command emits.  Writers produce a fixed key order and sorted entry lists,
   so the same data always serializes to the same bytes; readers validate as
   they load and throw InputError naming the offending file and field.

   Cross-file references ("groupoid", "dom", "cod") are paths relative to the
   directory of the referencing file.  A FileStore caches loads by canonical
   path, so two files naming the same groupoid share one in-memory copy. */

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "groco/groupoid.hpp"
#include "groco/ruth.hpp"
#include "groco/sset.hpp"

namespace groco {

using Json = nlohmann::ordered_json;

/* ---------- digests ---------- */

// 64-bit FNV-1a over the raw file bytes, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/* ---------- rationals as strings ---------- */

// Canonical form: "p" or "p/q" with q > 0 and gcd(|p|, q) = 1.
inline std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();  // direct mpq construction may leave p/q unreduced
    return c.get_str();
}

inline Rat rat_from_string(const std::string& s, const std::string& where) {
    auto bad = [&]() -> Rat {
        throw InputError(where + ": malformed rational '" + s + "'");
    };
    size_t i = 0;
    if (i < s.size() && s[i] == '-') ++i;
    size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
    if (digits == 0) return bad();
    if (i < s.size()) {
        if (s[i] != '/') return bad();
        ++i;
        size_t den_start = i, nonzero = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            if (s[i] != '0') ++nonzero;
            ++i;
        }
        if (i != s.size() || i == den_start || nonzero == 0) return bad();
    }
    Rat r(s);
    r.canonicalize();
    return r;
}

inline Json matrix_to_json(const QMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline QMat matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": matrix must be an array of rows");
    int rows = static_cast<int>(j.size());
    int cols = -1;
    std::vector<std::vector<Rat>> dense;
    for (int i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (!row.is_array()) throw InputError(where + ": matrix row must be an array");
        if (cols < 0) cols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != cols)
            throw InputError(where + ": ragged matrix rows");
        std::vector<Rat> r;
        for (const Json& cell : row) {
            if (!cell.is_string())
                throw InputError(where + ": matrix entries must be rational strings");
            r.push_back(rat_from_string(cell.get<std::string>(), where));
        }
        dense.push_back(std::move(r));
    }
    if (rows == 0) return QMat(0, 0);
    return QMat::from_dense(dense);
}

/* ---------- low-level field access ---------- */

namespace ioutil {

inline const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object with '" +
                                         key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
    return *it;
}

inline int need_int(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number_integer())
        throw InputError(where + ": field '" + key + "' must be an integer");
    return v.get<int>();
}

inline std::string need_string(const Json& j, const char* key,
                               const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_string())
        throw InputError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline const Json& need_array(const Json& j, const char* key,
                              const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_array())
        throw InputError(where + ": field '" + key + "' must be an array");
    return v;
}

inline std::vector<int> int_list(const Json& v, const std::string& where) {
    if (!v.is_array()) throw InputError(where + ": expected an integer array");
    std::vector<int> out;
    for (const Json& x : v) {
        if (!x.is_number_integer())
            throw InputError(where + ": expected an integer array");
        out.push_back(x.get<int>());
    }
    return out;
}

}  // namespace ioutil

/* ---------- file reading and the load cache ---------- */

struct FileStore {
    std::map<std::string, std::shared_ptr<const FiniteGroupoid>> groupoids;
    std::map<std::string, std::shared_ptr<const RepUpToHomotopy>> reps;
    std::map<std::string, SSetPtr> ssets;
    // one entry per distinct file, in first-load order: (path as given, digest)
    std::vector<std::pair<std::string, std::string>> digests;
    std::set<std::string> seen;  // canonical paths already digested
};

inline std::string canonical_key(const std::string& path) {
    std::error_code ec;
    auto c = std::filesystem::weakly_canonical(path, ec);
    if (ec) return std::filesystem::absolute(path).lexically_normal().string();
    return c.string();
}

// Resolve a reference found inside `from` against that file's directory.
inline std::string resolve_ref(const std::string& from, const std::string& ref) {
    std::filesystem::path p(ref);
    if (p.is_absolute()) return ref;
    return (std::filesystem::path(from).parent_path() / p).string();
}

inline Json read_json_file(const std::string& path, FileStore& store) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    std::string key = canonical_key(path);
    if (store.seen.insert(key).second)
        store.digests.emplace_back(path, fnv1a_hex(text));
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void expect_kind(const Json& j, const char* kind, const std::string& path) {
    std::string k = ioutil::need_string(j, "kind", path);
    if (k != kind)
        throw InputError(path + ": expected kind '" + kind + "', found '" + k + "'");
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
    if (!out) throw InputError(path + ": write failed");
}

inline void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/* ---------- groupoid files ---------- */

inline Json groupoid_to_json(const FiniteGroupoid& g) {
    Json j;
    j["kind"] = "groupoid";
    j["objects"] = g.object_names;
    Json arrows = Json::array();
    for (int a = 0; a < g.n_arrows(); ++a) {
        Json e;
        e["name"] = g.arrow_names[a];
        e["src"] = g.src[a];
        e["tgt"] = g.tgt[a];
        arrows.push_back(std::move(e));
    }
    j["arrows"] = std::move(arrows);
    Json triples = Json::array();
    for (int h = 0; h < g.n_arrows(); ++h)
        for (int k = 0; k < g.n_arrows(); ++k)
            if (g.composable(h, k)) triples.push_back(Json::array({h, k, g.comp[h][k]}));
    j["compose"] = std::move(triples);
    j["units"] = g.unit;
    j["inverses"] = g.inv;
    return j;
}

inline FiniteGroupoid groupoid_from_json(const Json& j, const std::string& path) {
    expect_kind(j, "groupoid", path);
    FiniteGroupoid g;
    for (const Json& name : ioutil::need_array(j, "objects", path)) {
        if (!name.is_string())
            throw InputError(path + ": object names must be strings");
        g.object_names.push_back(name.get<std::string>());
    }
    if (g.object_names.empty())
        throw InputError(path + ": a groupoid needs at least one object");
    const Json& arrows = ioutil::need_array(j, "arrows", path);
    for (size_t i = 0; i < arrows.size(); ++i) {
        std::string where = path + ": arrows[" + std::to_string(i) + "]";
        g.arrow_names.push_back(ioutil::need_string(arrows.at(i), "name", where));
        int s = ioutil::need_int(arrows.at(i), "src", where);
        int t = ioutil::need_int(arrows.at(i), "tgt", where);
        if (s < 0 || s >= g.n_objects() || t < 0 || t >= g.n_objects())
            throw InputError(where + ": endpoint out of range");
        g.src.push_back(s);
        g.tgt.push_back(t);
    }
    int na = g.n_arrows();
    g.comp.assign(na, std::vector<int>(na, -1));
    const Json& triples = ioutil::need_array(j, "compose", path);
    for (size_t i = 0; i < triples.size(); ++i) {
        std::string where = path + ": compose[" + std::to_string(i) + "]";
        std::vector<int> t = ioutil::int_list(triples.at(i), where);
        if (t.size() != 3) throw InputError(where + ": expected [h, g, h*g]");
        for (int a : t)
            if (a < 0 || a >= na) throw InputError(where + ": arrow id out of range");
        if (g.src[t[0]] != g.tgt[t[1]])
            throw InputError(where + ": triple composes non-composable arrows");
        if (g.comp[t[0]][t[1]] != -1 && g.comp[t[0]][t[1]] != t[2])
            throw InputError(where + ": conflicting duplicate triple");
        g.comp[t[0]][t[1]] = t[2];
    }
    for (int h = 0; h < na; ++h)
        for (int k = 0; k < na; ++k)
            if (g.composable(h, k) && g.comp[h][k] < 0)
                throw InputError(path + ": no composite listed for composable pair (" +
                                 g.arrow_names[h] + ", " + g.arrow_names[k] + ")");

    // Units and inverses are derived from the composition table; declared
    // tables, when present, must agree.
    g.unit.assign(g.n_objects(), -1);
    for (int x = 0; x < g.n_objects(); ++x) {
        for (int u = 0; u < na; ++u) {
            if (g.src[u] != x || g.tgt[u] != x) continue;
            bool ok = true;
            for (int a = 0; a < na && ok; ++a) {
                if (g.tgt[a] == x && g.comp[u][a] != a) ok = false;
                if (g.src[a] == x && g.comp[a][u] != a) ok = false;
            }
            if (ok) {
                g.unit[x] = u;
                break;
            }
        }
        if (g.unit[x] < 0)
            throw InputError(path + ": no unit arrow at object " + g.object_names[x]);
    }
    g.inv.assign(na, -1);
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < na; ++b) {
            if (g.src[b] != g.tgt[a] || g.tgt[b] != g.src[a]) continue;
            if (g.comp[b][a] == g.unit[g.src[a]] && g.comp[a][b] == g.unit[g.tgt[a]]) {
                g.inv[a] = b;
                break;
            }
        }
        if (g.inv[a] < 0)
            throw InputError(path + ": arrow " + g.arrow_names[a] +
                             " has no two-sided inverse");
    }
    if (j.contains("units")) {
        std::vector<int> declared = ioutil::int_list(j.at("units"), path + ": units");
        if (declared != g.unit)
            throw InputError(path + ": declared units disagree with the composition table");
    }
    if (j.contains("inverses")) {
        std::vector<int> declared =
            ioutil::int_list(j.at("inverses"), path + ": inverses");
        if (declared != g.inv)
            throw InputError(path +
                             ": declared inverses disagree with the composition table");
    }
    auto bad = validate_groupoid(g);
    if (!bad.empty()) throw InputError(path + ": " + bad.front());
    return g;
}

inline std::shared_ptr<const FiniteGroupoid> load_groupoid(const std::string& path,
                                                           FileStore& store) {
    std::string key = canonical_key(path);
    if (auto it = store.groupoids.find(key); it != store.groupoids.end())
        return it->second;
    Json j = read_json_file(path, store);
    auto g = std::make_shared<const FiniteGroupoid>(groupoid_from_json(j, path));
    store.groupoids[key] = g;
    return g;
}

inline void save_groupoid(const FiniteGroupoid& g, const std::string& path) {
    write_json_file(path, groupoid_to_json(g));
}

/* ---------- chains ---------- */

inline Json chain_to_json(const NerveChain& c) {
    Json j;
    j["base"] = c.base;
    j["arrows"] = c.arrows;
    return j;
}

inline NerveChain chain_from_json(const Json& j, const std::string& where) {
    NerveChain c;
    c.base = ioutil::need_int(j, "base", where);
    c.arrows = ioutil::int_list(ioutil::need_array(j, "arrows", where), where);
    return c;
}

/* ---------- coefficient-system (rep) files ---------- */

inline Json rep_to_json(const RepUpToHomotopy& r, const std::string& groupoid_ref) {
    Json j;
    j["kind"] = "rep";
    j["groupoid"] = groupoid_ref;
    j["degree_range"] = Json::array({r.bundle.lo, r.bundle.hi});
    j["dims"] = r.bundle.dims;
    Json blocks = Json::array();
    for (const auto& [m, per_chain] : r.blocks)
        for (const auto& [g, per_deg] : per_chain)
            for (const auto& [n, mat] : per_deg) {
                Json b;
                b["m"] = m;
                b["chain"] = chain_to_json(g);
                b["degree"] = n;
                b["matrix"] = matrix_to_json(mat);
                blocks.push_back(std::move(b));
            }
    j["blocks"] = std::move(blocks);
    return j;
}

inline std::shared_ptr<const RepUpToHomotopy> load_rep(const std::string& path,
                                                       FileStore& store) {
    std::string key = canonical_key(path);
    if (auto it = store.reps.find(key); it != store.reps.end()) return it->second;
    Json j = read_json_file(path, store);
    expect_kind(j, "rep", path);
    auto rep = std::make_shared<RepUpToHomotopy>();
    rep->base = load_groupoid(
        resolve_ref(path, ioutil::need_string(j, "groupoid", path)), store);
    std::vector<int> range =
        ioutil::int_list(ioutil::need_array(j, "degree_range", path), path);
    if (range.size() != 2 || range[0] > range[1])
        throw InputError(path + ": degree_range must be [lo, hi] with lo <= hi");
    rep->bundle.lo = range[0];
    rep->bundle.hi = range[1];
    const Json& dims = ioutil::need_array(j, "dims", path);
    if (static_cast<int>(dims.size()) != rep->base->n_objects())
        throw InputError(path + ": dims must list one row per object");
    for (const Json& row : dims) {
        std::vector<int> d = ioutil::int_list(row, path + ": dims");
        if (static_cast<int>(d.size()) != rep->bundle.width() + 1)
            throw InputError(path + ": dims row must span the degree range");
        for (int v : d)
            if (v < 0) throw InputError(path + ": negative fiber dimension");
        rep->bundle.dims.push_back(std::move(d));
    }
    const Json& blocks = ioutil::need_array(j, "blocks", path);
    std::set<std::tuple<int, NerveChain, int>> placed;
    for (size_t i = 0; i < blocks.size(); ++i) {
        std::string where = path + ": blocks[" + std::to_string(i) + "]";
        const Json& b = blocks.at(i);
        int m = ioutil::need_int(b, "m", where);
        NerveChain g = chain_from_json(ioutil::need(b, "chain", where), where);
        int n = ioutil::need_int(b, "degree", where);
        if (!placed.insert({m, g, n}).second)
            throw InputError(where + ": duplicate block");
        QMat mat = matrix_from_json(ioutil::need(b, "matrix", where), where);
        try {
            rep->set_block(m, g, n, std::move(mat));
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    auto bad = check_ruth(*rep);
    if (!bad.empty())
        throw InputError(path + ": coefficient axioms fail (" + bad.front().rule +
                         " at m=" + std::to_string(bad.front().m) +
                         ", degree=" + std::to_string(bad.front().degree) + ")");
    std::shared_ptr<const RepUpToHomotopy> frozen = rep;
    store.reps[key] = frozen;
    return frozen;
}

inline void save_rep(const RepUpToHomotopy& r, const std::string& groupoid_ref,
                     const std::string& path) {
    write_json_file(path, rep_to_json(r, groupoid_ref));
}

/* ---------- morphism files ---------- */

inline Json morphism_to_json(const GroupoidMorphism& f, const std::string& dom_ref,
                             const std::string& cod_ref) {
    Json j;
    j["kind"] = "morphism";
    j["dom"] = dom_ref;
    j["cod"] = cod_ref;
    j["object_map"] = f.obj_map;
    j["arrow_map"] = f.arrow_map;
    return j;
}

inline GroupoidMorphism load_morphism(const std::string& path, FileStore& store) {
    Json j = read_json_file(path, store);
    expect_kind(j, "morphism", path);
    GroupoidMorphism f;
    f.dom = load_groupoid(resolve_ref(path, ioutil::need_string(j, "dom", path)), store);
    f.cod = load_groupoid(resolve_ref(path, ioutil::need_string(j, "cod", path)), store);
    f.obj_map = ioutil::int_list(ioutil::need_array(j, "object_map", path),
                                 path + ": object_map");
    f.arrow_map = ioutil::int_list(ioutil::need_array(j, "arrow_map", path),
                                   path + ": arrow_map");
    auto bad = validate_morphism(f);
    if (!bad.empty()) throw InputError(path + ": " + bad.front());
    return f;
}

inline void save_morphism(const GroupoidMorphism& f, const std::string& dom_ref,
                          const std::string& cod_ref, const std::string& path) {
    write_json_file(path, morphism_to_json(f, dom_ref, cod_ref));
}

/* ---------- simplicial-set files ---------- */

inline Json simplex_val_to_json(const SimplexVal& v) {
    Json j;
    j["dim"] = v.dim;
    j["id"] = v.id;
    j["map"] = v.s.values;
    return j;
}

inline SimplexVal simplex_val_from_json(const Json& j, const std::string& where) {
    SimplexVal v;
    v.dim = ioutil::need_int(j, "dim", where);
    v.id = ioutil::need_int(j, "id", where);
    std::vector<int> vals =
        ioutil::int_list(ioutil::need_array(j, "map", where), where);
    if (v.dim < 0) throw InputError(where + ": negative dimension");
    try {
        v.s = OrdinalMap(v.dim, std::move(vals));
    } catch (const DomainError& e) {
        throw InputError(where + ": " + e.what());
    }
    return v;
}

inline Json sset_to_json(const TruncatedSSet& x) {
    Json j;
    j["kind"] = "sset";
    j["cap"] = x.cap;
    Json levels = Json::array();
    for (int d = 0; d <= x.cap; ++d) {
        Json lv;
        lv["dim"] = d;
        Json cells = Json::array();
        for (int i = 0; i < x.n_nondeg(d); ++i) {
            Json c;
            c["name"] = x.name(d, i);
            Json faces = Json::array();
            if (d >= 1)
                for (const SimplexVal& f : x.face[d][i])
                    faces.push_back(simplex_val_to_json(f));
            c["faces"] = std::move(faces);
            cells.push_back(std::move(c));
        }
        lv["simplices"] = std::move(cells);
        levels.push_back(std::move(lv));
    }
    j["levels"] = std::move(levels);
    return j;
}

inline SSetPtr load_sset(const std::string& path, FileStore& store) {
    std::string key = canonical_key(path);
    if (auto it = store.ssets.find(key); it != store.ssets.end()) return it->second;
    Json j = read_json_file(path, store);
    expect_kind(j, "sset", path);
    auto x = std::make_shared<TruncatedSSet>();
    x->cap = ioutil::need_int(j, "cap", path);
    if (x->cap < 0) throw InputError(path + ": negative truncation cap");
    const Json& levels = ioutil::need_array(j, "levels", path);
    if (static_cast<int>(levels.size()) != x->cap + 1)
        throw InputError(path + ": levels must cover dimensions 0..cap");
    x->face.resize(x->cap + 1);
    x->label.resize(x->cap + 1);
    for (int d = 0; d <= x->cap; ++d) {
        std::string lwhere = path + ": levels[" + std::to_string(d) + "]";
        const Json& lv = levels.at(d);
        if (ioutil::need_int(lv, "dim", lwhere) != d)
            throw InputError(lwhere + ": dimensions must appear in order");
        const Json& cells = ioutil::need_array(lv, "simplices", lwhere);
        for (size_t i = 0; i < cells.size(); ++i) {
            std::string where = lwhere + ".simplices[" + std::to_string(i) + "]";
            const Json& c = cells.at(i);
            x->label[d].push_back(ioutil::need_string(c, "name", where));
            const Json& faces = ioutil::need_array(c, "faces", where);
            size_t expect = d == 0 ? 0 : static_cast<size_t>(d) + 1;
            if (faces.size() != expect)
                throw InputError(where + ": expected " + std::to_string(expect) +
                                 " face records");
            std::vector<SimplexVal> fs;
            for (size_t k = 0; k < faces.size(); ++k)
                fs.push_back(simplex_val_from_json(
                    faces.at(k), where + ".faces[" + std::to_string(k) + "]"));
            x->face[d].push_back(std::move(fs));
        }
    }
    if (auto bad = validate_sset(*x))
        throw InputError(path + ": face structure violation at dim " +
                         std::to_string(bad->dim) + ", cell " +
                         std::to_string(bad->id) + ": " + bad->what);
    SSetPtr frozen = x;
    store.ssets[key] = frozen;
    return frozen;
}

inline void save_sset(const TruncatedSSet& x, const std::string& path) {
    write_json_file(path, sset_to_json(x));
}

/* ---------- simplicial-map files ---------- */

inline Json sset_map_to_json(const SimplicialMap& f, const std::string& dom_ref,
                             const std::string& cod_ref) {
    Json j;
    j["kind"] = "sset_map";
    j["dom"] = dom_ref;
    j["cod"] = cod_ref;
    Json values = Json::array();
    for (int d = 0; d < static_cast<int>(f.val.size()); ++d) {
        Json lv;
        lv["dim"] = d;
        Json cells = Json::array();
        for (const SimplexVal& v : f.val[d]) cells.push_back(simplex_val_to_json(v));
        lv["simplices"] = std::move(cells);
        values.push_back(std::move(lv));
    }
    j["values"] = std::move(values);
    return j;
}

inline SimplicialMap load_sset_map(const std::string& path, FileStore& store) {
    Json j = read_json_file(path, store);
    expect_kind(j, "sset_map", path);
    SimplicialMap f;
    f.dom = load_sset(resolve_ref(path, ioutil::need_string(j, "dom", path)), store);
    f.cod = load_sset(resolve_ref(path, ioutil::need_string(j, "cod", path)), store);
    const Json& values = ioutil::need_array(j, "values", path);
    if (static_cast<int>(values.size()) != f.dom->cap + 1)
        throw InputError(path + ": values must cover dimensions 0..cap of the domain");
    f.val.resize(values.size());
    for (int d = 0; d <= f.dom->cap; ++d) {
        std::string lwhere = path + ": values[" + std::to_string(d) + "]";
        const Json& lv = values.at(d);
        if (ioutil::need_int(lv, "dim", lwhere) != d)
            throw InputError(lwhere + ": dimensions must appear in order");
        const Json& cells = ioutil::need_array(lv, "simplices", lwhere);
        if (static_cast<int>(cells.size()) != f.dom->n_nondeg(d))
            throw InputError(lwhere +
                             ": one value required per nondegenerate domain cell");
        for (size_t i = 0; i < cells.size(); ++i)
            f.val[d].push_back(simplex_val_from_json(
                cells.at(i), lwhere + ".simplices[" + std::to_string(i) + "]"));
    }
    if (auto bad = validate_map(f))
        throw InputError(path + ": simplicial map violation at dim " +
                         std::to_string(bad->dim) + ", cell " +
                         std::to_string(bad->id) + ": " + bad->what);
    return f;
}

inline void save_sset_map(const SimplicialMap& f, const std::string& dom_ref,
                          const std::string& cod_ref, const std::string& path) {
    write_json_file(path, sset_map_to_json(f, dom_ref, cod_ref));
}

/* ---------- generic loading by kind ---------- */

inline std::string file_kind(const std::string& path, FileStore& store) {
    Json j = read_json_file(path, store);
    return ioutil::need_string(j, "kind", path);
}

/* ---------- run reports ---------- */

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct DimTable {
    std::string name;
    int first = 0;           // degree of the first entry
    std::vector<int> dims;   // consecutive degrees
};

struct Certificate {
    std::string name;
    Json payload;
};

/* Everything a command reports.  Deterministic given the inputs: both
   renderings below carry exactly these fields and nothing else. */
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
    std::vector<CheckLine> checks;
    std::vector<DimTable> tables;
    std::vector<Certificate> certificates;
    int exit_status = 0;

    void add_check(std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
    void add_table(std::string name, int first, std::vector<int> dims) {
        tables.push_back({std::move(name), first, std::move(dims)});
    }
    void add_certificate(std::string name, Json payload) {
        certificates.push_back({std::move(name), std::move(payload)});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline Json report_to_json(const RunReport& r) {
    Json j;
    j["command"] = r.command;
    Json inputs = Json::array();
    for (const auto& [path, digest] : r.inputs) {
        Json e;
        e["path"] = path;
        e["digest"] = digest;
        inputs.push_back(std::move(e));
    }
    j["inputs"] = std::move(inputs);
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["detail"] = c.detail;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    Json tables = Json::array();
    for (const auto& t : r.tables) {
        Json e;
        e["name"] = t.name;
        e["first_degree"] = t.first;
        e["dims"] = t.dims;
        tables.push_back(std::move(e));
    }
    j["tables"] = std::move(tables);
    Json certs = Json::array();
    for (const auto& c : r.certificates) {
        Json e;
        e["name"] = c.name;
        e["payload"] = c.payload;
        certs.push_back(std::move(e));
    }
    j["certificates"] = std::move(certs);
    j["exit_status"] = r.exit_status;
    return j;
}

inline std::string render_machine(const RunReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

inline std::string render_human(const RunReport& r) {
    std::ostringstream os;
    os << "command: " << r.command << "\n";
    for (const auto& [path, digest] : r.inputs)
        os << "input:   " << path << "  (digest " << digest << ")\n";
    for (const auto& c : r.checks) {
        os << (c.pass ? "PASS" : "FAIL") << "     " << c.name;
        if (!c.detail.empty()) os << "  [" << c.detail << "]";
        os << "\n";
    }
    for (const auto& t : r.tables) {
        os << "dims     " << t.name << "  degrees " << t.first << ".."
           << t.first + static_cast<int>(t.dims.size()) - 1 << ": (";
        for (size_t i = 0; i < t.dims.size(); ++i) {
            if (i) os << ", ";
            os << t.dims[i];
        }
        os << ")\n";
    }
    for (const auto& c : r.certificates)
        os << "certificate " << c.name << ": " << c.payload.dump() << "\n";
    os << "exit: " << r.exit_status << "\n";
    return os.str();
}

inline std::string render_report(const RunReport& r, const std::string& format) {
    if (format == "machine") return render_machine(r);
    return render_human(r);
}

}  // namespace groco
