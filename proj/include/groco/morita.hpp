#pragma once

/* End-to-end invariance pipeline: pull a coefficient system back along a
   groupoid hypercover and certify that cohomology is unchanged, computing
   every dimension three independent ways --
     (1) directly from the double complex of the coefficients,
     (2) from the projectable rows of the semi-direct product of the
         shifted dual, and
     (3) from the full linear complex of that semi-direct product, together
         with its whole support filtration.
   The three answers must agree degree by degree on both ends of the
   morphism, the two direct answers must agree with each other, the induced
   map on cohomology must be bijective in every computed degree, and the
   semi-direct product must commute with base change on the nose. */

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "groco/cochain.hpp"
#include "groco/groupoid.hpp"
#include "groco/ruth.hpp"
#include "groco/sdp.hpp"

namespace groco {

struct MoritaOptions {
    int cap = 4;            // direct complexes carry degrees lo .. cap-1
    int filt_cap_cod = -1;  // default: cap + shift (full overlap)
    int filt_cap_dom = -1;  // default: capped at 4 to bound elimination size
};

struct MoritaReport {
    MorphismClass cls;  // diagnosis when the precondition fails
    bool hypercover = false;

    int cap = 0;    // direct complexes built through degree cap-1
    int shift = 0;  // dual degrees raised by this much; filtration row i
                    // carries the dimension in total degree i - shift
    int lo = 0;     // lowest total degree of the direct complexes

    std::map<int, int> direct_cod, direct_dom;  // degree -> dim, [lo, cap-1]
    FiltrationTable table_cod, table_dom;       // row i <-> degree i - shift
    bool cartesian = false;          // sdp commutes with base change
    std::map<int, bool> bijective;   // induced map on cohomology per degree
    bool dims_equal = false;         // domain vs codomain, every degree
    bool pipelines_cod = false;      // three pipelines agree (codomain side)
    bool pipelines_dom = false;      // three pipelines agree (domain side)
    bool stages_equal = false;       // every filtration stage row matches

    bool induced_all_bijective() const {
        for (const auto& [n, ok] : bijective)
            if (!ok) return false;
        return !bijective.empty();
    }
    bool all_ok() const {
        return hypercover && cartesian && dims_equal && pipelines_cod &&
               pipelines_dom && stages_equal && induced_all_bijective();
    }
};

namespace detail {

// Row i of a filtration table carries total degree i - shift.  It must agree
// with the direct table on [lo, cap-1], vanish below lo, and is out of the
// direct table's reach above cap-1 (left uncompared).
inline bool row_matches_direct(const std::vector<int>& row,
                               const std::map<int, int>& direct, int shift, int lo,
                               int cap) {
    for (int i = 0; i < static_cast<int>(row.size()); ++i) {
        int n = i - shift;
        if (n < lo) {
            if (row[i] != 0) return false;
        } else if (n <= cap - 1) {
            auto it = direct.find(n);
            if (it == direct.end() || row[i] != it->second) return false;
        }
    }
    return true;
}

inline bool table_stages_equal(const FiltrationTable& t) {
    for (const auto& [m, row] : t.rows)
        if (row != t.lin_row) return false;
    return t.proj_row == t.lin_row;
}

}  // namespace detail

inline MoritaReport morita_verify(const GroupoidMorphism& f,
                                  std::shared_ptr<const RepUpToHomotopy> rep,
                                  const MoritaOptions& opt = {}) {
    auto bad = validate_morphism(f);
    if (!bad.empty()) throw InputError("invalid morphism: " + bad.front());
    if (!rep) throw InputError("missing coefficient system");
    if (f.cod.get() != rep->base.get() && !(*f.cod == *rep->base))
        throw InputError("coefficients are not defined over the codomain");
    if (opt.cap < -rep->bundle.hi)
        throw InputError("degree cap below the lowest degree of the complex");

    MoritaReport r;
    r.cls = classify_morphism(f);
    r.hypercover = r.cls.hypercover();
    if (!r.hypercover) return r;  // caller reports the diagnosis

    r.cap = opt.cap;
    r.shift = std::max(rep->bundle.hi, 0);
    r.lo = -rep->bundle.hi;

    // pipeline 1: the direct complexes on both sides, with the induced map
    PullbackMapResult pb = pullback_map(f, rep, r.cap);
    r.direct_cod = cohomology_dims(pb.source);
    r.direct_dom = cohomology_dims(pb.target);
    r.bijective = pb.bijective;

    // pipelines 2 and 3 run on the semi-direct product of the shifted dual
    auto dual_cod =
        std::make_shared<const RepUpToHomotopy>(shift_ruth(dual_ruth(rep), r.shift));
    auto dual_dom = std::make_shared<const RepUpToHomotopy>(pullback_ruth(f, *dual_cod));
    int fc = opt.filt_cap_cod >= 1 ? opt.filt_cap_cod : r.cap + r.shift;
    int fd = opt.filt_cap_dom >= 1 ? opt.filt_cap_dom
                                   : std::min(r.cap + r.shift, 4);
    r.table_cod = filtration_cohomology(dual_cod, fc);
    r.table_dom = filtration_cohomology(dual_dom, fd);

    r.cartesian = sdp_pullback(f, dual_cod, fd).cartesian;

    r.dims_equal = true;
    for (int n = r.lo; n < r.cap; ++n) {
        auto a = r.direct_cod.find(n);
        auto b = r.direct_dom.find(n);
        if (a == r.direct_cod.end() || b == r.direct_dom.end() ||
            a->second != b->second)
            r.dims_equal = false;
    }

    auto agree = [&](const FiltrationTable& t, const std::map<int, int>& direct) {
        return t.lin_row == t.proj_row &&
               detail::row_matches_direct(t.lin_row, direct, r.shift, r.lo, r.cap) &&
               detail::row_matches_direct(t.proj_row, direct, r.shift, r.lo, r.cap);
    };
    r.pipelines_cod = agree(r.table_cod, r.direct_cod);
    r.pipelines_dom = agree(r.table_dom, r.direct_dom);
    r.stages_equal = detail::table_stages_equal(r.table_cod) &&
                     detail::table_stages_equal(r.table_dom);
    return r;
}

}  // namespace groco
