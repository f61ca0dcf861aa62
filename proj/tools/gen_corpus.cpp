/* Writes the bundled example corpus: groupoids, coefficient systems (at
   least six, spanning one-term, two-term with nonzero first homotopy,
   three-term, duals, pullbacks, and shifts), morphisms including both
   hypercovers and refused non-hypercovers, truncated simplicial sets, and
   simplicial maps.  Usage: groco-gen [output-dir]; default "data". */

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "groco/io.hpp"

#include "../tests/corpus.hpp"

namespace {

using namespace groco;

std::string dir;

std::string at(const std::string& name) { return dir + "/" + name; }

void note(const std::string& name) { std::cout << "wrote " << at(name) << "\n"; }

void put_groupoid(const std::string& name, const FiniteGroupoid& g) {
    save_groupoid(g, at(name));
    note(name);
}

void put_rep(const std::string& name, const RepUpToHomotopy& r,
             const std::string& groupoid_ref) {
    save_rep(r, groupoid_ref, at(name));
    note(name);
}

void put_morphism(const std::string& name, const GroupoidMorphism& f,
                  const std::string& dom_ref, const std::string& cod_ref) {
    save_morphism(f, dom_ref, cod_ref, at(name));
    note(name);
}

void put_sset(const std::string& name, const TruncatedSSet& x) {
    save_sset(x, at(name));
    note(name);
}

void put_map(const std::string& name, const SimplicialMap& f,
             const std::string& dom_ref, const std::string& cod_ref) {
    save_sset_map(f, dom_ref, cod_ref, at(name));
    note(name);
}

}  // namespace

int main(int argc, char** argv) {
    dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);
    using namespace corpus;

    put_groupoid("pt.json", *pt());
    put_groupoid("unit2.json", *unit2());
    put_groupoid("pair2.json", *pair2());
    put_groupoid("pair3.json", *pair3());
    put_groupoid("z2.json", *z2());
    put_groupoid("z3.json", *z3());
    put_groupoid("cech52.json", *cech52());
    put_groupoid("cech42.json", *cech42());
    put_groupoid("gauge.json", *gauge());

    put_rep("trivial_pair3.json", trivial_ruth(pair3()), "pair3.json");
    put_rep("trivial_z2.json", trivial_ruth(z2()), "z2.json");
    put_rep("trivial_z3.json", trivial_ruth(z3()), "z3.json");
    put_rep("trivial_unit2.json", trivial_ruth(unit2()), "unit2.json");
    put_rep("sign_z2.json", sign_rep_z2(), "z2.json");
    put_rep("two_term_pt.json", two_term_pt(), "pt.json");
    put_rep("two_term_unit2.json", two_term_unit2(), "unit2.json");
    RepUpToHomotopy completed = complete_two_term(two_term_data_pair2(true)).rep;
    put_rep("two_term_pair2.json", completed, "pair2.json");
    put_rep("three_term_unit2.json", three_term_unit2(), "unit2.json");
    put_rep("dual_two_term_pt.json",
            dual_ruth(std::make_shared<const RepUpToHomotopy>(two_term_pt())),
            "pt.json");
    put_rep("shift_two_term_pt.json", shift_ruth(two_term_pt(), 1), "pt.json");
    put_rep("pullback_two_term_cech42.json",
            pullback_ruth(proj42(), two_term_unit2()), "cech42.json");

    put_morphism("proj52.json", proj52(), "cech52.json", "unit2.json");
    put_morphism("proj42.json", proj42(), "cech42.json", "unit2.json");
    put_morphism("pair3_to_pt.json", pair3_to_pt(), "pair3.json", "pt.json");
    GroupoidMorphism z3pt;
    z3pt.dom = z3();
    z3pt.cod = pt();
    z3pt.obj_map = {0};
    z3pt.arrow_map.assign(z3()->n_arrows(), 0);
    put_morphism("z3_to_pt.json", z3pt, "z3.json", "pt.json");
    GroupoidMorphism gz2;
    gz2.dom = gauge();
    gz2.cod = z2();
    gz2.obj_map.assign(gauge()->n_objects(), 0);
    for (int a = 0; a < gauge()->n_arrows(); ++a) gz2.arrow_map.push_back(a % 2);
    put_morphism("gauge_to_z2.json", gz2, "gauge.json", "z2.json");
    GroupoidMorphism pt2;
    pt2.dom = pt();
    pt2.cod = unit2();
    pt2.obj_map = {0};
    pt2.arrow_map = {unit2()->unit[0]};
    put_morphism("pt_to_unit2.json", pt2, "pt.json", "unit2.json");

    const int cap = 3;
    NerveSSet n_pt = nerve_sset(pt(), cap);
    NerveSSet n_unit2 = nerve_sset(unit2(), cap);
    NerveSSet n_pair2 = nerve_sset(pair2(), cap);
    NerveSSet n_pair3 = nerve_sset(pair3(), cap);
    NerveSSet n_z2 = nerve_sset(z2(), cap);
    NerveSSet n_z3 = nerve_sset(z3(), cap);
    NerveSSet n_c42 = nerve_sset(cech42(), cap);
    NerveSSet n_c52 = nerve_sset(cech52(), cap);
    NerveSSet n_gauge = nerve_sset(gauge(), cap);
    SSetPtr loop = graph_cosk_sset(1, {{0, 0}}, cap);
    ProductSSet loopx = product_sset(loop, n_pair2.S, cap);

    put_sset("nerve_pt.json", *n_pt.S);
    put_sset("nerve_unit2.json", *n_unit2.S);
    put_sset("nerve_pair2.json", *n_pair2.S);
    put_sset("nerve_pair3.json", *n_pair3.S);
    put_sset("nerve_z2.json", *n_z2.S);
    put_sset("nerve_z3.json", *n_z3.S);
    put_sset("nerve_cech42.json", *n_c42.S);
    put_sset("nerve_cech52.json", *n_c52.S);
    put_sset("nerve_gauge.json", *n_gauge.S);
    put_sset("loop1.json", *loop);
    put_sset("loopxpair2.json", *loopx.S);

    put_map("nerve_pair3_to_pt.json", nerve_sset_map(pair3_to_pt(), n_pair3, n_pt),
            "nerve_pair3.json", "nerve_pt.json");
    put_map("nerve_proj42.json", nerve_sset_map(proj42(), n_c42, n_unit2),
            "nerve_cech42.json", "nerve_unit2.json");
    put_map("nerve_proj52.json", nerve_sset_map(proj52(), n_c52, n_unit2),
            "nerve_cech52.json", "nerve_unit2.json");
    put_map("nerve_gauge_to_z2.json", nerve_sset_map(gz2, n_gauge, n_z2),
            "nerve_gauge.json", "nerve_z2.json");
    put_map("nerve_z3_to_pt.json", nerve_sset_map(z3pt, n_z3, n_pt),
            "nerve_z3.json", "nerve_pt.json");
    put_map("loop1_to_pt.json", to_point_map(loop, n_pt.S), "loop1.json",
            "nerve_pt.json");
    put_map("loopxpair2_to_pt.json", to_point_map(loopx.S, n_pt.S),
            "loopxpair2.json", "nerve_pt.json");
    put_map("identity_nerve_pair2.json", identity_map(n_pair2.S),
            "nerve_pair2.json", "nerve_pair2.json");
    return 0;
}
