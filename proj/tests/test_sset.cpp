#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <set>
#include <vector>

#include "corpus.hpp"
#include "groco/sset.hpp"

using namespace groco;

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

const NerveSSet& nerve_fix(const corpus::GPtr& g, int cap) {
    static std::map<std::pair<const FiniteGroupoid*, int>, NerveSSet> cache;
    auto key = std::make_pair(g.get(), cap);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, nerve_sset(g, cap)).first;
    return it->second;
}

GroupoidMorphism z3_to_pt() {
    GroupoidMorphism f;
    f.dom = corpus::z3();
    f.cod = corpus::pt();
    f.obj_map.assign(f.dom->n_objects(), 0);
    f.arrow_map.assign(f.dom->n_arrows(), 0);
    return f;
}

SSetPtr loop1(int cap) {
    static std::map<int, SSetPtr> cache;
    auto it = cache.find(cap);
    if (it == cache.end())
        it = cache.emplace(cap, graph_cosk_sset(1, {{0, 0}}, cap)).first;
    return it->second;
}

SSetPtr loop_x_pair2(int cap) {
    static std::map<int, SSetPtr> cache;
    auto it = cache.find(cap);
    if (it == cache.end())
        it = cache
                 .emplace(cap, product_sset(loop1(cap), nerve_fix(corpus::pair2(), cap).S, cap).S)
                 .first;
    return it->second;
}

}  // namespace

TEST_CASE("standard shapes have the expected cells") {
    PosetSSet d3 = delta_sset(3);
    REQUIRE(d3.S->n_nondeg(0) == 4);
    REQUIRE(d3.S->n_nondeg(1) == 6);
    REQUIRE(d3.S->n_nondeg(2) == 4);
    REQUIRE(d3.S->n_nondeg(3) == 1);
    REQUIRE_FALSE(validate_sset(*d3.S).has_value());
    // level n of the k-simplex counts monotone maps [n] -> [k]
    for (int n = 0; n <= 3; ++n)
        REQUIRE((long long)d3.S->level(n).size() == binom(n + 4, 3));

    PosetSSet b3 = boundary_sset(3);
    REQUIRE(b3.S->n_nondeg(2) == 4);
    REQUIRE(b3.S->n_nondeg(3) == 0);

    PosetSSet h21 = horn_sset(2, 1);
    REQUIRE(h21.S->n_nondeg(0) == 3);
    REQUIRE(h21.S->n_nondeg(1) == 2);
    REQUIRE(h21.contains(1, {0, 1}));
    REQUIRE(h21.contains(1, {1, 2}));
    REQUIRE_FALSE(h21.contains(1, {0, 2}));

    PosetSSet sk = skeleton_sset(1, 3);
    REQUIRE(sk.S->n_nondeg(0) == 4);
    REQUIRE(sk.S->n_nondeg(1) == 6);
    REQUIRE(sk.S->n_nondeg(2) == 0);

    PosetSSet pr = prism_sset(2);
    REQUIRE(pr.S->n_nondeg(0) == 6);
    REQUIRE(pr.S->n_nondeg(1) == 12);
    REQUIRE(pr.S->n_nondeg(2) == 10);
    REQUIRE(pr.S->n_nondeg(3) == 3);
    REQUIRE_FALSE(validate_sset(*pr.S).has_value());

    REQUIRE(point_sset(3)->level(3).size() == 1);

    PosetSSet h00 = horn_sset(0, 0);
    REQUIRE(h00.S->n_nondeg(0) == 0);  // the empty shape
}

TEST_CASE("normal-form calculus composes correctly") {
    const NerveSSet& N = nerve_fix(corpus::pair2(), 3);
    const TruncatedSSet& X = *N.S;
    // reindexing along composable monotone maps agrees with composing first
    for (const auto& v : X.level(3))
        for (const auto& f : detail::monotone_maps(2, 3))
            for (const auto& g : detail::monotone_maps(1, 2))
                REQUIRE(X.eval(X.eval(v, f), g) == X.eval(v, compose(g, f)));
    // face and degeneracy identities at the level of values
    for (const auto& v : X.level(2)) {
        for (int j = 1; j <= 2; ++j)
            for (int i = 0; i < j; ++i)
                REQUIRE(X.face_of(X.face_of(v, j), i) == X.face_of(X.face_of(v, i), j - 1));
        for (int j = 0; j <= 2; ++j) {
            REQUIRE(X.face_of(X.degen_of(v, j), j) == v);
            REQUIRE(X.face_of(X.degen_of(v, j), j + 1) == v);
        }
    }
    REQUIRE_THROWS_AS(X.eval(X.level(1).at(0), OrdinalMap(1, {1, 0})), DomainError);
    REQUIRE_THROWS_AS(X.level(4), DomainError);
}

TEST_CASE("groupoid nerves in normal form") {
    const NerveSSet& Z = nerve_fix(corpus::z2(), 4);
    for (int d = 0; d <= 4; ++d) REQUIRE(Z.S->n_nondeg(d) == 1);
    REQUIRE_FALSE(validate_sset(*Z.S).has_value());
    for (int n = 0; n <= 4; ++n)
        REQUIRE((long long)Z.S->level(n).size() == (1LL << n));

    const NerveSSet& P = nerve_fix(corpus::pair2(), 3);
    REQUIRE(P.S->n_nondeg(0) == 2);
    for (int d = 1; d <= 3; ++d) REQUIRE(P.S->n_nondeg(d) == 2);
    REQUIRE_FALSE(validate_sset(*P.S).has_value());
    // the round trip 0 -> 1 -> 0 has a degenerate middle face
    auto arrow_between = [&](int a, int b) {
        for (int i = 0; i < P.G->n_arrows(); ++i)
            if (P.G->src[i] == a && P.G->tgt[i] == b && !is_unit_arrow(*P.G, i)) return i;
        return -1;
    };
    NerveChain rt{0, {arrow_between(0, 1), arrow_between(1, 0)}};
    SimplexVal v = P.normalize(rt);
    REQUIRE(v.nondegenerate());
    SimplexVal mid = P.S->face_of(v, 1);
    REQUIRE_FALSE(mid.nondegenerate());
    REQUIRE(mid.dim == 0);

    // a broken face record is caught
    TruncatedSSet bad = *P.S;
    bad.face[2][0][1] = bad.face[2][0][0];
    auto viol = validate_sset(bad);
    REQUIRE(viol.has_value());
    REQUIRE(viol->dim == 2);
}

TEST_CASE("maps out of simplex shapes match levels") {
    // the hom space out of the n-simplex is the n-th level
    for (int n = 0; n <= 3; ++n) {
        const NerveSSet& N = nerve_fix(corpus::pair2(), 4);
        HomSpace hs = hom_space(delta_sset(n).S, N.S);
        REQUIRE(hs.maps.size() == N.S->level(n).size());
        std::set<SimplexVal> tops;
        for (const auto& m : hs.maps) tops.insert(m.val[n][0]);
        std::set<SimplexVal> lev(N.S->level(n).begin(), N.S->level(n).end());
        REQUIRE(tops == lev);
        for (const auto& m : hs.maps) REQUIRE_FALSE(validate_map(m).has_value());
    }
    const NerveSSet& Z3 = nerve_fix(corpus::z3(), 4);
    REQUIRE(hom_space(delta_sset(3).S, Z3.S).maps.size() == 27);
    REQUIRE_THROWS_AS(hom_space(delta_sset(4).S, nerve_fix(corpus::pair2(), 3).S),
                      DomainError);
}

TEST_CASE("inner horn of the pair groupoid counted two ways") {
    const NerveSSet& N = nerve_fix(corpus::pair3(), 3);
    HomSpace hs = hom_space(horn_sset(2, 1).S, N.S);
    // independent count: composable arrow pairs
    const FiniteGroupoid& G = *corpus::pair3();
    long long pairs = 0;
    for (int a = 0; a < G.n_arrows(); ++a)
        for (int b = 0; b < G.n_arrows(); ++b)
            if (G.tgt[a] == G.src[b]) ++pairs;
    REQUIRE(pairs == 27);
    REQUIRE((long long)hs.maps.size() == pairs);
    // the 0-th outer horn of the interval is just a vertex
    REQUIRE(hom_space(horn_sset(1, 0).S, N.S).maps.size() == N.S->level(0).size());
}

TEST_CASE("classification flags of nerve maps") {
    const NerveSSet& P3 = nerve_fix(corpus::pair3(), 3);
    const NerveSSet& PT = nerve_fix(corpus::pt(), 3);

    SimplicialMap f = nerve_sset_map(corpus::pair3_to_pt(), P3, PT);
    REQUIRE_FALSE(validate_map(f).has_value());
    SSetMapClass cls = classify_sset_map(f, 3);
    REQUIRE(cls.is_fibration());
    REQUIRE(cls.is_hypercover());
    REQUIRE(cls.simple_stage() == 0);

    // a group mapped to the point: horn lifting works, boundary lifting
    // fails in degree two
    const NerveSSet& Z3 = nerve_fix(corpus::z3(), 3);
    SimplicialMap g = nerve_sset_map(z3_to_pt(), Z3, PT);
    SSetMapClass zc = classify_sset_map(g, 3);
    REQUIRE(zc.is_fibration());
    REQUIRE(zc.hypercover[0]);
    REQUIRE(zc.hypercover[1]);
    REQUIRE_FALSE(zc.hypercover[2]);
    REQUIRE(zc.simple_stage() == -2);

    // identity: everything bijective
    SSetMapClass ic = classify_sset_map(identity_map(P3.S), 3);
    REQUIRE(ic.is_hypercover());
    REQUIRE(ic.simple_stage() == -1);

    // hypercovers lift horns level by level
    const NerveSSet& C5 = nerve_fix(corpus::cech52(), 3);
    const NerveSSet& U2 = nerve_fix(corpus::unit2(), 3);
    SimplicialMap p = nerve_sset_map(corpus::proj52(), C5, U2);
    SSetMapClass pc = classify_sset_map(p, 3);
    REQUIRE(pc.is_hypercover());
    REQUIRE(pc.is_fibration());
    REQUIRE(pc.simple_stage() == 0);

    for (int n = 0; n <= 3; ++n) {
        REQUIRE(cls.fibration[n]);
        if (pc.hypercover[n]) REQUIRE(pc.fibration[n]);  // hypercover forces fibration
    }
}

TEST_CASE("nerve flags agree with groupoid flags") {
    struct Case {
        GroupoidMorphism mor;
        const NerveSSet* dom;
        const NerveSSet* cod;
    };
    std::vector<Case> cases;
    cases.push_back({corpus::pair3_to_pt(), &nerve_fix(corpus::pair3(), 3),
                     &nerve_fix(corpus::pt(), 3)});
    cases.push_back({corpus::proj52(), &nerve_fix(corpus::cech52(), 3),
                     &nerve_fix(corpus::unit2(), 3)});
    cases.push_back({corpus::proj42(), &nerve_fix(corpus::cech42(), 3),
                     &nerve_fix(corpus::unit2(), 3)});
    cases.push_back({z3_to_pt(), &nerve_fix(corpus::z3(), 3), &nerve_fix(corpus::pt(), 3)});
    for (const auto& c : cases) {
        MorphismClass mc = classify_morphism(c.mor);
        SimplicialMap f = nerve_sset_map(c.mor, *c.dom, *c.cod);
        SSetMapClass sc = classify_sset_map(f, 3);
        REQUIRE(sc.is_fibration() == mc.fibration());
        REQUIRE(sc.is_hypercover() == mc.hypercover());
    }
}

TEST_CASE("lifting proposition with and without collapse certificates") {
    const NerveSSet& P3 = nerve_fix(corpus::pair3(), 3);
    const NerveSSet& PT = nerve_fix(corpus::pt(), 3);
    SimplicialMap f = nerve_sset_map(corpus::pair3_to_pt(), P3, PT);

    PosetSSet L = delta_sset(2);
    PosetSSet K = horn_sset(2, 1);
    PropHomReport rep = prop_hom_check(f, L, K);
    REQUIRE(rep.surjective);
    REQUIRE(rep.dom_count == 27);  // maps from the triangle = level two

    // fibration route: collapse the triangle onto its first vertex
    const NerveSSet& Z3 = nerve_fix(corpus::z3(), 3);
    SimplicialMap g = nerve_sset_map(z3_to_pt(), Z3, PT);
    PosetSSet V0 = poset_chain_sset(
        3, [](int, int) { return true; },
        [](const std::vector<int>& c) { return c == std::vector<int>{0}; });
    std::vector<CollapseStep> cert = {
        {2, 0, 0},  // remove the triangle with free face {1,2}
        {1, 1, 0},  // remove edge {0,2} with free face {2}
        {1, 0, 0},  // remove edge {0,1} with free face {1}
    };
    PropHomReport rep2 = prop_hom_check(g, L, V0, cert);
    REQUIRE(rep2.surjective);
    REQUIRE(rep2.dom_count == 9);

    // without a certificate the non-hypercover is rejected
    REQUIRE_THROWS_AS(prop_hom_check(g, L, V0), DomainError);
    // a step whose face is not free is rejected
    std::vector<CollapseStep> bad = {{1, 0, 0}, {2, 0, 0}, {1, 1, 0}};
    REQUIRE_THROWS_AS(prop_hom_check(g, L, V0, bad), DomainError);
}

TEST_CASE("coskeletal graph completions") {
    SSetPtr L = loop1(3);
    REQUIRE_FALSE(validate_sset(*L).has_value());
    REQUIRE(L->n_nondeg(0) == 1);
    REQUIRE(L->n_nondeg(1) == 1);
    REQUIRE(L->n_nondeg(2) == 5);
    REQUIRE(L->n_nondeg(3) == 45);
    // levels double per new edge slot: 2^(n(n+1)/2)
    for (int n = 0; n <= 3; ++n)
        REQUIRE((long long)L->level(n).size() == (1LL << (n * (n + 1) / 2)));

    SimplicialMap p = to_point_map(L, point_sset(3));
    SSetMapClass cls = classify_sset_map(p, 3);
    REQUIRE(cls.is_hypercover());
    REQUIRE(cls.simple_stage() == 1);
    REQUIRE(coskeletal_within(L, 1, 3));
    REQUIRE(coskeletal_within(L, 2, 3));
    REQUIRE_FALSE(coskeletal_within(L, 0, 2));
}

TEST_CASE("products of simplicial sets") {
    SSetPtr X = loop_x_pair2(3);
    SSetPtr A = loop1(3);
    SSetPtr B = nerve_fix(corpus::pair2(), 3).S;
    REQUIRE_FALSE(validate_sset(*X).has_value());
    for (int n = 0; n <= 3; ++n)
        REQUIRE(X->level(n).size() == A->level(n).size() * B->level(n).size());

    SimplicialMap p = to_point_map(X, point_sset(3));
    SSetMapClass cls = classify_sset_map(p, 3);
    REQUIRE(cls.is_hypercover());
    REQUIRE(cls.is_fibration());
    REQUIRE((cls.nonbijective_levels() == std::vector<int>{0, 1}));
    REQUIRE(cls.simple_stage() == -2);  // genuinely not simple
}

TEST_CASE("towers factor maps through simple steps") {
    const NerveSSet& C5 = nerve_fix(corpus::cech52(), 3);
    const NerveSSet& U2 = nerve_fix(corpus::unit2(), 3);
    SimplicialMap p = nerve_sset_map(corpus::proj52(), C5, U2);

    CoskTower tw = coskeleton_tower(p, 3);
    REQUIRE(tw.all_ok());
    REQUIRE(tw.steps.size() == 3);
    // a nerve-level hypercover concentrates at stage zero
    for (const auto& st : tw.steps) {
        auto bad = st.flags.nonbijective_levels();
        if (st.m == 0)
            REQUIRE(bad == std::vector<int>{0});
        else
            REQUIRE(bad.empty());
        for (const auto& sq : st.squares) {
            REQUIRE(sq.cartesian);
            REQUIRE(sq.injective_alpha);
        }
    }

    SimplicialMap lp = to_point_map(loop1(3), point_sset(3));
    CoskTower lt = coskeleton_tower(lp, 3);
    REQUIRE(lt.all_ok());
    bool saw_one = false;
    for (const auto& st : lt.steps) {
        auto bad = st.flags.nonbijective_levels();
        if (st.m == 1) {
            REQUIRE(bad == std::vector<int>{1});
            saw_one = true;
        } else {
            REQUIRE(bad.empty());
        }
    }
    REQUIRE(saw_one);

    // the product example needs two nontrivial stages
    SimplicialMap xp = to_point_map(loop_x_pair2(3), point_sset(3));
    CoskTower xt = coskeleton_tower(xp, 3);
    REQUIRE(xt.all_ok());
    int nontrivial = 0;
    for (const auto& st : xt.steps) {
        auto bad = st.flags.nonbijective_levels();
        if (!bad.empty()) {
            ++nontrivial;
            REQUIRE(bad == std::vector<int>{st.m});
        }
    }
    REQUIRE(nontrivial == 2);

    // identity tower: every step bijective
    CoskTower it = coskeleton_tower(identity_map(C5.S), 2);
    REQUIRE(it.all_ok());
    for (const auto& st : it.steps) REQUIRE(st.flags.nonbijective_levels().empty());
}
