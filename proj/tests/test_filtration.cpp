#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <set>
#include <vector>

#include "corpus.hpp"
#include "groco/cochain.hpp"
#include "groco/sdp.hpp"

using namespace groco;

namespace {

std::shared_ptr<const RepUpToHomotopy> sp(RepUpToHomotopy r) {
    return std::make_shared<const RepUpToHomotopy>(std::move(r));
}

std::shared_ptr<const RepUpToHomotopy> two_term_pair2() {
    static auto p = sp(complete_two_term(corpus::two_term_data_pair2(true)).rep);
    return p;
}

const SdpBundle& vpair() {
    static SdpBundle V = sdp_build(two_term_pair2(), 4);
    return V;
}

const SdpBundle& vthree() {
    static SdpBundle V = sdp_build(sp(corpus::three_term_unit2()), 4);
    return V;
}

QMat col_of(const QMat& M, int j) {
    QMat out(M.rows(), 1);
    for (int i = 0; i < M.rows(); ++i)
        if (M.at(i, j) != 0) out.set(i, 0, M.at(i, j));
    return out;
}

// the part of a column supported on m-regular index blocks
QMat mreg_part(const SdpLevel& L, int tci, const QMat& M, int col, int m) {
    QMat out(M.rows(), 1);
    for (size_t ai = 0; ai < L.index_list.size(); ++ai) {
        if (!m_regular_index(L.index_list[ai], m)) continue;
        int lo = L.offset[tci][ai];
        int hi = ai + 1 < L.index_list.size() ? L.offset[tci][ai + 1] : L.fiber_dim[tci];
        for (int r = lo; r < hi; ++r)
            if (M.at(r, col) != 0) out.set(r, 0, M.at(r, col));
    }
    return out;
}

QMat unit_at(const SdpLevel& L, int tci, const OrdinalMap& b, int t, const Rat& s,
             int rows) {
    QMat out(rows, 1);
    int bi = L.index_pos(b);
    REQUIRE(bi >= 0);
    out.set(L.offset[tci][bi] + t, 0, s);
    return out;
}

std::set<int> missing_below(const OrdinalMap& a, int m) {
    std::set<int> s;
    for (int i = 0; i <= m + 1; ++i) s.insert(i);
    for (int i = 0; i <= a.source_size; ++i) s.erase(a(i));
    return s;
}

}  // namespace

/* The smoothing homotopy against the face maps, one composite at a time.
   Each identity is checked on every basis vector of every fiber, over every
   chain of every level where the two sides are defined. */
TEST_CASE("homotopy and face composites", "[filtration]") {
    int positive_shift = 0;  // counts the non-vacuous single-gap cases
    for (const SdpBundle* Vp : {&vpair(), &vthree()}) {
        const SdpBundle& V = *Vp;
        const FiniteGroupoid& G = *V.rep->base;
        for (int m = 0; m <= 2; ++m)
            for (int n = m + 1; n <= 3; ++n)
                for (size_t ci = 0; ci < V.nerve.level(n).size(); ++ci) {
                    const NerveChain& g = V.nerve.level(n)[ci];
                    const SdpLevel& Ls = V.level(n);
                    HImage H = h_matrix(V, m, n, (int)ci);
                    int gi = V.nerve.index_of(n + 1, H.chain);

                    // climb-then-face: h after d_r, level n -> n-1 -> n
                    std::vector<QMat> M1(n + 1);
                    std::vector<NerveChain> M1_chain(n + 1);
                    for (int r = 0; r <= n; ++r) {
                        int fci = V.nerve.index_of(n - 1, chain_face(G, g, r));
                        HImage Hd = h_matrix(V, m, n - 1, fci);
                        M1[r] = Hd.mat * V.face(n, r, (int)ci);
                        M1_chain[r] = Hd.chain;
                    }
                    // face-then-climb: d_r after h, level n -> n+1 -> n
                    std::vector<QMat> M2(n + 2);
                    std::vector<NerveChain> M2_chain(n + 2);
                    for (int r = 0; r <= n + 1; ++r) {
                        M2[r] = V.face(n + 1, r, gi) * H.mat;
                        M2_chain[r] = chain_face(G, H.chain, r);
                    }

                    // middle faces slide past the homotopy unchanged
                    for (int r = m + 1; r < n; ++r) {
                        CHECK((M1_chain[r] == M2_chain[r + 1]));
                        CHECK((M1[r] == M2[r + 1]));
                    }

                    // low faces die against the homotopy entirely
                    for (int r = 1; r <= m; ++r)
                        for (int col = 0; col < Ls.fiber_dim[ci]; ++col) {
                            int tci = V.nerve.index_of(n, M2_chain[r]);
                            CHECK(mreg_part(V.level(n), tci, M2[r], col, m).is_zero());
                        }

                    for (size_t ai = 0; ai < Ls.index_list.size(); ++ai) {
                        const OrdinalMap& a = Ls.index_list[ai];
                        int k = a.source_size;
                        int lo = Ls.offset[ci][ai];
                        int hi = ai + 1 < Ls.index_list.size() ? Ls.offset[ci][ai + 1]
                                                               : Ls.fiber_dim[ci];
                        std::set<int> miss = missing_below(a, m);
                        bool gap_one = miss.size() == 1 && a(k) > m + 1;
                        int r_gap = miss.empty() ? -1 : *miss.begin();
                        for (int col = lo; col < hi; ++col) {
                            int t = col - lo;

                            // faces past the stage keep the complement invariant
                            if (!m_regular_index(a, m)) {
                                for (int r = m + 2; r <= n; ++r) {
                                    int tci = V.nerve.index_of(n, M1_chain[r]);
                                    CHECK(mreg_part(V.level(n), tci, M1[r], col, m)
                                              .is_zero());
                                }
                                for (int r = m + 1; r <= n + 1; ++r) {
                                    int tci = V.nerve.index_of(n, M2_chain[r]);
                                    CHECK(mreg_part(V.level(n), tci, M2[r], col, m)
                                              .is_zero());
                                }
                            }

                            // low faces before the homotopy: a single shifted block
                            for (int r = 1; r <= m; ++r) {
                                int tci = V.nerve.index_of(n, M1_chain[r]);
                                QMat part = mreg_part(V.level(n), tci, M1[r], col, m);
                                if (gap_one && r_gap == r) {
                                    OrdinalMap b = compose(
                                        compose(a, ordinal_sigma(r - 1, n - 1)),
                                        ordinal_delta(m + 1, n));
                                    CHECK((part == unit_at(V.level(n), tci, b, t,
                                                           detail::parity_sign(m + 1),
                                                           part.rows())));
                                    if (!part.is_zero()) ++positive_shift;
                                } else {
                                    CHECK(part.is_zero());
                                }
                            }

                            if (!m_regular_index(a, m + 1)) {
                                // bottom face after the homotopy: minus the identity
                                {
                                    int tci = V.nerve.index_of(n, M2_chain[0]);
                                    QMat part = mreg_part(V.level(n), tci, M2[0], col, m);
                                    if (m_regular_index(a, m)) {
                                        CHECK((part == unit_at(V.level(n), tci, a, t,
                                                               Rat(-1), part.rows())));
                                    } else {
                                        CHECK(part.is_zero());
                                    }
                                }
                                // bottom face before the homotopy: one signed block
                                {
                                    int tci = V.nerve.index_of(n, M1_chain[0]);
                                    QMat part = mreg_part(V.level(n), tci, M1[0], col, m);
                                    if (gap_one) {
                                        OrdinalMap b = compose(
                                            compose(a, ordinal_sigma(r_gap - 1, n - 1)),
                                            ordinal_delta(m + 1, n));
                                        CHECK((part ==
                                               unit_at(V.level(n), tci, b, t,
                                                       detail::parity_sign(m + r_gap),
                                                       part.rows())));
                                        if (!part.is_zero()) ++positive_shift;
                                    } else {
                                        CHECK(part.is_zero());
                                    }
                                }
                            }
                        }
                    }
                }
    }
    CHECK(positive_shift > 0);
}

TEST_CASE("one smoothing step", "[filtration]") {
    const SdpBundle& V = vpair();

    SECTION("projectable cochains at or past their level are fixed") {
        for (int n = 0; n <= 2; ++n) {
            QMat D = lin_delta_matrix(V, n);
            QMat proj = detail::stage_basis(V, D, n, regular_index);
            for (int j = 0; j < proj.cols(); ++j) {
                LinearCochain c = lin_from_column(V, n, col_of(proj, j));
                auto res = regularize(V, c, n);
                CHECK((lin_to_column(V, res.image) == col_of(proj, j)));
            }
        }
    }

    SECTION("the defect drops and the stage is kept") {
        int moved = 0;
        for (int m = 0; m <= 1; ++m)
            for (int n = 2; n <= 3; ++n) {
                QMat D = lin_delta_matrix(V, n);
                QMat B = detail::stage_basis(
                    V, D, n, [m](const OrdinalMap& a) { return m_regular_index(a, m); });
                for (int j = 0; j < B.cols(); ++j) {
                    LinearCochain c = lin_from_column(V, n, col_of(B, j));
                    REQUIRE(m_regularity(V, c, m).m_projectable);
                    if (lin_defect(c, m) == 0) continue;
                    auto res = regularize(V, c, m);
                    CHECK(res.defect_after < res.defect_before);
                    CHECK(m_regularity(V, res.image, m).m_projectable);
                    ++moved;
                }
            }
        CHECK(moved > 0);
    }

    SECTION("iterated smoothing lands one stage up") {
        for (int m = 0; m <= 1; ++m)
            for (int n = 2; n <= 3; ++n) {
                QMat D = lin_delta_matrix(V, n);
                QMat B = detail::stage_basis(
                    V, D, n, [m](const OrdinalMap& a) { return m_regular_index(a, m); });
                for (int j = 0; j < B.cols(); ++j) {
                    LinearCochain c = lin_from_column(V, n, col_of(B, j));
                    auto it = regularize_iterated(V, c, m);
                    CHECK(lin_defect(it.image, m) == 0);
                    CHECK(m_regularity(V, it.image, m + 1).m_projectable);
                }
            }
    }

    SECTION("closed cochains move by an exact amount") {
        int closed_seen = 0;
        for (int m = 0; m <= 1; ++m)
            for (int n = 2; n <= 3; ++n) {
                QMat D = lin_delta_matrix(V, n);
                QMat B = detail::stage_basis(
                    V, D, n, [m](const OrdinalMap& a) { return m_regular_index(a, m); });
                QMat K = rank_and_kernel(D * B).kernel;
                QMat Z = B * K;
                for (int j = 0; j < Z.cols(); ++j) {
                    QMat z = col_of(Z, j);
                    if (z.is_zero()) continue;
                    LinearCochain c = lin_from_column(V, n, z);
                    auto it = regularize_iterated(V, c, m);
                    QMat moved = lin_to_column(V, it.image) - z;
                    LinearCochain p = it.primitive;
                    p.n = n - 1;
                    CHECK((moved == lin_to_column(V, lin_delta(V, p))));
                    ++closed_seen;
                }
            }
        CHECK(closed_seen > 0);
    }

    SECTION("inputs that leak out of their stage are rejected") {
        const FiniteGroupoid& G = *V.rep->base;
        int a01 = -1, a10 = -1;
        for (int a = 0; a < G.n_arrows(); ++a) {
            if (G.src[a] == 0 && G.tgt[a] == 1) a01 = a;
            if (G.src[a] == 1 && G.tgt[a] == 0) a10 = a;
        }
        LinearCochain c;
        c.n = 2;
        c.add_value(OrdinalMap(2, {0, 1}), NerveChain{0, {a01, a10}},
                    QMat::from_dense({{Rat(1)}}));
        CHECK_THROWS_AS(regularize(V, c, 2), DomainError);
    }
}

namespace {

void check_constant_table(const FiltrationTable& t, const std::vector<int>& expect) {
    CHECK(t.lin_row == expect);
    CHECK(t.proj_row == expect);
    for (const auto& [m, row] : t.rows) {
        INFO("stage " << m);
        CHECK(row == expect);
    }
}

}  // namespace

TEST_CASE("stage-by-stage cohomology tables", "[filtration]") {
    SECTION("the lowest stage is the whole complex") {
        const SdpBundle& V = vpair();
        for (int n = 0; n <= 3; ++n) {
            QMat D = lin_delta_matrix(V, n);
            QMat B = detail::stage_basis(V, D, n,
                                         [](const OrdinalMap& a) {
                                             return m_regular_index(a, 0);
                                         });
            CHECK(B.cols() == V.level(n).total_dim);
        }
    }

    SECTION("bare line over the pair groupoid") {
        auto t = filtration_cohomology(sp(trivial_ruth(corpus::pair2())), 3);
        check_constant_table(t, {1, 0, 0});
    }

    SECTION("sign action of the two-element group") {
        auto t = filtration_cohomology(sp(corpus::sign_rep_z2()), 3);
        check_constant_table(t, {0, 0, 0});
    }

    SECTION("acyclic two-term coefficients, pair groupoid") {
        auto t = filtration_cohomology(two_term_pair2(), 4);
        check_constant_table(t, {0, 0, 0, 0});
        auto dims = cohomology_dims(sp(dual_ruth(two_term_pair2())), 4);
        for (int n = 0; n < 4; ++n) CHECK(t.lin_row[n] == dims.at(n));
    }

    SECTION("two-term coefficients concentrated over one object") {
        auto r6 = sp(corpus::two_term_unit2());
        auto t = filtration_cohomology(r6, 3);
        check_constant_table(t, {1, 1, 0});
        auto dims = cohomology_dims(sp(dual_ruth(r6)), 3);
        for (int n = 0; n < 3; ++n) CHECK(t.lin_row[n] == dims.at(n));
    }

    SECTION("acyclic two-term coefficients over the point") {
        RepUpToHomotopy R;
        R.base = corpus::pt();
        R.bundle.lo = 0;
        R.bundle.hi = 1;
        R.bundle.dims = {{1, 1}};
        R.set_block(0, NerveChain{0, {}}, 1, QMat::identity(1));
        NerveChain u{0, {R.base->unit[0]}};
        R.set_block(1, u, 0, QMat::identity(1));
        R.set_block(1, u, 1, QMat::identity(1));
        auto t = filtration_cohomology(sp(std::move(R)), 3);
        check_constant_table(t, {0, 0, 0});
    }

    SECTION("shifted dual coefficients relocate the answer") {
        auto r3 = sp(corpus::two_term_pt());
        auto shifted = sp(shift_ruth(dual_ruth(r3), 1));
        auto t = filtration_cohomology(shifted, 3);
        check_constant_table(t, {1, 1, 0});
        auto dims = cohomology_dims(r3, 3);
        for (int n = 0; n < 3; ++n) CHECK(t.proj_row[n] == dims.at(n - 1));
    }
}
