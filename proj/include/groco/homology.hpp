#pragma once

#include <vector>

#include "groco/matrix.hpp"

namespace groco {

namespace detail {

// Incremental column span with exact integer rows; add() returns true when the
// column was independent of everything added so far.
struct IncSpan {
    std::vector<IRow> pivots;

    bool add(const QMat::Row& col) {
        IRow r = irow_of(col);
        for (const IRow& p : pivots) {
            if (r.empty()) break;
            eliminate(r, p);
        }
        if (r.empty()) return false;
        pivots.push_back(std::move(r));
        return true;
    }
};

// Columns of z (by index, in the given order) completing the span of b's
// columns to the span of [b z].
inline std::vector<int> completing_columns(const QMat& b, const QMat& z,
                                           const std::vector<int>& order) {
    IncSpan span;
    QMat bt = b.transpose();
    for (int j = 0; j < bt.rows(); ++j) span.add(bt.row(j));
    QMat zt = z.transpose();
    std::vector<int> picked;
    for (int j : order)
        if (span.add(zt.row(j))) picked.push_back(j);
    return picked;
}

inline QMat select_columns(const QMat& m, const std::vector<int>& cols) {
    QMat out(m.rows(), static_cast<int>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k)
        for (int i = 0; i < m.rows(); ++i) {
            Rat v = m.at(i, static_cast<int>(cols[k]));
            if (v != 0) out.set(i, static_cast<int>(k), v);
        }
    return out;
}

}  // namespace detail

// dim H at the junction of Dp : C^{n-1} -> C^n and Dn : C^n -> C^{n+1}.
inline int cohomology_dim(const QMat& Dp, const QMat& Dn) {
    if (Dp.rows() != Dn.cols()) throw DomainError("differential shapes disagree");
    if (!(Dn * Dp).is_zero()) throw DomainError("not a complex: d*d != 0");
    return (Dn.cols() - rank_of(Dn)) - rank_of(Dp);
}

/* A map between cohomology groups presented as subquotients.  Both groups are
   given by cycle representatives (columns) completing the boundary space to
   the cycle space; `representative` is the induced map written in those
   bases. */
struct SubquotientMap {
    int domain_dim = 0;
    int codomain_dim = 0;
    QMat domain_reps;
    QMat codomain_reps;
    QMat representative;
    bool bijective = false;
};

/* Induced map on cohomology of F : C -> C' at the degree where Dp/Dn (domain)
   and Dp2/Dn2 (codomain) sit.  Verifies that F maps cycles to cycles and
   boundaries into boundaries, then re-derives the whole construction with a
   second elimination ordering and checks the two induced maps agree on
   classes. */
inline SubquotientMap induced_cohomology_map(const QMat& Dp, const QMat& Dn, const QMat& Dp2,
                                             const QMat& Dn2, const QMat& F) {
    if (!(Dn * Dp).is_zero() || !(Dn2 * Dp2).is_zero())
        throw DomainError("not a complex: d*d != 0");
    if (F.cols() != Dn.cols() || F.rows() != Dn2.cols())
        throw DomainError("induced map shape mismatch");

    QMat Z = rank_and_kernel(Dn).kernel;
    QMat B = col_space_basis(Dp);
    QMat Z2 = rank_and_kernel(Dn2).kernel;
    QMat B2 = col_space_basis(Dp2);
    if (!solve(Z, B)) throw InternalError("boundaries escape the cycle space");
    if (!solve(Z2, B2)) throw InternalError("boundaries escape the cycle space");

    if (!(Dn2 * (F * Z)).is_zero()) throw DomainError("map does not preserve cycles");
    if (B.cols() > 0 && !solve(Dp2, F * B)) throw DomainError("map does not preserve boundaries");

    auto build = [&](bool reversed) {
        std::vector<int> orderD(Z.cols()), orderC(Z2.cols());
        for (int j = 0; j < Z.cols(); ++j) orderD[j] = reversed ? Z.cols() - 1 - j : j;
        for (int j = 0; j < Z2.cols(); ++j) orderC[j] = reversed ? Z2.cols() - 1 - j : j;
        QMat S = detail::select_columns(Z, detail::completing_columns(B, Z, orderD));
        QMat S2 = detail::select_columns(Z2, detail::completing_columns(B2, Z2, orderC));
        auto X = solve(hstack(B2, S2), F * S);
        if (!X) throw InternalError("cycle image escapes the cycle space");
        return std::tuple<QMat, QMat, QMat>(S, S2, X->block(B2.cols(), 0, S2.cols(), S.cols()));
    };

    auto [S, S2, rep] = build(false);
    SubquotientMap out;
    out.domain_dim = S.cols();
    out.codomain_dim = S2.cols();
    out.domain_reps = S;
    out.codomain_reps = S2;
    out.representative = rep;
    out.bijective = (out.domain_dim == out.codomain_dim) && rank_of(rep) == out.domain_dim;

    // cross-derivation with reversed column ordering
    auto [Sr, S2r, repr] = build(true);
    if (Sr.cols() != S.cols() || S2r.cols() != S2.cols())
        throw InternalError("complement dimensions depend on elimination order");
    auto Td = solve(hstack(B, S), Sr);
    auto Tc = solve(hstack(B2, S2), S2r);
    if (!Td || !Tc) throw InternalError("complement bases fail to span");
    QMat TdH = Td->block(B.cols(), 0, S.cols(), Sr.cols());
    QMat TcH = Tc->block(B2.cols(), 0, S2.cols(), S2r.cols());
    if (!(rep * TdH == TcH * repr))
        throw InternalError("induced map depends on elimination order");

    return out;
}

/* Mapping-cone route for quasi-isomorphism checking.  Given aligned windows
   D[i] : C^i -> C^{i+1} (i = 0..k-1) and F[i] : C^i -> C'^i (i = 0..k), the
   cone complex is Cone^i = C'^i (+) C^{i+1} with differential
   (x', x) |-> (D' x' + F x, -D x); its cohomology vanishes exactly where F
   induces isomorphisms.  Returns the cone's H dims at the interior degrees
   1..k-2 of the window, which are the degrees fully determined by the data. */
inline std::vector<int> cone_cohomology_dims(const std::vector<QMat>& D,
                                             const std::vector<QMat>& D2,
                                             const std::vector<QMat>& F) {
    size_t k = F.size();
    if (D.size() + 1 != k || D2.size() + 1 != k)
        throw DomainError("cone window shapes disagree");
    std::vector<QMat> cone;  // cone differential at degrees 0..k-2
    for (size_t i = 0; i + 1 < k; ++i) {
        int c2n = F[i].rows(), cn1 = D[i].rows();
        int c2n1 = F[i + 1].rows();
        int cn2 = (i + 1 < D.size()) ? D[i + 1].rows() : 0;
        QMat m(c2n1 + cn2, c2n + cn1);
        m.set_block(0, 0, D2[i]);
        m.set_block(0, c2n, F[i + 1]);
        if (i + 1 < D.size()) m.set_block(c2n1, c2n, Rat(-1) * D[i + 1]);
        cone.push_back(std::move(m));
    }
    std::vector<int> dims;
    for (size_t i = 1; i < cone.size(); ++i) dims.push_back(cohomology_dim(cone[i - 1], cone[i]));
    return dims;
}

}  // namespace groco
