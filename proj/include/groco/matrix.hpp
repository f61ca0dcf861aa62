#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "groco/rat.hpp"

namespace groco {

/* Sparse-row matrix over the rationals.  Correctness is defined by dense
   semantics; the sparse layout (sorted column/value pairs per row, zeros
   absent) is an internal detail. */
class QMat {
  public:
    using Row = std::vector<std::pair<int, Rat>>;  // sorted by column

    QMat() = default;
    QMat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
    }

    static QMat identity(int n) {
        QMat m(n, n);
        for (int i = 0; i < n; ++i) m.data_[i].push_back({i, Rat(1)});
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat at(int i, int j) const {
        check_index(i, j);
        const Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& p, int c) { return p.first < c; });
        return (it != r.end() && it->first == j) ? it->second : Rat(0);
    }

    void set(int i, int j, const Rat& v) {
        check_index(i, j);
        Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& p, int c) { return p.first < c; });
        if (it != r.end() && it->first == j) {
            if (v == 0) r.erase(it);
            else it->second = v;
        } else if (v != 0) {
            r.insert(it, {j, v});
        }
    }

    void add_at(int i, int j, const Rat& v) {
        if (v == 0) return;
        check_index(i, j);
        Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& p, int c) { return p.first < c; });
        if (it != r.end() && it->first == j) {
            it->second += v;
            if (it->second == 0) r.erase(it);
        } else {
            r.insert(it, {j, v});
        }
    }

    const Row& row(int i) const { return data_.at(i); }

    bool is_zero() const {
        for (const Row& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    size_t nnz() const {
        size_t n = 0;
        for (const Row& r : data_) n += r.size();
        return n;
    }

    QMat transpose() const {
        QMat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) t.data_[j].push_back({i, v});
        return t;  // rows already sorted because i increases
    }

    friend QMat operator*(const QMat& a, const QMat& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product size mismatch");
        QMat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            std::vector<Rat> acc(b.cols_, Rat(0));
            std::vector<char> used(b.cols_, 0);
            for (const auto& [k, av] : a.data_[i])
                for (const auto& [j, bv] : b.data_[k]) {
                    acc[j] += av * bv;
                    used[j] = 1;
                }
            for (int j = 0; j < b.cols_; ++j)
                if (used[j] && acc[j] != 0) c.data_[i].push_back({j, acc[j]});
        }
        return c;
    }

    friend QMat operator+(const QMat& a, const QMat& b) { return combine(a, b, Rat(1)); }
    friend QMat operator-(const QMat& a, const QMat& b) { return combine(a, b, Rat(-1)); }

    friend QMat operator*(const Rat& s, const QMat& a) {
        QMat c(a.rows_, a.cols_);
        if (s == 0) return c;
        for (int i = 0; i < a.rows_; ++i)
            for (const auto& [j, v] : a.data_[i]) c.data_[i].push_back({j, s * v});
        return c;
    }

    bool operator==(const QMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    void set_block(int r0, int c0, const QMat& a) {
        for (int i = 0; i < a.rows_; ++i)
            for (const auto& [j, v] : a.data_[i]) set(r0 + i, c0 + j, v);
    }

    QMat block(int r0, int c0, int nr, int nc) const {
        QMat b(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (const auto& [j, v] : data_[r0 + i])
                if (j >= c0 && j < c0 + nc) b.data_[i].push_back({j - c0, v});
        return b;
    }

    QMat column(int j) const { return block(0, j, rows_, 1); }

    std::vector<std::vector<Rat>> dense() const {
        std::vector<std::vector<Rat>> d(rows_, std::vector<Rat>(cols_, Rat(0)));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) d[i][j] = v;
        return d;
    }

    static QMat from_dense(const std::vector<std::vector<Rat>>& d, int cols = -1) {
        int r = static_cast<int>(d.size());
        int c = cols >= 0 ? cols : (r ? static_cast<int>(d[0].size()) : 0);
        QMat m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(d[i].size()) != c) throw DomainError("ragged dense matrix");
            for (int j = 0; j < c; ++j)
                if (d[i][j] != 0) m.data_[i].push_back({j, d[i][j]});
        }
        return m;
    }

  private:
    static QMat combine(const QMat& a, const QMat& b, const Rat& sign) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DomainError("matrix sum size mismatch");
        QMat c(a.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            const Row& x = a.data_[i];
            const Row& y = b.data_[i];
            Row out;
            size_t p = 0, q = 0;
            while (p < x.size() || q < y.size()) {
                if (q == y.size() || (p < x.size() && x[p].first < y[q].first)) {
                    out.push_back(x[p++]);
                } else if (p == x.size() || y[q].first < x[p].first) {
                    out.push_back({y[q].first, sign * y[q].second});
                    ++q;
                } else {
                    Rat v = x[p].second + sign * y[q].second;
                    if (v != 0) out.push_back({x[p].first, v});
                    ++p;
                    ++q;
                }
            }
            c.data_[i] = std::move(out);
        }
        return c;
    }

    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw DomainError("matrix index out of range");
    }

    int rows_ = 0, cols_ = 0;
    std::vector<Row> data_;
};

inline QMat hstack(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows()) throw DomainError("hstack row mismatch");
    QMat c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

inline QMat vstack(const QMat& a, const QMat& b) {
    if (a.cols() != b.cols()) throw DomainError("vstack col mismatch");
    QMat c(a.rows() + b.rows(), a.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), 0, b);
    return c;
}

namespace detail {

/* Fraction-free elimination core.  Rows are kept as integer sparse vectors;
   a combination step cross-multiplies and then strips the content gcd, so no
   rational arithmetic happens until the final normalization to reduced row
   echelon form.  Pivots are chosen in row-major order: rows are processed in
   their given order and each surviving row pivots on its first remaining
   nonzero column.  The output (canonical RREF) is order-independent anyway,
   which is what makes reports byte-for-byte reproducible. */
using IRow = std::vector<std::pair<int, Int>>;

inline Int divexact(const Int& a, const Int& b) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline IRow irow_of(const QMat::Row& r) {
    Int l = 1;
    for (const auto& [c, v] : r) l = lcm(l, Int(v.get_den()));
    IRow out;
    out.reserve(r.size());
    for (const auto& [c, v] : r) out.push_back({c, Int(v.get_num()) * divexact(l, Int(v.get_den()))});
    return out;
}

inline void strip_content(IRow& r) {
    if (r.empty()) return;
    Int g = 0;
    for (const auto& [c, v] : r) g = gcd(g, v);
    if (sgn(r.front().second) < 0) g = -g;
    if (g == 1) return;
    for (auto& [c, v] : r) v = divexact(v, g);
}

// target -= (target[pivcol]/piv[pivcol]) * piv, done integrally:
// target := piv_lead * target - target_lead * piv, then content-stripped.
inline void eliminate(IRow& target, const IRow& piv) {
    int pc = piv.front().first;
    Int tlead = 0;
    for (const auto& [c, v] : target)
        if (c == pc) {
            tlead = v;
            break;
        }
    if (tlead == 0) return;
    const Int& plead = piv.front().second;
    IRow out;
    out.reserve(target.size() + piv.size());
    size_t p = 0, q = 0;
    while (p < target.size() || q < piv.size()) {
        if (q == piv.size() || (p < target.size() && target[p].first < piv[q].first)) {
            out.push_back({target[p].first, plead * target[p].second});
            ++p;
        } else if (p == target.size() || piv[q].first < target[p].first) {
            out.push_back({piv[q].first, -tlead * piv[q].second});
            ++q;
        } else {
            Int v = plead * target[p].second - tlead * piv[q].second;
            if (v != 0) out.push_back({target[p].first, v});
            ++p;
            ++q;
        }
    }
    target = std::move(out);
    strip_content(target);
}

struct EchelonCore {
    std::vector<IRow> pivots;      // insertion order; leading cols mutually distinct
    std::vector<int> src_rows;     // original row index that produced each pivot
};

// pivot_col_limit: columns >= limit never become pivots (used by solve).
// Rows whose leading entry lands beyond the limit are returned separately.
inline EchelonCore forward_eliminate(const QMat& m, int pivot_col_limit,
                                     std::vector<IRow>* overflow = nullptr) {
    EchelonCore ec;
    for (int i = 0; i < m.rows(); ++i) {
        IRow r = irow_of(m.row(i));
        for (const IRow& p : ec.pivots) {
            if (r.empty()) break;
            eliminate(r, p);
        }
        if (r.empty()) continue;
        if (r.front().first >= pivot_col_limit) {
            if (overflow) overflow->push_back(std::move(r));
            continue;
        }
        ec.pivots.push_back(std::move(r));
        ec.src_rows.push_back(i);
    }
    return ec;
}

// Back-substitution: make pivot columns hit only their own row, sort rows by
// pivot column, divide by the leading value.  Result is the canonical RREF.
inline std::vector<QMat::Row> back_substitute(std::vector<IRow> pivots) {
    std::sort(pivots.begin(), pivots.end(),
              [](const IRow& a, const IRow& b) { return a.front().first < b.front().first; });
    for (int i = static_cast<int>(pivots.size()) - 1; i >= 0; --i)
        for (int j = 0; j < i; ++j) eliminate(pivots[j], pivots[i]);
    std::vector<QMat::Row> out;
    out.reserve(pivots.size());
    for (const IRow& p : pivots) {
        QMat::Row r;
        r.reserve(p.size());
        Rat lead(p.front().second);
        for (const auto& [c, v] : p) {
            Rat q = Rat(v) / lead;
            q.canonicalize();
            r.push_back({c, q});
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

struct Echelon {
    int rank = 0;
    std::vector<int> pivot_cols;  // ascending
    QMat rref;                    // rank x cols, canonical
};

inline Echelon rref_of(const QMat& m) {
    auto core = detail::forward_eliminate(m, m.cols());
    auto rows = detail::back_substitute(std::move(core.pivots));
    Echelon e;
    e.rank = static_cast<int>(rows.size());
    e.rref = QMat(e.rank, m.cols());
    for (int i = 0; i < e.rank; ++i) {
        e.pivot_cols.push_back(rows[i].front().first);
        for (const auto& [c, v] : rows[i]) e.rref.set(i, c, v);
    }
    return e;
}

inline int rank_of(const QMat& m) {
    return static_cast<int>(detail::forward_eliminate(m, m.cols()).pivots.size());
}

struct RankKernel {
    int rank = 0;
    QMat kernel;  // cols(m) x nullity; columns are a canonical kernel basis
};

inline RankKernel rank_and_kernel(const QMat& m) {
    Echelon e = rref_of(m);
    RankKernel rk;
    rk.rank = e.rank;
    int nullity = m.cols() - e.rank;
    rk.kernel = QMat(m.cols(), nullity);
    std::vector<int> pivot_of_col(m.cols(), -1);
    for (int i = 0; i < e.rank; ++i) pivot_of_col[e.pivot_cols[i]] = i;
    int k = 0;
    for (int j = 0; j < m.cols(); ++j) {
        if (pivot_of_col[j] >= 0) continue;
        rk.kernel.set(j, k, Rat(1));
        for (int i = 0; i < e.rank; ++i) {
            Rat v = e.rref.at(i, j);
            if (v != 0) rk.kernel.set(e.pivot_cols[i], k, -v);
        }
        ++k;
    }
    if ((m * rk.kernel).is_zero() == false)
        throw InternalError("kernel basis fails to annihilate");
    return rk;
}

/* Least-index particular solution of A X = B (free variables zero), or
   nullopt when some column of B is outside the column space of A. */
inline std::optional<QMat> solve(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows()) throw DomainError("solve row mismatch");
    QMat aug = hstack(a, b);
    std::vector<detail::IRow> overflow;
    auto core = detail::forward_eliminate(aug, a.cols(), &overflow);
    // overflow rows live entirely in the B region: 0 = (nonzero combination)
    if (!overflow.empty()) return std::nullopt;
    auto rows = detail::back_substitute(std::move(core.pivots));
    QMat x(a.cols(), b.cols());
    for (const auto& r : rows) {
        int pc = r.front().first;
        for (const auto& [c, v] : r)
            if (c >= a.cols()) x.set(pc, c - a.cols(), v);
    }
    if (!(a * x == b)) throw InternalError("solve produced a non-solution");
    return x;
}

// Canonical basis of the column space: transposed nonzero rows of rref(m^T).
inline QMat col_space_basis(const QMat& m) {
    Echelon e = rref_of(m.transpose());
    return e.rref.transpose();
}

}  // namespace groco
