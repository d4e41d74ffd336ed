#include "fglfans/intlin.hpp"

#include "fglfans/error.hpp"

#include <algorithm>

namespace fglfans::intlin {

namespace {

// Floor division: quotient q with v - q*p in [0, |p|) for p > 0.
Int floor_div(const Int& v, const Int& p) {
    Int q = v / p;
    if (v % p != 0 && ((v < 0) != (p < 0))) q -= 1;
    return q;
}

} // namespace

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw InternalError("from_rows: ragged row lengths");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Int> IntMatrix::row(int r) const {
    std::vector<Int> out(cols_);
    for (int j = 0; j < cols_; ++j) out[j] = at(r, j);
    return out;
}

std::vector<Int> IntMatrix::col(int c) const {
    std::vector<Int> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = at(i, c);
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::mul(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw InternalError("mul: dimension mismatch");
    IntMatrix out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < other.cols_; ++j) out.at(i, j) += a * other.at(k, j);
        }
    return out;
}

IntMatrix IntMatrix::stacked(const IntMatrix& below) const {
    if (rows_ == 0 && cols_ == 0) return below;
    if (below.rows_ == 0 && below.cols_ == 0) return *this;
    if (cols_ != below.cols_) throw InternalError("stacked: column mismatch");
    IntMatrix out(rows_ + below.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
    for (int i = 0; i < below.rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(rows_ + i, j) = below.at(i, j);
    return out;
}

IntMatrix IntMatrix::rows_slice(int first, int last) const {
    IntMatrix out(last - first, cols_);
    for (int i = first; i < last; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i - first, j) = at(i, j);
    return out;
}

void IntMatrix::swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void IntMatrix::swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void IntMatrix::negate_row(int r) {
    for (int j = 0; j < cols_; ++j) at(r, j) = -at(r, j);
}

void IntMatrix::negate_col(int c) {
    for (int i = 0; i < rows_; ++i) at(i, c) = -at(i, c);
}

void IntMatrix::add_row_multiple(int dst, int src, const Int& k) {
    if (k == 0) return;
    for (int j = 0; j < cols_; ++j) at(dst, j) += k * at(src, j);
}

void IntMatrix::add_col_multiple(int dst, int src, const Int& k) {
    if (k == 0) return;
    for (int i = 0; i < rows_; ++i) at(i, dst) += k * at(i, src);
}

bool IntMatrix::is_zero() const {
    for (const Int& x : data_)
        if (x != 0) return false;
    return true;
}

std::vector<Int> matvec(const IntMatrix& m, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != m.cols()) throw InternalError("matvec: dimension mismatch");
    std::vector<Int> out(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i] += m.at(i, j) * x[j];
    return out;
}

std::vector<Int> vecmat(const std::vector<Int>& x, const IntMatrix& m) {
    if (static_cast<int>(x.size()) != m.rows()) throw InternalError("vecmat: dimension mismatch");
    std::vector<Int> out(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < m.cols(); ++j) out[j] += x[i] * m.at(i, j);
    }
    return out;
}

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    if (a.size() != b.size()) throw InternalError("dot: dimension mismatch");
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero_vec(const std::vector<Int>& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

Int content(const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
    return g < 0 ? Int(-g) : g;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw InternalError("det: not square");
    int n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int sign = 1;
    Int prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                a.at(i, j) = (a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j)) / prev;
            }
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

SmithResult smith_normal_form(const IntMatrix& m) {
    SmithResult r{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
    IntMatrix& d = r.d;
    int n = std::min(m.rows(), m.cols());

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // Pivot: smallest nonzero absolute value, then lowest row-major index.
            int pi = -1, pj = -1;
            for (int i = t; i < d.rows(); ++i)
                for (int j = t; j < d.cols(); ++j) {
                    if (d.at(i, j) == 0) continue;
                    if (pi < 0 || abs(d.at(i, j)) < abs(d.at(pi, pj))) { pi = i; pj = j; }
                }
            if (pi < 0) { pi = t; break; } // active block is zero; done
            d.swap_rows(t, pi);
            r.u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            r.v.swap_cols(t, pj);

            bool clean = true;
            for (int i = t + 1; i < d.rows(); ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = floor_div(d.at(i, t), d.at(t, t));
                d.add_row_multiple(i, t, -q);
                r.u.add_row_multiple(i, t, -q);
                if (d.at(i, t) != 0) clean = false;
            }
            if (!clean) continue;
            for (int j = t + 1; j < d.cols(); ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = floor_div(d.at(t, j), d.at(t, t));
                d.add_col_multiple(j, t, -q);
                r.v.add_col_multiple(j, t, -q);
                if (d.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // Divisibility fix: fold in a row whose entries the pivot misses.
            bool divides = true;
            for (int i = t + 1; i < d.rows() && divides; ++i)
                for (int j = t + 1; j < d.cols(); ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        d.add_row_multiple(t, i, 1);
                        r.u.add_row_multiple(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (t < n && d.at(t, t) == 0) break;
    }

    for (int t = 0; t < n; ++t)
        if (d.at(t, t) < 0) {
            d.negate_row(t);
            r.u.negate_row(t);
        }
    return r;
}

HermiteResult column_hermite(const IntMatrix& m) {
    HermiteResult r{m, IntMatrix::identity(m.cols()), {}};
    IntMatrix& h = r.h;
    int pc = 0;
    for (int row = 0; row < h.rows() && pc < h.cols(); ++row) {
        for (;;) {
            int best = -1;
            for (int j = pc; j < h.cols(); ++j) {
                if (h.at(row, j) == 0) continue;
                if (best < 0 || abs(h.at(row, j)) < abs(h.at(row, best))) best = j;
            }
            if (best < 0) break;
            h.swap_cols(pc, best);
            r.v.swap_cols(pc, best);
            bool clean = true;
            for (int j = pc + 1; j < h.cols(); ++j) {
                if (h.at(row, j) == 0) continue;
                Int q = floor_div(h.at(row, j), h.at(row, pc));
                h.add_col_multiple(j, pc, -q);
                r.v.add_col_multiple(j, pc, -q);
                if (h.at(row, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (pc >= h.cols() || h.at(row, pc) == 0) continue;
        if (h.at(row, pc) < 0) {
            h.negate_col(pc);
            r.v.negate_col(pc);
        }
        for (int j = 0; j < pc; ++j) {
            Int q = floor_div(h.at(row, j), h.at(row, pc));
            h.add_col_multiple(j, pc, -q);
            r.v.add_col_multiple(j, pc, -q);
        }
        r.pivots.emplace_back(row, pc);
        ++pc;
    }
    return r;
}

int rank(const IntMatrix& m) {
    return static_cast<int>(column_hermite(m).pivots.size());
}

LatticeSubspace LatticeSubspace::zero(int ambient_rank) {
    return LatticeSubspace{ambient_rank, IntMatrix(0, ambient_rank)};
}

LatticeSubspace integer_kernel(const IntMatrix& m) {
    if (m.rows() == 0) {
        LatticeSubspace s{m.cols(), row_lattice_hnf(IntMatrix::identity(m.cols()))};
        return s;
    }
    SmithResult s = smith_normal_form(m);
    int n = std::min(m.rows(), m.cols());
    int r = 0;
    while (r < n && s.d.at(r, r) != 0) ++r;
    // Columns r.. of v span the kernel; v unimodular makes them saturated.
    IntMatrix basis(m.cols() - r, m.cols());
    for (int k = r; k < m.cols(); ++k)
        for (int i = 0; i < m.cols(); ++i) basis.at(k - r, i) = s.v.at(i, k);
    return LatticeSubspace{m.cols(), row_lattice_hnf(basis)};
}

LatticeSubspace saturate(const LatticeSubspace& s) {
    LatticeSubspace orth = integer_kernel(s.basis);
    LatticeSubspace sat = integer_kernel(orth.basis);
    sat.ambient_rank = s.ambient_rank;
    return sat;
}

IntMatrix extend_to_basis(const LatticeSubspace& s) {
    int n = s.ambient_rank;
    int r = s.basis.rows();
    if (r == 0) return IntMatrix::identity(n);
    SmithResult sm = smith_normal_form(s.basis);
    for (int i = 0; i < r; ++i)
        if (sm.d.at(i, i) != 1)
            throw InputError("extend_to_basis: basis is not saturated (or not independent)");
    // basis = u^-1 [I_r | 0] v^-1, so the last n-r rows of v^-1 complete it.
    IntMatrix vinv = unimodular_inverse(sm.v);
    IntMatrix out = s.basis.stacked(vinv.rows_slice(r, n));
    return out;
}

std::vector<Int> normal_form_in_quotient(std::vector<Int> v, const LatticeSubspace& relations) {
    if (static_cast<int>(v.size()) != relations.ambient_rank)
        throw InternalError("normal_form_in_quotient: dimension mismatch");
    if (relations.rank() == 0) return v;
    HermiteResult h = column_hermite(relations.basis.transpose());
    for (auto [row, col] : h.pivots) {
        Int q = floor_div(v[row], h.h.at(row, col));
        if (q == 0) continue;
        for (int i = 0; i < h.h.rows(); ++i) v[i] -= q * h.h.at(i, col);
    }
    return v;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw InternalError("unimodular_inverse: not square");
    HermiteResult h = column_hermite(m);
    if (!(h.h == IntMatrix::identity(m.rows())))
        throw InternalError("unimodular_inverse: matrix is not unimodular");
    return h.v;
}

std::optional<std::vector<Int>> solve(const IntMatrix& m, const std::vector<Int>& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw InternalError("solve: dimension mismatch");
    SmithResult s = smith_normal_form(m);
    std::vector<Int> c = matvec(s.u, b);
    int n = std::min(m.rows(), m.cols());
    std::vector<Int> y(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        Int di = (i < n) ? s.d.at(i, i) : Int(0);
        if (di == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % di != 0) return std::nullopt;
            y[i] = c[i] / di;
        }
    }
    return matvec(s.v, y);
}

IntMatrix row_lattice_hnf(const IntMatrix& m) {
    HermiteResult h = column_hermite(m.transpose());
    IntMatrix t = h.h.transpose();
    return t.rows_slice(0, static_cast<int>(h.pivots.size()));
}

bool same_row_lattice(const IntMatrix& a, const IntMatrix& b) {
    return row_lattice_hnf(a) == row_lattice_hnf(b);
}

} // namespace fglfans::intlin
