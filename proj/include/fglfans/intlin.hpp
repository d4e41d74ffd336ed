#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace fglfans {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

} // namespace fglfans

// Exact integer linear algebra: Smith/Hermite normal forms, kernels,
// saturation, basis extension and quotient normal forms. Everything is
// arbitrary precision; there is no floating point anywhere in this module.
namespace fglfans::intlin {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const Int& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    std::vector<Int> row(int r) const;
    std::vector<Int> col(int c) const;

    IntMatrix transpose() const;
    IntMatrix mul(const IntMatrix& other) const;

    // Stacks `below` under *this; column counts must match.
    IntMatrix stacked(const IntMatrix& below) const;
    IntMatrix rows_slice(int first, int last) const; // rows [first, last)

    void swap_rows(int a, int b);
    void swap_cols(int a, int b);
    void negate_row(int r);
    void negate_col(int c);
    // row[dst] += k * row[src], col[dst] += k * col[src]
    void add_row_multiple(int dst, int src, const Int& k);
    void add_col_multiple(int dst, int src, const Int& k);

    bool is_zero() const;
    bool operator==(const IntMatrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> data_;
};

std::vector<Int> matvec(const IntMatrix& m, const std::vector<Int>& x);  // m * x
std::vector<Int> vecmat(const std::vector<Int>& x, const IntMatrix& m);  // x * m
Int dot(const std::vector<Int>& a, const std::vector<Int>& b);
bool is_zero_vec(const std::vector<Int>& v);
Int content(const std::vector<Int>& v); // gcd of entries, 0 for the zero vector

// Determinant of a square matrix (Bareiss, exact).
Int det(const IntMatrix& m);

// u * m * v = d with u, v unimodular and d diagonal, non-negative,
// d1 | d2 | ... Pivot choice is smallest absolute value, then lowest
// row-major index, so the output is reproducible.
struct SmithResult {
    IntMatrix u, d, v;
};
SmithResult smith_normal_form(const IntMatrix& m);

// Column-style Hermite form: h = m * v with v unimodular. Pivots are the
// first nonzero entry from the top of each nonzero column, pivot rows
// strictly increase left to right, pivots are positive, and entries to
// the left of a pivot in its row lie in [0, pivot).
struct HermiteResult {
    IntMatrix h, v;
    std::vector<std::pair<int, int>> pivots; // (row, col) per pivot column
};
HermiteResult column_hermite(const IntMatrix& m);

int rank(const IntMatrix& m);

// A sublattice of Z^ambient_rank given by independent basis rows.
struct LatticeSubspace {
    int ambient_rank = 0;
    IntMatrix basis; // rows are the basis vectors

    int rank() const { return basis.rows(); }
    static LatticeSubspace zero(int ambient_rank);
};

// Basis of {x in Z^cols : m * x = 0}; the result is saturated and in
// canonical (row Hermite) form.
LatticeSubspace integer_kernel(const IntMatrix& m);

// (Q-span of s) intersected with the ambient lattice, canonical basis.
LatticeSubspace saturate(const LatticeSubspace& s);

// Completes a saturated basis to a unimodular matrix whose first rank(s)
// rows are exactly the rows of s. Throws InputError when s is not
// saturated (or not independent).
IntMatrix extend_to_basis(const LatticeSubspace& s);

// Canonical representative of v modulo the relation sublattice. Two
// vectors reduce to the same output iff their difference lies in the
// sublattice.
std::vector<Int> normal_form_in_quotient(std::vector<Int> v, const LatticeSubspace& relations);

// Inverse of a unimodular matrix (exact; throws InternalError otherwise).
IntMatrix unimodular_inverse(const IntMatrix& m);

// One solution x of m * x = b over the integers, if any.
std::optional<std::vector<Int>> solve(const IntMatrix& m, const std::vector<Int>& b);

// Canonical basis (row Hermite form, zero rows dropped) of the row span.
IntMatrix row_lattice_hnf(const IntMatrix& m);
bool same_row_lattice(const IntMatrix& a, const IntMatrix& b);

} // namespace fglfans::intlin
