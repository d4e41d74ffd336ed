#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglfans/error.hpp"
#include "fglfans/intlin.hpp"

#include <random>

using namespace fglfans;
using namespace fglfans::intlin;

namespace {

IntMatrix mat(std::vector<std::vector<Int>> rows) { return IntMatrix::from_rows(rows); }

IntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int bound) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
    return m;
}

void check_smith(const IntMatrix& m) {
    SmithResult s = smith_normal_form(m);
    CHECK(s.u.mul(m).mul(s.v) == s.d);
    Int du = det(s.u), dv = det(s.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    int n = std::min(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) {
        CHECK(s.d.at(i, i) >= 0);
        if (i + 1 < n && s.d.at(i + 1, i + 1) != 0) {
            REQUIRE(s.d.at(i, i) != 0);
            CHECK(s.d.at(i + 1, i + 1) % s.d.at(i, i) == 0);
        }
    }
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j) CHECK(s.d.at(i, j) == 0);
}

} // namespace

TEST_CASE("smith normal form: identity") {
    SmithResult s = smith_normal_form(IntMatrix::identity(2));
    CHECK(s.u == IntMatrix::identity(2));
    CHECK(s.d == IntMatrix::identity(2));
    CHECK(s.v == IntMatrix::identity(2));
}

TEST_CASE("smith normal form: [[2,4],[6,8]] has d = diag(2,4)") {
    IntMatrix m = mat({{2, 4}, {6, 8}});
    SmithResult s = smith_normal_form(m);
    CHECK(s.d.at(0, 0) == 2);
    CHECK(s.d.at(1, 1) == 4);
    check_smith(m);
}

TEST_CASE("smith normal form: zero 2x3") {
    IntMatrix m(2, 3);
    SmithResult s = smith_normal_form(m);
    CHECK(s.d == IntMatrix(2, 3));
    CHECK(s.u == IntMatrix::identity(2));
    CHECK(s.v == IntMatrix::identity(3));
}

TEST_CASE("smith normal form: randomized contract") {
    std::mt19937 rng(20260811);
    for (int it = 0; it < 60; ++it) {
        int r = 1 + static_cast<int>(rng() % 4);
        int c = 1 + static_cast<int>(rng() % 4);
        check_smith(random_matrix(rng, r, c, 9));
    }
}

TEST_CASE("integer kernel: examples") {
    LatticeSubspace k = integer_kernel(mat({{1, -1}}));
    REQUIRE(k.rank() == 1);
    CHECK(k.basis.row(0) == std::vector<Int>{1, 1});

    CHECK(integer_kernel(IntMatrix::identity(2)).rank() == 0);

    LatticeSubspace k2 = integer_kernel(mat({{2, 4}}));
    REQUIRE(k2.rank() == 1);
    CHECK(k2.basis.row(0) == std::vector<Int>{2, -1});
    CHECK(content(k2.basis.row(0)) == 1); // saturated
}

TEST_CASE("integer kernel: m*x = 0 and saturation, randomized") {
    std::mt19937 rng(7);
    for (int it = 0; it < 40; ++it) {
        int r = 1 + static_cast<int>(rng() % 3);
        int c = 1 + static_cast<int>(rng() % 4);
        IntMatrix m = random_matrix(rng, r, c, 6);
        LatticeSubspace k = integer_kernel(m);
        for (int i = 0; i < k.rank(); ++i) CHECK(is_zero_vec(matvec(m, k.basis.row(i))));
        CHECK(rank(k.basis) == k.rank());
        LatticeSubspace sat = saturate(k);
        CHECK(same_row_lattice(sat.basis, k.basis)); // kernel already saturated
        CHECK(k.rank() == c - rank(m));
    }
}

TEST_CASE("saturate: examples") {
    LatticeSubspace s{2, mat({{2, 0}})};
    LatticeSubspace sat = saturate(s);
    REQUIRE(sat.rank() == 1);
    CHECK(sat.basis.row(0) == std::vector<Int>{1, 0});
    // index 2: the generator of the saturation is not in the original lattice
    CHECK(!solve(s.basis.transpose(), sat.basis.row(0)).has_value());
    CHECK(solve(sat.basis.transpose(), s.basis.row(0)).has_value());

    LatticeSubspace full{2, IntMatrix::identity(2)};
    CHECK(same_row_lattice(saturate(full).basis, full.basis));

    LatticeSubspace prim{2, mat({{1, 2}})};
    CHECK(same_row_lattice(saturate(prim).basis, prim.basis));
}

TEST_CASE("extend_to_basis: examples") {
    LatticeSubspace e1{2, mat({{1, 0}})};
    IntMatrix w = extend_to_basis(e1);
    CHECK(w == IntMatrix::identity(2));

    LatticeSubspace prim{2, mat({{1, 2}})};
    IntMatrix w2 = extend_to_basis(prim);
    CHECK(w2.row(0) == std::vector<Int>{1, 2});
    Int d = det(w2);
    CHECK((d == 1 || d == -1));

    LatticeSubspace bad{2, mat({{2, 0}})};
    CHECK_THROWS_AS(extend_to_basis(bad), InputError);
}

TEST_CASE("extend_to_basis: unimodular on random saturated inputs") {
    std::mt19937 rng(99);
    for (int it = 0; it < 40; ++it) {
        int n = 2 + static_cast<int>(rng() % 3);
        int r = 1 + static_cast<int>(rng() % n);
        IntMatrix m = random_matrix(rng, r, n, 5);
        LatticeSubspace s = saturate(LatticeSubspace{n, m});
        if (s.rank() == 0) continue;
        IntMatrix w = extend_to_basis(s);
        Int d = det(w);
        CHECK((d == 1 || d == -1));
        for (int i = 0; i < s.rank(); ++i) CHECK(w.row(i) == s.basis.row(i));
    }
}

TEST_CASE("normal_form_in_quotient: examples") {
    LatticeSubspace rel{2, mat({{2, 0}})};
    CHECK(normal_form_in_quotient({2, 0}, rel) == std::vector<Int>{0, 0});
    CHECK(normal_form_in_quotient({3, 0}, rel) == std::vector<Int>{1, 0});
    LatticeSubspace none = LatticeSubspace::zero(2);
    CHECK(normal_form_in_quotient({5, -7}, none) == std::vector<Int>{5, -7});
}

TEST_CASE("normal_form_in_quotient: idempotent, additive, separating") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> dist(-8, 8);
    for (int it = 0; it < 40; ++it) {
        int n = 2 + static_cast<int>(rng() % 3);
        IntMatrix m = random_matrix(rng, 1 + static_cast<int>(rng() % n), n, 5);
        IntMatrix hb = row_lattice_hnf(m);
        LatticeSubspace rel{n, hb};
        std::vector<Int> a(n), b(n);
        for (int i = 0; i < n; ++i) { a[i] = dist(rng); b[i] = dist(rng); }

        auto nf_a = normal_form_in_quotient(a, rel);
        CHECK(normal_form_in_quotient(nf_a, rel) == nf_a);

        std::vector<Int> ab(n);
        for (int i = 0; i < n; ++i) ab[i] = a[i] + b[i];
        auto nf_b = normal_form_in_quotient(b, rel);
        std::vector<Int> nfs(n);
        for (int i = 0; i < n; ++i) nfs[i] = nf_a[i] + nf_b[i];
        CHECK(normal_form_in_quotient(ab, rel) == normal_form_in_quotient(nfs, rel));

        // difference of a and its normal form lies in the relation lattice
        std::vector<Int> diff(n);
        for (int i = 0; i < n; ++i) diff[i] = a[i] - nf_a[i];
        if (rel.rank() > 0) CHECK(solve(rel.basis.transpose(), diff).has_value());
    }
}

TEST_CASE("solve: exact integer systems") {
    IntMatrix m = mat({{2, 0}, {0, 3}});
    auto x = solve(m, {4, 9});
    REQUIRE(x.has_value());
    CHECK(*x == std::vector<Int>{2, 3});
    CHECK(!solve(m, {1, 0}).has_value());
    CHECK(!solve(mat({{0, 0}}), {5}).has_value());
    CHECK(solve(mat({{0, 0}}), {0}).has_value());
}

TEST_CASE("column hermite: convention") {
    // columns generate the lattice; pivots positive, entries left of a pivot in [0, pivot)
    IntMatrix m = mat({{4, 2}, {1, 1}});
    HermiteResult h = column_hermite(m);
    REQUIRE(h.pivots.size() == 2);
    CHECK(h.h == m.mul(h.v));
    for (size_t p = 0; p < h.pivots.size(); ++p) {
        auto [r, c] = h.pivots[p];
        CHECK(h.h.at(r, c) > 0);
        for (int j = 0; j < c; ++j) {
            CHECK(h.h.at(r, j) >= 0);
            CHECK(h.h.at(r, j) < h.h.at(r, c));
        }
        for (int i = 0; i < r; ++i) CHECK(h.h.at(i, c) == 0);
    }
}
