#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglfans/lazard.hpp"
#include "fglfans/oracles.hpp"
#include "fglfans/pps.hpp"

using namespace fglfans;
using namespace fglfans::oracles;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }

std::shared_ptr<const Fan> fan_p1() {
    return Fan::build(1, {{Int(1)}, {Int(-1)}}, {{0}, {1}});
}

std::shared_ptr<const Fan> fan_p2() {
    return Fan::build(2, {v2(1, 0), v2(0, 1), v2(-1, -1)}, {{0, 1}, {1, 2}, {0, 2}});
}

std::shared_ptr<const Fan> fan_p1xp1() {
    return Fan::build(2, {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)},
                      {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

std::shared_ptr<const Fan> fan_quadric() {
    return Fan::build(2, {v2(0, 1), v2(2, -1)}, {{0, 1}});
}

} // namespace

TEST_CASE("piecewise polynomials: degree-1 rank is the ray count on complete simplicial fans") {
    CHECK(pp_global_sections(*fan_p1(), 1).rank == 2);
    CHECK(pp_global_sections(*fan_p2(), 1).rank == 3);
    CHECK(pp_global_sections(*fan_p1xp1(), 1).rank == 4);
}

TEST_CASE("piecewise polynomials: constants on connected support") {
    CHECK(pp_global_sections(*fan_p1(), 0).rank == 1);
    CHECK(pp_global_sections(*fan_p2(), 0).rank == 1);
    CHECK(pp_global_sections(*fan_quadric(), 0).rank == 1);
}

TEST_CASE("piecewise polynomials: known ranks for P2 and P1xP1") {
    // Stanley-Reisner counts for the smooth complete fans
    CHECK(pp_global_sections(*fan_p2(), 2).rank == 6);
    CHECK(pp_global_sections(*fan_p2(), 3).rank == 9);
    CHECK(pp_global_sections(*fan_p1xp1(), 2).rank == 8);
    CHECK(pp_global_sections(*fan_p1xp1(), 3).rank == 12);

    // single full-dimensional cone: all polynomials
    CHECK(pp_global_sections(*fan_quadric(), 2).rank == 3);
    CHECK(pp_global_sections(*fan_quadric(), 3).rank == 4);
}

TEST_CASE("piecewise polynomial tuples agree on faces by evaluation") {
    auto p2 = fan_p2();
    PolynomialSections sec = pp_global_sections(*p2, 2);
    REQUIRE(sec.tuple_rank > 0);
    for (const auto& tuple : sec.basis) {
        for (size_t i = 0; i < sec.cones.size(); ++i)
            for (size_t j = i + 1; j < sec.cones.size(); ++j) {
                int tau = p2->intersection(sec.cones[i], sec.cones[j]);
                const Cone& face = p2->cone(tau);
                // evaluate both polynomials on lattice points spanning the face
                for (int r = 0; r < face.num_rays(); ++r) {
                    Vec pt = face.rays.row(r);
                    CHECK(evaluate_poly(tuple[i], pt) == evaluate_poly(tuple[j], pt));
                    Vec dbl = pt;
                    for (Int& x : dbl) x *= 3;
                    CHECK(evaluate_poly(tuple[i], dbl) == evaluate_poly(tuple[j], dbl));
                }
                if (face.num_rays() == 0) {
                    Vec origin(p2->rank(), Int(0));
                    CHECK(evaluate_poly(tuple[i], origin) == evaluate_poly(tuple[j], origin));
                }
            }
    }
}

TEST_CASE("additive specialization matches the polynomial oracle") {
    for (auto fan : {fan_p1(), fan_p2(), fan_quadric()}) {
        ChowComparisonReport rep = compare_with_additive_specialization(fan, 3, 3);
        CHECK(rep.match);
        for (const auto& row : rep.rows) CHECK(row.pp_rank == row.specialized_rank);
    }
}

TEST_CASE("multiplicative restriction on the quadric cone matches the expansion of u+v-buv") {
    auto zb = make_multiplicative_ring(3);
    auto quad = fan_quadric();
    SheafSystem sys(quad, zb);
    int top = quad->cone_index({0, 1});
    int slant = quad->cone_index({quad->ray_index(v2(2, -1))});
    REQUIRE(top >= 0);
    REQUIRE(slant >= 0);

    StalkMap m = sys.restriction(top, slant);
    // basis of the slanted ray is (2,-1) = 2 e1 - e2, so t1 -> [2]u, t2 -> [-1]u
    CHECK(m.variable_images[0].linear_part() == std::vector<Int>{2});
    CHECK(m.variable_images[1].linear_part() == std::vector<Int>{-1});
    CHECK(m.variable_images[0] == n_series(zb, 2));
    CHECK(m.variable_images[1] == n_series(zb, -1));

    // frozen expansions: [2]u = 2u - b u^2, [-1]u = -u - b u^2 - b^2 u^3
    GradedSeries two(zb, 1, 1), inv(zb, 1, 1);
    RingElem b1 = zb->element(1, {Int(1)});
    RingElem b2 = zb->element(2, {Int(1)});
    two.add_term(Monomial{1}, zb->one().scaled(2));
    two.add_term(Monomial{2}, b1.scaled(-1));
    inv.add_term(Monomial{1}, zb->one().scaled(-1));
    inv.add_term(Monomial{2}, b1.scaled(-1));
    inv.add_term(Monomial{3}, b2.scaled(-1));
    CHECK(m.variable_images[0] == two);
    CHECK(m.variable_images[1] == inv);
}
