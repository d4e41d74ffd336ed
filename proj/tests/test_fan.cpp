#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglfans/error.hpp"
#include "fglfans/fan.hpp"

using namespace fglfans;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }
Vec v3(long a, long b, long c) { return Vec{Int(a), Int(b), Int(c)}; }

std::shared_ptr<const Fan> fan_p1() {
    return Fan::build(1, {{Int(1)}, {Int(-1)}}, {{0}, {1}});
}

std::shared_ptr<const Fan> fan_a2() {
    return Fan::build(2, {v2(1, 0), v2(0, 1)}, {{0, 1}});
}

std::shared_ptr<const Fan> fan_p2() {
    return Fan::build(2, {v2(1, 0), v2(0, 1), v2(-1, -1)}, {{0, 1}, {1, 2}, {0, 2}});
}

std::shared_ptr<const Fan> fan_quadric() {
    return Fan::build(2, {v2(0, 1), v2(2, -1)}, {{0, 1}});
}

std::shared_ptr<const Fan> fan_square_cone() {
    return Fan::build(3, {v3(1, 0, 1), v3(0, 1, 1), v3(-1, 0, 1), v3(0, -1, 1)}, {{0, 1, 2, 3}});
}

int find_cone(const Fan& f, std::vector<Vec> rays) {
    std::vector<int> set;
    for (const Vec& r : rays) {
        int idx = f.ray_index(r);
        if (idx < 0) return -1;
        set.push_back(idx);
    }
    std::sort(set.begin(), set.end());
    return f.cone_index(set);
}

} // namespace

TEST_CASE("validate: P1 fan is valid") {
    ValidationReport rep = validate_fan(1, {{Int(1)}, {Int(-1)}}, {{0}, {1}});
    CHECK(rep.valid);
    CHECK(rep.violations.empty());
}

TEST_CASE("validate: overlapping 2D cones are flagged with the pair") {
    ValidationReport rep =
        validate_fan(2, {v2(1, 0), v2(0, 1), v2(1, 2), v2(-1, 1)}, {{0, 1}, {2, 3}});
    CHECK(!rep.valid);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().find("0") != std::string::npos);
    CHECK(rep.violations.front().find("1") != std::string::npos);
}

TEST_CASE("validate: non-primitive ray is flagged") {
    ValidationReport rep = validate_fan(2, {v2(2, 0), v2(0, 1)}, {{0, 1}});
    CHECK(!rep.valid);
    CHECK_THROWS_AS(Fan::build(2, {v2(2, 0), v2(0, 1)}, {{0, 1}}), InputError);
}

TEST_CASE("cone membership and relative interior") {
    Cone c = make_cone(2, {v2(1, 0), v2(0, 1)});
    CHECK(cone_contains(c, v2(3, 5)));
    CHECK(cone_contains(c, v2(0, 0)));
    CHECK(cone_contains(c, v2(1, 0)));
    CHECK(!cone_contains(c, v2(-1, 2)));
    CHECK(in_relative_interior(c, v2(1, 1)));
    CHECK(!in_relative_interior(c, v2(1, 0)));

    Cone ray = make_cone(2, {v2(1, 2)});
    CHECK(cone_contains(ray, v2(2, 4)));
    CHECK(!cone_contains(ray, v2(2, 3)));
}

TEST_CASE("make_cone rejects degenerate input") {
    CHECK_THROWS_AS(make_cone(2, {v2(1, 0), v2(-1, 0)}), InputError);      // line
    CHECK_THROWS_AS(make_cone(2, {v2(2, 0)}), InputError);                 // non-primitive
    CHECK_THROWS_AS(make_cone(2, {v2(1, 0), v2(0, 1), v2(1, 1)}), InputError); // non-extreme
}

TEST_CASE("faces: zero cone, smooth quadrant, slanted cone") {
    Cone zero = make_cone(2, {});
    CHECK(face_ray_subsets(zero) == std::vector<std::vector<int>>{{}});

    Cone quad = make_cone(2, {v2(1, 0), v2(0, 1)});
    auto f = face_ray_subsets(quad);
    CHECK(f.size() == 4); // 0, two rays, itself

    Cone slant = make_cone(2, {v2(1, 0), v2(1, 2)});
    CHECK(face_ray_subsets(slant).size() == 4);
}

TEST_CASE("star: zero cone, ray of P2, maximal cone") {
    auto p2 = fan_p2();
    CHECK(p2->star(p2->zero_cone()).size() == static_cast<size_t>(p2->num_cones()));

    int ray_e1 = p2->cone_index({p2->ray_index(v2(1, 0))});
    REQUIRE(ray_e1 >= 0);
    std::vector<int> st = p2->star(ray_e1);
    CHECK(st.size() == 3); // the ray and the two 2D cones around it

    int top = find_cone(*p2, {v2(1, 0), v2(0, 1)});
    REQUIRE(top >= 0);
    CHECK(p2->star(top) == std::vector<int>{top});
}

TEST_CASE("is_smooth: quadrant, quadric cone, cone over a square") {
    CHECK(is_smooth(make_cone(2, {v2(1, 0), v2(0, 1)})));
    Cone quadric = make_cone(2, {v2(0, 1), v2(2, -1)});
    CHECK(!is_smooth(quadric));
    CHECK(cone_multiplicity(quadric) == 2);
    Cone square = make_cone(3, {v3(1, 0, 1), v3(0, 1, 1), v3(-1, 0, 1), v3(0, -1, 1)});
    CHECK(!is_smooth(square));
    CHECK(square.dim == 3);
    CHECK(square.num_rays() == 4);
}

TEST_CASE("star subdivision: blowup of the smooth quadrant") {
    auto a2 = fan_a2();
    SubdivisionMap sub = star_subdivision(a2, v2(1, 1));
    CHECK(sub.source->num_rays() == 3);
    CHECK(find_cone(*sub.source, {v2(1, 0), v2(1, 1)}) >= 0);
    CHECK(find_cone(*sub.source, {v2(0, 1), v2(1, 1)}) >= 0);
    CHECK(find_cone(*sub.source, {v2(1, 0), v2(0, 1)}) < 0);
    CHECK(sub.source->maximal_cones().size() == 2);

    // phi of cone(e1, e1+e2) is the quadrant
    int piece = find_cone(*sub.source, {v2(1, 0), v2(1, 1)});
    int quadrant = find_cone(*a2, {v2(1, 0), v2(0, 1)});
    CHECK(sub.cone_map[piece] == quadrant);
}

TEST_CASE("star subdivision: blowup of P2 and monotone phi") {
    auto p2 = fan_p2();
    SubdivisionMap sub = star_subdivision(p2, v2(1, 1));
    CHECK(sub.source->num_rays() == 4);
    CHECK(sub.source->maximal_cones().size() == 4);

    for (int i = 0; i < sub.source->num_cones(); ++i)
        for (int j = 0; j < sub.source->num_cones(); ++j)
            if (sub.source->is_face(i, j))
                CHECK(sub.target->is_face(sub.cone_map[i], sub.cone_map[j]));

    // support is preserved: every target maximal cone still contains its
    // old relative-interior points via some source cone
    for (int mi : p2->maximal_cones()) {
        const Cone& c = p2->cone(mi);
        Vec interior(p2->rank(), Int(0));
        for (int r = 0; r < c.num_rays(); ++r)
            for (int j = 0; j < p2->rank(); ++j) interior[j] += c.rays.at(r, j);
        CHECK(sub.source->smallest_containing(interior) >= 0);
    }
}

TEST_CASE("star subdivision: error cases") {
    auto a2 = fan_a2();
    CHECK_THROWS_AS(star_subdivision(a2, v2(-1, 0)), InputError); // outside support
    CHECK_THROWS_AS(star_subdivision(a2, v2(1, 0)), InputError);  // already a ray
    CHECK_THROWS_AS(star_subdivision(a2, v2(2, 2)), InputError);  // not primitive
}

TEST_CASE("resolve: smooth fan needs no steps") {
    CHECK(resolve(fan_p2()).empty());
    CHECK(resolve(fan_a2()).empty());
}

TEST_CASE("resolve: quadric cone resolves in one step at e1") {
    auto q = fan_quadric();
    std::vector<SubdivisionMap> chain = resolve(q);
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].center == v2(1, 0));
    CHECK(chain[0].source->all_cones_smooth());
    CHECK(chain[0].source->maximal_cones().size() == 2);
}

TEST_CASE("resolve: cone over a square takes a stellar step then a star step") {
    auto sq = fan_square_cone();
    std::vector<SubdivisionMap> chain = resolve(sq);
    CHECK(chain.size() >= 2);
    CHECK(!chain.front().center_is_new_ray);
    std::shared_ptr<const Fan> terminal = chain.back().source;
    CHECK(terminal->all_cones_smooth());

    // a different center order gives a different (still valid) chain
    std::vector<SubdivisionMap> alt = resolve(sq, ResolveOrder::alternate);
    CHECK(alt.back().source->all_cones_smooth());
    CHECK(alt.front().center != chain.front().center);
}

TEST_CASE("faces and star are mutually consistent") {
    auto p2 = fan_p2();
    for (int rho = 0; rho < p2->num_cones(); ++rho) {
        std::vector<int> st = p2->star(rho);
        for (int sigma = 0; sigma < p2->num_cones(); ++sigma) {
            bool in_star = std::find(st.begin(), st.end(), sigma) != st.end();
            CHECK(in_star == p2->is_face(rho, sigma));
        }
    }
}

TEST_CASE("fan JSON round trip is canonical") {
    auto p2 = fan_p2();
    std::string a = p2->to_json();
    auto again = Fan::from_json(a);
    CHECK(again->to_json() == a);
    CHECK(again->num_cones() == p2->num_cones());

    CHECK_THROWS_AS(Fan::from_json("{ not json"), InputError);
    CHECK_THROWS_AS(Fan::from_json("{\"rank\": 1}"), InputError);
}

TEST_CASE("fan of the zero cone only") {
    auto trivial = Fan::build(2, {}, {{}});
    CHECK(trivial->num_cones() == 1);
    CHECK(trivial->zero_cone() == 0);
    CHECK(trivial->maximal_cones() == std::vector<int>{0});
    CHECK(trivial->all_cones_smooth());
}

TEST_CASE("intersection of maximal cones is their common face") {
    auto p2 = fan_p2();
    int c01 = find_cone(*p2, {v2(1, 0), v2(0, 1)});
    int c02 = find_cone(*p2, {v2(1, 0), v2(-1, -1)});
    int ray_e1 = find_cone(*p2, {v2(1, 0)});
    CHECK(p2->intersection(c01, c02) == ray_e1);
    int c12 = find_cone(*p2, {v2(0, 1), v2(-1, -1)});
    CHECK(p2->intersection(c01, c12) == find_cone(*p2, {v2(0, 1)}));
    CHECK(p2->intersection(c01, c01) == c01);
}
