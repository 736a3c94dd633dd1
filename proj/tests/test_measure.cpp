#include <catch_amalgamated.hpp>
#include <frlab/experiments.hpp>

using namespace frlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("generators conserve mass", "[measure]") {
    CHECK_THAT(make_point_mass(3, 2.5).mass(), WithinRel(2.5, 1e-12));
    CHECK_THAT(make_circle_arc(16, 0.25, 64).mass(), WithinRel(0.25, 1e-12));
    CHECK_THAT(make_circle_arc(64, 2 * pi, 4096).mass(), WithinRel(2 * pi, 1e-12));
    CHECK_THAT(make_polygon_boundary(make_unit_square(), 400).mass(), WithinRel(4.0, 1e-12));
    auto hex = make_regular_polygon(6);
    CHECK_THAT(make_polygon_boundary(hex, 600).mass(), WithinRel(hex.perimeter(), 1e-12));
    CHECK_THAT(make_polygon_boundary(make_disk(2.0), 512).mass(), WithinRel(4 * pi, 1e-12));
    CHECK_THAT(make_random_cantor(4, 3, 7).mass(), WithinRel(1.0, 1e-12));
    CHECK_THAT(make_sphere_measure(3, 4096).mass(), WithinRel(4 * pi, 1e-12));
    CHECK_THAT(make_sphere_measure(2, 256).mass(), WithinRel(2 * pi, 1e-12));
    CHECK_THAT(make_kplane_measure(3, 2, 1024).mass(), WithinRel(1.0, 1e-12));
}

TEST_CASE("atoms stay inside the declared box", "[measure]") {
    std::vector<AtomicMeasure> all{make_point_mass(2),
                                   make_circle_arc(32, 1.0, 256),
                                   make_polygon_boundary(make_unit_square(), 64),
                                   make_polygon_boundary(make_lacunary_polygon(5), 200),
                                   make_random_cantor(3, 4, 11),
                                   make_sphere_measure(3, 512),
                                   make_kplane_measure(2, 1, 256),
                                   make_random_measure(3, 40, 5)};
    for (auto& m : all) {
        INFO(m.label);
        CHECK(m.inside_box());
    }
}

TEST_CASE("box counts grow with R", "[measure]") {
    for (auto m : {make_random_cantor(4, 3, 2), make_polygon_boundary(make_unit_square(), 1024),
                   make_circle_arc(64, 2 * pi, 4096)}) {
        std::size_t prev = 0;
        for (double R = 1; R <= 512; R *= 2) {
            auto c = covering_number(m, R);
            CHECK(c.box_count >= prev);
            prev = c.box_count;
        }
    }
}

TEST_CASE("Cantor sets are determined by their seed", "[measure]") {
    auto a = make_random_cantor(5, 4, 42), b = make_random_cantor(5, 4, 42), c = make_random_cantor(5, 4, 43);
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);
    CHECK(a.points != c.points);
    CHECK(a.size() == 1024);
    // distinct cells at the finest scale
    CHECK(covering_number(a, 1024).box_count == 1024);
    CHECK_THROWS_AS(make_random_cantor(0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_random_cantor(3, 1, 1), std::invalid_argument);
}

TEST_CASE("k-plane generators", "[measure]") {
    auto seg = make_kplane_measure(2, 1, 256);
    REQUIRE(seg.size() == 256);
    for (std::size_t i = 0; i < seg.size(); ++i) {
        CHECK(seg.point(i)[1] == 0.0);
        CHECK(seg.point(i)[0] > 0.0);
        CHECK(seg.point(i)[0] < 1.0);
    }
    auto sheet = make_kplane_measure(3, 2, 1024);
    REQUIRE(sheet.size() == 1024);
    CHECK(covering_number(sheet, 32).box_count == 1024);
    for (std::size_t i = 0; i < sheet.size(); ++i) CHECK(sheet.point(i)[2] == 0.0);
    CHECK_THROWS_AS(make_kplane_measure(2, 2, 16), std::invalid_argument);
}

TEST_CASE("generator preconditions", "[measure]") {
    CHECK_THROWS_AS(make_circle_arc(64, 1.0, 100), std::invalid_argument);  // guard needs 512
    CHECK_NOTHROW(make_circle_arc(64, 1.0, 512));
    CHECK_THROWS_AS(make_circle_arc(0.5, 1.0, 512), std::invalid_argument);
    CHECK_THROWS_AS(make_sphere_measure(4, 512), std::invalid_argument);
    CHECK_THROWS_AS(make_polygon_boundary(make_unit_square(), 8), std::invalid_argument);
}

TEST_CASE("convex bodies validate orientation and convexity", "[measure]") {
    ConvexBody2D cw;
    cw.vertices = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK_THROWS_AS(cw.validate(), std::invalid_argument);
    ConvexBody2D dent;
    dent.vertices = {{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}};
    CHECK_THROWS_AS(dent.validate(), std::invalid_argument);
    CHECK_NOTHROW(make_unit_square().validate());
    CHECK_NOTHROW(make_lacunary_polygon(8).validate());
    CHECK_THAT(make_unit_square().perimeter(), WithinRel(4.0, 1e-14));
}

TEST_CASE("translation shifts atoms and box", "[measure]") {
    auto m = make_random_measure(2, 10, 3);
    double s[2] = {0.5, -2.0};
    auto t = translate(m, s);
    CHECK(t.inside_box());
    CHECK_THAT(t.point(4)[1], WithinAbs(m.point(4)[1] - 2.0, 1e-15));
}

TEST_CASE("gaussian mollifier transform", "[measure]") {
    auto g = make_mollifier(MollifierSpec::Kind::gaussian, 2);
    double u0[2] = {0, 0}, u1[2] = {0.6, 0.8};
    CHECK_THAT(mollifier_hat(g, u0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(mollifier_hat(g, u1), WithinRel(std::exp(-pi), 1e-14));
}

TEST_CASE("bump mollifier transform against a cartesian quadrature", "[measure]") {
    auto b = make_mollifier(MollifierSpec::Kind::bump, 2);
    // midpoint rule on [-1,1]^2; the profile is smooth and compactly supported
    const int n = 1200;
    const double h = 2.0 / n;
    double u[2] = {0.3, 0.4};
    double mass = 0, ft = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = -1 + (i + 0.5) * h, y = -1 + (j + 0.5) * h;
            double v = mollifier_value(b, std::hypot(x, y)) * h * h;
            mass += v;
            ft += v * std::cos(2 * pi * (x * u[0] + y * u[1]));
        }
    CHECK_THAT(mass, WithinAbs(1.0, 1e-9));
    CHECK_THAT(mollifier_hat(b, u), WithinAbs(ft, 1e-8));
}

TEST_CASE("corpus members carry sensible atom counts", "[measure]") {
    CHECK(corpus_measure("arc", 256).size() == 128);
    CHECK(corpus_measure("circle", 64).size() >= 8 * 64 * 2 * pi);
    CHECK(corpus_measure("square", 64).size() == 1024);
    CHECK(corpus_measure("cantor", 64).size() == 1024);
    CHECK(corpus_measure("sphere3d", 64).dim == 3);
    CHECK_THROWS_AS(corpus_measure("torus", 16), std::invalid_argument);
}
