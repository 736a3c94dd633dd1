#include <catch_amalgamated.hpp>
#include <frlab/experiments.hpp>

using namespace frlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("covering numbers count occupied cells", "[geometry]") {
    auto seg = make_kplane_measure(2, 1, 256);
    auto c = covering_number(seg, 16);
    CHECK(c.box_count == 16);
    CHECK_THAT(c.neighborhood_volume, WithinRel(16.0 / 256, 1e-15));
    CHECK(covering_number(make_point_mass(3), 100).box_count == 1);
    auto m = make_point_mass(2);
    m.weights[0] = 0;
    CHECK(covering_number(m, 4).box_count == 0);
    CHECK_THROWS_AS(covering_number(seg, 0.5), std::invalid_argument);
}

TEST_CASE("lower bound on the point mass and a scale mismatch", "[geometry]") {
    auto m = make_point_mass(2);
    auto rep = fourier_ratio(m, 16, gaussian2());
    auto lb = lower_bound_check(rep, covering_number(m, 16));
    CHECK_THAT(lb.lhs, WithinRel(1.0, 1e-15));
    CHECK_THAT(lb.rhs, WithinRel(std::sqrt(2.0), 1e-10));
    CHECK(lb.holds);
    CHECK_THROWS_AS(lower_bound_check(rep, covering_number(m, 32)), std::invalid_argument);
}

TEST_CASE("lower bound holds across small corpus members", "[geometry]") {
    for (const char* name : {"point", "segment", "arc", "square", "cantor"})
        for (double R : {16.0, 32.0}) {
            auto m = corpus_measure(name, R);
            auto rep = fourier_ratio(m, R, gaussian2());
            INFO(name << " R=" << R);
            CHECK(lower_bound_check(rep, covering_number(m, R)).holds);
        }
}

TEST_CASE("annulus volume: analytic against node count", "[geometry]") {
    auto m = make_random_measure(2, 8, 1);
    auto f = spectral_field(m, 16, gaussian2());
    auto x = annulus_region(8, 32);
    auto s = build_set(f, x);
    CHECK_THAT(s.volume, WithinRel(region_volume(x, 2), 1e-2));
    CHECK_THAT(region_volume(x, 2), WithinRel(pi * (32 * 32 - 8 * 8), 1e-14));
    CHECK_THAT(region_volume(annulus_region(0, 2), 3), WithinRel(4.0 / 3 * pi * 8, 1e-14));
}

TEST_CASE("cone volume over merged directions", "[geometry]") {
    auto body = make_unit_square();
    auto x = normal_cone_region(body, 64);
    const double shell = pi * (128.0 * 128 - 32.0 * 32);
    CHECK_THAT(region_volume(x, 2), WithinRel(shell * 4 * (2.0 / 64) / (2 * pi), 1e-12));
    // fans cover the whole circle
    CHECK_THAT(region_volume(normal_cone_region(body, 64, true), 2), WithinRel(shell, 1e-12));
    CHECK_THAT(region_volume(normal_cone_region(make_disk(), 64), 2), WithinRel(shell, 1e-12));
}

TEST_CASE("concentration fraction extremes", "[geometry]") {
    auto m = make_random_measure(2, 8, 2);
    auto f = spectral_field(m, 8, gaussian2());
    CHECK_THAT(concentration_fraction(f, build_set(f, whole_space())), WithinAbs(0.0, 1e-15));
    CHECK_THAT(concentration_fraction(f, build_set(f, annulus_region(1e6, 2e6))), WithinAbs(1.0, 1e-15));
    FrequencySet bad;
    CHECK_THROWS_AS(concentration_fraction(f, bad), std::invalid_argument);
}

TEST_CASE("sandwich and uncertainty product", "[geometry]") {
    for (const char* name : {"point", "arc", "cantor"}) {
        auto m = corpus_measure(name, 32);
        auto f = spectral_field(m, 32, gaussian2());
        auto rep = ratio_report(f, m);
        auto cov = covering_number(m, 32);
        auto set = build_set(f, annulus_region(16, 64));
        double eta = concentration_fraction(f, set);
        REQUIRE(eta < 1);
        auto s = sandwich_check(rep, cov, set, eta);
        INFO(name);
        CHECK(s.holds);
        CHECK(s.lower <= s.FR * 1.01);
        CHECK(s.FR <= s.upper * 1.01);
        CHECK_THAT(s.uncertainty_rhs, WithinRel((1 - eta) * (1 - eta), 1e-15));
        CHECK(s.uncertainty_rhs <= s.product * 1.01);
        CHECK_THROWS_AS(sandwich_check(rep, cov, set, 1.0), std::invalid_argument);
    }
}

TEST_CASE("normal sets of the square and the disk", "[geometry]") {
    auto ns = normal_set(make_unit_square());
    REQUIRE(ns.normals.size() == 4);
    REQUIRE(ns.fans.size() == 4);
    for (auto [a, b] : ns.fans) CHECK_THAT(b - a, WithinAbs(pi / 2, 1e-12));
    double sx = 0, sy = 0;
    for (auto& u : ns.normals) {
        CHECK_THAT(std::hypot(u[0], u[1]), WithinAbs(1.0, 1e-15));
        sx += u[0];
        sy += u[1];
    }
    CHECK_THAT(sx, WithinAbs(0.0, 1e-15));
    CHECK_THAT(sy, WithinAbs(0.0, 1e-15));
    CHECK(normal_set(make_disk()).full_circle);
}

TEST_CASE("dimension estimator sanity", "[geometry]") {
    std::vector<double> scales{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    CHECK(upper_minkowski_dimension(normal_points(normal_set(make_unit_square()), false), scales) < 0.2);
    CHECK(upper_minkowski_dimension(normal_points(normal_set(make_regular_polygon(7)), false), scales) < 0.2);
    CHECK_THAT(upper_minkowski_dimension(normal_points(normal_set(make_disk()), false), scales), WithinAbs(1.0, 0.1));
    // with fans every polygon fills the circle
    CHECK_THAT(upper_minkowski_dimension(normal_points(normal_set(make_unit_square()), true), scales),
               WithinAbs(1.0, 0.1));
    CHECK_THROWS_AS(upper_minkowski_dimension({{1.0, 0.0}}, {0.5, 0.25}), std::invalid_argument);
}

TEST_CASE("two-level profile breaks the L2 hypothesis", "[geometry]") {
    // closed forms with b = 1/2, d = 2: FR = sqrt(pi) (sqrt(3)/2 + sqrt(L^2 - 1)/2), bound = 2 C sqrt(pi)
    struct Case {
        double C, L, fr, bound;
    };
    const Case cases[] = {{1, 3, 4.041618336551, 3.544907701811}, {10, 41, 37.859484752248, 35.449077018110}};
    for (auto c : cases) {
        double fr = std::sqrt(pi) * (std::sqrt(3.0) / 2 + std::sqrt(c.L * c.L - 1) / 2);
        CHECK_THAT(fr, WithinAbs(c.fr, 1e-9));
        CHECK_THAT(2 * c.C * std::sqrt(pi), WithinAbs(c.bound, 1e-9));
        for (double R : {8.0, 64.0}) {
            auto e = l2_counterexample(R, c.L, c.C);
            CHECK(e.violated);
            CHECK_THAT(e.FR_h, WithinRel(c.fr, 1e-10));
            CHECK_THAT(e.FR_closed, WithinRel(c.fr, 1e-10));
            CHECK_THAT(e.bound, WithinRel(c.bound, 1e-10));
        }
    }
    CHECK_THROWS_AS(l2_counterexample(64, 3, 10), std::invalid_argument);
    CHECK_THROWS_AS(l2_counterexample(64, 1, 1), std::invalid_argument);
}

TEST_CASE("energy capture is a nondecreasing share ending at 1", "[geometry]") {
    auto m = make_random_cantor(3, 4, 5);
    auto c = energy_capture(m, 16, {1, 10, 100, 1000, 1u << 30});
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] >= c[i - 1]);
    CHECK_THAT(c.back(), WithinAbs(1.0, 1e-12));
    CHECK(c.front() > 0);
}
