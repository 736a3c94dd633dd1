#include <catch_amalgamated.hpp>
#include <frlab/experiments.hpp>

using namespace frlab;
using Catch::Matchers::WithinAbs;

TEST_CASE("nothing missing means the data determine the vector", "[recovery]") {
    auto m = make_sparse_grid_measure(32, 6, 4);
    auto in = build_instance(m, 32, std::vector<char>(32 * 32, 0));
    auto r = recover_l1(in, 50, 1e-12);
    double err = 0;
    for (std::size_t i = 0; i < r.estimate.size(); ++i) err = std::max(err, std::abs(r.estimate[i] - in.true_vector[i]));
    CHECK(err < 1e-10);
    CHECK(r.residual < 1e-10);
}

TEST_CASE("instance preconditions", "[recovery]") {
    auto m = make_sparse_grid_measure(16, 3, 1);
    CHECK_THROWS_AS(build_instance(m, 16, std::vector<char>(256, 1)), std::invalid_argument);
    CHECK_THROWS_AS(build_instance(m, 24, std::vector<char>(576, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_instance(m, 512, std::vector<char>(512 * 512, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_instance(m, 16, std::vector<char>(10, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_instance(make_point_mass(3), 16, std::vector<char>(256, 0)), std::invalid_argument);
}

TEST_CASE("observed data are the unitary DFT off the mask", "[recovery]") {
    const int n = 16;
    auto m = make_sparse_grid_measure(n, 4, 9);
    auto mask = random_mask(n, 0.25, 2);
    CHECK(std::count(mask.begin(), mask.end(), 1) == 64);
    auto in = build_instance(m, n, mask);
    double mass = 0;
    for (double v : in.true_vector) mass += v;
    CHECK_THAT(mass, WithinAbs(m.mass(), 1e-12));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::size_t k = a * n + b;
            cplx s = 0;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    s += in.true_vector[x * n + y] * std::polar(1.0, -2 * pi * double(a * x + b * y) / n);
            s /= n;
            if (mask[k])
                CHECK(in.observed_data[k] == cplx(0));
            else
                CHECK(std::abs(in.observed_data[k] - s) < 1e-12);
        }
}

TEST_CASE("estimates stay consistent with the observations", "[recovery]") {
    auto m = make_sparse_grid_measure(64, 5, 3);
    auto in = build_instance(m, 64, random_mask(64, 0.03, 3));
    auto r = recover_l1(in, 2000, 1e-12);
    CHECK(r.residual < 1e-9);
    CHECK(r.iters <= 2000);
    CHECK(r.objective.size() == static_cast<std::size_t>(r.iters));
}

TEST_CASE("the L1 norm of the iterates ends below the starting point", "[recovery]") {
    auto m = make_sparse_grid_measure(64, 5, 7);
    auto in = build_instance(m, 64, random_mask(64, 0.1, 7));
    auto r = recover_l1(in, 2000, 1e-12);
    REQUIRE(r.objective.size() > 10);
    double tv = 0;
    for (double v : in.true_vector) tv += std::abs(v);
    CHECK(r.objective.back() <= r.objective.front() + 1e-12);
    CHECK(r.objective.back() <= tv * (1 + 1e-6));
}

TEST_CASE("sparse measures with a few missing frequencies are recovered", "[recovery]") {
    RecoveryOptions o;
    int exact = 0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        auto t = recovery_trial(o, s);
        exact += t.exact;
        CHECK(t.maxabs < 1e-6);
    }
    CHECK(exact == 5);
}

TEST_CASE("a dense measure with most frequencies missing is not recovered", "[recovery]") {
    RecoveryOptions o;
    o.grid = 32;
    o.sparsity = 300;
    o.mask_frac = 0.7;
    o.max_iters = 400;
    auto t = recovery_trial(o, 1);
    CHECK_FALSE(t.exact);
}

TEST_CASE("random masks have full growth exponent", "[recovery]") {
    auto in = build_instance(make_sparse_grid_measure(128, 5, 1), 128, random_mask(128, 0.2, 5));
    CHECK_THAT(in.alpha_X_emp, WithinAbs(2.0, 0.2));
    CHECK(in.s_E_emp >= 0);
    CHECK(in.s_E_emp < 0.5);
}
