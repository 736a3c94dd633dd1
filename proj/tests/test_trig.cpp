#include <catch_amalgamated.hpp>
#include <frlab/experiments.hpp>

using namespace frlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ApproxSetup& segment16() {
    static ApproxSetup s = approx_setup(corpus_measure("segment", 16), 16);
    return s;
}

}  // namespace

TEST_CASE("sampling distribution is a normalized pmf", "[trig]") {
    const auto& s = segment16();
    double tot = 0;
    for (double p : s.dist.pmf) {
        CHECK(p >= 0);
        tot += p;
    }
    CHECK_THAT(tot, WithinAbs(1.0, 1e-12));
    CHECK(s.dist.cdf.back() == 1.0);
    CHECK_THAT(s.dist.total_l1, WithinRel(s.rep.X1 * 16 * 16, 1e-12));
}

TEST_CASE("full inverse quadrature reconstructs g", "[trig]") {
    const auto& s = segment16();
    auto p = polynomial_on_grid(full_polynomial(s.dist), s.dom);
    for (Norm n : {Norm::L1, Norm::L2, Norm::Linf}) CHECK(approx_error(s.g, p, s.dom, 16, n).relative < 1e-6);
}

TEST_CASE("zero polynomial error equals the norm of g", "[trig]") {
    const auto& s = segment16();
    std::vector<cplx> zero(s.g.size(), 0.0);
    for (Norm n : {Norm::L1, Norm::L2, Norm::Linf}) {
        auto e = approx_error(s.g, zero, s.dom, 16, n);
        CHECK_THAT(e.relative, WithinAbs(1.0, 1e-15));
        CHECK_THAT(e.absolute, WithinRel(spatial_norm(s.g, s.dom.cell_volume(), n), 1e-15));
    }
}

TEST_CASE("mollified measure mass inside the padded box", "[trig]") {
    // the box reaches one mollifier width past the support, so part of each
    // gaussian falls outside; the erf product gives the retained share
    const auto& s = segment16();
    const double R = 16;
    double expect = 0;
    for (std::size_t a = 0; a < s.m.size(); ++a) {
        double share = 1;
        for (int k = 0; k < 2; ++k) {
            double lo = s.dom.lo[k] - s.dom.step[k] / 2, hi = lo + s.dom.n[k] * s.dom.step[k];
            double x = s.m.point(a)[k], c = std::sqrt(pi) * R;
            share *= (std::erf(c * (hi - x)) - std::erf(c * (lo - x))) / 2;
        }
        expect += s.m.weights[a].real() * share;
    }
    double tot = 0;
    for (auto v : s.g) tot += v.real();
    CHECK_THAT(tot * s.dom.cell_volume(), WithinRel(expect, 1e-4));
    CHECK(expect < 1 - std::erfc(std::sqrt(pi)) / 2);
}

TEST_CASE("FFT evaluation matches direct evaluation", "[trig]") {
    const auto& s = segment16();
    auto P = sample_polynomial(s.dist, 50, 3);
    auto grid = polynomial_on_grid(P, s.dom);
    std::vector<double> x(2);
    for (std::size_t i = 0; i < grid.size(); i += grid.size() / 23) {
        s.dom.coords(i, x.data());
        CHECK(std::abs(grid[i] - P.eval(x.data())) < 1e-9 * s.dist.total_l1);
    }
}

TEST_CASE("single draws are unbiased with the predicted variance", "[trig]") {
    for (const char* name : {"segment", "arc"}) {
        auto s = approx_setup(corpus_measure(name, 16), 16);
        auto vc = variance_identity_check(s, 10000, 11);
        INFO(name);
        CHECK(vc.mean_z < 4);
        CHECK(vc.rel_err < 0.05);
        CHECK_THAT(vc.var_theory, WithinRel(vc.T * vc.T - std::norm(vc.g), 1e-15));
    }
}

TEST_CASE("draws merge duplicates and keep the L1 mass", "[trig]") {
    const auto& s = segment16();
    auto P = sample_polynomial(s.dist, 500, 1);
    CHECK(P.degree() <= 500);
    double tot = 0;
    for (auto c : P.coeffs) tot += std::abs(c);
    CHECK_THAT(tot, WithinRel(s.dist.total_l1, 1e-12));
    auto Q = sample_polynomial(s.dist, 500, 1);
    CHECK(P.nodes == Q.nodes);
    CHECK(P.coeffs == Q.coeffs);
    // the multinomial path keeps the same invariants
    auto big = sample_polynomial(s.dist, 100 * s.dist.pmf.size(), 2);
    tot = 0;
    for (auto c : big.coeffs) tot += std::abs(c);
    CHECK_THAT(tot, WithinRel(s.dist.total_l1, 1e-12));
    CHECK_THROWS_AS(sample_polynomial(s.dist, 0, 1), std::invalid_argument);
}

TEST_CASE("degree formulas", "[trig]") {
    RatioReport rep;
    rep.R = 16;
    rep.d = 2;
    rep.FR = 1.0;
    CHECK(degree_for_l2(rep, 0.5) == 1020);  // (256 - 1) / 0.25
    rep.FR = 1.0 / 16;
    CHECK(degree_for_l2(rep, 0.5) == 1);  // floor at one term
    CHECK_THROWS_AS(degree_for_l2(rep, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(degree_for_l2(rep, 0.0), std::invalid_argument);

    const auto& s = segment16();
    const double T = field_l1(s.field);
    CHECK_THAT(T, WithinRel(s.dist.total_l1, 1e-12));
    CHECK(degree_for_l1(s.field, s.g_l1, 0.5) == static_cast<std::uint64_t>(std::ceil(T * T / (s.g_l1 * s.g_l1) / 0.25)));
    // displayed formula with C_d = 25 in the plane
    const double ghat_inf = s.rep.Xinf;
    const double lead = 32 * T * T / (0.25 * s.g_inf * s.g_inf);
    auto li = degree_for_linf(s.field, s.g_inf, 0.5, 2, 16);
    CHECK(li.k == static_cast<std::uint64_t>(std::ceil(lead * (std::log(100.0) + 2 * std::log(8 * pi * 16 * T / (0.5 * ghat_inf))))));
    CHECK(li.k_spatial == static_cast<std::uint64_t>(std::ceil(lead * (std::log(100.0) + 2 * std::log(8 * pi * 16 * T / (0.5 * s.g_inf))))));
    CHECK(degree_for_linf(s.field, s.g_inf, 0.5, 2, 16, 1.0).k < li.k);
}

TEST_CASE("L2 guarantee in expectation", "[trig]") {
    const double eta = 0.5;
    for (const char* name : {"segment", "arc"}) {
        auto s = approx_setup(corpus_measure(name, 16), 16);
        auto k = degree_for_l2(s.rep, eta);
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t i = 1; i <= 20; ++i) seeds.push_back(i);
        auto e = approx_errors(s, k, Norm::L2, seeds);
        double ms = 0;
        for (double v : e) ms += v * v / e.size();
        INFO(name << " k=" << k);
        CHECK(ms <= eta * eta * 1.25);
    }
}

TEST_CASE("error medians fall as the degree doubles", "[trig]") {
    const auto& s = segment16();
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 1; i <= 15; ++i) seeds.push_back(i);
    for (Norm n : {Norm::L1, Norm::L2, Norm::Linf}) {
        double prev = 1e300;
        for (std::uint64_t k = 16; k <= 4096; k *= 4) {
            double md = median(approx_errors(s, k, n, seeds));
            CHECK(md <= prev);
            prev = md;
        }
    }
}

TEST_CASE("under-resolved domains are rejected", "[trig]") {
    const auto& s = segment16();
    SpatialGrid coarse = s.dom;
    for (auto& st : coarse.step) st *= 2;
    CHECK_THROWS_AS(approx_error(s.g, s.g, coarse, 16, Norm::L2), std::invalid_argument);
}

TEST_CASE("sampled fields cannot drive polynomial sampling", "[trig]") {
    GridPolicy mc;
    mc.budget = 0;
    auto f = spectral_field(make_random_measure(2, 10, 1), 8, gaussian2(), mc);
    CHECK_THROWS_AS(build_distribution(f), std::invalid_argument);
}
