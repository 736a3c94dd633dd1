#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace frlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string measured;
    std::string band;
    bool pass = false;
    double seconds = 0;
};

struct AcceptanceSummary {
    std::vector<CriterionResult> results;
    bool all_pass() const {
        for (auto& r : results)
            if (!r.pass) return false;
        return !results.empty();
    }
};

namespace detail {

inline std::string printf_str(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

inline std::string format_line(const CriterionResult& r) {
    return printf_str("%s %2d  %-32s %s | band %s | %.1f s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                      r.measured.c_str(), r.band.c_str(), r.seconds);
}

}  // namespace detail

// Runs criteria 1..11 in order; scenario CSV/SVG files land in out.
inline AcceptanceSummary run_acceptance_suite(const std::filesystem::path& out, std::ostream& log) {
    using detail::printf_str;
    std::filesystem::create_directories(out);
    AcceptanceSummary sum;
    auto timed = [&](int id, const std::string& name, auto&& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.measured = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };
    auto record = [&](CriterionResult r, double limit_s = 0) {
        if (limit_s > 0 && r.seconds > limit_s) {
            r.pass = false;
            r.measured += printf_str(" (over %.0f s)", limit_s);
        }
        log << detail::format_line(r) << std::endl;
        sum.results.push_back(std::move(r));
    };

    // 1. discrete exactness
    record(timed(1, "discrete exactness", [&](CriterionResult& r) {
               double worst_sub = 0, worst_flat = 0;
               for (auto [p, q] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 5}, {5, 7}, {7, 11}}) {
                   double fr = discrete_fr(indicator(p * q, subgroup(p, q)));
                   worst_sub = std::max(worst_sub, std::abs(fr - 1 / std::sqrt(static_cast<double>(p))));
               }
               for (std::size_t N : {2, 15, 64, 105, 1000}) {
                   double fr = discrete_fr(make_signal(std::vector<cplx>(N, 1.0)));
                   worst_flat = std::max(worst_flat, std::abs(fr - 1 / std::sqrt(static_cast<double>(N))));
               }
               std::mt19937_64 rng(2024);
               std::uniform_int_distribution<std::size_t> size(2, 512);
               std::normal_distribution<double> z;
               int inside = 0;
               for (int t = 0; t < 400; ++t) {
                   std::size_t N = size(rng);
                   std::vector<cplx> v(N);
                   for (auto& x : v) x = cplx(z(rng), z(rng));
                   double fr = discrete_fr(make_signal(v));
                   inside += fr >= (1 - 1e-12) / std::sqrt(static_cast<double>(N)) && fr <= 1 + 1e-12;
               }
               r.measured = printf_str("subgroup err %.1e, flat err %.1e, %d/400 in range", worst_sub, worst_flat, inside);
               r.band = "err <= 1e-10, 400/400";
               r.pass = worst_sub <= 1e-10 && worst_flat <= 1e-10 && inside == 400;
           }),
           10);

    // 2 and 3 share one pass over the corpus
    std::vector<CorpusRow> rows;
    record(timed(2, "continuous lower bound", [&](CriterionResult& r) {
               auto res = run_ratio_scan(default_corpus(), {16, 32, 64, 128, 256}, {}, 1, &rows);
               write_scan(res, out);
               int ok = 0;
               double worst = 1e300;
               for (auto& row : rows) {
                   ok += row.lb.holds;
                   worst = std::min(worst, row.lb.rhs / row.lb.lhs);
               }
               r.measured = printf_str("%d/%zu hold, min FR/lhs %.3f", ok, rows.size(), worst);
               r.band = "all hold (1% tol)";
               r.pass = ok == static_cast<int>(rows.size()) && !rows.empty();
           }),
           300);

    record(timed(3, "sandwich and uncertainty", [&](CriterionResult& r) {
        int ok = 0, ran = 0;
        double max_eta = 0;
        for (auto& row : rows) {
            if (!row.sandwich_run) continue;
            ++ran;
            ok += row.sw.holds;
            max_eta = std::max(max_eta, row.sw.eta);
        }
        r.measured = printf_str("%d/%d hold, %d/%zu with eta < 1, max eta %.3f", ok, ran, ran, rows.size(), max_eta);
        r.band = "all hold (1% tol), eta < 1";
        r.pass = ran == static_cast<int>(rows.size()) && ok == ran && ran > 0;
    }));

    // 4. Knapp arc
    double knapp_slope = std::nan("");
    record(timed(4, "Knapp scaling", [&](CriterionResult& r) {
               KnappOptions o;
               o.approx_seeds = {1, 2, 3};
               auto res = run_knapp_circle(o);
               write_scan(res, out);
               knapp_slope = res.fit->slope;
               r.measured = printf_str("slope %.4f (se %.4f), degree exponent %.3f", res.fit->slope, res.fit->stderr_,
                                       res.metrics["degree_exponent"]);
               r.band = "[-0.40, -0.15]";
               r.pass = res.pass;
           }),
           180);

    // 5. Cantor dichotomy
    record(timed(5, "Cantor dichotomy", [&](CriterionResult& r) {
        CantorOptions o;
        for (std::uint64_t s = 1; s <= 10; ++s) o.seeds.push_back(s);
        if (!std::isnan(knapp_slope)) o.circle_slope = knapp_slope;
        auto res = run_cantor_dichotomy(o);
        write_scan(res, out);
        auto& m = res.metrics;
        r.measured = printf_str(
            "median slope %.4f, gap %.4f, capture %.4f/%.4f/%.4f (k=R^1.5/4: %.4f/%.4f/%.4f)", m["median_slope"],
            m["gap"], m["capture_R32"], m["capture_R64"], m["capture_R128"], m["capture_sub_R32"],
            m["capture_sub_R64"], m["capture_sub_R128"]);
        r.band = "slope [-0.15, 0.05], gap >= 0.1, capture nonincreasing";
        r.pass = res.pass;
    }));

    // 6 and 7 share the approximation setups at R = 64
    const std::vector<std::uint64_t> seeds20 = [] {
        std::vector<std::uint64_t> s;
        for (std::uint64_t i = 1; i <= 20; ++i) s.push_back(i);
        return s;
    }();
    record(timed(6, "L2 sampling guarantee", [&](CriterionResult& r) {
        const double eta = 0.5;
        std::string txt;
        bool ok = true;
        double worst_var = 0;
        for (const char* name : {"arc", "segment", "square"}) {
            auto s = approx_setup(corpus_measure(name, 64), 64);
            auto k = degree_for_l2(s.rep, eta);
            double e = mean(approx_errors(s, k, Norm::L2, seeds20));
            auto vc = variance_identity_check(s, 10000, 7);
            worst_var = std::max(worst_var, vc.rel_err);
            ok = ok && e <= eta * 1.25;
            txt += printf_str("%s k=%llu mean %.3f; ", name, static_cast<unsigned long long>(k), e);
        }
        r.measured = txt + printf_str("variance rel err %.2e", worst_var);
        r.band = "mean <= 0.625, variance within 5%";
        r.pass = ok && worst_var < 0.05;
    }));

    record(timed(7, "L1 and Linf degree formulas", [&](CriterionResult& r) {
        const double eta = 0.5;
        std::string txt;
        bool ok = true;
        for (const char* name : {"segment", "square"}) {
            auto s = approx_setup(corpus_measure(name, 64), 64);
            auto ks = formula_degrees(s, eta);
            auto e1 = approx_errors(s, ks.l1, Norm::L1, seeds20);
            auto ei = approx_errors(s, ks.linf, Norm::Linf, seeds20);
            double m1 = median(e1), mi = *std::max_element(ei.begin(), ei.end());
            ok = ok && m1 <= eta && mi <= eta;
            txt += printf_str("%s k1=%llu L1 median %.3f, kinf=%llu Linf max %.3f; ", name,
                              static_cast<unsigned long long>(ks.l1), m1, static_cast<unsigned long long>(ks.linf), mi);
        }
        r.measured = txt;
        r.band = "L1 median <= 0.5, Linf (every seed) <= 0.5";
        r.pass = ok;
    }));

    // 8. convex bodies
    record(timed(8, "convex degree law", [&](CriterionResult& r) {
        ConvexOptions o;
        auto res = run_convex_degree(o);
        write_scan(res, out);
        auto& m = res.metrics;
        const double sq = m["square.degree_slope"], dk = m["disk.degree_slope"], conc = m["square.concentration"];
        r.measured = printf_str("square slope %.3f (a_hat %.2f), disk slope %.3f (a_hat %.2f), square conc %.3f", sq,
                                m["square.a_hat"], dk, m["disk.a_hat"], conc);
        r.band = "square 1.0+-0.35, disk 2.0+-0.35, conc < 0.5";
        r.pass = std::abs(sq - 1) <= 0.35 && std::abs(dk - 2) <= 0.35 && conc < 0.5;
    }));

    // 9. recovery
    record(timed(9, "sparse recovery", [&](CriterionResult& r) {
               RecoveryOptions o;
               for (std::uint64_t s = 1; s <= 50; ++s) o.seeds.push_back(s);
               auto res = run_recovery_phase(o);
               write_scan(res, out);
               r.measured = printf_str("success %.2f", res.metrics["success_rate"]);
               r.band = ">= 0.95, max-abs err < 1e-6";
               r.pass = res.pass;
           }),
           300);

    // 10. L2 counterexample
    record(timed(10, "L2 concentration counterexample", [&](CriterionResult& r) {
        auto res = run_l2_counterexample({{1, 3}, {10, 41}});
        write_scan(res, out);
        double worst = 0;
        for (auto [C, L] : std::vector<std::pair<double, double>>{{1, 3}, {10, 41}}) {
            auto e = l2_counterexample(64, L, C);
            worst = std::max(worst, std::abs(e.FR_h - e.FR_closed) / e.FR_closed);
        }
        r.measured = printf_str("violated for both, closed-form err %.1e", worst);
        if (!res.pass) r.measured = printf_str("not violated or closed-form err %.1e", worst);
        r.band = "violated, err <= 1e-10";
        r.pass = res.pass;
    }));

    // 11. engine calibration
    record(timed(11, "engine calibration", [&](CriterionResult& r) {
        double worst_p = 0, worst_t = 0;
        for (int i = 0; i < 50; ++i) {
            const int d = 1 + i % 3;
            const double R = d == 1 ? 64 : d == 2 ? 16 * (1 + i % 2) : 8;
            auto m = make_random_measure(d, 48, 1000 + i);
            GridPolicy pol;
            pol.budget = 1e300;
            auto rep = fourier_ratio(m, R, gaussian2(d), pol);
            worst_p = std::max(worst_p, rep.quad_err);
            std::vector<double> shift(d);
            for (int k = 0; k < d; ++k) shift[k] = 0.37 + 1.9 * k;
            auto rt = fourier_ratio(translate(m, shift), R, gaussian2(d), pol);
            worst_t = std::max(worst_t, std::abs(rt.FR - rep.FR) / rep.FR);
        }
        r.measured = printf_str("Parseval rel err %.2e, translation rel err %.2e", worst_p, worst_t);
        r.band = "< 1e-4, < 1e-6";
        r.pass = worst_p < 1e-4 && worst_t < 1e-6;
    }));

    Table t;
    t.header = {"id", "criterion", "pass", "measured", "band"};
    for (auto& r : sum.results) t.add(r.id, r.name, r.pass, "\"" + r.measured + "\"", "\"" + r.band + "\"");
    write_csv(out / "acceptance.csv", t);
    return sum;
}

}  // namespace frlab
