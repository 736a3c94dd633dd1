#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "geometry.hpp"
#include "measure.hpp"
#include "recovery.hpp"
#include "report.hpp"
#include "spectral.hpp"
#include "trig.hpp"

namespace frlab {

// ---------------------------------------------------------------------------
// Named corpus members, discretized for a target scale R.

inline int arc_atoms(double R, double len) { return std::max(64, static_cast<int>(std::ceil(8 * R * len))); }

inline ConvexBody2D body_by_name(const std::string& name) {
    if (name == "square") return make_unit_square();
    if (name == "hexagon") {
        auto b = make_regular_polygon(6);
        b.name = "hexagon";
        return b;
    }
    if (name == "disk") return make_disk();
    if (name.rfind("lacunary", 0) == 0) {
        int levels = name.size() > 8 ? std::stoi(name.substr(8)) : 6;
        return make_lacunary_polygon(levels);
    }
    if (name.rfind("polygon", 0) == 0 && name.size() > 7) return make_regular_polygon(std::stoi(name.substr(7)));
    throw std::invalid_argument("unknown body: " + name);
}

// Boundary measure with ~4R atoms per unit length (8R for the disk).
inline AtomicMeasure boundary_measure(const ConvexBody2D& b, double R) {
    if (b.kind == ConvexBody2D::Kind::disk) return make_polygon_boundary(b, arc_atoms(R, 2 * pi * b.radius));
    const int nv = static_cast<int>(b.vertices.size());
    return make_polygon_boundary(b, std::max(4 * nv, static_cast<int>(std::ceil(4 * R * b.perimeter()))));
}

inline AtomicMeasure knapp_arc(double R) {
    const double len = 1.0 / std::sqrt(R);
    return make_circle_arc(R, len, arc_atoms(R, len));
}

inline AtomicMeasure corpus_measure(const std::string& name, double R, std::uint64_t seed = 1) {
    if (name == "point") return make_point_mass(2);
    if (name == "segment") return make_kplane_measure(2, 1, std::max(256, static_cast<int>(std::ceil(4 * R))));
    if (name == "kplane") return make_kplane_measure(3, 2, 1024);
    if (name == "circle") {
        auto m = make_circle_arc(R, 2 * pi, arc_atoms(R, 2 * pi));
        m.label = "circle";
        return m;
    }
    if (name == "arc") return knapp_arc(R);
    if (name == "cantor") return make_random_cantor(5, 4, seed);
    if (name == "sphere3d") return make_sphere_measure(3, 4096);
    if (name == "random") return make_random_measure(2, 64, seed);
    return boundary_measure(body_by_name(name), R);
}

inline bool is_polygon_name(const std::string& name) {
    return name == "square" || name == "hexagon" || name.rfind("polygon", 0) == 0 || name.rfind("lacunary", 0) == 0;
}

inline const std::vector<std::string>& default_corpus() {
    static const std::vector<std::string> c{"point", "segment", "kplane", "circle", "arc",
                                            "square", "hexagon", "cantor", "sphere3d"};
    return c;
}

// ---------------------------------------------------------------------------

struct ScanResult {
    std::string name;
    Table table;
    std::vector<std::pair<std::string, Table>> extra;  // further CSVs, by file stem
    std::optional<Fit> fit;
    double band_lo = 0, band_hi = 0;
    bool pass = false;
    std::map<std::string, double> metrics;
    Plot plot;
};

inline void write_scan(const ScanResult& s, const std::filesystem::path& dir) {
    write_csv(dir / (s.name + ".csv"), s.table);
    for (auto& [stem, t] : s.extra) write_csv(dir / (stem + ".csv"), t);
    write_svg(dir / (s.name + ".svg"), s.plot);
}

inline std::vector<double> require_scan_R(std::vector<double> rs, double lo = 16, double hi = 1024) {
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    if (rs.size() < 4) throw std::invalid_argument("slope fit needs at least 4 dyadic R values");
    for (double r : rs) {
        double l = std::log2(r);
        if (r < lo || r > hi || std::abs(l - std::round(l)) > 1e-12)
            throw std::invalid_argument("R values must be powers of two in [16, 1024]");
    }
    return rs;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline MollifierSpec gaussian2(int d = 2) { return make_mollifier(MollifierSpec::Kind::gaussian, d); }

// ---------------------------------------------------------------------------
// Ratio scan: FR, lower bound and sandwich over a list of measures and scales.

struct CorpusRow {
    std::string label;
    RatioReport rep;
    LowerBoundResult lb;
    SandwichResult sw;
    bool sandwich_run = false;
};

inline ScanResult run_ratio_scan(const std::vector<std::string>& measures, const std::vector<double>& R_list,
                                 const GridPolicy& pol = {}, std::uint64_t seed = 1,
                                 std::vector<CorpusRow>* out_rows = nullptr) {
    if (measures.empty()) throw std::invalid_argument("no measures");
    if (R_list.empty()) throw std::invalid_argument("no scales");
    std::vector<double> rs = R_list;
    std::sort(rs.begin(), rs.end());
    ScanResult res;
    res.name = "ratio_scan";
    res.table.header = {"label", "d", "R", "X1", "X2", "Xinf", "FR", "quad_err"};
    Table sw;
    sw.header = {"label", "R", "lower", "FR", "upper", "eta", "product", "uncertainty_rhs", "holds"};
    Table lbt;
    lbt.header = {"label", "R", "lhs", "FR", "holds"};
    res.plot.title = "Fourier ratio";
    res.plot.ylabel = "FR";
    bool ok = true;
    for (const auto& name : measures) {
        PlotSeries ser{name, {}, {}};
        for (double R : rs) {
            AtomicMeasure m = corpus_measure(name, R, seed);
            auto spec = gaussian2(m.dim);
            SpectralField f = spectral_field(m, R, spec, pol);
            CorpusRow row;
            row.label = name;
            row.rep = ratio_report(f, m);
            row.rep.label = name;
            auto cov = covering_number(m, R);
            row.lb = lower_bound_check(row.rep, cov);
            FrequencySet set = is_polygon_name(name) && m.dim == 2
                                   ? build_normal_cone_set(body_by_name(name), R, f)
                                   : build_set(f, annulus_region(R / 2, 2 * R));
            const double eta = concentration_fraction(f, set);
            if (eta < 1) {
                row.sw = sandwich_check(row.rep, cov, set, eta);
                row.sandwich_run = true;
            }
            const auto& r = row.rep;
            res.table.add(name, r.d, R, r.X1, r.X2, r.Xinf, r.FR, r.quad_err);
            lbt.add(name, R, row.lb.lhs, r.FR, row.lb.holds);
            if (row.sandwich_run)
                sw.add(name, R, row.sw.lower, row.sw.FR, row.sw.upper, row.sw.eta, row.sw.product,
                       row.sw.uncertainty_rhs, row.sw.holds);
            ok = ok && row.lb.holds && (!row.sandwich_run || row.sw.holds);
            ser.x.push_back(R);
            ser.y.push_back(r.FR);
            if (out_rows) out_rows->push_back(row);
        }
        res.plot.series.push_back(std::move(ser));
    }
    res.extra.emplace_back("lower_bound", std::move(lbt));
    res.extra.emplace_back("sandwich", std::move(sw));
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// Approximation error of sampled polynomials

struct ApproxSetup {
    AtomicMeasure m;
    double R = 0;
    SpectralField field;
    RatioReport rep;
    SamplingDistribution dist;
    SpatialGrid dom;
    std::vector<cplx> g;
    double g_l1 = 0, g_inf = 0;
};

inline ApproxSetup approx_setup(const AtomicMeasure& m, double R, double oversample = 1.0) {
    ApproxSetup s;
    s.m = m;
    s.R = R;
    GridPolicy pol;
    pol.oversample = oversample;
    FrequencyGrid grid = make_grid(m, R, pol);
    s.field = transform(m, R, grid, gaussian2(m.dim), pol.cutoff);
    s.rep = ratio_report(s.field, m);
    s.dist = build_distribution(s.field);
    s.dom = approx_domain(m, R, grid);
    s.g = mollified_on_grid(m, R, s.dom);
    s.g_l1 = spatial_norm(s.g, s.dom.cell_volume(), Norm::L1);
    s.g_inf = spatial_norm(s.g, s.dom.cell_volume(), Norm::Linf);
    return s;
}

inline std::vector<double> approx_errors(const ApproxSetup& s, std::uint64_t k, Norm n,
                                         const std::vector<std::uint64_t>& seeds) {
    std::vector<double> out;
    for (auto sd : seeds) {
        auto P = sample_polynomial(s.dist, k, sd);
        auto p = polynomial_on_grid(P, s.dom);
        out.push_back(approx_error(s.g, p, s.dom, s.R, n).relative);
    }
    return out;
}

// Single-frequency estimator Z(x) = T sgn(g_hat(xi)) e(x.xi): empirical mean
// and variance against g(x) and T^2 - |g(x)|^2.
struct VarianceCheck {
    double T = 0;
    cplx g{0}, mean{0};
    double var_emp = 0, var_theory = 0, rel_err = 0;
    double mean_z = 0;  // |mean - g| in standard errors
};

inline VarianceCheck variance_identity_check(const ApproxSetup& s, std::size_t samples, std::uint64_t seed) {
    VarianceCheck c;
    c.T = s.dist.total_l1;
    std::size_t at = 0;
    for (std::size_t i = 0; i < s.g.size(); ++i)
        if (std::abs(s.g[i]) > std::abs(s.g[at])) at = i;
    std::vector<double> x(s.dom.dim), xi(s.dom.dim);
    s.dom.coords(at, x.data());
    c.g = s.g[at];
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> z(samples);
    for (auto& v : z) {
        auto it = std::upper_bound(s.dist.cdf.begin(), s.dist.cdf.end(), u(rng));
        std::size_t i = std::min<std::size_t>(it - s.dist.cdf.begin(), s.dist.cdf.size() - 1);
        s.dist.grid.coords(i, xi.data());
        double t = 0;
        for (int k = 0; k < s.dom.dim; ++k) t += detail::frac_phase(x[k] * xi[k]);
        v = c.T * s.dist.phases[i] * std::polar(1.0, 2 * pi * t);
    }
    for (auto v : z) c.mean += v / static_cast<double>(samples);
    for (auto v : z) c.var_emp += std::norm(v - c.mean) / static_cast<double>(samples - 1);
    c.var_theory = c.T * c.T - std::norm(c.g);
    c.rel_err = std::abs(c.var_emp - c.var_theory) / c.var_theory;
    c.mean_z = std::abs(c.mean - c.g) / std::sqrt(c.var_emp / samples);
    return c;
}

struct DegreeSet {
    std::uint64_t l2 = 0, l1 = 0, linf = 0, linf_spatial = 0;
};

inline DegreeSet formula_degrees(const ApproxSetup& s, double eta, double Cd = -1) {
    DegreeSet d;
    d.l2 = degree_for_l2(s.rep, eta);
    d.l1 = degree_for_l1(s.field, s.g_l1, eta);
    auto li = degree_for_linf(s.field, s.g_inf, eta, s.m.dim, s.R, Cd);
    d.linf = li.k;
    d.linf_spatial = li.k_spatial;
    return d;
}

inline const char* norm_name(Norm n) { return n == Norm::L1 ? "L1" : n == Norm::L2 ? "L2" : "Linf"; }

struct ApproxSweepOptions {
    double R = 64, eta = 0.5, oversample = 1.0, Cd = -1;
    std::vector<std::uint64_t> seeds;
    std::vector<double> multipliers{0.25, 0.5, 1, 2, 4};
    std::size_t variance_samples = 10000;
};

// Per measure and norm: error statistics over seeds at multiples of the
// formula degree. The checks use the formula degree itself: mean L2 <= 1.25 eta,
// median L1 <= eta, worst-seed Linf <= eta, medians nonincreasing in k.
inline ScanResult run_approx_sweep(const std::vector<std::string>& measures, const ApproxSweepOptions& o) {
    if (o.seeds.empty()) throw std::invalid_argument("empty seed list");
    ScanResult res;
    res.name = "approx_sweep";
    res.table.header = {"label", "R", "eta", "norm", "k", "median_rel_error", "mean_rel_error", "max_rel_error", "seeds"};
    Table deg;
    deg.header = {"label", "R", "eta", "k_l2", "k_l1", "k_linf", "k_linf_spatial", "var_rel_err", "mean_z"};
    res.plot.title = "approximation error vs degree";
    res.plot.xlabel = "k";
    res.plot.ylabel = "relative error";
    res.plot.band = {PlotBand::Kind::level, 0, o.eta};
    bool ok = true;
    for (const auto& name : measures) {
        ApproxSetup s = approx_setup(corpus_measure(name, o.R), o.R, o.oversample);
        DegreeSet ks = formula_degrees(s, o.eta, o.Cd);
        auto vc = variance_identity_check(s, o.variance_samples, o.seeds.front());
        deg.add(name, o.R, o.eta, ks.l2, ks.l1, ks.linf, ks.linf_spatial, vc.rel_err, vc.mean_z);
        ok = ok && vc.rel_err < 0.05;
        for (Norm n : {Norm::L2, Norm::L1, Norm::Linf}) {
            const std::uint64_t k0 = n == Norm::L2 ? ks.l2 : n == Norm::L1 ? ks.l1 : ks.linf;
            PlotSeries ser{name + " " + norm_name(n), {}, {}};
            double prev = std::numeric_limits<double>::infinity();
            for (double mult : o.multipliers) {
                auto k = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(mult * k0)));
                auto e = approx_errors(s, k, n, o.seeds);
                double md = median(e), mn = mean(e), mx = *std::max_element(e.begin(), e.end());
                res.table.add(name, o.R, o.eta, norm_name(n), static_cast<std::size_t>(k), md, mn, mx, o.seeds.size());
                ser.x.push_back(static_cast<double>(k));
                ser.y.push_back(md);
                ok = ok && md <= prev * (1 + 1e-9);
                prev = md;
                if (mult == 1.0) {
                    double stat = n == Norm::L2 ? mn : n == Norm::L1 ? md : mx;
                    double lim = n == Norm::L2 ? 1.25 * o.eta : o.eta;
                    res.metrics[name + "." + norm_name(n)] = stat;
                    ok = ok && stat <= lim;
                }
            }
            res.plot.series.push_back(std::move(ser));
        }
    }
    res.extra.emplace_back("approx_degrees", std::move(deg));
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// Knapp arc: FR ~ R^{-1/4}, degree ~ R^{3/2}

struct KnappOptions {
    std::vector<double> R_list{16, 32, 64, 128, 256};
    double eta = 0.5;
    double band_lo = -0.40, band_hi = -0.15;
    std::vector<std::uint64_t> approx_seeds;  // empty: no approximation column
    GridPolicy pol;
};

inline ScanResult run_knapp_circle(const KnappOptions& o) {
    auto rs = require_scan_R(o.R_list);
    ScanResult res;
    res.name = "knapp_circle";
    res.table.header = {"R", "arc_len", "atoms", "FR", "quad_err", "degree_l2", "mean_rel_l2_error"};
    std::vector<double> fr, degs;
    for (double R : rs) {
        auto m = knapp_arc(R);
        auto rep = fourier_ratio(m, R, gaussian2(), o.pol);
        auto k = degree_for_l2(rep, o.eta);
        double err = std::numeric_limits<double>::quiet_NaN();
        if (!o.approx_seeds.empty()) err = mean(approx_errors(approx_setup(m, R), k, Norm::L2, o.approx_seeds));
        res.table.add(R, 1 / std::sqrt(R), m.size(), rep.FR, rep.quad_err, static_cast<std::size_t>(k), err);
        fr.push_back(rep.FR);
        degs.push_back(static_cast<double>(k));
    }
    res.fit = fit_loglog(rs, fr);
    res.band_lo = o.band_lo;
    res.band_hi = o.band_hi;
    res.metrics["slope"] = res.fit->slope;
    res.metrics["slope_stderr"] = res.fit->stderr_;
    res.metrics["degree_exponent"] = fit_loglog(rs, degs).slope;
    res.pass = res.fit->slope >= o.band_lo && res.fit->slope <= o.band_hi;
    res.plot = {"Knapp arc", "R", "FR", {{"arc", rs, fr}}, true, *res.fit, {PlotBand::Kind::slope, o.band_lo, o.band_hi}};
    return res;
}

// ---------------------------------------------------------------------------
// Random Cantor sets: FR slope near 0 and the energy-capture obstruction.

struct CantorOptions {
    std::vector<double> R_list{16, 32, 64, 128, 256};
    std::vector<std::uint64_t> seeds;
    int stages = 5, branching = 4;
    std::vector<double> capture_R{32, 64, 128};
    double band_lo = -0.15, band_hi = 0.05;
    double gap_min = 0.1;
    std::optional<double> circle_slope;  // computed from the Knapp scan when absent
    GridPolicy pol;
};

inline ScanResult run_cantor_dichotomy(const CantorOptions& o) {
    auto rs = require_scan_R(o.R_list);
    if (o.seeds.empty()) throw std::invalid_argument("empty seed list");
    ScanResult res;
    res.name = "cantor_dichotomy";
    res.table.header = {"seed", "R", "FR", "quad_err"};
    Table cap;
    cap.header = {"seed", "R", "k_quadratic", "capture_quadratic", "k_sub", "capture_sub"};
    Table per_seed;
    per_seed.header = {"seed", "slope"};
    std::vector<double> slopes;
    std::map<double, std::vector<double>> fr_by_R, capq, caps;
    for (auto sd : o.seeds) {
        auto m = make_random_cantor(o.stages, o.branching, sd);
        std::vector<double> fr;
        for (double R : rs) {
            auto rep = fourier_ratio(m, R, gaussian2(), o.pol);
            res.table.add(static_cast<std::size_t>(sd), R, rep.FR, rep.quad_err);
            fr.push_back(rep.FR);
            fr_by_R[R].push_back(rep.FR);
        }
        double sl = fit_loglog(rs, fr).slope;
        slopes.push_back(sl);
        per_seed.add(static_cast<std::size_t>(sd), sl);
        for (double R : o.capture_R) {
            std::size_t kq = static_cast<std::size_t>(R * R / 16);
            std::size_t ks = static_cast<std::size_t>(std::pow(R, 1.5) / 4);
            auto c = energy_capture(m, R, {kq, ks});
            cap.add(static_cast<std::size_t>(sd), R, kq, c[0], ks, c[1]);
            capq[R].push_back(c[0]);
            caps[R].push_back(c[1]);
        }
    }
    const double med = median(slopes);
    double circle = 0;
    if (o.circle_slope) {
        circle = *o.circle_slope;
    } else {
        KnappOptions ko;
        ko.R_list = rs;
        ko.pol = o.pol;
        circle = run_knapp_circle(ko).fit->slope;
    }
    bool capture_ok = true;
    double last_q = std::numeric_limits<double>::infinity(), last_s = last_q;
    bool sub_ok = true;
    for (double R : o.capture_R) {
        double q = median(capq[R]), s = median(caps[R]);
        res.metrics["capture_R" + std::to_string(static_cast<int>(R))] = q;
        res.metrics["capture_sub_R" + std::to_string(static_cast<int>(R))] = s;
        capture_ok = capture_ok && q <= last_q;
        sub_ok = sub_ok && s <= last_s;
        last_q = q;
        last_s = s;
    }
    std::vector<double> medfr;
    for (double R : rs) medfr.push_back(median(fr_by_R[R]));
    res.fit = fit_loglog(rs, medfr);
    res.band_lo = o.band_lo;
    res.band_hi = o.band_hi;
    res.metrics["median_slope"] = med;
    res.metrics["circle_slope"] = circle;
    res.metrics["gap"] = med - circle;
    res.metrics["capture_nonincreasing"] = capture_ok;
    res.metrics["capture_sub_nonincreasing"] = sub_ok;
    const bool slope_ok = med >= o.band_lo && med <= o.band_hi;
    const bool gap_ok = med - circle >= o.gap_min;
    res.metrics["slope_ok"] = slope_ok;
    res.metrics["gap_ok"] = gap_ok;
    res.pass = slope_ok && gap_ok && capture_ok;
    res.extra.emplace_back("cantor_capture", std::move(cap));
    res.extra.emplace_back("cantor_slopes", std::move(per_seed));
    res.plot = {"random Cantor sets (median over seeds)", "R", "FR", {{"cantor", rs, medfr}}, true, *res.fit,
                {PlotBand::Kind::slope, o.band_lo, o.band_hi}};
    return res;
}

// ---------------------------------------------------------------------------
// Boundary measures of convex bodies

struct ConvexOptions {
    std::vector<std::string> bodies{"square", "disk"};
    std::vector<double> R_list{16, 32, 64, 128, 256};
    double eta = 0.5;
    double slope_tol = 0.35;
    double concentration_max = 0.5;
    bool include_vertex_fans = false;
    std::vector<double> dim_scales{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    GridPolicy pol;
};

inline ScanResult run_convex_degree(const ConvexOptions& o) {
    auto rs = require_scan_R(o.R_list);
    bool has_disk = false, has_poly = false;
    for (auto& b : o.bodies) (b == "disk" ? has_disk : has_poly) = true;
    if (!has_disk || !has_poly) throw std::invalid_argument("bodies must include a polygon and the disk");
    ScanResult res;
    res.name = "convex_degree";
    res.table.header = {"body", "R", "FR", "quad_err", "degree_l2", "concentration", "set_volume"};
    Table summary;
    summary.header = {"body", "a_hat", "degree_slope", "expected", "concentration_at_max_R", "pass"};
    res.plot.title = "degree_for_l2 vs R";
    res.plot.ylabel = "degree";
    bool ok = true;
    for (const auto& name : o.bodies) {
        auto body = body_by_name(name);
        auto ns = normal_set(body);
        double a_hat = upper_minkowski_dimension(normal_points(ns, o.include_vertex_fans), o.dim_scales);
        std::vector<double> degs;
        double conc = 0;
        for (double R : rs) {
            auto m = boundary_measure(body, R);
            auto f = spectral_field(m, R, gaussian2(), o.pol);
            auto rep = ratio_report(f, m);
            auto set = build_normal_cone_set(body, R, f, o.include_vertex_fans);
            conc = concentration_fraction(f, set);
            auto k = degree_for_l2(rep, o.eta);
            res.table.add(name, R, rep.FR, rep.quad_err, static_cast<std::size_t>(k), conc, set.volume);
            degs.push_back(static_cast<double>(k));
        }
        double slope = fit_loglog(rs, degs).slope;
        bool body_ok = std::abs(slope - (a_hat + 1)) <= o.slope_tol;
        if (body.kind == ConvexBody2D::Kind::polygon) body_ok = body_ok && conc < o.concentration_max;
        summary.add(name, a_hat, slope, a_hat + 1, conc, body_ok);
        res.metrics[name + ".a_hat"] = a_hat;
        res.metrics[name + ".degree_slope"] = slope;
        res.metrics[name + ".concentration"] = conc;
        res.metrics[name + ".slope_ok"] = std::abs(slope - (a_hat + 1)) <= o.slope_tol;
        ok = ok && body_ok;
        res.plot.series.push_back({name, rs, degs});
    }
    res.extra.emplace_back("convex_summary", std::move(summary));
    res.pass = ok;
    return res;
}

// FR against R for boundary measures; slope band -(d-1)/2 +- tol for
// polygons and 0 +- tol for the disk.
inline ScanResult run_polygon_scaling(const std::vector<std::string>& bodies, const std::vector<double>& R_list,
                                      double tol = 0.35, const GridPolicy& pol = {}) {
    auto rs = require_scan_R(R_list);
    if (bodies.empty()) throw std::invalid_argument("no bodies");
    ScanResult res;
    res.name = "polygon_scaling";
    res.table.header = {"body", "R", "FR", "quad_err", "FR2_Rd"};
    Table fits;
    fits.header = {"body", "slope", "stderr", "band_lo", "band_hi", "pass"};
    res.plot.title = "boundary measures";
    res.plot.ylabel = "FR";
    bool ok = true;
    for (const auto& name : bodies) {
        auto body = body_by_name(name);
        std::vector<double> fr;
        for (double R : rs) {
            auto m = boundary_measure(body, R);
            auto rep = fourier_ratio(m, R, gaussian2(), pol);
            res.table.add(name, R, rep.FR, rep.quad_err, rep.FR * rep.FR * R * R);
            fr.push_back(rep.FR);
        }
        Fit f = fit_loglog(rs, fr);
        double c = body.kind == ConvexBody2D::Kind::disk ? 0.0 : -0.5;
        bool b_ok = std::abs(f.slope - c) <= tol;
        fits.add(name, f.slope, f.stderr_, c - tol, c + tol, b_ok);
        res.metrics[name + ".slope"] = f.slope;
        ok = ok && b_ok;
        res.plot.series.push_back({name, rs, fr});
    }
    res.extra.emplace_back("polygon_fits", std::move(fits));
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// Basis pursuit with missing frequencies

struct RecoveryOptions {
    int grid = 64, sparsity = 5;
    double mask_frac = 0.03;
    std::vector<std::uint64_t> seeds;
    int max_iters = 2000;
    double tol = 1e-12;
    bool nonneg = true;
    int schedule = 300;
    double success_rate = 0.95;
};

struct RecoveryOutcome {
    bool converged = false, exact = false;
    double maxabs = 0;
    int iters = 0;
    double s_E = 0, alpha_X = 0;
};

inline RecoveryOutcome recovery_trial(const RecoveryOptions& o, std::uint64_t seed) {
    auto m = make_sparse_grid_measure(o.grid, o.sparsity, seed);
    auto mask = random_mask(o.grid, o.mask_frac, seed ^ 0x9e3779b97f4a7c15ULL);
    auto in = build_instance(m, o.grid, mask);
    auto r = recover_l1(in, o.max_iters, o.tol, o.nonneg, o.schedule);
    RecoveryOutcome out;
    out.converged = r.converged;
    out.iters = r.iters;
    out.s_E = in.s_E_emp;
    out.alpha_X = in.alpha_X_emp;
    double scale = 0;
    for (double v : in.true_vector) scale = std::max(scale, v);
    bool support = true;
    for (std::size_t i = 0; i < r.estimate.size(); ++i) {
        out.maxabs = std::max(out.maxabs, std::abs(r.estimate[i] - in.true_vector[i]));
        support = support && ((std::abs(r.estimate[i]) > 1e-6 * scale) == (in.true_vector[i] != 0));
    }
    out.exact = support && out.maxabs < 1e-6;
    return out;
}

inline ScanResult run_recovery_phase(const RecoveryOptions& o) {
    if (o.seeds.empty()) throw std::invalid_argument("empty seed list");
    ScanResult res;
    res.name = "recovery_phase";
    res.table.header = {"seed", "s_E_emp", "alpha_X_emp", "converged", "exact", "maxabs_err", "iters"};
    std::vector<double> xs, errs;
    std::size_t good = 0;
    for (auto sd : o.seeds) {
        auto t = recovery_trial(o, sd);
        res.table.add(static_cast<std::size_t>(sd), t.s_E, t.alpha_X, t.converged, t.exact, t.maxabs, t.iters);
        good += t.exact;
        xs.push_back(static_cast<double>(xs.size() + 1));
        errs.push_back(std::max(t.maxabs, 1e-16));
    }
    const double rate = static_cast<double>(good) / o.seeds.size();
    res.metrics["success_rate"] = rate;
    res.pass = rate >= o.success_rate;
    res.plot = {"recovery error per trial", "trial", "max abs error", {{"maxabs", xs, errs}}, false, {},
                {PlotBand::Kind::level, 0, 1e-6}};
    return res;
}

// ---------------------------------------------------------------------------
// Discrete suite on Z_N

struct DiscreteOptions {
    std::size_t N = 4096;
    double p = -1;  // default gamma0 / log N
    double gamma0 = 0.1;
    double C_T = 10;
    std::vector<std::uint64_t> seeds;
    double band_rate = 0.95;
};

inline ScanResult run_discrete_suite(const DiscreteOptions& o) {
    if (o.seeds.empty()) throw std::invalid_argument("empty seed list");
    if (o.N < 16) throw std::invalid_argument("N must be >= 16");
    const double p = o.p > 0 ? o.p : o.gamma0 / std::log(static_cast<double>(o.N));
    const double thr = talagrand_threshold(o.N, o.C_T);
    ScanResult res;
    res.name = "discrete_suite";
    res.table.header = {"seed", "|M|", "FR", "lower_bound", "talagrand_band_ok"};
    std::vector<double> xs, ys;
    std::size_t in_band = 0, used = 0;
    bool bounds_ok = true;
    for (auto sd : o.seeds) {
        auto M = sample_generic(o.N, p, sd);
        if (M.empty()) continue;
        auto h = random_sign_signal(o.N, M, sd + 0x51ed);
        auto rb = ratio_bounds_check(h, M);
        bool band = rb.FR >= thr;
        res.table.add(static_cast<std::size_t>(sd), M.size(), rb.FR, rb.lower, band);
        bounds_ok = bounds_ok && rb.holds;
        in_band += band;
        ++used;
        xs.push_back(static_cast<double>(M.size()));
        ys.push_back(rb.FR);
    }
    Table ext;
    ext.header = {"p", "q", "FR", "expected", "abs_err"};
    for (auto [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 5}, {5, 7}, {7, 11}}) {
        double fr = discrete_fr(indicator(a * b, subgroup(a, b)));
        ext.add(a, b, fr, 1 / std::sqrt(static_cast<double>(a)), std::abs(fr - 1 / std::sqrt(static_cast<double>(a))));
    }
    const double rate = used ? static_cast<double>(in_band) / used : 0.0;
    res.metrics["p"] = p;
    res.metrics["threshold"] = thr;
    res.metrics["band_rate"] = rate;
    res.pass = bounds_ok && rate >= o.band_rate;
    res.extra.emplace_back("discrete_extremal", std::move(ext));
    res.plot = {"generic sets on Z_N", "|M|", "FR", {{"random signs", xs, ys}}, false, {},
                {PlotBand::Kind::level, thr, 1.0}};
    return res;
}

// ---------------------------------------------------------------------------

inline ScanResult run_l2_counterexample(const std::vector<std::pair<double, double>>& pairs, double R = 64,
                                        double b = 0.5) {
    if (pairs.empty()) throw std::invalid_argument("no (C, L) pairs");
    ScanResult res;
    res.name = "l2_counterexample";
    res.table.header = {"C", "L", "b", "r", "FR_h", "FR_closed", "bound", "violated"};
    std::vector<double> xs, fh, bd;
    bool ok = true;
    for (auto [C, L] : pairs) {
        auto e = l2_counterexample(R, L, C, 2, b);
        res.table.add(C, L, e.b, e.r, e.FR_h, e.FR_closed, e.bound, e.violated);
        ok = ok && e.violated && std::abs(e.FR_h - e.FR_closed) <= 1e-10 * e.FR_closed;
        xs.push_back(L);
        fh.push_back(e.FR_h);
        bd.push_back(e.bound);
    }
    res.pass = ok;
    res.plot = {"two-level profile", "L", "ratio", {{"FR_h", xs, fh}, {"bound", xs, bd}}, false, {}, {}};
    return res;
}

}  // namespace frlab
