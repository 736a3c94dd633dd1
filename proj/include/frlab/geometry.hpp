#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "measure.hpp"
#include "spectral.hpp"

namespace frlab {

// ---------------------------------------------------------------------------
// Covering numbers

struct CoveringReport {
    double R = 0;
    std::size_t box_count = 0;
    double neighborhood_volume = 0;  // box_count * R^{-d}
};

// Number of half-open cells of side 1/R holding at least one atom.
inline CoveringReport covering_number(const AtomicMeasure& m, double R) {
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    std::vector<std::vector<long long>> cells;
    cells.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.weights[i] == cplx(0)) continue;
        std::vector<long long> c(m.dim);
        for (int k = 0; k < m.dim; ++k) c[k] = static_cast<long long>(std::floor(m.point(i)[k] * R));
        cells.push_back(std::move(c));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    CoveringReport c;
    c.R = R;
    c.box_count = cells.size();
    c.neighborhood_volume = static_cast<double>(c.box_count) * std::pow(R, -m.dim);
    return c;
}

struct LowerBoundResult {
    double lhs = 0, rhs = 0;
    bool holds = false;
};

inline void require_same_scale(double a, double b) {
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) throw std::invalid_argument("scale mismatch");
}

// (R^d |E^{1/R}|)^{-1/2} <= FR
inline LowerBoundResult lower_bound_check(const RatioReport& rep, const CoveringReport& cov, double tol = 1e-2) {
    require_same_scale(rep.R, cov.R);
    LowerBoundResult r;
    r.lhs = 1.0 / std::sqrt(std::pow(rep.R, rep.d) * cov.neighborhood_volume);
    r.rhs = rep.FR;
    r.holds = r.lhs <= r.rhs * (1 + tol);
    return r;
}

// ---------------------------------------------------------------------------
// Frequency sets

// Shell r_min <= |xi| <= r_max, optionally restricted to directions within
// angular_tol of a direction list or of planar angle arcs.
struct FrequencyRegion {
    double r_min = 0;
    double r_max = std::numeric_limits<double>::infinity();
    bool all_directions = true;
    std::vector<std::vector<double>> directions;
    std::vector<std::pair<double, double>> arcs;  // d = 2 only, angles a <= b
    double angular_tol = 0;

    bool contains(const double* xi, int d) const {
        double r2 = 0;
        for (int k = 0; k < d; ++k) r2 += xi[k] * xi[k];
        const double r = std::sqrt(r2);
        if (r < r_min || r > r_max) return false;
        if (all_directions) return true;
        if (r == 0) return false;
        for (const auto& u : directions) {
            double c = 0;
            for (int k = 0; k < d; ++k) c += u[k] * xi[k];
            if (std::acos(std::clamp(c / r, -1.0, 1.0)) <= angular_tol) return true;
        }
        if (!arcs.empty()) {
            if (d != 2) throw std::invalid_argument("angle arcs need d = 2");
            const double th = std::atan2(xi[1], xi[0]);
            for (auto [a, b] : arcs) {
                double lo = a - angular_tol, hi = b + angular_tol;
                double t = lo + std::fmod(std::fmod(th - lo, 2 * pi) + 2 * pi, 2 * pi);
                if (t <= hi) return true;
            }
        }
        return false;
    }
};

inline FrequencyRegion whole_space() { return {}; }

inline FrequencyRegion annulus_region(double r_min, double r_max) {
    FrequencyRegion x;
    x.r_min = r_min;
    x.r_max = r_max;
    return x;
}

// Exact volume of a region; direction restrictions are supported in d = 2.
inline double region_volume(const FrequencyRegion& x, int d) {
    if (std::isinf(x.r_max)) return std::numeric_limits<double>::infinity();
    const double ball = std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
    const double shell = ball * (std::pow(x.r_max, d) - std::pow(x.r_min, d));
    if (x.all_directions) return shell;
    if (d != 2) throw std::invalid_argument("analytic cone volume needs d = 2");
    std::vector<std::pair<double, double>> iv;
    for (const auto& u : x.directions) {
        double t = std::atan2(u[1], u[0]);
        iv.emplace_back(t - x.angular_tol, t + x.angular_tol);
    }
    for (auto [a, b] : x.arcs) iv.emplace_back(a - x.angular_tol, b + x.angular_tol);
    // fold into [0, 2pi) and merge
    std::vector<std::pair<double, double>> flat;
    for (auto [a, b] : iv) {
        if (b - a >= 2 * pi) return shell;
        double s = std::fmod(std::fmod(a, 2 * pi) + 2 * pi, 2 * pi);
        double e = s + (b - a);
        if (e <= 2 * pi) {
            flat.emplace_back(s, e);
        } else {
            flat.emplace_back(s, 2 * pi);
            flat.emplace_back(0, e - 2 * pi);
        }
    }
    std::sort(flat.begin(), flat.end());
    double covered = 0, cs = -1, ce = -1;
    for (auto [a, b] : flat) {
        if (a > ce) {
            if (ce > cs) covered += ce - cs;
            cs = a;
            ce = b;
        } else {
            ce = std::max(ce, b);
        }
    }
    if (ce > cs) covered += ce - cs;
    return shell * covered / (2 * pi);
}

struct FrequencySet {
    FrequencyRegion region;
    std::vector<char> mask;  // one entry per field node
    double volume = 0;       // |X_R|: node count * h^d on grids, exact on sampled fields
};

inline FrequencySet build_set(const SpectralField& f, const FrequencyRegion& x) {
    FrequencySet s;
    s.region = x;
    s.mask.assign(f.size(), 0);
    std::vector<double> xi(f.dim);
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.node(i, xi.data());
        if (x.contains(xi.data(), f.dim)) {
            s.mask[i] = 1;
            ++count;
        }
    }
    s.volume = f.sampled ? region_volume(x, f.dim) : static_cast<double>(count) * f.grid.cell_volume();
    return s;
}

// Share of the spectral L1 mass lying outside the set.
inline double concentration_fraction(const SpectralField& f, const FrequencySet& s) {
    if (s.mask.size() != f.size()) throw std::invalid_argument("set built on a different grid");
    double out = 0, all = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double v = f.weight(i) * std::abs(f.values[i]);
        all += v;
        if (!s.mask[i]) out += v;
    }
    return all > 0 ? out / all : 0.0;
}

struct SandwichResult {
    double lower = 0, FR = 0, upper = 0, eta = 0;
    double product = 0;          // |E^{1/R}| * |X_R|
    double uncertainty_rhs = 0;  // (1 - eta)^2, which product must dominate
    bool holds = false;
};

inline SandwichResult sandwich_check(const RatioReport& rep, const CoveringReport& cov, const FrequencySet& set,
                                     double eta, double tol = 1e-2) {
    require_same_scale(rep.R, cov.R);
    if (!(eta < 1)) throw std::invalid_argument("eta must be < 1");
    SandwichResult s;
    const double Rd = std::pow(rep.R, rep.d);
    s.eta = eta;
    s.FR = rep.FR;
    s.lower = 1.0 / std::sqrt(Rd * cov.neighborhood_volume);
    s.upper = std::sqrt(set.volume / Rd) / (1 - eta);
    s.product = cov.neighborhood_volume * set.volume;
    s.uncertainty_rhs = (1 - eta) * (1 - eta);
    s.holds = s.lower <= s.FR * (1 + tol) && s.FR <= s.upper * (1 + tol) && s.uncertainty_rhs <= s.product * (1 + tol);
    return s;
}

// ---------------------------------------------------------------------------
// Normal sets and dimension

struct NormalSet {
    std::vector<std::array<double, 2>> normals;   // edge normals
    std::vector<std::pair<double, double>> fans;  // vertex fans as angle arcs
    bool full_circle = false;
};

inline NormalSet normal_set(const ConvexBody2D& body) {
    body.validate();
    NormalSet ns;
    if (body.kind == ConvexBody2D::Kind::disk) {
        ns.full_circle = true;
        return ns;
    }
    const std::size_t m = body.vertices.size();
    std::vector<double> ang;
    for (std::size_t i = 0; i < m; ++i) {
        auto& a = body.vertices[i];
        auto& b = body.vertices[(i + 1) % m];
        double dx = b[0] - a[0], dy = b[1] - a[1], len = std::hypot(dx, dy);
        ns.normals.push_back({dy / len, -dx / len});
        ang.push_back(std::atan2(-dx, dy));
    }
    // the fan at vertex i+1 sweeps from the normal of edge i to that of edge i+1
    for (std::size_t i = 0; i < m; ++i) {
        double a = ang[i], b = ang[(i + 1) % m];
        while (b < a) b += 2 * pi;
        ns.fans.emplace_back(a, b);
    }
    return ns;
}

// Points of the normal set; arcs are sampled at the given angular step.
inline std::vector<std::vector<double>> normal_points(const NormalSet& ns, bool include_fans, double step = 1e-4) {
    std::vector<std::vector<double>> pts;
    auto arc = [&](double a, double b) {
        int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
        for (int i = 0; i <= n; ++i) {
            double t = a + (b - a) * i / n;
            pts.push_back({std::cos(t), std::sin(t)});
        }
    };
    if (ns.full_circle) {
        arc(0, 2 * pi);
        return pts;
    }
    for (auto& u : ns.normals) pts.push_back({u[0], u[1]});
    if (include_fans)
        for (auto [a, b] : ns.fans) arc(a, b);
    return pts;
}

// Least-squares slope of log N(s) against log(1/s), clamped to [0, d-1].
inline double upper_minkowski_dimension(const std::vector<std::vector<double>>& pts, const std::vector<double>& scales) {
    if (scales.size() < 3) throw std::invalid_argument("need at least 3 scales");
    if (pts.empty()) throw std::invalid_argument("empty point set");
    const int d = static_cast<int>(pts[0].size());
    std::vector<double> lx, ly;
    for (double s : scales) {
        std::vector<std::vector<long long>> cells;
        for (auto& p : pts) {
            std::vector<long long> c(d);
            for (int k = 0; k < d; ++k) c[k] = static_cast<long long>(std::floor(p[k] / s));
            cells.push_back(std::move(c));
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        lx.push_back(std::log(1.0 / s));
        ly.push_back(std::log(static_cast<double>(cells.size())));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return std::clamp(sxy / sxx, 0.0, static_cast<double>(d - 1));
}

// {R/2 <= |xi| <= 2R, xi/|xi| within 1/R of N(K)}.
inline FrequencyRegion normal_cone_region(const ConvexBody2D& body, double R, bool include_fans = false) {
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    NormalSet ns = normal_set(body);
    FrequencyRegion x = annulus_region(R / 2, 2 * R);
    if (ns.full_circle) return x;
    x.all_directions = false;
    x.angular_tol = 1.0 / R;
    for (auto& u : ns.normals) x.directions.push_back({u[0], u[1]});
    if (include_fans) x.arcs = ns.fans;
    return x;
}

inline FrequencySet build_normal_cone_set(const ConvexBody2D& body, double R, const SpectralField& f,
                                          bool include_fans = false) {
    return build_set(f, normal_cone_region(body, R, include_fans));
}

// ---------------------------------------------------------------------------
// Two-level frequency profile: alpha on the ball S_R, beta on B_{LR} \ S_R.

struct L2Counterexample {
    double b = 0.5;
    double r = 0, alpha = 0, beta = 0;
    double volume_A = 0, volume_B = 0;
    double l1 = 0, l2 = 0;
    double FR_h = 0;         // from alpha |A| + beta |B|
    double FR_closed = 0;    // |S_R|^{1/2} R^{-d/2} (sqrt(1-b^2) + b r)
    double bound = 0;        // C / (1-b) |S_R|^{1/2} R^{-d/2}
    bool violated = false;
};

inline L2Counterexample l2_counterexample(double R, double L, double C, int d = 2, double b = 0.5) {
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    if (!(L > 1)) throw std::invalid_argument("L must exceed 1");
    if (!(b > 0 && b < 1)) throw std::invalid_argument("b must lie in (0,1)");
    L2Counterexample e;
    e.b = b;
    e.r = std::sqrt(std::pow(L, d) - 1);
    if (!(std::sqrt(1 - b * b) + b * e.r > C / (1 - b))) throw std::invalid_argument("L too small for C");
    const double ball = std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
    e.volume_A = ball * std::pow(R, d);
    e.volume_B = ball * (std::pow(L * R, d) - std::pow(R, d));
    e.alpha = std::sqrt(1 - b * b) / std::sqrt(e.volume_A);
    e.beta = b / std::sqrt(e.volume_B);
    e.l1 = e.alpha * e.volume_A + e.beta * e.volume_B;
    e.l2 = std::sqrt(e.alpha * e.alpha * e.volume_A + e.beta * e.beta * e.volume_B);
    const double Rd2 = std::pow(R, -0.5 * d);
    e.FR_h = Rd2 * e.l1 / e.l2;
    e.FR_closed = std::sqrt(e.volume_A) * Rd2 * (std::sqrt(1 - b * b) + b * e.r);
    e.bound = C / (1 - b) * std::sqrt(e.volume_A) * Rd2;
    e.violated = e.FR_h > e.bound;
    return e;
}

// ---------------------------------------------------------------------------
// Energy captured by the k largest coefficients on the integer lattice
// Z^d cap [-cutoff R, cutoff R]^d. Returns one fraction per requested k.
inline std::vector<double> energy_capture(const AtomicMeasure& m, double R, const std::vector<std::size_t>& ks,
                                          double cutoff = 4.0) {
    const int K = static_cast<int>(std::floor(cutoff * R));
    std::vector<std::vector<double>> axes(m.dim);
    for (auto& ax : axes)
        for (int j = -K; j <= K; ++j) ax.push_back(j);
    auto v = detail::tensor_sum(m, R, axes, true);
    std::vector<double> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::norm(v[i]);
    std::sort(e.begin(), e.end(), std::greater<>());
    double total = 0;
    for (double x : e) total += x;
    std::vector<double> out;
    for (std::size_t k : ks) {
        double acc = 0;
        for (std::size_t i = 0; i < std::min(k, e.size()); ++i) acc += e[i];
        out.push_back(acc / total);
    }
    return out;
}

}  // namespace frlab
