#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frlab {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

// Weighted point masses. Points are stored row-major, dim coordinates each.
struct AtomicMeasure {
    int dim = 0;
    std::vector<double> points;
    std::vector<cplx> weights;
    std::vector<double> box_lo, box_hi;
    std::string label;

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t i) const { return points.data() + i * dim; }

    double mass() const {
        double m = 0;
        for (auto w : weights) m += w.real();
        return m;
    }

    void add(std::span<const double> x, cplx w) {
        if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("atom dimension mismatch");
        points.insert(points.end(), x.begin(), x.end());
        weights.push_back(w);
    }

    // Tight box around the atoms.
    void fit_box() {
        box_lo.assign(dim, 0.0);
        box_hi.assign(dim, 0.0);
        if (size() == 0) return;
        for (int k = 0; k < dim; ++k) box_lo[k] = box_hi[k] = points[k];
        for (std::size_t i = 0; i < size(); ++i)
            for (int k = 0; k < dim; ++k) {
                box_lo[k] = std::min(box_lo[k], point(i)[k]);
                box_hi[k] = std::max(box_hi[k], point(i)[k]);
            }
    }

    bool inside_box(double slack = 1e-12) const {
        for (std::size_t i = 0; i < size(); ++i)
            for (int k = 0; k < dim; ++k)
                if (point(i)[k] < box_lo[k] - slack || point(i)[k] > box_hi[k] + slack) return false;
        return true;
    }
};

inline AtomicMeasure empty_measure(int dim, std::string label) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    AtomicMeasure m;
    m.dim = dim;
    m.label = std::move(label);
    return m;
}

inline AtomicMeasure translate(const AtomicMeasure& m, std::span<const double> shift) {
    if (static_cast<int>(shift.size()) != m.dim) throw std::invalid_argument("shift dimension mismatch");
    AtomicMeasure t = m;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (int k = 0; k < t.dim; ++k) t.points[i * t.dim + k] += shift[k];
    for (int k = 0; k < t.dim; ++k) {
        t.box_lo[k] += shift[k];
        t.box_hi[k] += shift[k];
    }
    return t;
}

// ---------------------------------------------------------------------------
// Mollifier

struct MollifierSpec {
    enum class Kind { gaussian, bump };
    Kind kind = Kind::gaussian;
    int dim = 2;
    double normalization = 1.0;  // psi(x) = normalization * profile(|x|)
};

namespace detail {

// Gauss-Legendre nodes on [0,1].
inline const std::vector<std::pair<double, double>>& legendre01(int n = 400) {
    static std::vector<std::pair<double, double>> nodes = [n] {
        std::vector<std::pair<double, double>> out;
        for (int i = 1; i <= n; ++i) {
            double x = std::cos(pi * (i - 0.25) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1);
            out.emplace_back(0.5 * (1 - x), 1.0 / ((1 - x * x) * dp * dp));
        }
        return out;
    }();
    return nodes;
}

inline double bump_profile(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

inline double sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace detail

inline MollifierSpec make_mollifier(MollifierSpec::Kind kind, int dim) {
    MollifierSpec s;
    s.kind = kind;
    s.dim = dim;
    if (kind == MollifierSpec::Kind::gaussian) {
        s.normalization = 1.0;
    } else {
        double acc = 0;
        for (auto [x, w] : detail::legendre01()) acc += w * detail::bump_profile(x) * std::pow(x, dim - 1);
        s.normalization = 1.0 / (detail::sphere_area(dim) * acc);
    }
    return s;
}

inline double mollifier_value(const MollifierSpec& s, double r) {
    if (s.kind == MollifierSpec::Kind::gaussian) return std::exp(-pi * r * r);
    return s.normalization * detail::bump_profile(r);
}

// Radial Fourier transform of psi at |u| = rho.
inline double mollifier_hat_radial(const MollifierSpec& s, double rho) {
    if (s.kind == MollifierSpec::Kind::gaussian) return std::exp(-pi * rho * rho);
    if (rho == 0.0) return 1.0;
    const int d = s.dim;
    const double nu = 0.5 * d - 1.0;
    double acc = 0;
    for (auto [r, w] : detail::legendre01()) {
        double j = (d == 1) ? std::cos(2 * pi * rho * r) * std::sqrt(2.0 / (pi * 2 * pi * rho * r))
                            : std::cyl_bessel_j(nu, 2 * pi * rho * r);
        acc += w * detail::bump_profile(r) * j * std::pow(r, 0.5 * d);
    }
    return s.normalization * 2 * pi * std::pow(rho, 1.0 - 0.5 * d) * acc;
}

inline double mollifier_hat(const MollifierSpec& s, std::span<const double> u) {
    double r2 = 0;
    for (double v : u) r2 += v * v;
    return mollifier_hat_radial(s, std::sqrt(r2));
}

// ---------------------------------------------------------------------------
// Convex bodies in the plane

struct ConvexBody2D {
    enum class Kind { polygon, disk };
    Kind kind = Kind::polygon;
    std::vector<std::array<double, 2>> vertices;
    std::array<double, 2> center{0, 0};
    double radius = 1.0;
    std::string name;

    void validate() const {
        if (kind == Kind::disk) {
            if (!(radius > 0)) throw std::invalid_argument("disk radius must be positive");
            return;
        }
        const std::size_t m = vertices.size();
        if (m < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
        for (std::size_t i = 0; i < m; ++i) {
            auto& a = vertices[i];
            auto& b = vertices[(i + 1) % m];
            auto& c = vertices[(i + 2) % m];
            double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if (cr <= 1e-14) throw std::invalid_argument("polygon must be strictly convex and counterclockwise");
        }
    }

    double perimeter() const {
        if (kind == Kind::disk) return 2 * pi * radius;
        double p = 0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            auto& a = vertices[i];
            auto& b = vertices[(i + 1) % vertices.size()];
            p += std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        return p;
    }
};

inline ConvexBody2D make_disk(double radius = 1.0) {
    ConvexBody2D b;
    b.kind = ConvexBody2D::Kind::disk;
    b.radius = radius;
    b.name = "disk";
    return b;
}

inline ConvexBody2D make_unit_square() {
    ConvexBody2D b;
    b.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    b.name = "square";
    return b;
}

// Regular n-gon inscribed in the circle of the given radius.
inline ConvexBody2D make_regular_polygon(int n, double circumradius = 1.0) {
    if (n < 3) throw std::invalid_argument("regular polygon needs n >= 3");
    ConvexBody2D b;
    for (int i = 0; i < n; ++i) {
        double t = 2 * pi * i / n;
        b.vertices.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
    }
    b.name = "polygon" + std::to_string(n);
    return b;
}

// Inscribed polygon whose vertices sit at angles pi*2^{-j}, so the edges
// (and their normals) accumulate geometrically towards angle 0.
inline ConvexBody2D make_lacunary_polygon(int levels) {
    if (levels < 2) throw std::invalid_argument("lacunary polygon needs levels >= 2");
    std::vector<double> ang{0.0, 1.5 * pi};
    for (int j = 0; j < levels; ++j) ang.push_back(pi * std::ldexp(1.0, -j));
    std::sort(ang.begin(), ang.end());
    ConvexBody2D b;
    for (double t : ang) b.vertices.push_back({std::cos(t), std::sin(t)});
    b.name = "lacunary" + std::to_string(levels);
    return b;
}

// ---------------------------------------------------------------------------
// Generators

inline AtomicMeasure make_point_mass(int dim, double weight = 1.0) {
    AtomicMeasure m = empty_measure(dim, "point");
    std::vector<double> x(dim, 0.0);
    m.add(x, weight);
    m.fit_box();
    return m;
}

inline AtomicMeasure make_circle_arc(double R, double arc_len, int n_atoms) {
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    if (n_atoms < 64) throw std::invalid_argument("circle arc needs n_atoms >= 64");
    if (!(arc_len > 0) || arc_len > 2 * pi + 1e-12) throw std::invalid_argument("arc_len must lie in (0, 2pi]");
    if (n_atoms < 8 * R * arc_len) throw std::invalid_argument("n_atoms below aliasing guard 8*R*arc_len");
    AtomicMeasure m = empty_measure(2, "arc");
    const double w = arc_len / n_atoms;
    for (int i = 0; i < n_atoms; ++i) {
        double t = -0.5 * arc_len + (i + 0.5) * arc_len / n_atoms;
        double x[2] = {std::cos(t), std::sin(t)};
        m.add(x, w);
    }
    m.fit_box();
    return m;
}

inline AtomicMeasure make_polygon_boundary(const ConvexBody2D& body, int n_atoms) {
    body.validate();
    AtomicMeasure m = empty_measure(2, body.name);
    if (body.kind == ConvexBody2D::Kind::disk) {
        if (n_atoms < 64) throw std::invalid_argument("disk boundary needs n_atoms >= 64");
        const double w = 2 * pi * body.radius / n_atoms;
        for (int i = 0; i < n_atoms; ++i) {
            double t = 2 * pi * (i + 0.5) / n_atoms;
            double x[2] = {body.center[0] + body.radius * std::cos(t), body.center[1] + body.radius * std::sin(t)};
            m.add(x, w);
        }
        m.fit_box();
        return m;
    }
    const std::size_t nv = body.vertices.size();
    if (n_atoms < static_cast<int>(4 * nv)) throw std::invalid_argument("polygon needs n_atoms >= 4 * vertices");
    const double P = body.perimeter();
    if (!(P > 0)) throw std::invalid_argument("degenerate polygon");
    for (std::size_t e = 0; e < nv; ++e) {
        auto& a = body.vertices[e];
        auto& b = body.vertices[(e + 1) % nv];
        double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        int k = std::max(1, static_cast<int>(std::lround(n_atoms * len / P)));
        for (int i = 0; i < k; ++i) {
            double t = (i + 0.5) / k;
            double x[2] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
            m.add(x, len / k);
        }
    }
    m.fit_box();
    return m;
}

// Random Cantor set in [0,1]^2: each kept square splits into branching^2
// subsquares and keeps branching of them.
inline AtomicMeasure make_random_cantor(int stages, int branching, std::uint64_t seed) {
    if (stages < 1 || stages > 8) throw std::invalid_argument("stages must lie in [1, 8]");
    if (branching < 2 || branching > 8) throw std::invalid_argument("branching must lie in [2, 8]");
    std::mt19937_64 rng(seed);
    std::vector<std::array<std::int64_t, 2>> cells{{0, 0}};
    std::vector<int> slots(branching * branching);
    for (int s = 0; s < stages; ++s) {
        std::vector<std::array<std::int64_t, 2>> next;
        next.reserve(cells.size() * branching);
        for (auto c : cells) {
            std::iota(slots.begin(), slots.end(), 0);
            for (int i = 0; i < branching; ++i) {
                std::uniform_int_distribution<int> pick(i, branching * branching - 1);
                std::swap(slots[i], slots[pick(rng)]);
                int k = slots[i];
                next.push_back({c[0] * branching + k / branching, c[1] * branching + k % branching});
            }
        }
        cells = std::move(next);
    }
    std::sort(cells.begin(), cells.end());
    const double side = std::pow(static_cast<double>(branching), -stages);
    AtomicMeasure m = empty_measure(2, "cantor");
    const double w = 1.0 / cells.size();
    for (auto c : cells) {
        double x[2] = {(c[0] + 0.5) * side, (c[1] + 0.5) * side};
        m.add(x, w);
    }
    m.box_lo = {0.0, 0.0};
    m.box_hi = {1.0, 1.0};
    return m;
}

inline AtomicMeasure make_sphere_measure(int d, int n_atoms) {
    if (d != 2 && d != 3) throw std::invalid_argument("sphere measure supports d in {2, 3}");
    if (n_atoms < 128) throw std::invalid_argument("sphere needs n_atoms >= 128");
    AtomicMeasure m = empty_measure(d, d == 2 ? "sphere2d" : "sphere3d");
    if (d == 2) {
        const double w = 2 * pi / n_atoms;
        for (int i = 0; i < n_atoms; ++i) {
            double t = 2 * pi * (i + 0.5) / n_atoms;
            double x[2] = {std::cos(t), std::sin(t)};
            m.add(x, w);
        }
    } else {
        const double w = 4 * pi / n_atoms;
        const double golden = pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n_atoms; ++i) {
            double z = 1.0 - (2.0 * i + 1.0) / n_atoms;
            double r = std::sqrt(std::max(0.0, 1 - z * z));
            double t = golden * i;
            double x[3] = {r * std::cos(t), r * std::sin(t), z};
            m.add(x, w);
        }
    }
    m.box_lo.assign(d, -1.0);
    m.box_hi.assign(d, 1.0);
    return m;
}

// Uniform measure on [0,1]^k x {0}^{d-k}, mass 1, on a midpoint grid.
inline AtomicMeasure make_kplane_measure(int d, int k, int n_atoms) {
    if (d < 2 || k < 1 || k > d - 1) throw std::invalid_argument("k-plane needs 1 <= k <= d-1");
    const int side = static_cast<int>(std::lround(std::pow(static_cast<double>(n_atoms), 1.0 / k)));
    if (side < 1) throw std::invalid_argument("too few atoms for k-plane");
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= side;
    AtomicMeasure m = empty_measure(d, k == 1 ? "segment" : "kplane");
    const double w = 1.0 / total;
    std::vector<double> x(d, 0.0);
    std::vector<int> idx(k, 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t r = c;
        for (int i = 0; i < k; ++i) {
            idx[i] = static_cast<int>(r % side);
            r /= side;
            x[i] = (idx[i] + 0.5) / side;
        }
        m.add(x, w);
    }
    m.box_lo.assign(d, 0.0);
    m.box_hi.assign(d, 0.0);
    for (int i = 0; i < k; ++i) m.box_hi[i] = 1.0;
    return m;
}

// Random atoms in [0,1]^d with positive weights; used for calibration sweeps.
inline AtomicMeasure make_random_measure(int d, int n_atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AtomicMeasure m = empty_measure(d, "random");
    std::vector<double> x(d);
    for (int i = 0; i < n_atoms; ++i) {
        for (auto& v : x) v = u(rng);
        m.add(x, 0.1 + u(rng));
    }
    m.fit_box();
    return m;
}

}  // namespace frlab
