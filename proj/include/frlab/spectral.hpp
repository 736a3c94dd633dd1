#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "measure.hpp"

namespace frlab {

// Uniform midpoint grid on [-half_extent, half_extent]^d, one spacing per axis.
struct FrequencyGrid {
    int dim = 0;
    double half_extent = 0;
    std::vector<int> M;
    std::vector<double> h;

    std::size_t size() const {
        std::size_t n = 1;
        for (int m : M) n *= static_cast<std::size_t>(m);
        return n;
    }
    double cell_volume() const {
        double v = 1;
        for (double s : h) v *= s;
        return v;
    }
    double node(int axis, int j) const { return -half_extent + (j + 0.5) * h[axis]; }

    // Row-major flat index, last axis fastest.
    void coords(std::size_t flat, double* xi) const {
        for (int k = dim - 1; k >= 0; --k) {
            xi[k] = node(k, static_cast<int>(flat % M[k]));
            flat /= M[k];
        }
    }
};

inline FrequencyGrid make_uniform_grid(int dim, double half_extent, int M) {
    if (dim < 1) throw std::invalid_argument("grid dim must be >= 1");
    if (M < 16 || M % 2) throw std::invalid_argument("points per axis must be even and >= 16");
    if (!(half_extent > 0)) throw std::invalid_argument("half extent must be positive");
    FrequencyGrid g;
    g.dim = dim;
    g.half_extent = half_extent;
    g.M.assign(dim, M);
    g.h.assign(dim, 2 * half_extent / M);
    return g;
}

struct GridPolicy {
    double cutoff = 4.0;       // half extent = cutoff * R
    double oversample = 2.0;   // aliasing period = oversample * (axis extent + 2 * spread / R)
    double spread = 3.0;       // mollifier tail, in units of 1/R
    int min_points = 16;
    double budget = 6e10;      // atoms * nodes above which fourier_ratio samples instead
    int mc_samples = 1 << 21;
    int mc_replicates = 32;
    std::uint64_t mc_seed = 0x5eed;
};

inline FrequencyGrid make_grid(const AtomicMeasure& m, double R, const GridPolicy& pol) {
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    FrequencyGrid g;
    g.dim = m.dim;
    g.half_extent = pol.cutoff * R;
    for (int k = 0; k < m.dim; ++k) {
        double ext = m.box_hi[k] - m.box_lo[k] + 2 * pol.spread / R;
        double hmax = 1.0 / (pol.oversample * ext);
        int M = static_cast<int>(std::ceil(2 * g.half_extent / hmax));
        M += M % 2;
        M = std::max(M, pol.min_points + pol.min_points % 2);
        g.M.push_back(M);
        g.h.push_back(2 * g.half_extent / M);
    }
    return g;
}

inline double grid_cost(const AtomicMeasure& m, const FrequencyGrid& g) {
    return static_cast<double>(m.size()) * static_cast<double>(g.size());
}

// Mollified transform, either on a grid or on a list of sampled frequencies.
// Quadrature of F(values) over R^d is sum_i weight(i) * F(values[i]).
struct SpectralField {
    int dim = 0;
    double R = 1;
    MollifierSpec mollifier;
    bool sampled = false;
    FrequencyGrid grid;
    std::vector<double> xi;       // sampled nodes, row-major
    std::vector<double> qweight;  // sampled quadrature weights
    int replicates = 0;           // sampled nodes come in this many equal independent blocks
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    void node(std::size_t i, double* out) const {
        if (sampled)
            std::copy_n(xi.data() + i * dim, dim, out);
        else
            grid.coords(i, out);
    }
    double weight(std::size_t i) const { return sampled ? qweight[i] : grid.cell_volume(); }
};

namespace detail {

inline double frac_phase(double t) { return t - std::nearbyint(t); }

// Radial table of psi_hat for non-gaussian kinds.
struct RadialTable {
    double step = 0;
    std::vector<double> v;
    RadialTable(const MollifierSpec& s, double rmax, int n = 8192) : step(rmax / n), v(n + 2) {
        for (int i = 0; i < n + 2; ++i) v[i] = mollifier_hat_radial(s, i * step);
    }
    double operator()(double r) const {
        double t = r / step;
        std::size_t i = static_cast<std::size_t>(t);
        if (i + 1 >= v.size()) return v.back();
        double f = t - i;
        return v[i] * (1 - f) + v[i + 1] * f;
    }
};

// Direct summation of sum_i w_i exp(-2 pi i x_i . xi) psi_hat(xi / R) over the
// tensor product of per-axis node lists. Separable exponentials turn the sum
// into blocked complex GEMMs; the gaussian factor is folded into the axes.
// Output is row-major, last axis fastest.
inline std::vector<cplx> tensor_sum(const AtomicMeasure& m, double R, const std::vector<std::vector<double>>& axes,
                                    bool fold_gaussian) {
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int d = m.dim;
    const int last = d - 1;
    std::size_t rows = 1;
    for (int k = 0; k < last; ++k) rows *= axes[k].size();
    const std::size_t cols = axes[last].size();

    auto axis_factor = [&](int axis, double x, std::size_t j) {
        double xi = axes[axis][j];
        double t = frac_phase(x * xi);
        cplx e(std::cos(2 * pi * t), -std::sin(2 * pi * t));
        if (fold_gaussian) e *= std::exp(-pi * (xi / R) * (xi / R));
        return e;
    };

    const std::size_t n = m.size();
    RowMat F = RowMat::Zero(rows, cols);
    const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(512, (1u << 22) / std::max(rows, cols)));
    std::vector<std::vector<cplx>> tabs(last);
    for (std::size_t a0 = 0; a0 < n; a0 += block) {
        const std::size_t nb = std::min(block, n - a0);
        RowMat A(nb, rows), B(nb, cols);
        for (std::size_t a = 0; a < nb; ++a) {
            const double* x = m.point(a0 + a);
            for (std::size_t j = 0; j < cols; ++j) B(a, j) = axis_factor(last, x[last], j);
            for (int k = 0; k < last; ++k) {
                tabs[k].resize(axes[k].size());
                for (std::size_t j = 0; j < axes[k].size(); ++j) tabs[k][j] = axis_factor(k, x[k], j);
            }
            const cplx w = m.weights[a0 + a];
            for (std::size_t r = 0; r < rows; ++r) {
                cplx v = w;
                std::size_t rem = r;
                for (int k = last - 1; k >= 0; --k) {
                    v *= tabs[k][rem % axes[k].size()];
                    rem /= axes[k].size();
                }
                A(a, r) = v;
            }
        }
        F.noalias() += A.transpose() * B;
    }
    return std::vector<cplx>(F.data(), F.data() + rows * cols);
}

}  // namespace detail

// Mollified transform sampled on every grid node, by direct summation.
inline SpectralField transform(const AtomicMeasure& m, double R, const FrequencyGrid& grid,
                               const MollifierSpec& spec, double cutoff = 4.0) {
    if (grid.dim != m.dim) throw std::invalid_argument("grid and measure dimensions differ");
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    if (grid.half_extent < cutoff * R * (1 - 1e-12)) throw std::invalid_argument("grid too small for R");
    const int d = m.dim;
    const bool gauss = spec.kind == MollifierSpec::Kind::gaussian;

    SpectralField f;
    f.dim = d;
    f.R = R;
    f.mollifier = spec;
    f.grid = grid;

    std::vector<std::vector<double>> axes(d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < grid.M[k]; ++j) axes[k].push_back(grid.node(k, j));
    f.values = detail::tensor_sum(m, R, axes, gauss);

    if (!gauss) {
        double rmax = cutoff * std::sqrt(static_cast<double>(d)) * 1.01;
        detail::RadialTable tab(spec, rmax);
        std::vector<double> xi(d);
        for (std::size_t i = 0; i < f.size(); ++i) {
            grid.coords(i, xi.data());
            double r2 = 0;
            for (double v : xi) r2 += v * v;
            f.values[i] *= tab(std::sqrt(r2) / R);
        }
    }
    return f;
}

// mu_hat at arbitrary frequencies (no mollifier).
inline std::vector<cplx> nudft(const AtomicMeasure& m, const std::vector<double>& xi) {
    const int d = m.dim;
    const std::size_t nx = xi.size() / d;
    std::vector<cplx> out(nx);
    std::vector<double> ph(m.size());
    for (std::size_t s = 0; s < nx; ++s) {
        const double* q = xi.data() + s * d;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double* x = m.point(i);
            double t = 0;
            for (int k = 0; k < d; ++k) t += x[k] * q[k];
            ph[i] = 2 * pi * detail::frac_phase(t);
        }
        double re = 0, im = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double c = std::cos(ph[i]), sn = std::sin(ph[i]);
            re += m.weights[i].real() * c + m.weights[i].imag() * sn;
            im += m.weights[i].imag() * c - m.weights[i].real() * sn;
        }
        out[s] = {re, im};
    }
    return out;
}

// Gaussian importance sampling: xi ~ N(0, R^2/(2 pi) I), whose density is
// R^{-d} psi_hat(xi/R). Each replicate is a random tensor product of per-axis
// normal draws so the summation reuses the GEMM kernel; replicates are
// independent, which gives the error estimate.
inline SpectralField sampled_transform(const AtomicMeasure& m, double R, const MollifierSpec& spec, int samples,
                                       int replicates, std::uint64_t seed) {
    if (spec.kind != MollifierSpec::Kind::gaussian)
        throw std::invalid_argument("sampled transform needs the gaussian mollifier");
    if (R < 1) throw std::invalid_argument("R must be >= 1");
    if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");
    const int d = m.dim;
    SpectralField f;
    f.dim = d;
    f.R = R;
    f.mollifier = spec;
    f.sampled = true;
    f.replicates = replicates;

    const int per_axis = std::max(
        4, static_cast<int>(std::lround(std::pow(static_cast<double>(samples) / replicates, 1.0 / d))));
    std::size_t per_rep = 1;
    for (int k = 0; k < d; ++k) per_rep *= per_axis;
    const std::size_t total = per_rep * replicates;
    const double Rd = std::pow(R, d);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, R / std::sqrt(2 * pi));
    f.xi.reserve(total * d);
    f.values.reserve(total);
    f.qweight.reserve(total);
    std::vector<std::vector<double>> axes(d, std::vector<double>(per_axis));
    std::vector<double> eta(d);
    for (int b = 0; b < replicates; ++b) {
        // random rotation Q; summing over Q^T x against tensor nodes eta gives xi = Q eta
        Eigen::MatrixXd G(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G(i, j) = nd(rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd Q = qr.householderQ();
        AtomicMeasure rot = m;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int k = 0; k < d; ++k) {
                double v = 0;
                for (int j = 0; j < d; ++j) v += Q(j, k) * m.point(i)[j];
                rot.points[i * d + k] = v;
            }
        for (auto& ax : axes)
            for (auto& v : ax) v = nd(rng);
        auto vals = detail::tensor_sum(rot, R, axes, true);
        for (std::size_t i = 0; i < per_rep; ++i) {
            std::size_t rem = i;
            double r2 = 0;
            for (int k = d - 1; k >= 0; --k) {
                eta[k] = axes[k][rem % per_axis];
                rem /= per_axis;
                r2 += eta[k] * eta[k];
            }
            for (int k = 0; k < d; ++k) {
                double v = 0;
                for (int j = 0; j < d; ++j) v += Q(k, j) * eta[j];
                f.xi.push_back(v);
            }
            f.values.push_back(vals[i]);
            f.qweight.push_back(Rd / (static_cast<double>(total) * std::exp(-pi * r2 / (R * R))));
        }
    }
    return f;
}

inline double x_norm(const SpectralField& f, double p) {
    if (std::isinf(p)) {
        double mx = 0;
        for (auto v : f.values) mx = std::max(mx, std::abs(v));
        return mx;
    }
    if (p != 1.0 && p != 2.0) throw std::invalid_argument("x_norm supports p in {1, 2, inf}");
    double acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.weight(i) * std::pow(std::abs(f.values[i]), p);
    return std::pow(acc / std::pow(f.R, f.dim), 1.0 / p);
}

// X2 from the atom-pair closed form (gaussian mollifier):
// X2^2 = R^{-d} sum_ij w_i conj(w_j) (R/sqrt2)^d exp(-pi R^2 |x_i - x_j|^2 / 2).
inline double parseval_x2(const AtomicMeasure& m, double R) {
    const int d = m.dim;
    const std::size_t n = m.size();
    std::vector<std::size_t> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return m.point(a)[0] < m.point(b)[0]; });
    const double rc = std::sqrt(2 * 45.0 / pi) / R;  // exp(-45) cut
    const double c = pi * R * R / 2;
    double acc = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = ord[a];
        const double* xi = m.point(i);
        acc += std::norm(m.weights[i]);
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t j = ord[b];
            const double* xj = m.point(j);
            if (xj[0] - xi[0] > rc) break;
            double r2 = 0;
            for (int k = 0; k < d; ++k) r2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
            acc += 2 * (m.weights[i] * std::conj(m.weights[j])).real() * std::exp(-c * r2);
        }
    }
    return std::sqrt(std::max(0.0, acc) * std::pow(std::sqrt(0.5), d));
}

struct RatioReport {
    std::string label;
    int d = 0;
    double R = 0;
    double X1 = 0, X2 = 0, Xinf = 0, FR = 0;
    double FR_normalized = 0;  // FR * 2^{-d/4}; the point mass sits at 1
    double quad_err = 0;
    bool sampled = false;
};

inline SpectralField spectral_field(const AtomicMeasure& m, double R, const MollifierSpec& spec,
                                    const GridPolicy& pol = {}) {
    FrequencyGrid g = make_grid(m, R, pol);
    if (grid_cost(m, g) <= pol.budget) return transform(m, R, g, spec, pol.cutoff);
    return sampled_transform(m, R, spec, pol.mc_samples, pol.mc_replicates, pol.mc_seed);
}

inline RatioReport ratio_report(const SpectralField& f, const AtomicMeasure& m) {
    RatioReport r;
    r.label = m.label;
    r.d = f.dim;
    r.R = f.R;
    r.sampled = f.sampled;
    r.X1 = x_norm(f, 1.0);
    r.Xinf = x_norm(f, std::numeric_limits<double>::infinity());
    const double x2q = x_norm(f, 2.0);
    const bool gauss = f.mollifier.kind == MollifierSpec::Kind::gaussian;
    const double x2p = gauss ? parseval_x2(m, f.R) : std::numeric_limits<double>::quiet_NaN();
    if (f.sampled) {
        r.X2 = x2p;
        r.Xinf = std::max(r.Xinf, std::abs(m.mass()));
        // spread of the replicate estimates of X1
        const std::size_t per = f.size() / f.replicates;
        const double Rd = std::pow(f.R, f.dim);
        std::vector<double> est(f.replicates, 0.0);
        for (std::size_t i = 0; i < f.size(); ++i)
            est[i / per] += f.qweight[i] * std::abs(f.values[i]) * f.replicates / Rd;
        double mean = 0, var = 0;
        for (double e : est) mean += e / f.replicates;
        for (double e : est) var += (e - mean) * (e - mean) / (f.replicates - 1);
        double se = std::sqrt(var / f.replicates) / mean;
        r.quad_err = std::max(se, std::abs(x2q - x2p) / x2p);
    } else {
        r.X2 = x2q;
        r.quad_err = gauss ? std::abs(x2q - x2p) / x2p : std::numeric_limits<double>::quiet_NaN();
    }
    r.FR = r.X1 / r.X2;
    r.FR_normalized = r.FR * std::pow(2.0, -0.25 * r.d);
    return r;
}

inline RatioReport fourier_ratio(const AtomicMeasure& m, double R, const MollifierSpec& spec,
                                 const GridPolicy& pol = {}) {
    return ratio_report(spectral_field(m, R, spec, pol), m);
}

}  // namespace frlab
