#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "measure.hpp"
#include "spectral.hpp"

namespace frlab {

struct SamplingDistribution {
    FrequencyGrid grid;
    double R = 1;
    std::vector<double> pmf;
    std::vector<double> cdf;
    std::vector<cplx> phases;
    double total_l1 = 0;  // ||g_hat||_1, without the R^{-d} of X1
};

inline SamplingDistribution build_distribution(const SpectralField& f) {
    if (f.sampled) throw std::invalid_argument("sampling distribution needs a grid field");
    SamplingDistribution s;
    s.grid = f.grid;
    s.R = f.R;
    const double hv = f.grid.cell_volume();
    s.pmf.resize(f.size());
    s.phases.resize(f.size());
    double tot = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double a = std::abs(f.values[i]);
        s.pmf[i] = a * hv;
        s.phases[i] = a > 0 ? f.values[i] / a : cplx(0);
        tot += s.pmf[i];
    }
    if (!(tot > 0)) throw std::invalid_argument("field is identically zero");
    s.total_l1 = tot;
    s.cdf.resize(f.size());
    double run = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s.pmf[i] /= tot;
        run += s.pmf[i];
        s.cdf[i] = run;
    }
    s.cdf.back() = 1.0;
    return s;
}

// P(x) = sum_j c_j exp(2 pi i x . xi_j), frequencies on the distribution grid.
struct TrigPolynomial {
    int dim = 0;
    FrequencyGrid grid;
    std::vector<std::size_t> nodes;
    std::vector<double> freqs;  // row-major, dim per term
    std::vector<cplx> coeffs;

    std::size_t degree() const { return coeffs.size(); }

    cplx eval(const double* x) const {
        cplx acc = 0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            double t = 0;
            for (int k = 0; k < dim; ++k) t += x[k] * freqs[j * dim + k];
            t = detail::frac_phase(t);
            acc += coeffs[j] * cplx(std::cos(2 * pi * t), std::sin(2 * pi * t));
        }
        return acc;
    }
};

namespace detail {

inline TrigPolynomial from_counts(const SamplingDistribution& s, const std::vector<std::uint64_t>& counts,
                                  std::uint64_t k) {
    TrigPolynomial p;
    p.dim = s.grid.dim;
    p.grid = s.grid;
    std::vector<double> xi(p.dim);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!counts[i]) continue;
        s.grid.coords(i, xi.data());
        p.nodes.push_back(i);
        p.freqs.insert(p.freqs.end(), xi.begin(), xi.end());
        p.coeffs.push_back(s.total_l1 * s.phases[i] * (static_cast<double>(counts[i]) / static_cast<double>(k)));
    }
    return p;
}

}  // namespace detail

// k i.i.d. draws from the pmf; repeated frequencies merge. For k well above
// the node count the draw counts come from an equivalent multinomial.
inline TrigPolynomial sample_polynomial(const SamplingDistribution& s, std::uint64_t k, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(s.pmf.size(), 0);
    if (k <= 4 * s.pmf.size()) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::uint64_t t = 0; t < k; ++t) {
            auto it = std::upper_bound(s.cdf.begin(), s.cdf.end(), u(rng));
            std::size_t i = std::min<std::size_t>(it - s.cdf.begin(), s.cdf.size() - 1);
            while (s.pmf[i] == 0 && i > 0) --i;
            ++counts[i];
        }
    } else {
        std::uint64_t left = k;
        double mass = 1.0;
        for (std::size_t i = 0; i < s.pmf.size() && left > 0; ++i) {
            if (s.pmf[i] == 0) continue;
            double p = std::clamp(s.pmf[i] / mass, 0.0, 1.0);
            std::binomial_distribution<std::uint64_t> bd(left, p);
            std::uint64_t c = (i + 1 == s.pmf.size()) ? left : bd(rng);
            counts[i] = c;
            left -= c;
            mass -= s.pmf[i];
        }
        if (left) {
            auto it = std::max_element(s.pmf.begin(), s.pmf.end());
            counts[it - s.pmf.begin()] += left;
        }
    }
    return detail::from_counts(s, counts, k);
}

// Inverse quadrature of g_hat over every node: the k -> infinity limit of P.
inline TrigPolynomial full_polynomial(const SamplingDistribution& s) {
    TrigPolynomial p;
    p.dim = s.grid.dim;
    p.grid = s.grid;
    std::vector<double> xi(p.dim);
    for (std::size_t i = 0; i < s.pmf.size(); ++i) {
        if (s.pmf[i] == 0) continue;
        s.grid.coords(i, xi.data());
        p.nodes.push_back(i);
        p.freqs.insert(p.freqs.end(), xi.begin(), xi.end());
        p.coeffs.push_back(s.total_l1 * s.pmf[i] * s.phases[i]);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Degree formulas

inline std::uint64_t ceil_degree(double v) {
    if (!(v >= 1)) return 1;
    return static_cast<std::uint64_t>(std::ceil(v));
}

inline void require_eta(double eta) {
    if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
}

inline double field_l1(const SpectralField& f) {
    double acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.weight(i) * std::abs(f.values[i]);
    return acc;
}

// eta^{-2} (R^d FR^2 - 1)
inline std::uint64_t degree_for_l2(const RatioReport& rep, double eta) {
    require_eta(eta);
    return ceil_degree((std::pow(rep.R, rep.d) * rep.FR * rep.FR - 1) / (eta * eta));
}

// eta^{-2} (||g_hat||_1 / ||g||_1)^2
inline std::uint64_t degree_for_l1(const SpectralField& f, double g_l1_spatial, double eta) {
    require_eta(eta);
    if (!(g_l1_spatial > 0)) throw std::invalid_argument("zero spatial mass");
    double r = field_l1(f) / g_l1_spatial;
    return ceil_degree(r * r / (eta * eta));
}

struct LinfDegree {
    std::uint64_t k = 0;          // formula as displayed, ||g_hat||_inf inside the log
    std::uint64_t k_spatial = 0;  // same with ||g||_inf inside the log
};

// 32 T^2 / (eta^2 ||g||_inf^2) * (log(4 C_d) + d log(8 pi R T / (eta ||.||_inf)))
inline LinfDegree degree_for_linf(const SpectralField& f, double g_inf, double eta, int d, double R,
                                  double Cd = -1) {
    require_eta(eta);
    if (!(g_inf > 0)) throw std::invalid_argument("zero g_inf");
    if (Cd <= 0) Cd = std::pow(5.0, d);
    const double T = field_l1(f);
    const double ghat_inf = x_norm(f, std::numeric_limits<double>::infinity());
    const double lead = 32 * T * T / (eta * eta * g_inf * g_inf);
    LinfDegree out;
    out.k = ceil_degree(lead * (std::log(4 * Cd) + d * std::log(8 * pi * R * T / (eta * ghat_inf))));
    out.k_spatial = ceil_degree(lead * (std::log(4 * Cd) + d * std::log(8 * pi * R * T / (eta * g_inf))));
    return out;
}

// ---------------------------------------------------------------------------
// Spatial evaluation

struct SpatialGrid {
    int dim = 0;
    std::vector<double> lo, step;
    std::vector<int> n;
    std::vector<int> period;  // FFT length per axis

    std::size_t size() const {
        std::size_t s = 1;
        for (int v : n) s *= static_cast<std::size_t>(v);
        return s;
    }
    double cell_volume() const {
        double v = 1;
        for (double s : step) v *= s;
        return v;
    }
    void coords(std::size_t flat, double* x) const {
        for (int k = dim - 1; k >= 0; --k) {
            x[k] = lo[k] + step[k] * static_cast<double>(flat % n[k]);
            flat /= n[k];
        }
    }
};

// Support box padded by one mollifier width 1/R, sampled at spacing
// 1/(padding * M_k * h_k) = 1/(2 padding cutoff R).
inline SpatialGrid approx_domain(const AtomicMeasure& m, double R, const FrequencyGrid& g, int padding = 4) {
    SpatialGrid s;
    s.dim = m.dim;
    for (int k = 0; k < m.dim; ++k) {
        double lo = m.box_lo[k] - 1.0 / R, hi = m.box_hi[k] + 1.0 / R;
        int L = padding * g.M[k];
        double step = 1.0 / (L * g.h[k]);
        int n = static_cast<int>(std::floor((hi - lo) / step)) + 1;
        if (n > L) throw std::invalid_argument("frequency spacing too coarse for the spatial domain");
        s.lo.push_back(lo);
        s.step.push_back(step);
        s.n.push_back(n);
        s.period.push_back(L);
    }
    return s;
}

// g = (f mu) * psi_{1/R} with the gaussian psi, summed over atoms locally.
inline std::vector<cplx> mollified_on_grid(const AtomicMeasure& m, double R, const SpatialGrid& s) {
    const int d = m.dim;
    std::vector<cplx> g(s.size(), cplx(0));
    const double reach = 6.5 / R;
    std::vector<int> first(d), cnt(d);
    std::vector<std::vector<double>> fac(d);
    std::vector<std::size_t> stride(d, 1);
    for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * s.n[k + 1];
    for (std::size_t a = 0; a < m.size(); ++a) {
        const double* x = m.point(a);
        bool empty = false;
        for (int k = 0; k < d; ++k) {
            int i0 = std::max(0, static_cast<int>(std::ceil((x[k] - reach - s.lo[k]) / s.step[k])));
            int i1 = std::min(s.n[k] - 1, static_cast<int>(std::floor((x[k] + reach - s.lo[k]) / s.step[k])));
            first[k] = i0;
            cnt[k] = i1 - i0 + 1;
            if (cnt[k] <= 0) empty = true;
            fac[k].resize(std::max(cnt[k], 0));
            for (int i = 0; i < cnt[k]; ++i) {
                double dx = s.lo[k] + s.step[k] * (i0 + i) - x[k];
                fac[k][i] = R * std::exp(-pi * R * R * dx * dx);
            }
        }
        if (empty) continue;
        std::size_t total = 1;
        for (int k = 0; k < d; ++k) total *= cnt[k];
        for (std::size_t t = 0; t < total; ++t) {
            std::size_t rem = t, off = 0;
            double v = 1;
            for (int k = d - 1; k >= 0; --k) {
                int i = static_cast<int>(rem % cnt[k]);
                rem /= cnt[k];
                v *= fac[k][i];
                off += (first[k] + i) * stride[k];
            }
            g[off] += m.weights[a] * v;
        }
    }
    return g;
}

// P on the spatial grid by a zero-padded inverse FFT of the coefficient lattice.
inline std::vector<cplx> polynomial_on_grid(const TrigPolynomial& p, const SpatialGrid& s) {
    const int d = p.dim;
    const FrequencyGrid& g = p.grid;
    if (s.dim != d) throw std::invalid_argument("dimension mismatch");
    std::size_t total = 1;
    for (int L : s.period) total *= static_cast<std::size_t>(L);
    fftw_complex* buf = fftw_alloc_complex(total);
    std::fill_n(reinterpret_cast<double*>(buf), 2 * total, 0.0);

    std::vector<std::size_t> pstride(d, 1);
    for (int k = d - 2; k >= 0; --k) pstride[k] = pstride[k + 1] * s.period[k + 1];
    for (std::size_t t = 0; t < p.degree(); ++t) {
        std::size_t rem = p.nodes[t], off = 0;
        double ph = 0;
        for (int k = d - 1; k >= 0; --k) {
            int j = static_cast<int>(rem % g.M[k]);
            rem /= g.M[k];
            off += j * pstride[k];
            ph += detail::frac_phase(s.lo[k] * g.node(k, j));
        }
        cplx v = p.coeffs[t] * std::polar(1.0, 2 * pi * ph);
        buf[off][0] += v.real();
        buf[off][1] += v.imag();
    }
    fftw_plan plan = fftw_plan_dft(d, s.period.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<std::vector<cplx>> tw(d);
    for (int k = 0; k < d; ++k) {
        double base = s.step[k] * (-g.half_extent + 0.5 * g.h[k]);
        for (int i = 0; i < s.n[k]; ++i)
            tw[k].push_back(std::polar(1.0, 2 * pi * detail::frac_phase(i * base)));
    }
    std::vector<cplx> out(s.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        std::size_t rem = t, off = 0;
        cplx w = 1;
        for (int k = d - 1; k >= 0; --k) {
            int i = static_cast<int>(rem % s.n[k]);
            rem /= s.n[k];
            off += i * pstride[k];
            w *= tw[k][i];
        }
        out[t] = cplx(buf[off][0], buf[off][1]) * w;
    }
    fftw_free(buf);
    return out;
}

enum class Norm { L1, L2, Linf };

inline double spatial_norm(const std::vector<cplx>& v, double cell, Norm n) {
    double acc = 0;
    for (auto x : v) {
        double a = std::abs(x);
        if (n == Norm::L1) acc += a;
        else if (n == Norm::L2) acc += a * a;
        else acc = std::max(acc, a);
    }
    if (n == Norm::L1) return acc * cell;
    if (n == Norm::L2) return std::sqrt(acc * cell);
    return acc;
}

struct ApproxError {
    double absolute = 0;
    double relative = 0;
};

inline ApproxError approx_error(const std::vector<cplx>& g, const std::vector<cplx>& p, const SpatialGrid& s,
                                double R, Norm n, double cutoff = 4.0) {
    if (g.size() != p.size() || g.size() != s.size()) throw std::invalid_argument("size mismatch");
    for (double st : s.step)
        if (st > (1 + 1e-9) / (8 * cutoff * R)) throw std::invalid_argument("spatial grid under-resolved");
    std::vector<cplx> diff(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = g[i] - p[i];
    ApproxError e;
    e.absolute = spatial_norm(diff, s.cell_volume(), n);
    double base = spatial_norm(g, s.cell_volume(), n);
    e.relative = base > 0 ? e.absolute / base : std::numeric_limits<double>::infinity();
    return e;
}

}  // namespace frlab
