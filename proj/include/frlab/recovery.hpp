#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "measure.hpp"

namespace frlab {

// Basis pursuit on Z_n^2 with some DFT coefficients unobserved.
struct RecoveryInstance {
    int n = 0;
    std::vector<double> true_vector;  // n*n, row-major
    std::vector<char> missing_mask;   // 1 = unobserved
    std::vector<cplx> observed_data;  // unitary DFT, zero where missing
    double s_E_emp = 0;
    double alpha_X_emp = 0;
};

namespace detail {

// Unitary 2D DFT on an n x n array; plans are created per call.
inline void dft2(std::vector<cplx>& a, int n, bool inverse) {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double s = 1.0 / n;
    for (auto& v : a) v *= s;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / lx.size();
        my += ly[i] / ly.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace detail

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Random mask of round(frac * n^2) frequencies.
inline std::vector<char> random_mask(int n, double frac, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n) * n);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t k = static_cast<std::size_t>(std::lround(frac * idx.size()));
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<char> mask(idx.size(), 0);
    for (std::size_t i = 0; i < k; ++i) mask[idx[i]] = 1;
    return mask;
}

// Atoms binned on the n x n torus grid of [0,1)^2.
inline RecoveryInstance build_instance(const AtomicMeasure& m, int n, const std::vector<char>& mask) {
    if (m.dim != 2) throw std::invalid_argument("recovery instances are 2-dimensional");
    if (!is_power_of_two(n) || n > 256) throw std::invalid_argument("grid side must be a power of two <= 256");
    const std::size_t N = static_cast<std::size_t>(n) * n;
    if (mask.size() != N) throw std::invalid_argument("mask size mismatch");
    if (std::all_of(mask.begin(), mask.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("every frequency is masked");
    RecoveryInstance in;
    in.n = n;
    in.true_vector.assign(N, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto cell = [n](double x) {
            long long c = static_cast<long long>(std::floor(x * n)) % n;
            return static_cast<std::size_t>(c < 0 ? c + n : c);
        };
        in.true_vector[cell(m.point(i)[0]) * n + cell(m.point(i)[1])] += m.weights[i].real();
    }
    in.missing_mask = mask;
    std::vector<cplx> F(in.true_vector.begin(), in.true_vector.end());
    detail::dft2(F, n, false);
    for (std::size_t i = 0; i < N; ++i)
        if (mask[i]) F[i] = 0;
    in.observed_data = std::move(F);

    // covering slope of the support and growth of the masked set in |m|_inf balls
    std::vector<double> scales, counts, radii, mcount;
    for (int s = 1; s <= n; s *= 2) {
        std::vector<std::size_t> cells;
        for (std::size_t i = 0; i < N; ++i)
            if (in.true_vector[i] != 0) cells.push_back(((i / n) * s / n) * s + (i % n) * s / n);
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        scales.push_back(s);
        counts.push_back(static_cast<double>(cells.size()));
    }
    for (int r = 2; r <= n / 2; r *= 2) {
        double c = 0;
        for (std::size_t i = 0; i < N; ++i) {
            int a = static_cast<int>(i / n), b = static_cast<int>(i % n);
            a = a > n / 2 ? a - n : a;
            b = b > n / 2 ? b - n : b;
            if (mask[i] && std::max(std::abs(a), std::abs(b)) < r) c += 1;
        }
        radii.push_back(r);
        mcount.push_back(c);
    }
    in.s_E_emp = detail::loglog_slope(scales, counts);
    in.alpha_X_emp = detail::loglog_slope(radii, mcount);
    return in;
}

struct RecoveryResult {
    std::vector<double> estimate;
    bool converged = false;
    double residual = 0;  // max deviation from the observed data
    int iters = 0;
    std::vector<double> objective;  // ||v||_1 per iteration
};

// Shrink in space, overwrite the observed DFT coefficients, repeat; the
// shrinkage level decays geometrically from max|v_0| to tol * max|v_0|.
inline RecoveryResult recover_l1(const RecoveryInstance& in, int max_iters, double tol, bool nonneg = true,
                                 int schedule = 300) {
    const int n = in.n;
    const std::size_t N = static_cast<std::size_t>(n) * n;
    std::vector<cplx> buf(N);
    auto project = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (std::size_t i = 0; i < N; ++i) buf[i] = u[i];
        detail::dft2(buf, n, false);
        for (std::size_t i = 0; i < N; ++i)
            if (!in.missing_mask[i]) buf[i] = in.observed_data[i];
        detail::dft2(buf, n, true);
        out.resize(N);
        for (std::size_t i = 0; i < N; ++i) out[i] = buf[i].real();
    };

    RecoveryResult res;
    std::vector<double> v(N, 0.0), u(N), next;
    project(v, v);
    double lam0 = 0;
    for (double x : v) lam0 = std::max(lam0, std::abs(x));
    if (lam0 == 0) lam0 = 1;
    const double rate = std::pow(tol, 1.0 / std::max(1, schedule));
    double lam = lam0;
    int it = 0;
    for (; it < max_iters; ++it) {
        for (std::size_t i = 0; i < N; ++i) {
            double a = std::abs(v[i]) - lam;
            u[i] = a > 0 ? std::copysign(a, v[i]) : 0.0;
            if (nonneg) u[i] = std::max(u[i], 0.0);
        }
        project(u, next);
        double diff = 0, l1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            diff += (next[i] - v[i]) * (next[i] - v[i]);
            l1 += std::abs(next[i]);
        }
        v.swap(next);
        res.objective.push_back(l1);
        const bool floor_reached = lam <= lam0 * tol * (1 + 1e-9);
        if (floor_reached && std::sqrt(diff) < tol) {
            res.converged = true;
            ++it;
            break;
        }
        lam = std::max(lam * rate, lam0 * tol);
    }
    res.iters = it;
    res.estimate = v;

    for (std::size_t i = 0; i < N; ++i) buf[i] = v[i];
    detail::dft2(buf, n, false);
    for (std::size_t i = 0; i < N; ++i)
        if (!in.missing_mask[i]) res.residual = std::max(res.residual, std::abs(buf[i] - in.observed_data[i]));
    return res;
}

// s-sparse nonnegative measure on the cells of the n x n grid.
inline AtomicMeasure make_sparse_grid_measure(int n, int sparsity, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n) * n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < sparsity; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::uniform_real_distribution<double> amp(0.5, 1.5);
    AtomicMeasure m = empty_measure(2, "sparse");
    for (int i = 0; i < sparsity; ++i) {
        double x[2] = {(idx[i] / n + 0.5) / n, (idx[i] % n + 0.5) / n};
        m.add(x, amp(rng) / sparsity);
    }
    m.box_lo = {0.0, 0.0};
    m.box_hi = {1.0, 1.0};
    return m;
}

}  // namespace frlab
