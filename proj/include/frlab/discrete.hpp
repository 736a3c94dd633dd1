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

namespace frlab {

struct DiscreteSignal {
    std::vector<cplx> values;
    std::size_t N() const { return values.size(); }
};

inline DiscreteSignal make_signal(std::vector<cplx> v) {
    if (v.size() < 2) throw std::invalid_argument("signal needs N >= 2");
    return DiscreteSignal{std::move(v)};
}

// Unitary DFT, h_hat(m) = N^{-1/2} sum_x h(x) exp(-2 pi i x m / N).
inline DiscreteSignal dft(const DiscreteSignal& h, bool inverse = false) {
    const int N = static_cast<int>(h.N());
    fftw_complex* buf = fftw_alloc_complex(N);
    for (int i = 0; i < N; ++i) {
        buf[i][0] = h.values[i].real();
        buf[i][1] = h.values[i].imag();
    }
    fftw_plan p = fftw_plan_dft_1d(N, buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    DiscreteSignal out;
    out.values.resize(N);
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i) out.values[i] = cplx(buf[i][0], buf[i][1]) * s;
    fftw_free(buf);
    return out;
}

inline DiscreteSignal idft(const DiscreteSignal& h) { return dft(h, true); }

// (1/N) sum |h_hat| / ((1/N) sum |h_hat|^2)^{1/2}
inline double discrete_fr(const DiscreteSignal& h) {
    auto H = dft(h);
    double s1 = 0, s2 = 0;
    for (auto v : H.values) {
        s1 += std::abs(v);
        s2 += std::norm(v);
    }
    if (!(s2 > 0)) throw std::invalid_argument("zero signal");
    const double N = static_cast<double>(h.N());
    return (s1 / N) / std::sqrt(s2 / N);
}

inline DiscreteSignal indicator(std::size_t N, const std::vector<std::size_t>& set) {
    std::vector<cplx> v(N, 0.0);
    for (auto i : set) v.at(i) = 1.0;
    return make_signal(std::move(v));
}

// The subgroup of Z_{pq} of order p: multiples of q.
inline std::vector<std::size_t> subgroup(std::size_t p, std::size_t q) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < p; ++i) s.push_back(i * q);
    return s;
}

// Each residue kept by an independent Bernoulli(p) draw.
inline std::vector<std::size_t> sample_generic(std::size_t N, double p, std::uint64_t seed) {
    if (!(p > 0 && p < 1)) throw std::invalid_argument("p must lie in (0,1)");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution b(p);
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < N; ++i)
        if (b(rng)) s.push_back(i);
    return s;
}

// Random +-1 values on the support, zero elsewhere.
inline DiscreteSignal random_sign_signal(std::size_t N, const std::vector<std::size_t>& support, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution b(0.5);
    std::vector<cplx> v(N, 0.0);
    for (auto i : support) v.at(i) = b(rng) ? 1.0 : -1.0;
    return make_signal(std::move(v));
}

struct RatioBounds {
    double lower = 0, FR = 0;
    bool holds = false;
};

// |E|^{-1/2} <= FR <= 1 for h supported in E.
inline RatioBounds ratio_bounds_check(const DiscreteSignal& h, const std::vector<std::size_t>& support) {
    std::vector<char> in(h.N(), 0);
    for (auto i : support) in.at(i) = 1;
    for (std::size_t i = 0; i < h.N(); ++i)
        if (!in[i] && h.values[i] != cplx(0)) throw std::invalid_argument("signal does not vanish off the support");
    if (support.empty()) throw std::invalid_argument("empty support");
    RatioBounds r;
    r.lower = 1.0 / std::sqrt(static_cast<double>(support.size()));
    r.FR = discrete_fr(h);
    r.holds = r.lower <= r.FR * (1 + 1e-12) && r.FR <= 1 + 1e-12;
    return r;
}

struct HolderCheck {
    double Cq = 0;          // q-mean over 2-mean of |h_hat|
    double l2_mean = 0;     // ((1/N) sum |h_hat|^2)^{1/2}
    double implied_l1 = 0;  // Cq^{q/(q-2)} (1/N) sum |h_hat|
    bool holds = false;
};

inline HolderCheck holder_interpolation_check(const DiscreteSignal& h, double q) {
    if (!(q > 2 && q <= 10)) throw std::invalid_argument("q must lie in (2, 10]");
    auto H = dft(h);
    const double N = static_cast<double>(h.N());
    double s1 = 0, s2 = 0, sq = 0;
    for (auto v : H.values) {
        double a = std::abs(v);
        s1 += a;
        s2 += a * a;
        sq += std::pow(a, q);
    }
    if (!(s2 > 0)) throw std::invalid_argument("degenerate signal");
    HolderCheck c;
    const double m1 = s1 / N, m2 = std::sqrt(s2 / N), mq = std::pow(sq / N, 1.0 / q);
    c.Cq = mq / m2;
    c.l2_mean = m2;
    c.implied_l1 = std::pow(c.Cq, q / (q - 2)) * m1;
    c.holds = c.l2_mean <= c.implied_l1 * (1 + 1e-12);
    return c;
}

struct UncertaintyCheck {
    double a = 0, b = 0;
    double lhs = 0;  // (1-a)^2 N / |E|
    double FR2 = 0;  // (sum|f_hat|)^2 / sum|f_hat|^2 = N * discrete_fr^2
    double rhs = 0;  // |S| / (1-b)^2
    bool product_ok = false;
};

// a = ||f||_{L2(E^c)} / ||f||_2, b = ||f_hat||_{L1(S^c)} / ||f_hat||_1.
inline UncertaintyCheck discrete_uncertainty_check(const DiscreteSignal& f, const std::vector<std::size_t>& E,
                                                   const std::vector<std::size_t>& S) {
    const std::size_t N = f.N();
    std::vector<char> inE(N, 0), inS(N, 0);
    for (auto i : E) inE.at(i) = 1;
    for (auto i : S) inS.at(i) = 1;
    auto F = dft(f);
    double e_all = 0, e_out = 0, s_all = 0, s_out = 0, s2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double v = std::norm(f.values[i]);
        e_all += v;
        if (!inE[i]) e_out += v;
        double w = std::abs(F.values[i]);
        s_all += w;
        s2 += w * w;
        if (!inS[i]) s_out += w;
    }
    UncertaintyCheck c;
    c.a = std::sqrt(e_out / e_all);
    c.b = s_out / s_all;
    const double n = static_cast<double>(N);
    c.FR2 = s_all * s_all / s2;
    c.lhs = E.empty() ? std::numeric_limits<double>::infinity() : (1 - c.a) * (1 - c.a) * n / E.size();
    c.rhs = S.size() / ((1 - c.b) * (1 - c.b));
    const double tol = 1e-9;
    bool chain = c.lhs <= c.FR2 * (1 + tol) && c.FR2 <= c.rhs * (1 + tol);
    bool prod = (1 - c.a) * (1 - c.a) * (1 - c.b) * (1 - c.b) * n <= static_cast<double>(E.size() * S.size()) * (1 + tol);
    c.product_ok = (c.a < 1 && c.b < 1) ? (chain && prod) : true;
    return c;
}

// Smallest index set carrying at least the given share of sum |v|^power.
inline std::vector<std::size_t> top_mass_set(const std::vector<cplx>& v, double share, double power) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(v[a]) > std::abs(v[b]); });
    double total = 0;
    for (auto x : v) total += std::pow(std::abs(x), power);
    std::vector<std::size_t> out;
    double acc = 0;
    for (auto i : idx) {
        if (acc >= share * total) break;
        out.push_back(i);
        acc += std::pow(std::abs(v[i]), power);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Threshold of the generic-set surrogate: (C_T sqrt(log N log log N))^{-1}.
inline double talagrand_threshold(std::size_t N, double C_T) {
    const double l = std::log(static_cast<double>(N));
    return 1.0 / (C_T * std::sqrt(l * std::log(l)));
}

}  // namespace frlab
