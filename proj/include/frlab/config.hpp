#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace frlab {

using json = nlohmann::json;

enum class Experiment {
    ratio_scan,
    knapp_circle,
    cantor_dichotomy,
    polygon_scaling,
    convex_degree,
    approx_sweep,
    recovery_phase,
    discrete_suite,
    l2_counterexample
};

struct ExperimentInfo {
    Experiment id;
    const char* name;
    std::vector<std::string> keys;
};

inline const std::vector<ExperimentInfo>& experiment_table() {
    static const std::vector<ExperimentInfo> t{
        {Experiment::ratio_scan, "ratio_scan", {"measures", "R_list", "cutoff", "oversample", "budget"}},
        {Experiment::knapp_circle, "knapp_circle", {"R_list", "eta", "band", "approx_seeds", "budget"}},
        {Experiment::cantor_dichotomy,
         "cantor_dichotomy",
         {"R_list", "seeds", "stages", "branching", "capture_R", "band", "gap_min", "circle_slope", "budget"}},
        {Experiment::polygon_scaling, "polygon_scaling", {"bodies", "R_list", "tolerance", "budget"}},
        {Experiment::convex_degree,
         "convex_degree",
         {"bodies", "R_list", "eta", "slope_tolerance", "concentration_max", "include_vertex_fans", "budget"}},
        {Experiment::approx_sweep,
         "approx_sweep",
         {"measures", "R", "eta", "seeds", "oversample", "multipliers", "Cd", "variance_samples"}},
        {Experiment::recovery_phase,
         "recovery_phase",
         {"grid", "sparsity", "mask_frac", "seeds", "max_iters", "tol", "nonneg", "schedule"}},
        {Experiment::discrete_suite, "discrete_suite", {"N", "p", "gamma0", "C_T", "seeds"}},
        {Experiment::l2_counterexample, "l2_counterexample", {"pairs", "R", "b"}},
    };
    return t;
}

inline const ExperimentInfo& experiment_info(Experiment e) {
    for (auto& i : experiment_table())
        if (i.id == e) return i;
    throw std::logic_error("unregistered experiment");
}

inline Experiment experiment_from_name(const std::string& s) {
    for (auto& i : experiment_table())
        if (s == i.name) return i.id;
    throw std::invalid_argument("unknown experiment: " + s);
}

struct ExperimentConfig {
    Experiment experiment = Experiment::ratio_scan;
    json parameters = json::object();
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";
};

inline ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> top{"schema", "experiment", "parameters", "seed", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!top.count(it.key())) throw std::invalid_argument("unknown config key: " + it.key());
    if (!j.contains("schema") || j.at("schema") != 1) throw std::invalid_argument("config needs \"schema\": 1");
    if (!j.contains("experiment")) throw std::invalid_argument("config needs \"experiment\"");
    ExperimentConfig c;
    c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
    if (j.contains("parameters")) c.parameters = j.at("parameters");
    if (!c.parameters.is_object()) throw std::invalid_argument("\"parameters\" must be an object");
    const auto& keys = experiment_info(c.experiment).keys;
    for (auto it = c.parameters.begin(); it != c.parameters.end(); ++it)
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            throw std::invalid_argument("unknown parameter for " + std::string(experiment_info(c.experiment).name) +
                                        ": " + it.key());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    return c;
}

namespace detail {

template <class T>
T param(const json& p, const char* key, T fallback) {
    return p.contains(key) ? p.at(key).get<T>() : fallback;
}

// A seed list is either explicit or a count starting at the config seed.
inline std::vector<std::uint64_t> seed_list(const json& p, const char* key, std::uint64_t base, std::size_t count) {
    if (p.contains(key)) {
        const auto& v = p.at(key);
        if (v.is_number_integer()) {
            count = v.get<std::size_t>();
        } else {
            auto out = v.get<std::vector<std::uint64_t>>();
            if (out.empty()) throw std::invalid_argument(std::string("empty seed list: ") + key);
            return out;
        }
    }
    if (count == 0) throw std::invalid_argument(std::string("empty seed list: ") + key);
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = base + i;
    return out;
}

inline GridPolicy policy(const json& p, std::uint64_t seed) {
    GridPolicy pol;
    pol.cutoff = param(p, "cutoff", pol.cutoff);
    pol.oversample = param(p, "oversample", pol.oversample);
    pol.budget = param(p, "budget", pol.budget);
    pol.mc_seed += seed - 1;
    return pol;
}

inline std::pair<double, double> band(const json& p, double lo, double hi) {
    if (!p.contains("band")) return {lo, hi};
    auto b = p.at("band").get<std::vector<double>>();
    if (b.size() != 2 || !(b[0] < b[1])) throw std::invalid_argument("band must be [lo, hi] with lo < hi");
    return {b[0], b[1]};
}

inline const std::vector<double>& default_R() {
    static const std::vector<double> r{16, 32, 64, 128, 256};
    return r;
}

}  // namespace detail

inline ScanResult run_experiment(const ExperimentConfig& c) {
    using detail::param;
    const json& p = c.parameters;
    switch (c.experiment) {
        case Experiment::ratio_scan:
            return run_ratio_scan(param(p, "measures", default_corpus()), param(p, "R_list", detail::default_R()),
                                  detail::policy(p, c.seed), c.seed);
        case Experiment::knapp_circle: {
            KnappOptions o;
            o.R_list = param(p, "R_list", o.R_list);
            o.eta = param(p, "eta", o.eta);
            std::tie(o.band_lo, o.band_hi) = detail::band(p, o.band_lo, o.band_hi);
            o.approx_seeds = detail::seed_list(p, "approx_seeds", c.seed, 3);
            o.pol = detail::policy(p, c.seed);
            return run_knapp_circle(o);
        }
        case Experiment::cantor_dichotomy: {
            CantorOptions o;
            o.R_list = param(p, "R_list", o.R_list);
            o.seeds = detail::seed_list(p, "seeds", c.seed, 10);
            o.stages = param(p, "stages", o.stages);
            o.branching = param(p, "branching", o.branching);
            o.capture_R = param(p, "capture_R", o.capture_R);
            std::tie(o.band_lo, o.band_hi) = detail::band(p, o.band_lo, o.band_hi);
            o.gap_min = param(p, "gap_min", o.gap_min);
            if (p.contains("circle_slope")) o.circle_slope = p.at("circle_slope").get<double>();
            o.pol = detail::policy(p, c.seed);
            return run_cantor_dichotomy(o);
        }
        case Experiment::polygon_scaling:
            return run_polygon_scaling(
                param(p, "bodies", std::vector<std::string>{"square", "hexagon", "lacunary6", "disk"}),
                param(p, "R_list", detail::default_R()), param(p, "tolerance", 0.35), detail::policy(p, c.seed));
        case Experiment::convex_degree: {
            ConvexOptions o;
            o.bodies = param(p, "bodies", o.bodies);
            o.R_list = param(p, "R_list", o.R_list);
            o.eta = param(p, "eta", o.eta);
            o.slope_tol = param(p, "slope_tolerance", o.slope_tol);
            o.concentration_max = param(p, "concentration_max", o.concentration_max);
            o.include_vertex_fans = param(p, "include_vertex_fans", o.include_vertex_fans);
            o.pol = detail::policy(p, c.seed);
            return run_convex_degree(o);
        }
        case Experiment::approx_sweep: {
            ApproxSweepOptions o;
            o.R = param(p, "R", o.R);
            o.eta = param(p, "eta", o.eta);
            o.oversample = param(p, "oversample", o.oversample);
            o.Cd = param(p, "Cd", o.Cd);
            o.multipliers = param(p, "multipliers", o.multipliers);
            o.variance_samples = param(p, "variance_samples", o.variance_samples);
            o.seeds = detail::seed_list(p, "seeds", c.seed, 20);
            return run_approx_sweep(param(p, "measures", std::vector<std::string>{"arc", "segment", "square"}), o);
        }
        case Experiment::recovery_phase: {
            RecoveryOptions o;
            o.grid = param(p, "grid", o.grid);
            o.sparsity = param(p, "sparsity", o.sparsity);
            o.mask_frac = param(p, "mask_frac", o.mask_frac);
            o.max_iters = param(p, "max_iters", o.max_iters);
            o.tol = param(p, "tol", o.tol);
            o.nonneg = param(p, "nonneg", o.nonneg);
            o.schedule = param(p, "schedule", o.schedule);
            o.seeds = detail::seed_list(p, "seeds", c.seed, 50);
            return run_recovery_phase(o);
        }
        case Experiment::discrete_suite: {
            DiscreteOptions o;
            o.N = param(p, "N", o.N);
            o.p = param(p, "p", o.p);
            o.gamma0 = param(p, "gamma0", o.gamma0);
            o.C_T = param(p, "C_T", o.C_T);
            o.seeds = detail::seed_list(p, "seeds", c.seed, 200);
            return run_discrete_suite(o);
        }
        case Experiment::l2_counterexample: {
            std::vector<std::pair<double, double>> pairs{{1, 3}, {10, 41}};
            if (p.contains("pairs")) {
                pairs.clear();
                for (auto& v : p.at("pairs")) {
                    auto cl = v.get<std::vector<double>>();
                    if (cl.size() != 2) throw std::invalid_argument("pairs are [C, L]");
                    pairs.emplace_back(cl[0], cl[1]);
                }
            }
            return run_l2_counterexample(pairs, param(p, "R", 64.0), param(p, "b", 0.5));
        }
    }
    throw std::logic_error("unhandled experiment");
}

}  // namespace frlab
