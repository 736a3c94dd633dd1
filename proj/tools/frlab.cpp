#include <CLI11.hpp>
#include <frlab/frlab.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

using frlab::Experiment;
using frlab::json;

namespace {

struct Sub {
    Experiment fallback;
    std::vector<Experiment> allowed;
};

const std::map<std::string, Sub>& subcommands() {
    static const std::map<std::string, Sub> m{
        {"ratio", {Experiment::ratio_scan, {Experiment::ratio_scan}}},
        {"scan",
         {Experiment::knapp_circle,
          {Experiment::knapp_circle, Experiment::cantor_dichotomy, Experiment::polygon_scaling, Experiment::ratio_scan,
           Experiment::l2_counterexample}}},
        {"approx", {Experiment::approx_sweep, {Experiment::approx_sweep}}},
        {"recover", {Experiment::recovery_phase, {Experiment::recovery_phase}}},
        {"discrete", {Experiment::discrete_suite, {Experiment::discrete_suite}}},
        {"convex", {Experiment::convex_degree, {Experiment::convex_degree, Experiment::polygon_scaling}}},
    };
    return m;
}

frlab::ExperimentConfig load(const std::string& path, Experiment fallback) {
    if (path.empty()) {
        frlab::ExperimentConfig c;
        c.experiment = fallback;
        return c;
    }
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    return frlab::parse_config(json::parse(f));
}

void print_metrics(const frlab::ScanResult& r) {
    if (r.fit) std::cout << "slope " << frlab::fmt(r.fit->slope) << " +- " << frlab::fmt(r.fit->stderr_) << '\n';
    for (auto& [k, v] : r.metrics) std::cout << k << " " << frlab::fmt(v) << '\n';
    std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier ratio experiments"};
    app.require_subcommand(1);

    std::string config, out;
    std::optional<std::uint64_t> seed;
    // flag overrides for the discrete and recovery scenarios
    std::optional<std::size_t> N, seeds;
    std::optional<double> p, mask_frac;
    std::optional<int> grid, sparsity;

    std::map<std::string, CLI::App*> subs;
    for (auto& [name, info] : subcommands()) {
        auto* s = app.add_subcommand(name, std::string("run the ") + frlab::experiment_info(info.fallback).name +
                                               " family of scenarios");
        s->add_option("--config", config, "JSON experiment config (schema 1)")->check(CLI::ExistingFile);
        s->add_option("--seed", seed, "base seed");
        s->add_option("--out", out, "output directory, or a .csv path for the main table");
        s->add_option("--seeds", seeds, "number of seeds");
        if (name == "discrete") {
            s->add_option("--N", N, "group order");
            s->add_option("--p", p, "Bernoulli membership probability");
        }
        if (name == "recover") {
            s->add_option("--grid", grid, "grid side n (power of two <= 256)");
            s->add_option("--sparsity", sparsity, "number of atoms");
            s->add_option("--mask-frac", mask_frac, "fraction of unobserved frequencies");
        }
        subs[name] = s;
    }
    auto* acc = app.add_subcommand("accept", "run every acceptance criterion");
    acc->add_option("--config", config, "ignored; accepted for a uniform grammar");
    acc->add_option("--seed", seed, "ignored; the suite uses fixed seeds");
    acc->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (acc->parsed()) {
            auto sum = frlab::run_acceptance_suite(out.empty() ? "acceptance_out" : out, std::cout);
            return sum.all_pass() ? 0 : 1;
        }
        std::string name;
        for (auto& [n, s] : subs)
            if (s->parsed()) name = n;
        const Sub& info = subcommands().at(name);
        auto cfg = load(config, info.fallback);
        if (std::find(info.allowed.begin(), info.allowed.end(), cfg.experiment) == info.allowed.end())
            throw std::invalid_argument(std::string("experiment ") + frlab::experiment_info(cfg.experiment).name +
                                        " does not belong to subcommand " + name);
        if (seed) cfg.seed = *seed;
        auto& prm = cfg.parameters;
        if (seeds) {
            const char* key = cfg.experiment == Experiment::knapp_circle ? "approx_seeds" : "seeds";
            if (!prm.contains(key) && std::find(frlab::experiment_info(cfg.experiment).keys.begin(),
                                                frlab::experiment_info(cfg.experiment).keys.end(),
                                                key) == frlab::experiment_info(cfg.experiment).keys.end())
                throw std::invalid_argument("--seeds does not apply to this experiment");
            prm[key] = *seeds;
        }
        if (N) prm["N"] = *N;
        if (p) prm["p"] = *p;
        if (grid) prm["grid"] = *grid;
        if (sparsity) prm["sparsity"] = *sparsity;
        if (mask_frac) prm["mask_frac"] = *mask_frac;
        cfg = frlab::parse_config(json{{"schema", 1},
                                       {"experiment", frlab::experiment_info(cfg.experiment).name},
                                       {"parameters", prm},
                                       {"seed", cfg.seed},
                                       {"output_dir", cfg.output_dir.string()}});

        auto res = frlab::run_experiment(cfg);
        std::filesystem::path dir = out.empty() ? cfg.output_dir : std::filesystem::path(out);
        if (dir.extension() == ".csv") {
            res.name = dir.stem().string();
            dir = dir.has_parent_path() ? dir.parent_path() : ".";
        }
        frlab::write_scan(res, dir);
        print_metrics(res);
        return res.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
