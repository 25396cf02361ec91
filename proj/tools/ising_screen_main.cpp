#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ising/estimators.hpp"
#include "ising/experiments.hpp"
#include "ising/io.hpp"
#include "ising/sampler.hpp"
#include "ising/topology.hpp"

namespace {

struct GenerateArgs {
    std::string topology;
    int side = 4;
    double coupling = 0.5;
    int p = 16;
    int degree = 3;
    double weight_low = 0.7;
    double weight_high = 0.9;
    std::uint64_t seed = 0;
    std::string out;
};

struct SampleArgs {
    std::string model;
    int n = 1000;
    std::string method = "exact";
    int sweeps = 1000;
    std::uint64_t seed = 0;
    std::string out;
    bool header = false;
};

struct FitArgs {
    std::string data;
    std::string validation;
    std::string method;
    std::string out;
};

int run_generate(const GenerateArgs& args) {
    ising::ConnectivityMatrix w;
    if (args.topology == "lattice") {
        w = ising::lattice_topology(args.side, args.coupling);
    } else if (args.topology == "random-regular") {
        w = ising::random_regular_topology(args.p, args.degree, args.weight_low,
                                           args.weight_high, args.seed);
    } else {
        std::cerr << "unknown topology: " << args.topology << "\n";
        return 1;
    }
    ising::save_connectivity(w, args.out);
    return 0;
}

int run_sample(const SampleArgs& args) {
    const ising::ConnectivityMatrix w = ising::load_connectivity(args.model);
    ising::SamplerConfig config;
    if (args.method == "exact") {
        config.method = ising::SamplerMethod::Exact;
    } else if (args.method == "gibbs") {
        config.method = ising::SamplerMethod::Gibbs;
    } else {
        std::cerr << "unknown sampler method: " << args.method << "\n";
        return 1;
    }
    config.gibbs_sweeps = args.sweeps;
    config.rng_seed = args.seed;
    const ising::SampleSet samples = ising::draw_samples(w, args.n, config);
    ising::save_samples_csv(samples, args.out, args.header);
    return 0;
}

int run_fit(const FitArgs& args) {
    const ising::SampleSet train = ising::load_samples_csv(args.data);
    const ising::MethodSpec spec = ising::MethodSpec::defaults(ising::method_from_token(args.method));

    std::optional<ising::SampleSet> validation;
    if (!args.validation.empty()) validation = ising::load_samples_csv(args.validation);
    if (!validation.has_value() && spec.tuning == ising::Tuning::ValidationLikelihood) {
        std::cerr << "method " << args.method << " needs --validation\n";
        return 1;
    }

    const ising::GraphEstimate est =
        ising::fit_graph(train, validation ? &*validation : nullptr, spec);
    ising::save_estimate(est, args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure learning for sparse binary Ising models"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a coupling-matrix JSON file");
    generate->add_option("--topology", gen.topology, "lattice or random-regular")->required();
    generate->add_option("--side", gen.side, "lattice side length");
    generate->add_option("--coupling", gen.coupling, "lattice coupling value");
    generate->add_option("--p", gen.p, "node count (random-regular)");
    generate->add_option("--degree", gen.degree, "node degree (random-regular)");
    generate->add_option("--weight-low", gen.weight_low, "coupling range low end");
    generate->add_option("--weight-high", gen.weight_high, "coupling range high end");
    generate->add_option("--seed", gen.seed, "rng seed (random-regular)");
    generate->add_option("--out", gen.out, "output JSON path")->required();

    SampleArgs smp;
    auto* sample = app.add_subcommand("sample", "Draw samples from a model");
    sample->add_option("--model", smp.model, "model JSON path")->required();
    sample->add_option("--n", smp.n, "number of samples")->required();
    sample->add_option("--method", smp.method, "exact or gibbs");
    sample->add_option("--sweeps", smp.sweeps, "gibbs sweeps per sample");
    sample->add_option("--seed", smp.seed, "rng seed");
    sample->add_option("--out", smp.out, "output CSV path")->required();
    sample->add_flag("--header", smp.header, "write a z0..z{p-1} header line");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Estimate the connectivity graph from samples");
    fit_cmd->add_option("--data", fit.data, "training CSV path")->required();
    fit_cmd->add_option("--validation", fit.validation, "validation CSV path");
    fit_cmd->add_option("--method", fit.method,
                        "l0l2-lr|l0l2-ise|l1-lr|l1constr-lr|l1-ise")->required();
    fit_cmd->add_option("--out", fit.out, "output JSON path")->required();

    std::string config_path, out_dir;
    auto* experiment = app.add_subcommand("experiment", "Run a Monte-Carlo recovery grid");
    experiment->add_option("--config", config_path, "experiment config JSON")->required();
    experiment->add_option("--out-dir", out_dir, "output directory")->required();

    std::string records_path, report_dir;
    auto* report = app.add_subcommand("report", "Rebuild reports from a records file");
    report->add_option("--records", records_path, "records.csv path")->required();
    report->add_option("--out-dir", report_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return run_generate(gen);
        if (sample->parsed()) return run_sample(smp);
        if (fit_cmd->parsed()) return run_fit(fit);
        if (experiment->parsed()) {
            const ising::ExperimentConfig config = ising::load_experiment_config(config_path);
            const ising::GridResult result = ising::run_grid(config);
            for (const auto& f : result.failures) {
                std::cerr << "fit failed: " << ising::method_token(f.method) << " p=" << f.p
                          << " n=" << f.n << " rep=" << f.repetition << ": " << f.message << "\n";
            }
            ising::emit_report(result.records, out_dir);
            return 0;
        }
        if (report->parsed()) {
            ising::emit_report(ising::load_records_csv(records_path), report_dir);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
