#include "ising/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ising/rng.hpp"

namespace ising {

ConnectivityMatrix make_topology(const TopologySpec& topo, int p, std::uint64_t seed) {
    if (topo.kind == TopologySpec::Kind::Lattice) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p))));
        if (side * side != p) throw std::invalid_argument("lattice needs a square node count");
        return lattice_topology(side, topo.coupling);
    }
    return random_regular_topology(p, topo.degree, topo.weight_low, topo.weight_high, seed);
}

namespace {

SamplerConfig cell_sampler(const ExperimentConfig& config, int p, std::uint64_t seed) {
    SamplerConfig sc;
    if (config.sampler.has_value()) {
        sc = *config.sampler;
    } else {
        sc.method = p <= 16 ? SamplerMethod::Exact : SamplerMethod::Gibbs;
        sc.gibbs_sweeps = 1000;
    }
    sc.rng_seed = seed;
    return sc;
}

struct Cell {
    int p, n, repetition;
};

}  // namespace

GridResult run_grid(const ExperimentConfig& config) {
    if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    for (size_t i = 1; i < config.n_list.size(); ++i) {
        if (config.n_list[i] <= config.n_list[i - 1]) {
            throw std::invalid_argument("n list must be strictly increasing");
        }
    }
    if (config.methods.empty()) throw std::invalid_argument("no methods configured");

    std::vector<Cell> cells;
    for (int p : config.p_list) {
        for (int n : config.n_list) {
            for (int rep = 0; rep < config.repetitions; ++rep) cells.push_back({p, n, rep});
        }
    }

    const size_t n_methods = config.methods.size();
    GridResult result;
    result.records.resize(cells.size() * n_methods);
    std::mutex failure_mutex;

    auto run_cell = [&](size_t cell_idx) {
        const Cell cell = cells[cell_idx];
        const std::uint64_t cell_seed = seed_combine(
            seed_combine(seed_combine(config.master_seed, static_cast<std::uint64_t>(cell.p)),
                         static_cast<std::uint64_t>(cell.n)),
            static_cast<std::uint64_t>(cell.repetition));

        const ConnectivityMatrix w_star =
            make_topology(config.topology, cell.p, seed_combine(cell_seed, 0));
        const SampleSet train =
            draw_samples(w_star, cell.n, cell_sampler(config, cell.p, seed_combine(cell_seed, 1)));
        const SampleSet validation =
            draw_samples(w_star, cell.n, cell_sampler(config, cell.p, seed_combine(cell_seed, 2)));

        const GraphStats stats = graph_stats(w_star);
        const std::optional<double> tau =
            stats.min_edge_weight ? std::optional<double>(*stats.min_edge_weight / 2.0)
                                  : std::nullopt;

        for (size_t m = 0; m < n_methods; ++m) {
            const MethodSpec& spec = config.methods[m];
            RunRecord rec;
            rec.method = spec.method;
            rec.p = cell.p;
            rec.n = cell.n;
            rec.repetition = cell.repetition;
            rec.seed = cell_seed;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const GraphEstimate est =
                    fit_graph(train, &validation, spec, is_l1_family(spec.method) ? tau : std::nullopt);
                rec.recovered = est.w_hat.same_edges(w_star);
                rec.l2_error = (est.w_raw.weights() - w_star.weights()).norm();
            } catch (const std::exception& e) {
                rec.recovered = false;
                rec.l2_error = std::numeric_limits<double>::infinity();
                std::lock_guard<std::mutex> lock(failure_mutex);
                result.failures.push_back(
                    {spec.method, cell.p, cell.n, cell.repetition, e.what()});
            }
            rec.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            result.records[cell_idx * n_methods + m] = rec;
        }
    };

    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    if (workers == 1) {
        for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                    run_cell(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Records are already in (p, n, repetition, method) order by construction.
    return result;
}

double success_ratio(const std::vector<RunRecord>& records, Method m, int p, int n) {
    int total = 0, recovered = 0;
    for (const RunRecord& r : records) {
        if (r.method == m && r.p == p && r.n == n) {
            ++total;
            recovered += r.recovered;
        }
    }
    if (total == 0) throw std::invalid_argument("no records for the requested cell");
    return static_cast<double>(recovered) / total;
}

std::optional<int> sample_complexity(const std::vector<RunRecord>& records, Method m, int p,
                                     int max_failures) {
    std::map<int, std::pair<int, int>> by_n;  // n -> (total, recovered)
    for (const RunRecord& r : records) {
        if (r.method == m && r.p == p) {
            auto& [total, recovered] = by_n[r.n];
            ++total;
            recovered += r.recovered;
        }
    }
    for (const auto& [n, counts] : by_n) {  // std::map iterates n ascending
        if (counts.first - counts.second <= max_failures) return n;
    }
    return std::nullopt;
}

std::map<int, std::optional<int>> cumulative_complexity(
    const std::map<int, std::optional<int>>& m_star_by_p) {
    std::map<int, std::optional<int>> out;
    std::optional<int> running;
    bool broken = false;
    for (const auto& [p, m_star] : m_star_by_p) {
        if (!m_star.has_value()) broken = true;
        if (!broken) running = running ? std::max(*running, *m_star) : *m_star;
        out[p] = broken ? std::nullopt : running;
    }
    return out;
}

}  // namespace ising
