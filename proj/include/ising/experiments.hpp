#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ising/estimators.hpp"
#include "ising/sampler.hpp"
#include "ising/topology.hpp"

namespace ising {

struct TopologySpec {
    enum class Kind { Lattice, RandomRegular };
    Kind kind = Kind::Lattice;
    double coupling = 0.5;     // lattice
    int degree = 3;            // random regular
    double weight_low = 0.7;   // random regular
    double weight_high = 0.9;  // random regular
};

struct ExperimentConfig {
    TopologySpec topology;
    std::vector<int> p_list;
    std::vector<int> n_list;  // strictly increasing
    int repetitions = 30;
    std::vector<MethodSpec> methods;
    std::uint64_t master_seed = 0;
    // Absent: exact sampling for p <= 16, otherwise Gibbs with 1000 sweeps.
    std::optional<SamplerConfig> sampler;
    int workers = 0;  // 0: hardware concurrency
};

struct RunRecord {
    Method method = Method::L0L2Lr;
    int p = 0;
    int n = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    bool recovered = false;  // exact edge-set equality of the final graph
    double l2_error = 0.0;   // Frobenius distance of the pre-threshold estimate to W*
    double wall_time = 0.0;  // seconds
};

struct CellFailure {
    Method method;
    int p, n, repetition;
    std::string message;
};

struct GridResult {
    std::vector<RunRecord> records;   // sorted by (p, n, repetition, method)
    std::vector<CellFailure> failures;
};

/// Ground-truth matrix for one grid cell.
ConnectivityMatrix make_topology(const TopologySpec& topo, int p, std::uint64_t seed);

/// Runs the full methods x p x n x repetitions grid. Each cell derives its
/// seed from (master_seed, p, n, repetition), draws W* plus train/validation
/// sets of size n, and fits every method on the shared data. A failing fit is
/// recorded as a non-recovery instead of aborting the grid. Deterministic for
/// a fixed master_seed regardless of the worker count.
GridResult run_grid(const ExperimentConfig& config);

double success_ratio(const std::vector<RunRecord>& records, Method m, int p, int n);

/// Smallest n in the grid with at most max_failures non-recoveries; absent if
/// no n qualifies.
std::optional<int> sample_complexity(const std::vector<RunRecord>& records, Method m,
                                     int p, int max_failures = 3);

/// Running maximum of m* over increasing p. Any missing m* at q <= p makes
/// the value absent from p on.
std::map<int, std::optional<int>> cumulative_complexity(
    const std::map<int, std::optional<int>>& m_star_by_p);

/// Writes records.csv, per-(method, p) phase-transition CSVs, complexity.csv
/// and SVG line plots (success ratio vs n, and n* vs p) into out_dir.
/// records.csv intentionally omits wall_time so re-runs are byte-identical.
void emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir);

}  // namespace ising
