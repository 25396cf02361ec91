#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ising/estimators.hpp"
#include "ising/experiments.hpp"
#include "ising/types.hpp"

namespace ising {

/// {"p": int, "edges": [[i, j, weight], ...]} with i < j.
std::string connectivity_to_json(const ConnectivityMatrix& w);
ConnectivityMatrix connectivity_from_json(const std::string& text);
void save_connectivity(const ConnectivityMatrix& w, const std::filesystem::path& path);
ConnectivityMatrix load_connectivity(const std::filesystem::path& path);

/// One sample per row, entries -1/1, comma separated. With header = true the
/// first line names the columns z0..z{p-1}; the loader detects either form.
void save_samples_csv(const SampleSet& samples, const std::filesystem::path& path,
                      bool header = false);
SampleSet load_samples_csv(const std::filesystem::path& path);

/// Edge list of the final estimate plus a "params" object with the chosen
/// lambda per node or the chosen k.
std::string estimate_to_json(const GraphEstimate& est);
void save_estimate(const GraphEstimate& est, const std::filesystem::path& path);

ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::vector<RunRecord> load_records_csv(const std::filesystem::path& path);

}  // namespace ising
