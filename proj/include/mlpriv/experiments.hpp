// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/model.hpp"
#include "mlpriv/privacy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mlpriv {

enum class ExperimentId { kExample1, kExample2, kExample3, kFlipSweep, kCustom };

ExperimentId experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentId id);

// Grids and run controls for the synthetic experiments.  Defaults are desk
// scale; full_scale restores the published grids (hours, not minutes).
struct ExperimentConfig {
    ExperimentId id = ExperimentId::kCustom;
    std::vector<Index> n_grid;
    std::vector<Index> l_grid;
    Index k = 0;                    // 0 = experiment default
    std::vector<double> b_grid;     // example1: f_i ~ Unif(0, b)
    std::vector<double> a_grid;     // example3: |S| = floor(2 n^a)
    std::vector<double> beta_grid;  // flip sweep: fraction of strict-privacy nodes
    std::vector<double> eps_grid;   // custom: uniform privacy budget sweep
    int replications = 0;           // 0 = experiment default
    std::uint64_t seed = 0;
    std::string out_dir;
    bool full_scale = false;
    double tau = 0.1;
    int restarts = 10;

    void validate() const;
    // Fills empty grids with the defaults for `id` (desk scale unless
    // full_scale is set).
    void apply_defaults();
};

// Reads "key = value" lines (# comments, blank lines ok) into a config.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// One replication outcome; error is NaN when the cell failed (the message
// then carries the diagnostic).
struct ReplicationRow {
    Index n = 0;
    Index l = 0;
    Index k = 0;
    std::string param_name;
    double param_value = 0.0;
    int replication = 0;
    double error = 0.0;
    std::string message;
};

struct ExperimentTable {
    ExperimentId id = ExperimentId::kCustom;
    std::vector<ReplicationRow> rows;  // ordered by (cell index, replication)

    // CSV with schema experiment,n,L,K,param_name,param_value,replication,hamming_error
    std::string to_csv() const;
    // Per-cell mean and standard error.
    std::string summary_csv() const;
};

ExperimentTable run_example1(const ExperimentConfig& cfg);
ExperimentTable run_example2(const ExperimentConfig& cfg);
ExperimentTable run_example3(const ExperimentConfig& cfg);
// Uniform privacy-budget sweep over eps_grid at each (n, L).
ExperimentTable run_uniform_eps_sweep(const ExperimentConfig& cfg);
// Flip-strength sweep on a given network: reference labels come from a
// no-privacy detection pass, then beta n nodes get f = 0.02 (others 0.98).
ExperimentTable run_flip_sweep(const ExperimentConfig& cfg, const MultiLayerNetwork& net, Index k);

// Dispatch by cfg.id; the flip sweep generates its synthetic stand-in
// network (n_grid[0], K, l_grid[0]) when called through here.
ExperimentTable run_experiment(const ExperimentConfig& cfg);

// Writes <out_dir>/<name>_replications.csv and <out_dir>/<name>_summary.csv.
void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentTable& table);

// Per-cell summary used by the trend checks.
struct CellSummary {
    Index n = 0;
    Index l = 0;
    std::string param_name;
    double param_value = 0.0;
    int replications = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
};
std::vector<CellSummary> summarize(const ExperimentTable& table);

// Spearman rank correlation between x and y (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mlpriv
