#pragma once

#include "slfv/analysis.hpp"
#include "slfv/core.hpp"
#include "slfv/pde.hpp"
#include "slfv/sim.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slfv {

struct PredictConfig {
    int t_max = 28;
    double rate_scale = 1.0;
    double N = 2.8;
    double delta = 1.0;
    bool wmf_prefactor = false;
    PdeConfig pde;
};

struct AnalysisConfig {
    std::vector<int> reference_sites = {45, 60, 75};
    int replicates = 2000;
    double qv_horizon = 1.0;
    int qv_replicates = 2000;
};

struct IoConfig {
    std::string out_dir = "out";
    bool write_snapshots = false;
};

struct ExperimentConfig {
    ModelParams params; // growth spec included
    bool n_max_auto = true;

    double T_end = 125.0;
    double initial_mass = 3.0;
    InitialState initial_state = InitialState::all_uniform_pool;
    std::string snapshot_path;
    int type_capacity = 2000;
    bool record_events = false;

    PredictConfig predict;
    AnalysisConfig analysis;
    IoConfig io;
    uint64_t seed = 12345;

    // Resolve n_max (auto -> suggest_n_max) and validate; idempotent.
    void finalize();

    SimConfig make_sim_config() const;

    // Fixed-order serialization of every resolved key; basis for the hash.
    std::string canonical() const;
    std::string hash() const;
};

// Sections model/sim/predict/analysis/io/rng; '#'/';' comments; unknown
// sections or keys are errors.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// "section.key=value" (CLI dotted-path override).
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

} // namespace slfv
