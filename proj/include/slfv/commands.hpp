#pragma once

#include "slfv/analysis.hpp"
#include "slfv/config.hpp"
#include "slfv/pde.hpp"
#include "slfv/wm.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace slfv {

// Dispatch `count` jobs over `threads` workers; job k is independent and
// writes only to slot k, so results are scheduling-independent.
void run_jobs(int count, int threads, const std::function<void(int)>& job);

// Smooth strictly-positive bump test function used by the diagnostics.
SiteFunction make_bump(int grid_len);

struct SimulateResult {
    std::vector<double> mean_profile;
    IdentityTable table; // raw probability scale
    std::vector<std::vector<std::vector<double>>> samples; // [rep][ref][x]
    uint64_t candidates = 0;
    uint64_t accepted = 0;
    std::vector<std::string> written;
};

SimulateResult cmd_simulate(const ExperimentConfig& cfg, int threads);

struct PredictResult {
    SteadyResult steady;
    Eigen::MatrixXd theta;
    Eigen::MatrixXd prediction; // theta/(N delta)
    std::vector<std::string> written;
};

PredictResult cmd_predict(const ExperimentConfig& cfg);

struct DecorrelationRow {
    int ref;
    double sim_ratio;  // mean(ref, ref+10) / mean(ref, ref+1)
    double pred_ratio;
};

struct CompareResult {
    double coverage_near = 0.0; // |x - ref| <= 20 cells, prediction inside 5-95 band
    double coverage_all = 0.0;
    int cells_near = 0;
    bool coverage_defined = true; // false when bands are degenerate (1 replicate)
    double best_fit_N = 0.0;
    std::vector<DecorrelationRow> decorrelation;
    std::vector<std::string> written;
};

CompareResult cmd_compare(const ExperimentConfig& cfg, const std::string& sim_dir,
                          const std::string& pred_dir);

struct ConvergenceRow {
    double delta;
    double max_error;
};

struct DiagnosticsResult {
    std::vector<ConvergenceRow> convergence;
    double convergence_slope = 0.0;
    double drift_identity_residual = 0.0;
    QvReport qv;
    std::vector<std::string> written;
};

DiagnosticsResult cmd_diagnostics(const ExperimentConfig& cfg, int threads);

SteadyResult cmd_steady_state(const ExperimentConfig& cfg);

// Shared with the acceptance suite: the refined-grid jump-operator study at
// delta = 1/4 ... 1/32 under wrap against the continuum diffusion action.
std::vector<ConvergenceRow> jump_operator_convergence(const ModelParams& base,
                                                      const std::vector<double>& deltas);
double fit_log2_slope(const std::vector<ConvergenceRow>& rows);

} // namespace slfv
