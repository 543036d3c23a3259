#pragma once

#include "slfv/field.hpp"
#include "slfv/operators.hpp"
#include "slfv/sim.hpp"

#include <string>
#include <vector>

namespace slfv {

// Probability that one individual sampled at l1 and one at l2 carry the same
// type: sum_k rho(l1,k) rho(l2,k) / (n(l1) n(l2)). The uniform pool never
// matches anything, including itself.
double identity_point(const PopulationField& field, int l1, int l2);

// <rho (x) rho, (psi1 (x) psi2) 1_diag> / (<n,psi1><n,psi2>).
double identity_weighted(const PopulationField& field, const SiteFunction& psi1,
                         const SiteFunction& psi2);

// Unnormalised numerator of identity_weighted (for bilinearity checks).
double identity_weighted_numerator(const PopulationField& field, const SiteFunction& psi1,
                                   const SiteFunction& psi2);

struct IdentityStats {
    double mean = 0.0;
    double median = 0.0;
    double p25 = 0.0, p75 = 0.0;
    double p05 = 0.0, p95 = 0.0;
};

// Linear interpolation between order statistics (type-7): h = (n-1)p.
double percentile(std::vector<double> values, double p);

struct IdentityTable {
    std::vector<int> reference_sites;
    int grid_len = 0;
    int n_replicates = 0;
    std::string scale = "raw";
    std::vector<std::vector<IdentityStats>> cells; // [ref][x]

    const IdentityStats& at(int ref_index, int x) const { return cells[ref_index][x]; }
};

// samples[rep][ref][x] -> per-cell statistics.
IdentityTable replicate_stats(const std::vector<std::vector<std::vector<double>>>& samples,
                              const std::vector<int>& reference_sites, int grid_len);

struct QvReport {
    double var_mc = 0.0;        // Var over replicates of the compensated increment
    double qv_integral = 0.0;   // time-integral of qv_formula along the mean path
    double ratio = 0.0;         // var_mc / qv_integral
    int replicates = 0;
    double horizon = 0.0;
};

// Monte-Carlo check of the predictable quadratic variation: per replicate the
// increment <n_T,phi> - <n_0,phi> - int drift dt is accumulated exactly over
// the piecewise-constant path; the variance across replicates is compared with
// the qv_formula integral along the empirical mean path (sampled at
// `mean_path_samples` points). Deterministic given cfg.seed for any thread count.
QvReport qv_diagnostic(const SimConfig& cfg, const SiteFunction& phi, double horizon,
                       int replicates, int threads = 1, int mean_path_samples = 17);

// Geometric-mean alignment constant: exp(mean log(theta/(delta*sim_mean)))
// over cells with positive theta and positive simulated mean.
double best_alignment_N(const std::vector<double>& theta_cells,
                        const std::vector<double>& sim_mean_cells, double delta);

} // namespace slfv
