#pragma once

#include "slfv/core.hpp"
#include "slfv/operators.hpp"

#include <vector>

namespace slfv {

enum class ReactionScale { with_uVR, without_uVR };

struct PdeConfig {
    double dt = 0.0;              // <= 0 requests 0.5 * dt_stable
    double tol_steady = 1e-10;
    double bc_value = 8.0;        // Dirichlet mass under clip
    ReactionScale reaction_scale = ReactionScale::without_uVR;
    long max_steps = 2000000;
    int record_stride = 1;        // trajectory sampling stride in steps

    double resolved_dt(const ModelParams& p) const;
};

// Explicit-Euler stability bound for diffusion constant u V_R R^2/(d+2), unit spacing.
double dt_stable(const ModelParams& p);

struct PdeTrajectory {
    std::vector<double> times;
    std::vector<SiteFunction> profiles;
};

// dn/dt = u V_R R^2/(d+2) * Lap n + rscale * r_x(n) n; clip pins boundaries at
// bc_value every step, wrap uses the periodic Laplacian. Throws on blow-up.
PdeTrajectory evolve_reaction_diffusion(const SiteFunction& n0, const ModelParams& p,
                                        const PdeConfig& cfg, double T);

struct SteadyResult {
    SiteFunction profile;
    bool converged = false;
    double residual = 0.0; // max-norm of the stationarity display at the returned profile
    long steps = 0;
};

// Time-march from n == bc_value until max|dn/dt| < tol_steady.
SteadyResult steady_state(const ModelParams& p, const PdeConfig& cfg);

// Pre-limit deterministic approximation: dm/dt = L^N m + R^N_m m with the
// discrete averaging operators at scale delta.
PdeTrajectory evolve_deterministic_m(const SiteFunction& m0, const ModelParams& p, double delta,
                                     double T, double dt = 0.0, int record_stride = 1);

} // namespace slfv
