#include "slfv/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slfv {

double dt_stable(const ModelParams& p) {
    return 0.9 * (p.d + 2) / (2.0 * p.u * p.ball_volume() * p.R * p.R);
}

double PdeConfig::resolved_dt(const ModelParams& p) const {
    double stable = dt_stable(p);
    if (dt <= 0.0) return 0.5 * stable;
    if (dt > stable) throw std::invalid_argument("pde dt exceeds the explicit stability bound");
    return dt;
}

namespace {

// rhs = D Lap n + rscale r(n) n; returns max |rhs|.
double pde_rhs(const SiteFunction& n, const ModelParams& p, const PdeConfig& cfg, SiteFunction& rhs) {
    const int L = p.grid_len;
    const double D = p.u * p.ball_volume() * p.R * p.R / (p.d + 2.0);
    const double rscale = cfg.reaction_scale == ReactionScale::with_uVR ? p.u * p.ball_volume() : 1.0;
    double mx = 0.0;
    for (int i = 0; i < L; ++i) {
        double lap;
        if (p.boundary == Boundary::wrap) {
            lap = n[(i + 1) % L] + n[(i + L - 1) % L] - 2.0 * n[i];
        } else {
            if (i == 0 || i == L - 1) {
                rhs[i] = 0.0; // Dirichlet rows held fixed
                continue;
            }
            lap = n[i + 1] + n[i - 1] - 2.0 * n[i];
        }
        rhs[i] = D * lap + rscale * growth_eval(p.growth, i, n[i]) * n[i];
        mx = std::max(mx, std::abs(rhs[i]));
    }
    return mx;
}

double max_abs(const SiteFunction& n) {
    double mx = 0.0;
    for (double v : n) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        mx = std::max(mx, std::abs(v));
    }
    return mx;
}

// prev_max is updated in place; aborts when max |n| doubles within one step.
void check_blowup(const SiteFunction& n, double& prev_max, long step, const char* what) {
    double mx = max_abs(n);
    if (mx > 2.0 * std::max(prev_max, 1e-12))
        throw std::runtime_error(std::string(what) + ": instability detected at step " +
                                 std::to_string(step) + " (max |n| = " + std::to_string(mx) + ")");
    prev_max = mx;
}

} // namespace

PdeTrajectory evolve_reaction_diffusion(const SiteFunction& n0, const ModelParams& p,
                                        const PdeConfig& cfg, double T) {
    if (static_cast<int>(n0.size()) != p.grid_len)
        throw std::invalid_argument("profile length does not match grid");
    const double dt = cfg.resolved_dt(p);
    SiteFunction n = n0;
    if (p.boundary == Boundary::clip) {
        n.front() = cfg.bc_value;
        n.back() = cfg.bc_value;
    }
    PdeTrajectory traj;
    traj.times.push_back(0.0);
    traj.profiles.push_back(n);
    SiteFunction rhs(p.grid_len, 0.0);
    double prev_max = max_abs(n);
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        double h = std::min(dt, T - t);
        pde_rhs(n, p, cfg, rhs);
        for (int i = 0; i < p.grid_len; ++i) n[i] += h * rhs[i];
        if (p.boundary == Boundary::clip) {
            n.front() = cfg.bc_value;
            n.back() = cfg.bc_value;
        }
        t += h;
        check_blowup(n, prev_max, k, "evolve_reaction_diffusion");
        if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) {
            traj.times.push_back(t);
            traj.profiles.push_back(n);
        }
    }
    return traj;
}

SteadyResult steady_state(const ModelParams& p, const PdeConfig& cfg) {
    const double dt = cfg.resolved_dt(p);
    SiteFunction n(p.grid_len, cfg.bc_value);
    SiteFunction rhs(p.grid_len, 0.0);
    SteadyResult res;
    double prev_max = max_abs(n);
    for (long k = 0; k <= cfg.max_steps; ++k) {
        double mx = pde_rhs(n, p, cfg, rhs);
        if (mx < cfg.tol_steady) {
            res.converged = true;
            res.residual = mx;
            res.steps = k;
            res.profile = n;
            return res;
        }
        for (int i = 0; i < p.grid_len; ++i) n[i] += dt * rhs[i];
        if (p.boundary == Boundary::clip) {
            n.front() = cfg.bc_value;
            n.back() = cfg.bc_value;
        }
        check_blowup(n, prev_max, k, "steady_state");
    }
    res.converged = false;
    res.residual = pde_rhs(n, p, cfg, rhs);
    res.steps = cfg.max_steps;
    res.profile = n;
    return res;
}

PdeTrajectory evolve_deterministic_m(const SiteFunction& m0, const ModelParams& p, double delta,
                                     double T, double dt, int record_stride) {
    if (static_cast<int>(m0.size()) != p.grid_len)
        throw std::invalid_argument("profile length does not match grid");
    const double uVR = p.u * p.ball_volume();
    if (dt <= 0.0) dt = 0.4 / (uVR * (2.0 / (delta * delta) + 20.0));
    SiteFunction m = m0;
    PdeTrajectory traj;
    traj.times.push_back(0.0);
    traj.profiles.push_back(m);
    double prev_max = max_abs(m);
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        double h = std::min(dt, T - t);
        SiteFunction jump = apply_jump_operator(m, p, delta);
        SiteFunction growth = apply_growth_operator(m, m, p.growth, p, delta);
        for (int i = 0; i < p.grid_len; ++i) m[i] += h * (jump[i] + growth[i]);
        t += h;
        check_blowup(m, prev_max, k, "evolve_deterministic_m");
        if ((k + 1) % record_stride == 0 || k + 1 == steps) {
            traj.times.push_back(t);
            traj.profiles.push_back(m);
        }
    }
    return traj;
}

} // namespace slfv
