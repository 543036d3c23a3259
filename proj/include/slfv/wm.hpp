#pragma once

#include "slfv/core.hpp"
#include "slfv/operators.hpp"
#include "slfv/pde.hpp"

#include <Eigen/Dense>

#include <vector>

namespace slfv {

// e^{scale*A} by scaling-and-squaring over a truncated Taylor series:
// s = max(0, ceil(log2 ||scale*A||_inf)), terms until ||term|| < 1e-16 ||sum||
// (cap 60), then square s times. Raw output; no clamping here.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A, double scale = 1.0);

struct LineageKernel {
    Eigen::MatrixXd Q;              // lineage generator
    Eigen::MatrixXd P;              // e^{rate_scale Q}, clamped row-stochastic
    std::vector<Eigen::MatrixXd> K; // K[0]=I, K[t]=K[t-1]*P
    Eigen::VectorXd D;              // coalescence weights 1/(n(i)+1)
};

struct ThetaMatrix {
    Eigen::MatrixXd theta; // sum_{t=1..t_max} e^{-2 mu t} K_t D K_t^T
    int t_max = 28;
    double mu = 0.0;
    double rate_scale = 1.0;
};

struct KernelResult {
    LineageKernel kernel;
    ThetaMatrix theta;
};

KernelResult build_kernel(const SiteFunction& n, double mu, int t_max, double rate_scale = 1.0,
                          Boundary bc = Boundary::clip);

// Time-inhomogeneous identity weights: site-indicator densities are propagated
// backward through dG/ds = -A_s^* G with frozen-coefficient midpoint steps on
// the trajectory's time grid (A_s = rate_const * Q(n_s)), then
// W(l1,l2) = trapezoid_s e^{-2 mu (t-s)} (G^T diag(1/(n_s+1)) G)(l1,l2),
// optionally carrying the u^2 V_R^2 prefactor.
Eigen::MatrixXd theta_time_dependent(const PdeTrajectory& path, double mu, const ModelParams& p,
                                     double s0, double t, double rate_const,
                                     bool wmf_prefactor = false);

// Predicted raw identity probability theta/(N*delta), and its inverse
// (simulation values lifted onto the theta scale).
Eigen::MatrixXd align_prediction(const Eigen::MatrixXd& theta, double N, double delta);
Eigen::MatrixXd align_simulation(const Eigen::MatrixXd& probabilities, double N, double delta);

} // namespace slfv
