#pragma once

#include "slfv/core.hpp"
#include "slfv/field.hpp"

#include <Eigen/Dense>

#include <vector>

namespace slfv {

using SiteFunction = std::vector<double>;

// Ball average with radius `b` sites on a working grid of arbitrary length.
// Uses long-double prefix sums so refined-grid diagnostics (balls of 10^3..10^4
// sites) are not limited by summation error. Clip averages over present sites.
SiteFunction ball_average(const SiteFunction& phi, int b, Boundary bc);

// u V_R delta^{-2} (double ball-average - phi), ball radius ceil(delta*R) sites.
SiteFunction apply_jump_operator(const SiteFunction& phi, const ModelParams& p, double delta);

// Same operator with an explicitly chosen ball-site radius; the convergence
// diagnostics run on refined working grids where the radius is R/delta^2 sites.
SiteFunction apply_jump_operator_radius(const SiteFunction& phi, const ModelParams& p,
                                        double delta, int ball_sites);

// u V_R ballavg( r_x(nbar(x)) * ballavg(phi) ), ball radius ceil(delta*R).
SiteFunction apply_growth_operator(const SiteFunction& phi, const SiteFunction& n,
                                   const GrowthSpec& spec, const ModelParams& p, double delta);

// Lineage random-walk generator: Q(i,i+-1) = n(i+-1)/n(i), zero row sums.
// clip: boundary rows couple to the in-grid neighbour only (reflecting).
Eigen::MatrixXd lineage_generator(const SiteFunction& n, Boundary bc = Boundary::clip);

// (Q f)(i) computed directly in O(L); same stencil as lineage_generator.
SiteFunction generator_apply(const SiteFunction& n, const SiteFunction& f, Boundary bc = Boundary::clip);

struct DriftReport {
    double max_identity_error = 0.0; // |(Qf)(i) - [n(i+1)(f(i+1)-f(i)) + n(i-1)(f(i-1)-f(i))]/n(i)|
};

DriftReport drift_consistency_check(const SiteFunction& n, const SiteFunction& f);

// Predictable quadratic-variation rate of <n, phi> evaluated at a snapshot:
// (u^2/delta^{d+2}) sum_x [1/((nbar+1)N)] (sum_{z in B(x)} ((1+delta^2 r_x(nbar))nbar - n(z)) phi(z))^2
double qv_formula(const SiteFunction& n, const SiteFunction& phi, const ModelParams& p,
                  const GrowthSpec& spec, double N, double delta);

// Instantaneous drift rate of <n, phi>: sum over centres of event rate times
// conditional mean mass change, u sum_x sum_{z in B(x)} ((1+r_x(nbar))nbar - n(z)) phi(z).
double mean_drift_rate(const SiteFunction& n, const SiteFunction& phi, const ModelParams& p,
                       const GrowthSpec& spec);

} // namespace slfv
