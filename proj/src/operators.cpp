#include "slfv/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace slfv {

SiteFunction ball_average(const SiteFunction& phi, int b, Boundary bc) {
    const int W = static_cast<int>(phi.size());
    std::vector<long double> prefix(W + 1, 0.0L);
    for (int i = 0; i < W; ++i) prefix[i + 1] = prefix[i] + static_cast<long double>(phi[i]);
    auto range_sum = [&](int lo, int hi) -> long double { // inclusive, in-grid indices
        return prefix[hi + 1] - prefix[lo];
    };
    SiteFunction out(W);
    if (bc == Boundary::clip) {
        for (int x = 0; x < W; ++x) {
            int lo = std::max(0, x - b), hi = std::min(W - 1, x + b);
            out[x] = static_cast<double>(range_sum(lo, hi) / (hi - lo + 1));
        }
    } else {
        if (2 * b + 1 > W) throw std::invalid_argument("ball_average: ball larger than wrapped grid");
        const long double total = prefix[W];
        for (int x = 0; x < W; ++x) {
            int lo = x - b, hi = x + b;
            long double s;
            if (lo < 0)
                s = range_sum(0, hi) + range_sum(lo + W, W - 1);
            else if (hi >= W)
                s = range_sum(lo, W - 1) + range_sum(0, hi - W);
            else
                s = range_sum(lo, hi);
            (void)total;
            out[x] = static_cast<double>(s / (2 * b + 1));
        }
    }
    return out;
}

SiteFunction apply_jump_operator_radius(const SiteFunction& phi, const ModelParams& p,
                                        double delta, int ball_sites) {
    const double pref = p.u * p.ball_volume() / (delta * delta);
    SiteFunction dbl = ball_average(ball_average(phi, ball_sites, p.boundary), ball_sites, p.boundary);
    SiteFunction out(phi.size());
    for (size_t i = 0; i < phi.size(); ++i) out[i] = pref * (dbl[i] - phi[i]);
    return out;
}

SiteFunction apply_jump_operator(const SiteFunction& phi, const ModelParams& p, double delta) {
    int b = static_cast<int>(std::ceil(delta * p.R));
    return apply_jump_operator_radius(phi, p, delta, b);
}

SiteFunction apply_growth_operator(const SiteFunction& phi, const SiteFunction& n,
                                   const GrowthSpec& spec, const ModelParams& p, double delta) {
    int b = static_cast<int>(std::ceil(delta * p.R));
    SiteFunction nbar = ball_average(n, b, p.boundary);
    SiteFunction inner = ball_average(phi, b, p.boundary);
    for (size_t x = 0; x < inner.size(); ++x)
        inner[x] *= growth_eval(spec, static_cast<int>(x), nbar[x]);
    SiteFunction out = ball_average(inner, b, p.boundary);
    const double pref = p.u * p.ball_volume();
    for (auto& v : out) v *= pref;
    return out;
}

Eigen::MatrixXd lineage_generator(const SiteFunction& n, Boundary bc) {
    const int L = static_cast<int>(n.size());
    for (int i = 0; i < L; ++i)
        if (!(n[i] > 0.0)) throw std::domain_error("lineage_generator: population must be positive everywhere");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i < L; ++i) {
        int up = i + 1, dn = i - 1;
        if (bc == Boundary::wrap) {
            up = (i + 1) % L;
            dn = (i + L - 1) % L;
        }
        double acc = 0.0;
        if (up >= 0 && up < L) {
            Q(i, up) += n[up] / n[i];
            acc += n[up] / n[i];
        }
        if (dn >= 0 && dn < L && dn != up) {
            Q(i, dn) += n[dn] / n[i];
            acc += n[dn] / n[i];
        }
        Q(i, i) = -acc;
    }
    return Q;
}

SiteFunction generator_apply(const SiteFunction& n, const SiteFunction& f, Boundary bc) {
    const int L = static_cast<int>(n.size());
    SiteFunction out(L, 0.0);
    for (int i = 0; i < L; ++i) {
        int up = i + 1, dn = i - 1;
        if (bc == Boundary::wrap) {
            up = (i + 1) % L;
            dn = (i + L - 1) % L;
        }
        double acc = 0.0;
        if (up >= 0 && up < L) acc += n[up] * (f[up] - f[i]);
        if (dn >= 0 && dn < L && dn != up) acc += n[dn] * (f[dn] - f[i]);
        out[i] = acc / n[i];
    }
    return out;
}

DriftReport drift_consistency_check(const SiteFunction& n, const SiteFunction& f) {
    const int L = static_cast<int>(n.size());
    SiteFunction qf = generator_apply(n, f, Boundary::clip);
    DriftReport rep;
    for (int i = 1; i + 1 < L; ++i) {
        double closed = (n[i + 1] * (f[i + 1] - f[i]) + n[i - 1] * (f[i - 1] - f[i])) / n[i];
        rep.max_identity_error = std::max(rep.max_identity_error, std::abs(qf[i] - closed));
    }
    return rep;
}

double qv_formula(const SiteFunction& n, const SiteFunction& phi, const ModelParams& p,
                  const GrowthSpec& spec, double N, double delta) {
    const int L = static_cast<int>(n.size());
    const int b = static_cast<int>(std::ceil(delta * p.R));
    double acc = 0.0;
    for (int x = 0; x < L; ++x) {
        double nbar = local_mean(n, x, b, p.boundary);
        double target = (1.0 + delta * delta * growth_eval(spec, x, nbar)) * nbar;
        double inner = 0.0;
        for_ball_sites(x, b, L, p.boundary, [&](int z) { inner += (target - n[z]) * phi[z]; });
        acc += inner * inner / ((nbar + 1.0) * N);
    }
    return p.u * p.u / std::pow(delta, p.d + 2) * acc;
}

double mean_drift_rate(const SiteFunction& n, const SiteFunction& phi, const ModelParams& p,
                       const GrowthSpec& spec) {
    const int L = static_cast<int>(n.size());
    double acc = 0.0;
    for (int x = 0; x < L; ++x) {
        double nbar = local_mean(n, x, p.R, p.boundary);
        double target = (1.0 + growth_eval(spec, x, nbar)) * nbar;
        double inner = 0.0;
        for_ball_sites(x, p.R, L, p.boundary, [&](int z) { inner += (target - n[z]) * phi[z]; });
        acc += inner;
    }
    return p.u * acc;
}

} // namespace slfv
