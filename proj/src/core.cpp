#include "slfv/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slfv {

GrowthSpec GrowthSpec::valley(double a, double c, double s, double m, double b) {
    GrowthSpec g;
    g.family = GrowthFamily::valley;
    g.valley_a = a;
    g.valley_c = c;
    g.valley_s = s;
    g.valley_m = m;
    g.valley_b = b;
    return g;
}

GrowthSpec GrowthSpec::logistic(double kappa) {
    GrowthSpec g;
    g.family = GrowthFamily::logistic_const;
    g.kappa = kappa;
    return g;
}

GrowthSpec GrowthSpec::table(std::vector<double> intercept, std::vector<double> slope) {
    GrowthSpec g;
    g.family = GrowthFamily::custom_table;
    g.table_intercept = std::move(intercept);
    g.table_slope = std::move(slope);
    return g;
}

GrowthSpec GrowthSpec::zero(int grid_len) {
    return table(std::vector<double>(grid_len, 0.0), std::vector<double>(grid_len, 0.0));
}

void ModelParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(u > 0.0) || u > 1.0) fail("u must lie in (0, 1]");
    if (mu < 0.0) fail("mu must be >= 0");
    if (R < 1) fail("R must be >= 1");
    if (grid_len < 2 * R + 1) fail("grid_len must be at least 2R+1");
    if (n_max < 0.0) fail("n_max must be >= 0 (0 requests auto-derivation)");
    if (d < 1) fail("d must be >= 1");
    if (growth.family == GrowthFamily::custom_table) {
        if (static_cast<int>(growth.table_intercept.size()) != grid_len ||
            static_cast<int>(growth.table_slope.size()) != grid_len)
            fail("custom_table growth needs one (intercept, slope) pair per site");
    }
    if (growth.family == GrowthFamily::valley && growth.valley_s <= 0.0)
        fail("valley growth needs s > 0");
}

std::vector<int> ball(int x, int R, int grid_len, Boundary bc) {
    std::vector<int> out;
    out.reserve(2 * R + 1);
    for_ball_sites(x, R, grid_len, bc, [&](int y) { out.push_back(y); });
    return out;
}

double local_mean(const std::vector<double>& n, int x, int R, Boundary bc) {
    double acc = 0.0;
    int cnt = 0;
    for_ball_sites(x, R, static_cast<int>(n.size()), bc, [&](int y) {
        acc += n[y];
        ++cnt;
    });
    return acc / cnt;
}

double growth_eval(const GrowthSpec& g, int x, double n) {
    double r;
    switch (g.family) {
        case GrowthFamily::valley: {
            double hostility = std::min(g.valley_a * std::abs(x - g.valley_c) / g.valley_s, g.valley_m);
            r = hostility + g.valley_b - n;
            break;
        }
        case GrowthFamily::logistic_const:
            r = g.kappa - n;
            break;
        case GrowthFamily::custom_table:
            r = g.table_intercept[x] + g.table_slope[x] * n;
            break;
        default:
            r = 0.0;
    }
    return std::max(r, -1.0);
}

namespace {

// Max over sites and over the n-grid {0, dn, ..., bound} of (1+r_x(n))*n.
double max_replacement_mass(const ModelParams& p, double bound) {
    const int steps = 2048;
    double dn = bound / steps;
    double mx = 0.0;
    for (int x = 0; x < p.grid_len; ++x) {
        for (int k = 0; k <= steps; ++k) {
            double n = k * dn;
            double rep = (1.0 + growth_eval(p.growth, x, n)) * n;
            mx = std::max(mx, rep);
        }
    }
    return mx;
}

} // namespace

AssumptionReport validate_assumptions(const ModelParams& p) {
    AssumptionReport rep;
    if (p.n_max <= 0.0) {
        rep.message = "n_max not set";
        return rep;
    }
    const int steps = 2048;
    double dn = p.n_max / steps;
    double min_r = std::numeric_limits<double>::infinity();
    double max_rep = -std::numeric_limits<double>::infinity();
    double min_r0 = std::numeric_limits<double>::infinity();
    int bad_site = -1;
    double bad_n = 0.0;
    for (int x = 0; x < p.grid_len; ++x) {
        min_r0 = std::min(min_r0, growth_eval(p.growth, x, 0.0));
        for (int k = 0; k <= steps; ++k) {
            double n = k * dn;
            double r = growth_eval(p.growth, x, n);
            min_r = std::min(min_r, r);
            double repl = (1.0 + r) * n;
            if (repl > max_rep) {
                max_rep = repl;
                bad_site = x;
                bad_n = n;
            }
        }
    }
    rep.min_growth = min_r;
    rep.max_replacement = max_rep;
    rep.growth_at_zero = min_r0;
    std::ostringstream msg;
    if (min_r < -1.0) {
        msg << "growth dips below -1 (min " << min_r << ")";
    } else if (max_rep >= p.n_max) {
        msg << "replacement mass " << max_rep << " at site " << bad_site << ", n=" << bad_n
            << " reaches n_max=" << p.n_max;
    } else if (!(min_r0 > 0.0)) {
        msg << "growth at vanishing density is " << min_r0 << " (needs to be positive)";
    } else {
        rep.ok = true;
        msg << "ok: max replacement mass " << max_rep << " < n_max " << p.n_max;
    }
    rep.message = msg.str();
    return rep;
}

double suggest_n_max(const ModelParams& p) {
    // Fixed point of B -> 1.05 * M(B) where M is the max replacement mass on [0,B].
    double bound = 1.0;
    for (int it = 0; it < 200; ++it) {
        double next = 1.05 * max_replacement_mass(p, bound);
        if (next <= 0.0) throw std::runtime_error("suggest_n_max: replacement mass is identically zero");
        if (std::abs(next - bound) <= 1e-9 * std::max(1.0, bound)) {
            ModelParams q = p;
            q.n_max = next;
            if (!validate_assumptions(q).ok) {
                // grid refinement can push the max slightly above the iterate; pad once
                q.n_max = 1.0000001 * next;
                if (!validate_assumptions(q).ok)
                    throw std::runtime_error("suggest_n_max: no admissible bound found");
                return q.n_max;
            }
            return next;
        }
        if (next > 1e12) throw std::runtime_error("suggest_n_max: iteration diverges (unbounded growth)");
        bound = next;
    }
    throw std::runtime_error("suggest_n_max: fixed-point iteration did not settle");
}

} // namespace slfv
