#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slfv {

enum class Boundary { clip, wrap };

enum class GrowthFamily { valley, logistic_const, custom_table };

// Per-site density regulation r_x(n); every family is clamped at -1 so the
// replacement mass (1+r)n stays nonnegative.
struct GrowthSpec {
    GrowthFamily family = GrowthFamily::valley;

    // valley: r_x(n) = max(min(a*|x-c|/s, m) + b - n, -1)
    double valley_a = 14.0;
    double valley_c = 50.0;
    double valley_s = 50.0;
    double valley_m = 7.0;
    double valley_b = 1.0;

    // logistic_const: r_x(n) = max(kappa - n, -1)
    double kappa = 8.0;

    // custom_table: r_x(n) = max(intercept[x] + slope[x]*n, -1)
    std::vector<double> table_intercept;
    std::vector<double> table_slope;

    static GrowthSpec valley(double a, double c, double s, double m, double b);
    static GrowthSpec logistic(double kappa);
    static GrowthSpec table(std::vector<double> intercept, std::vector<double> slope);
    static GrowthSpec zero(int grid_len); // r = 0 everywhere (custom_table)
};

struct ModelParams {
    double u = 0.04;       // impact parameter, (0,1]
    double mu = 0.0001;    // mutation rate, >= 0
    int R = 4;             // event radius, >= 1 (sites)
    double n_max = 0.0;    // density bound; 0 means "derive via suggest_n_max"
    int grid_len = 101;    // L, number of sites
    Boundary boundary = Boundary::clip;
    int d = 1;             // spatial dimension of the scaling formulas
    GrowthSpec growth;

    int ball_volume() const { return 2 * R + 1; }
    void validate() const; // throws std::invalid_argument
};

// Sites of B(x, R) in ascending order (wrap: ascending from x-R mod L).
std::vector<int> ball(int x, int R, int grid_len, Boundary bc);

// Visit ball sites in the same order without materialising the vector.
template <typename F>
inline void for_ball_sites(int x, int R, int grid_len, Boundary bc, F&& f) {
    if (bc == Boundary::clip) {
        int lo = x - R, hi = x + R;
        if (lo < 0) lo = 0;
        if (hi > grid_len - 1) hi = grid_len - 1;
        for (int y = lo; y <= hi; ++y) f(y);
    } else {
        for (int k = -R; k <= R; ++k) {
            int y = (x + k) % grid_len;
            if (y < 0) y += grid_len;
            f(y);
        }
    }
}

// Mean of n over B(x,R); averages over the sites actually present (clip balls
// near the edge contain fewer than 2R+1 sites).
double local_mean(const std::vector<double>& n, int x, int R, Boundary bc);

double growth_eval(const GrowthSpec& g, int x, double n);

struct AssumptionReport {
    bool ok = false;
    double min_growth = 0.0;        // min r_x(n) over the scan
    double max_replacement = 0.0;   // max (1+r_x(n))*n over the scan
    double growth_at_zero = 0.0;    // min over x of r_x at the smallest scanned mass
    std::string message;
};

// Scan n in {0, dn, 2dn, ..., n_max}, dn = n_max/2048, across all sites:
//   (i)  r_x(n) >= -1
//   (ii) (1 + r_x(n)) * n < n_max  (strict)
//   (iii) r_x(0) > 0 for every site (growth from rarity)
AssumptionReport validate_assumptions(const ModelParams& p);

// Smallest bound of the form 1.05 * max replacement mass, found by fixed-point
// iteration B <- 1.05 * M(B); throws if the iteration diverges (no finite
// carrying capacity).
double suggest_n_max(const ModelParams& p);

} // namespace slfv
