#include <doctest.h>

#include "slfv/analysis.hpp"

#include <cmath>
#include <vector>

using namespace slfv;

namespace {

PopulationField two_type_field() {
    ModelParams p;
    p.grid_len = 5;
    p.R = 1;
    PopulationField f(p, 0.0, 8);
    f.set_uniform_profile({1.0, 1.0, 0.0, 0.0, 1.0});
    int32_t a = f.ledger().acquire();
    int32_t b = f.ledger().acquire();
    f.deposit(1, a, 2.0);
    f.deposit(1, b, 1.0);
    f.deposit(3, a, 1.0);
    f.deposit(3, b, 2.0);
    return f; // totals: 1, 4, 0, 3, 1
}

} // namespace

TEST_CASE("identity_point: hand values, uniform pool never matches") {
    PopulationField f = two_type_field();
    CHECK(identity_point(f, 1, 3) == doctest::Approx((2 * 1 + 1 * 2) / (4.0 * 3.0)).epsilon(1e-15));
    CHECK(identity_point(f, 1, 1) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
    CHECK(identity_point(f, 3, 3) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
    CHECK(identity_point(f, 0, 0) == 0.0); // pure uniform pool
    CHECK(identity_point(f, 0, 1) == 0.0);
}

TEST_CASE("identity_point on monomorphic and all-uniform fields") {
    ModelParams p;
    p.grid_len = 7;
    p.R = 1;
    PopulationField f(p, 3.0, 4); // all mass in the uniform pool
    for (int x = 0; x < 7; ++x)
        for (int y = x; y < 7; ++y) CHECK(identity_point(f, x, y) == 0.0);

    int32_t id = f.ledger().acquire();
    f.make_monomorphic(id, 2.5);
    for (int x = 0; x < 7; ++x) CHECK(identity_point(f, x, (x + 3) % 7) == doctest::Approx(1.0));
}

TEST_CASE("identity_weighted reduces to identity_point for point masses") {
    PopulationField f = two_type_field();
    SiteFunction e1(5, 0.0), e3(5, 0.0);
    e1[1] = 1.0;
    e3[3] = 1.0;
    CHECK(identity_weighted(f, e1, e3) == doctest::Approx(identity_point(f, 1, 3)).epsilon(1e-14));
    CHECK(identity_weighted(f, e1, e1) == doctest::Approx(identity_point(f, 1, 1)).epsilon(1e-14));
}

TEST_CASE("identity_weighted numerator: bilinearity and brute force") {
    PopulationField f = two_type_field();
    SiteFunction p1 = {0.2, 1.0, 0.0, 0.5, 0.1};
    SiteFunction p2 = {0.0, 0.3, 0.7, 1.0, 0.4};
    SiteFunction q1 = {1.0, 0.0, 0.2, 0.0, 0.9};

    // brute force over sites and explicit types
    double num = 0.0;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
            for (int32_t id = 0; id < 2; ++id)
                num += f.type_mass(x, id) * f.type_mass(y, id) * p1[x] * p2[y];
    CHECK(identity_weighted_numerator(f, p1, p2) == doctest::Approx(num).epsilon(1e-14));

    double n1 = 0.0, n2 = 0.0;
    for (int x = 0; x < 5; ++x) {
        n1 += f.total_mass(x) * p1[x];
        n2 += f.total_mass(x) * p2[x];
    }
    CHECK(identity_weighted(f, p1, p2) == doctest::Approx(num / (n1 * n2)).epsilon(1e-13));

    // numerator is bilinear
    SiteFunction combo(5);
    for (int x = 0; x < 5; ++x) combo[x] = 2.0 * p1[x] + 3.0 * q1[x];
    double lhs = identity_weighted_numerator(f, combo, p2);
    double rhs = 2.0 * identity_weighted_numerator(f, p1, p2) +
                 3.0 * identity_weighted_numerator(f, q1, p2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("percentile: type-7 interpolation") {
    std::vector<double> v = {30.0, 10.0, 40.0, 20.0}; // unsorted on purpose
    CHECK(percentile(v, 0.0) == 10.0);
    CHECK(percentile(v, 1.0) == 40.0);
    CHECK(percentile(v, 0.5) == doctest::Approx(25.0));
    CHECK(percentile(v, 0.25) == doctest::Approx(17.5));
    CHECK(percentile({0.1, 0.2, 0.3, 0.4}, 0.25) == doctest::Approx(0.175));
    CHECK(percentile({7.0}, 0.3) == 7.0);
}

TEST_CASE("replicate_stats: shapes, hand values, nested bands") {
    // 3 replicates, refs {0, 2}, grid 3
    std::vector<std::vector<std::vector<double>>> samples = {
        {{0.1, 0.0, 0.2}, {0.4, 0.1, 0.3}},
        {{0.4, 0.2, 0.6}, {0.1, 0.3, 0.1}},
        {{0.7, 0.4, 0.4}, {0.7, 0.5, 0.2}},
    };
    IdentityTable tab = replicate_stats(samples, {0, 2}, 3);
    CHECK(tab.n_replicates == 3);
    CHECK(tab.grid_len == 3);
    REQUIRE(tab.cells.size() == 2);
    REQUIRE(tab.cells[0].size() == 3);

    const IdentityStats& s = tab.at(0, 0); // values 0.1, 0.4, 0.7
    CHECK(s.mean == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(s.median == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(s.p25 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.p75 == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(s.p05 == doctest::Approx(0.13).epsilon(1e-12));
    CHECK(s.p95 == doctest::Approx(0.67).epsilon(1e-12));

    for (int r = 0; r < 2; ++r)
        for (int x = 0; x < 3; ++x) {
            const IdentityStats& c = tab.at(r, x);
            CHECK(c.p05 <= c.p25);
            CHECK(c.p25 <= c.median);
            CHECK(c.median <= c.p75);
            CHECK(c.p75 <= c.p95);
        }
}

TEST_CASE("best_alignment_N: geometric mean of positive cells") {
    CHECK(best_alignment_N({2.0, 8.0}, {1.0, 4.0}, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(best_alignment_N({2.0, 8.0}, {1.0, 1.0}, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    // zero cells are ignored on either side
    CHECK(best_alignment_N({2.0, 0.0, 3.0}, {1.0, 5.0, 0.0}, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
    // delta rescales the simulated mean
    CHECK(best_alignment_N({2.0}, {1.0}, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("qv_diagnostic: zero observable and thread-count invariance") {
    SimConfig cfg;
    cfg.params.grid_len = 31;
    cfg.params.R = 3;
    cfg.params.u = 0.2;
    cfg.params.mu = 1e-3;
    cfg.params.n_max = 20.0;
    cfg.params.boundary = Boundary::wrap;
    cfg.params.growth = GrowthSpec::zero(31);
    cfg.enforce_assumptions = false;
    std::vector<double> n0(31);
    for (int x = 0; x < 31; ++x) n0[x] = 3.0 + 2.0 * std::exp(-std::pow((x - 15.0) / 4.0, 2));
    cfg.initial_profile = n0;
    cfg.seed = 31337;

    SiteFunction zero_phi(31, 0.0);
    QvReport z = qv_diagnostic(cfg, zero_phi, 2.0, 8);
    CHECK(z.var_mc == 0.0);
    CHECK(z.qv_integral == 0.0);
    CHECK(z.ratio == 0.0);

    SiteFunction phi(31);
    for (int x = 0; x < 31; ++x) phi[x] = std::exp(-std::pow((x - 15.0) / 5.0, 2));
    QvReport one = qv_diagnostic(cfg, phi, 3.0, 64, 1);
    QvReport three = qv_diagnostic(cfg, phi, 3.0, 64, 3);
    CHECK(one.var_mc == three.var_mc);
    CHECK(one.qv_integral == three.qv_integral);
    CHECK(one.ratio == three.ratio);
    CHECK(one.replicates == 64);
    CHECK(one.horizon == 3.0);
    // loose sanity band; the tight comparison runs with thousands of replicates
    CHECK(one.ratio > 0.4);
    CHECK(one.ratio < 2.2);
}
