#include <doctest.h>

#include "slfv/core.hpp"

#include <cmath>
#include <vector>

using namespace slfv;

TEST_CASE("ball sites, clip") {
    CHECK(ball(50, 4, 101, Boundary::clip) == std::vector<int>{46, 47, 48, 49, 50, 51, 52, 53, 54});
    CHECK(ball(0, 4, 101, Boundary::clip) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(ball(99, 4, 101, Boundary::clip) == std::vector<int>{95, 96, 97, 98, 99, 100});
    CHECK(ball(2, 4, 101, Boundary::clip) == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("ball sites, wrap") {
    CHECK(ball(0, 4, 101, Boundary::wrap) == std::vector<int>{97, 98, 99, 100, 0, 1, 2, 3, 4});
    CHECK(ball(100, 4, 101, Boundary::wrap) == std::vector<int>{96, 97, 98, 99, 100, 0, 1, 2, 3});
    CHECK(ball(50, 1, 101, Boundary::wrap) == std::vector<int>{49, 50, 51});
}

TEST_CASE("for_ball_sites matches ball() in order") {
    for (Boundary bc : {Boundary::clip, Boundary::wrap}) {
        for (int x : {0, 3, 50, 97, 100}) {
            std::vector<int> got;
            for_ball_sites(x, 4, 101, bc, [&](int y) { got.push_back(y); });
            CHECK(got == ball(x, 4, 101, bc));
        }
    }
}

TEST_CASE("local_mean averages over present sites") {
    std::vector<double> n(101, 0.0);
    n[50] = 9.0;
    CHECK(local_mean(n, 50, 4, Boundary::clip) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(local_mean(n, 54, 4, Boundary::clip) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(local_mean(n, 55, 4, Boundary::clip) == doctest::Approx(0.0));

    // clip edge ball holds 5 sites
    std::vector<double> m(101, 0.0);
    m[0] = 5.0;
    CHECK(local_mean(m, 0, 4, Boundary::clip) == doctest::Approx(1.0).epsilon(1e-15));

    // flat profile is a fixed point of the average everywhere, both boundaries
    std::vector<double> flat(101, 3.25);
    for (int x : {0, 1, 50, 100})
        for (Boundary bc : {Boundary::clip, Boundary::wrap})
            CHECK(local_mean(flat, x, 4, bc) == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("valley growth function values") {
    GrowthSpec g; // valley defaults a=14 c=50 s=50 m=7 b=1
    // hostility saturates at m=7 beyond |x-50| >= 25
    CHECK(growth_eval(g, 0, 3.0) == doctest::Approx(5.0).epsilon(1e-15));  // 7+1-3
    CHECK(growth_eval(g, 100, 8.0) == doctest::Approx(0.0).epsilon(1e-15));
    // centre: hostility 0
    CHECK(growth_eval(g, 50, 0.5) == doctest::Approx(0.5).epsilon(1e-15)); // 0+1-0.5
    CHECK(growth_eval(g, 50, 10.0) == doctest::Approx(-1.0));              // clamped from -9
    // linear ramp: x=45 -> 14*5/50 = 1.4
    CHECK(growth_eval(g, 45, 2.0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(growth_eval(g, 55, 2.0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("logistic and table growth") {
    GrowthSpec g = GrowthSpec::logistic(8.0);
    CHECK(growth_eval(g, 17, 3.0) == doctest::Approx(5.0));
    CHECK(growth_eval(g, 17, 20.0) == doctest::Approx(-1.0)); // clamped

    GrowthSpec t = GrowthSpec::table({2.0, -1.5}, {0.0, -0.25});
    CHECK(growth_eval(t, 0, 7.0) == doctest::Approx(2.0));
    CHECK(growth_eval(t, 1, 2.0) == doctest::Approx(-1.0)); // -1.5-0.5 clamped

    GrowthSpec z = GrowthSpec::zero(5);
    for (int x = 0; x < 5; ++x) CHECK(growth_eval(z, x, 3.7) == doctest::Approx(0.0));
}

TEST_CASE("growth clamp property over a scan") {
    GrowthSpec g; // valley defaults
    for (int x = 0; x <= 100; x += 5)
        for (double n = 0.0; n <= 25.0; n += 0.17)
            CHECK(growth_eval(g, x, n) >= -1.0);
}

TEST_CASE("params validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.ball_volume() == 9);

    ModelParams bad = p;
    bad.u = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.u = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.mu = -1e-9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.R = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.grid_len = 2 * bad.R; // smaller than one ball
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.growth = GrowthSpec::table({1.0}, {0.0}); // wrong length
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("assumption scan: valley defaults pass at the suggested bound") {
    ModelParams p;
    p.n_max = suggest_n_max(p);
    // sup over n of (1+r)n = (9-n)n is 20.25 at n=4.5, padded by 1.05
    CHECK(p.n_max == doctest::Approx(21.2625).epsilon(1e-3));
    AssumptionReport rep = validate_assumptions(p);
    CHECK(rep.ok);
    CHECK(rep.min_growth >= -1.0);
    CHECK(rep.max_replacement == doctest::Approx(20.25).epsilon(1e-4));
    CHECK(rep.max_replacement < p.n_max);
    CHECK(rep.growth_at_zero > 0.0);
}

TEST_CASE("assumption scan: failures carry a message") {
    ModelParams p;
    p.n_max = 10.0; // replacement mass 20.25 exceeds this
    AssumptionReport rep = validate_assumptions(p);
    CHECK_FALSE(rep.ok);
    CHECK(rep.message.find("replacement") != std::string::npos);

    ModelParams z;
    z.growth = GrowthSpec::zero(z.grid_len);
    z.n_max = 10.0; // r(0)=0 violates growth-from-rarity
    rep = validate_assumptions(z);
    CHECK_FALSE(rep.ok);
    CHECK(rep.growth_at_zero == doctest::Approx(0.0));
}

TEST_CASE("suggest_n_max: logistic agrees with the closed form") {
    ModelParams p;
    p.growth = GrowthSpec::logistic(5.0);
    // sup (1+5-n)n = 9 at n=3
    CHECK(suggest_n_max(p) == doctest::Approx(1.05 * 9.0).epsilon(1e-3));
}

TEST_CASE("suggest_n_max: unbounded replacement throws") {
    ModelParams p;
    p.growth = GrowthSpec::table(std::vector<double>(101, 0.5),
                                 std::vector<double>(101, 0.0)); // (1.5)n unbounded
    CHECK_THROWS(suggest_n_max(p));
}
