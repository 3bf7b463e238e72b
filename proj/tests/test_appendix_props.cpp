#include <doctest.h>

#include <cmath>

#include "fkop/appendix_props.hpp"
#include "fkop/rng.hpp"
#include "fkop/specfun.hpp"

using namespace fkop;

TEST_CASE("lemma inequalities: degenerate and collapsing cases") {
    // s = t makes both sides of (l1) vanish.
    for (const auto& c : lemma_b1_check(3.0, 3.0, 2.5, 0.4)) {
        if (c.name == "l1_lower" || c.name == "l1_upper") {
            CHECK(c.lhs == doctest::Approx(0.0));
            CHECK(c.holds);
        }
    }
    // r = 2: 4/(rr') = 1, so (l1) collapses to equality, and the (l4)
    // prefactor vanishes while its left side is |b||st - ts| = 0.
    for (const auto& c : lemma_b1_check(5.0, 2.0, 2.0, -0.7)) {
        CHECK(c.holds);
        if (c.name == "l1_lower")
            CHECK(c.lhs == doctest::Approx((5.0 - 2.0) * (5.0 - 2.0)));
        if (c.name == "l4") {
            CHECK(c.lhs == doctest::Approx(0.0));
            CHECK(c.rhs == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("lemma inequalities: 1e5 random draws, zero violations") {
    RngStream rng(3, 0);
    long violations = 0;
    for (long i = 0; i < 100000; ++i) {
        const double s = 100.0 * rng.uniform();
        const double t = 100.0 * rng.uniform();
        const double r = 1.0 + 19.0 * rng.uniform();
        const double b = 2.0 * rng.uniform() - 1.0;
        for (const auto& c : lemma_b1_check(s, t, r, b))
            if (!c.holds) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("kappa_r plays its role in the Markov-generator inequality") {
    // (l5) restated: s^r + t^r - b(st^{r-1}+ts^{r-1})
    //                  <= kappa_r(r) (s^r + t^r - 2b (st)^{r/2}).
    RngStream rng(4, 0);
    long violations = 0;
    for (long i = 0; i < 10000; ++i) {
        const double s = 100.0 * rng.uniform();
        const double t = 100.0 * rng.uniform();
        const double r = 1.0 + 19.0 * rng.uniform();
        const double b = 2.0 * rng.uniform() - 1.0;
        const double kap = kappa_r(r);
        const double lhs = std::pow(s, r) + std::pow(t, r) -
                           b * (s * std::pow(t, r - 1) + t * std::pow(s, r - 1));
        const double rhs = kap * (std::pow(s, r) + std::pow(t, r) -
                                  2.0 * b * std::pow(s * t, 0.5 * r));
        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
        if (lhs > rhs + 1e-12 * scale) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("extrapolation constant closed form") {
    const auto ex = extrapolation_constant(
        {1.0, 2.0, Exponent::finite(4.0), 1.0, 1.0, 1.0});
    CHECK(ex.interp_exponent == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ex.M == doctest::Approx(512.0).epsilon(1e-12));

    const auto inf = extrapolation_constant(
        {1.0, 2.0, Exponent::infinity(), 1.0, 1.0, 1.0});
    CHECK(inf.interp_exponent == doctest::Approx(0.5).epsilon(1e-15));

    // M -> 1 as nu -> 0 with unit M1, M2.
    const auto small = extrapolation_constant(
        {1.0, 2.0, Exponent::finite(4.0), 1e-12, 1.0, 1.0});
    CHECK(small.M == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(
        extrapolation_constant({2.0, 2.0, Exponent::finite(4.0), 1.0, 1.0, 1.0}),
        domain_error);
    CHECK_THROWS_AS(Exponent::infinity().value(), domain_error);
}

TEST_CASE("extrapolation constant monotone in nu, M1, M2") {
    double prev = 0.0;
    for (double nu : {0.5, 1.0, 2.0}) {
        const auto v =
            extrapolation_constant({1.0, 2.0, Exponent::finite(4.0), nu, 1.0, 1.0});
        CHECK(v.M > prev);
        prev = v.M;
    }
    prev = 0.0;
    for (double m1 : {1.0, 2.0, 4.0}) {
        const auto v =
            extrapolation_constant({1.0, 2.0, Exponent::finite(4.0), 1.0, m1, 1.0});
        CHECK(v.M > prev);
        prev = v.M;
    }
    prev = 0.0;
    for (double m2 : {1.0, 2.0, 4.0}) {
        const auto v =
            extrapolation_constant({1.0, 2.0, Exponent::finite(4.0), 1.0, 1.0, m2});
        CHECK(v.M > prev);
        prev = v.M;
    }
}

TEST_CASE("nash constants") {
    const ModelParams p = make_model(3, 1.5, 1.0, 1e-4);
    const auto nc = nash_constants(p, 1.0, 1.0);
    CHECK(nc.j_prime == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(nc.C == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nc.coeff_1_to_2 == doctest::Approx(1.0).epsilon(1e-15));
    // c1(1) = C_N (alpha/d) (4/2) = 2 alpha C_N / d.
    CHECK(nc.c1_chain[0] ==
          doctest::Approx(2.0 * p.alpha / p.d).epsilon(1e-14));
    // Telescoped coefficient converges geometrically; the time-splitting
    // factor carries an (m+2) 2^{-m} term, so machine-level stagnation sets
    // in around m = 40 rather than m = 20.
    const double at20 = nc.telescoped[19], at30 = nc.telescoped[29];
    const double at40 = nc.telescoped[39], at50 = nc.telescoped[49];
    CHECK(std::fabs(at30 - at20) <= 1e-4 * std::fabs(at30));
    CHECK(std::fabs(at50 - at40) <= 1e-6 * std::fabs(at50));
    CHECK(std::fabs(at50 - at40) < std::fabs(at30 - at20));
    CHECK(nc.c_N == doctest::Approx(at50));
}

TEST_CASE("B22/B23 conditions") {
    const ModelParams p = make_model(3, 1.5, 5.0, 1e-4);
    for (double s : {0.3, 1.0, 4.0}) {
        const auto rep = b22_b23_verifier(s, p);
        CHECK(rep.theta_in_range);
        CHECK(rep.b22_holds);
        CHECK(rep.b23_scaling_holds);
        CHECK(rep.c3 > 0.0);
    }
}
