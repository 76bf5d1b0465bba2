#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specfun.hpp"
#include "single_tag.hpp"
#include "test_oracles.hpp"

using namespace risbc;
using doctest::Approx;

TEST_CASE("ln_gamma agrees with exact values and product recurrence")
{
    CHECK(specfun::ln_gamma(1.0) == Approx(0.0).epsilon(1e-14));
    CHECK(specfun::ln_gamma(0.5) == Approx(0.5723649429247001).epsilon(1e-13));
    // Gamma(3.5) = 2.5 * 1.5 * 0.5 * sqrt(pi)
    double expected = std::log(2.5 * 1.5 * 0.5 * std::sqrt(std::numbers::pi));
    CHECK(specfun::ln_gamma(3.5) == Approx(expected).epsilon(1e-13));
    CHECK(specfun::ln_gamma(3.5) == Approx(1.2009736023470742).epsilon(1e-13));
    CHECK_THROWS_AS(specfun::ln_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(specfun::ln_gamma(-1.5), std::domain_error);

    // recurrence ln Gamma(x+1) = ln x + ln Gamma(x) across the range
    for (double x : {1e-3, 0.1, 2.0, 17.5, 950.0})
        CHECK(specfun::ln_gamma(x + 1.0) ==
              Approx(std::log(x) + specfun::ln_gamma(x)).epsilon(1e-12));
}

TEST_CASE("gamma_lower_reg matches closed forms and quadrature")
{
    CHECK(specfun::gamma_lower_reg(1.0, 1.0) ==
          Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(specfun::gamma_lower_reg(2.5, 0.0) == 0.0);
    CHECK(specfun::gamma_lower_reg(7.0, 0.0) == 0.0);

    // oracle: adaptive quadrature of t^{a-1} e^{-t}; for a < 1 the head
    // uses the substitution t = u^{1/a} to tame the endpoint singularity
    for (double a : {0.3, 1.0, 2.5, 8.0, 40.0}) {
        for (double x : {0.5, 3.0, 10.0, 60.0}) {
            double lg = risbc::specfun::ln_gamma(a);
            auto f = [a, lg](double t) {
                return t <= 0.0 ? 0.0 : std::exp((a - 1.0) * std::log(t) - t - lg);
            };
            double oracle;
            if (a >= 1.0) {
                oracle = test_oracle::integrate(f, 0.0, x, 1e-14);
            } else {
                double split = std::min(1.0, x);
                auto head = [a, lg, split](double u) {
                    double t = std::pow(u, 1.0 / a);
                    return std::exp(-t - lg) / a;
                };
                oracle = test_oracle::integrate(head, 0.0, std::pow(split, a), 1e-14);
                if (x > split)
                    oracle += test_oracle::integrate(f, split, x, 1e-14);
            }
            CHECK(specfun::gamma_lower_reg(a, x) == Approx(oracle).epsilon(1e-9));
        }
    }
    CHECK(specfun::gamma_lower_reg(2.5, 3.0) == Approx(0.6937810815867216).epsilon(1e-10));

    CHECK_THROWS_AS(specfun::gamma_lower_reg(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::gamma_lower_reg(1.0, -0.1), std::domain_error);
}

TEST_CASE("gamma_lower_reg is monotone and saturates")
{
    for (double a : {0.5, 1.0, 3.0, 12.0}) {
        double prev = 0.0;
        for (double x = 0.0; x <= 8.0 * a; x += 0.25 * a) {
            double v = specfun::gamma_lower_reg(a, x);
            CHECK(v >= prev - 1e-15);
            CHECK(v <= 1.0);
            prev = v;
        }
        CHECK(specfun::gamma_lower_reg(a, 50.0 * a) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("q_function basics")
{
    CHECK(specfun::q_function(0.0) == Approx(0.5).epsilon(1e-15));
    CHECK(specfun::q_function(1.0) == Approx(0.15865525393145705).epsilon(1e-13));
    CHECK(specfun::q_function(40.0) < 1e-300);
    CHECK(std::isfinite(specfun::q_function(40.0)));

    // quadrature of the Gaussian density over the tail
    auto phi = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
    };
    double oracle = test_oracle::integrate(phi, 1.0, 12.0, 1e-14);
    CHECK(specfun::q_function(1.0) == Approx(oracle).epsilon(1e-10));

    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.2, 5.0})
        CHECK(specfun::q_function(x) + specfun::q_function(-x) ==
              Approx(1.0).epsilon(1e-14));
}

TEST_CASE("q approximations")
{
    CHECK(specfun::q_approx_exp(0.0) == Approx(std::exp(-0.6964)).epsilon(1e-15));
    CHECK(specfun::q_approx_exp(1.0) ==
          Approx(std::exp(-(0.3842 + 0.7640 + 0.6964))).epsilon(1e-15));
    // tightness sanity on a coarse grid
    for (double x = 0.0; x <= 5.0; x += 0.5)
        CHECK(std::fabs(specfun::q_approx_exp(x) - specfun::q_function(x)) <= 0.02);
    for (double x = 0.0; x <= 6.0; x += 0.25)
        CHECK(specfun::q_approx_exp(x) < 10.0 * specfun::q_function(x) + 1e-12);

    CHECK(specfun::q_approx_two_term(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(specfun::q_approx_two_term(2.0) ==
          Approx(std::exp(-2.0) / 12.0 + std::exp(-8.0 / 3.0) / 4.0).epsilon(1e-15));
    CHECK(specfun::q_approx_two_term(6.0) < 1e-7);
}

TEST_CASE("parabolic cylinder function: closed forms and grid identity")
{
    CHECK(specfun::parabolic_cylinder_D(0.0, 2.0) == Approx(std::exp(-1.0)).epsilon(1e-12));
    double d_m1 = std::exp(0.25) * std::sqrt(std::numbers::pi / 2.0) *
                  std::erfc(1.0 / std::numbers::sqrt2);
    CHECK(specfun::parabolic_cylinder_D(-1.0, 1.0) == Approx(d_m1).epsilon(1e-12));
    for (double x = 0.0; x <= 10.0; x += 0.5)
        CHECK(specfun::parabolic_cylinder_D(0.0, x) ==
              Approx(std::exp(-0.25 * x * x)).epsilon(1e-10));

    // frozen references (independent hypergeometric evaluation)
    CHECK(specfun::parabolic_cylinder_D(-3.7, 2.1) ==
          Approx(0.007124663155034364).epsilon(1e-8));
    CHECK(specfun::parabolic_cylinder_D(-0.5, 0.3) ==
          Approx(1.0420573143006460).epsilon(1e-8));
    CHECK(specfun::parabolic_cylinder_D(-12.25, 7.5) ==
          Approx(4.542032831230828e-18).epsilon(1e-8));
    CHECK(specfun::parabolic_cylinder_D(-45.0, 20.0) ==
          Approx(1.0245213296444195e-103).epsilon(1e-7));

    CHECK_THROWS_AS(specfun::parabolic_cylinder_D(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::parabolic_cylinder_D(-61.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::parabolic_cylinder_D(-1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(specfun::parabolic_cylinder_D(-1.0, 51.0), std::domain_error);
}

TEST_CASE("parabolic cylinder recurrence D_{v+1} - x D_v + v D_{v-1} = 0")
{
    for (double v : {-1.5, -2.5, -7.25, -20.5}) {
        for (double x : {0.2, 1.0, 4.0, 9.0}) {
            double dm = specfun::parabolic_cylinder_D(v - 1.0, x);
            double d0 = specfun::parabolic_cylinder_D(v, x);
            double dp = specfun::parabolic_cylinder_D(v + 1.0, x);
            double scale = std::max({std::fabs(dp), std::fabs(x * d0), std::fabs(v * dm)});
            CHECK(std::fabs(dp - x * d0 + v * dm) <= 1e-9 * scale);
        }
    }
}

// Closed-form BPSK BER assembled through D_{-k} must match quadrature of
// the same integrand (fit pdf times the exponential Q approximation).
TEST_CASE("BER-integral consistency across random Gamma fits")
{
    std::mt19937_64 rng(20240811ull);
    std::uniform_real_distribution<double> uk(1.2, 25.0);
    std::uniform_real_distribution<double> ul(-7.0, -4.0);
    std::uniform_real_distribution<double> ug(2.0, 11.0);
    const auto& qa = specfun::kQApprox;
    for (int trial = 0; trial < 40; ++trial) {
        single_tag::GammaFit fit;
        fit.k = uk(rng);
        fit.scale = std::pow(10.0, ul(rng));
        double gamma_bar = std::pow(10.0, ug(rng));
        double closed = single_tag::avg_ber_gamma(fit, gamma_bar);

        const double nu = 2.0;
        double abar = qa.a * nu * gamma_bar;
        double bbar = qa.b * std::sqrt(nu * gamma_bar);
        double lg = specfun::ln_gamma(fit.k);
        auto f = [&](double t) {
            if (t <= 0.0)
                return 0.0;
            double x = fit.scale * t;
            double logw = (fit.k - 1.0) * std::log(t) - t - lg;
            return std::exp(-abar * x * x - bbar * x - qa.c + logw);
        };
        // dyadic segments catch the sharp concentration at high SNR
        double hi = fit.k + 40.0 + 12.0 * std::sqrt(fit.k);
        double tol = closed * 1e-8 / 61.0;
        double oracle = 0.0;
        for (int j = 0; j < 60; ++j) {
            double seg_hi = hi * std::pow(0.5, j);
            oracle += test_oracle::integrate(f, 0.5 * seg_hi, seg_hi, tol);
        }
        oracle += test_oracle::integrate(f, 0.0, hi * std::pow(0.5, 60), tol);
        CHECK(closed == Approx(oracle).epsilon(1e-6));
    }
}
