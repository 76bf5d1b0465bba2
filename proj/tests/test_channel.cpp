#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "channel.hpp"

using namespace risbc;
using doctest::Approx;

TEST_CASE("pathloss formula and validity floor")
{
    // 22 log10 d + 28 + 20 log10(fc/GHz), as linear ratio
    CHECK(channel::pathloss(1.0, 3e9) ==
          Approx(std::pow(10.0, -(28.0 + 20.0 * std::log10(3.0)) / 10.0)).epsilon(1e-12));
    CHECK(channel::pathloss(10.0, 3e9) ==
          Approx(std::pow(10.0, -5.95424250943932487)).epsilon(1e-12));
    CHECK(channel::pathloss(20.0, 3e9) < channel::pathloss(10.0, 3e9));
    CHECK(channel::pathloss(10.0, 6e9) < channel::pathloss(10.0, 3e9));
    CHECK_THROWS_AS(channel::pathloss(0.5, 3e9), std::domain_error);
}

TEST_CASE("nakagami analytic moments")
{
    CHECK(channel::nakagami_raw_moment(1.0, 1.0, 1) ==
          Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-12));
    CHECK(channel::nakagami_raw_moment(3.0, 1.0, 1) ==
          Approx(0.9593687886998330).epsilon(1e-12));
    for (double m : {0.5, 1.0, 2.5, 6.0})
        for (double omega : {0.25, 1.0, 3.0})
            CHECK(channel::nakagami_raw_moment(m, omega, 2) == Approx(omega).epsilon(1e-12));

    CHECK(channel::nakagami_variance(1.0, 1.0) ==
          Approx((4.0 - std::numbers::pi) / 4.0).epsilon(1e-12));
    for (double m : {0.5, 1.0, 3.0, 9.0})
        for (double omega : {0.5, 2.0}) {
            double mean = channel::nakagami_raw_moment(m, omega, 1);
            CHECK(channel::nakagami_variance(m, omega) ==
                  Approx(channel::nakagami_raw_moment(m, omega, 2) - mean * mean)
                      .epsilon(1e-10));
        }

    auto mo = channel::nakagami_amplitude_moments(3.0, 0.5);
    CHECK(mo.raw2 == Approx(mo.var + mo.mean * mo.mean).epsilon(1e-14));
    CHECK(mo.raw4 >= mo.raw2 * mo.raw2);

    CHECK_THROWS_AS(channel::nakagami_raw_moment(0.3, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(channel::nakagami_variance(1.0, -1.0), std::domain_error);
}

TEST_CASE("sampling matches analytic moments within 1%")
{
    const long long n = 10'000'000;
    for (double m : {0.5, 1.0, 3.0}) {
        for (double omega : {0.5, 2.0}) {
            channel::Rng rng = channel::make_stream(7777, static_cast<std::uint64_t>(m * 8 + omega));
            channel::NakagamiSampler draw(m, omega);
            double s1 = 0.0, s2 = 0.0, s4 = 0.0;
            for (long long i = 0; i < n; ++i) {
                double a = draw(rng);
                double a2 = a * a;
                s1 += a;
                s2 += a2;
                s4 += a2 * a2;
            }
            double inv = 1.0 / static_cast<double>(n);
            CHECK(s1 * inv ==
                  Approx(channel::nakagami_raw_moment(m, omega, 1)).epsilon(0.01));
            CHECK(s2 * inv ==
                  Approx(channel::nakagami_raw_moment(m, omega, 2)).epsilon(0.01));
            CHECK(s4 * inv ==
                  Approx(channel::nakagami_raw_moment(m, omega, 4)).epsilon(0.01));
        }
    }
}

TEST_CASE("sample_amplitude mean and the no-fading limit")
{
    channel::Rng rng = channel::make_stream(101, 0);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        sum += channel::sample_amplitude(1.0, 1.0, rng);
    CHECK(sum / n == Approx(0.8862269254527580).epsilon(0.005));

    // m large: variance of the amplitude collapses
    channel::Rng rng2 = channel::make_stream(101, 1);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double a = channel::sample_amplitude(500.0, 1.0, rng2);
        s1 += a;
        s2 += a * a;
    }
    double mean = s1 / 100000, var = s2 / 100000 - mean * mean;
    CHECK(var < 1e-3);
}

TEST_CASE("seed determinism and stream independence")
{
    channel::Rng a = channel::make_stream(42, 3);
    channel::Rng b = channel::make_stream(42, 3);
    channel::Rng c = channel::make_stream(42, 4);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        double va = channel::sample_amplitude(3.0, 1.0, a);
        double vb = channel::sample_amplitude(3.0, 1.0, b);
        double vc = channel::sample_amplitude(3.0, 1.0, c);
        all_equal = all_equal && va == vb;
        any_diff = any_diff || va != vc;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("sample_link power scale and uniform phase")
{
    auto link = channel::LinkParams::with_scale(2.0, 0.25);
    channel::Rng rng = channel::make_stream(9, 0);
    const int n = 400000;
    double p = 0.0;
    std::vector<int> bins(16, 0);
    for (int i = 0; i < n; ++i) {
        std::complex<double> v = channel::sample_link(link, rng);
        p += std::norm(v);
        double ph = std::arg(v);
        int b = std::min(15, static_cast<int>((ph + std::numbers::pi) /
                                              (2.0 * std::numbers::pi) * 16.0));
        ++bins[static_cast<std::size_t>(b)];
    }
    CHECK(p / n == Approx(link.omega()).epsilon(0.01));
    // chi^2 uniformity, 15 dof, 1% critical value 30.58
    double expect = n / 16.0, chi2 = 0.0;
    for (int b : bins)
        chi2 += (b - expect) * (b - expect) / expect;
    CHECK(chi2 < 30.58);
}

TEST_CASE("LinkParams constructors validate")
{
    auto l = channel::LinkParams::umi(3.0, 10.0, 3e9);
    CHECK(l.zeta == Approx(1.1111111111111112e-6).epsilon(1e-12));
    CHECK(l.omega() == Approx(3.0 * l.zeta).epsilon(1e-15));
    CHECK_THROWS_AS(channel::LinkParams::umi(0.4, 10.0, 3e9), std::domain_error);
    CHECK_THROWS_AS(channel::LinkParams::umi(3.0, 0.2, 3e9), std::domain_error);
    CHECK_THROWS_AS(channel::LinkParams::with_scale(3.0, 1.5), std::domain_error);
}
