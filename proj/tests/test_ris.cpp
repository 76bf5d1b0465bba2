#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "channel.hpp"
#include "ris.hpp"

using namespace risbc;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("optimal phases cancel the cascade phase")
{
    std::vector<double> zeros(4, 0.0);
    auto all0 = ris::optimal_phases(0.0, zeros, zeros);
    for (double t : all0)
        CHECK(t == Approx(0.0));

    std::vector<double> tg(4, kPi / 4.0), th(4, kPi / 4.0);
    auto r = ris::optimal_phases(kPi / 2.0, tg, th);
    for (double t : r)
        CHECK(t == Approx(0.0).epsilon(1e-15));

    // cascade term picks up exactly the direct-path phase
    channel::Rng rng = channel::make_stream(5, 0);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    double theta_f = u(rng);
    std::vector<double> g(16), h(16);
    for (std::size_t n = 0; n < 16; ++n) {
        g[n] = u(rng);
        h[n] = u(rng);
    }
    auto opt = ris::optimal_phases(theta_f, g, h);
    for (std::size_t n = 0; n < 16; ++n) {
        std::complex<double> term = std::polar(1.0, g[n] + h[n] + opt[n]);
        CHECK(std::arg(term * std::polar(1.0, -theta_f)) == Approx(0.0).epsilon(1e-12));
    }

    std::vector<double> short_h(3, 0.0);
    CHECK_THROWS_AS(ris::optimal_phases(0.0, tg, short_h), std::invalid_argument);
}

TEST_CASE("received power under optimal phases dominates any competitor")
{
    channel::Rng rng = channel::make_stream(21, 0);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const int n = 12;
    std::vector<double> ag(n), ah(n), tg(n), th(n);
    for (int i = 0; i < n; ++i) {
        ag[static_cast<std::size_t>(i)] = channel::sample_amplitude(3.0, 1.0, rng);
        ah[static_cast<std::size_t>(i)] = channel::sample_amplitude(3.0, 1.0, rng);
        tg[static_cast<std::size_t>(i)] = u(rng);
        th[static_cast<std::size_t>(i)] = u(rng);
    }
    double af = channel::sample_amplitude(3.0, 1.0, rng);
    double tf = u(rng);
    const double eta = 0.8;

    auto power = [&](const std::vector<double>& phases) {
        std::complex<double> acc = std::polar(af, tf);
        for (int i = 0; i < n; ++i)
            acc += std::polar(eta * ag[static_cast<std::size_t>(i)] * ah[static_cast<std::size_t>(i)],
                              tg[static_cast<std::size_t>(i)] + th[static_cast<std::size_t>(i)] +
                                  phases[static_cast<std::size_t>(i)]);
        return std::norm(acc);
    };

    double best = power(ris::optimal_phases(tf, tg, th));
    for (int trial = 0; trial < 1000; ++trial) {
        auto competitor = ris::random_phases(n, rng);
        CHECK(power(competitor) <= best * (1.0 + 1e-12));
    }
}

TEST_CASE("quantize_phase grid, bound and convergence")
{
    CHECK(ris::quantize_phase(0.3, 2) == Approx(0.0));
    CHECK(ris::quantize_phase(1.0, 2) == Approx(kPi / 2.0));
    for (int bits : {1, 2, 3, 8, 16}) {
        double tau = ris::quantization_tau(bits);
        for (double theta = -kPi; theta < kPi; theta += 0.0437) {
            // distance on the circle (pi and -pi are the same grid point)
            double err = ris::wrap_angle(theta - ris::quantize_phase(theta, bits));
            CHECK(std::fabs(err) <= tau + 1e-12);
        }
    }
    CHECK(ris::quantization_tau(16) == Approx(kPi / 65536.0));
    // grid stays inside [-pi, pi)
    for (double theta = -kPi; theta < kPi; theta += 0.1) {
        double q = ris::quantize_phase(theta, 1);
        CHECK(q >= -kPi);
        CHECK(q < kPi);
    }

    // quantized co-phasing approaches the continuous optimum as D grows
    channel::Rng rng = channel::make_stream(77, 0);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const int n = 32;
    std::vector<double> amp(n), ph(n);
    for (int i = 0; i < n; ++i) {
        amp[static_cast<std::size_t>(i)] = channel::sample_amplitude(3.0, 1.0, rng);
        ph[static_cast<std::size_t>(i)] = u(rng);
    }
    auto power_at = [&](int bits) {
        std::complex<double> acc{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            double want = -ph[static_cast<std::size_t>(i)];
            double got = bits == 0 ? want : ris::quantize_phase(want, bits);
            acc += std::polar(amp[static_cast<std::size_t>(i)],
                              ph[static_cast<std::size_t>(i)] + got);
        }
        return std::norm(acc);
    };
    double cont = power_at(0);
    double prev = 0.0;
    for (int bits : {1, 2, 4, 8, 12}) {
        double p = power_at(bits);
        CHECK(p >= prev - 1e-9);
        prev = p;
    }
    CHECK(power_at(12) == Approx(cont).epsilon(1e-5));
}

TEST_CASE("sample_quant_error support, symmetry and cosine mean")
{
    channel::Rng rng = channel::make_stream(3, 0);
    for (int bits : {1, 3}) {
        double tau = ris::quantization_tau(bits);
        if (bits == 1)
            CHECK(tau == Approx(kPi / 2.0));
        const int n = 1'000'000;
        double sum = 0.0, sum_cos = 0.0, var = 0.0;
        for (int i = 0; i < n; ++i) {
            double e = ris::sample_quant_error(bits, rng);
            CHECK(e >= -tau);
            CHECK(e < tau);
            sum += e;
            var += e * e;
            sum_cos += std::cos(e);
        }
        double sigma = std::sqrt(var / n);
        CHECK(std::fabs(sum / n) <= 3.0 * sigma / std::sqrt(static_cast<double>(n)));
        CHECK(sum_cos / n == Approx(std::sin(tau) / tau).epsilon(0.002));
    }
}

TEST_CASE("random_phases uniformity, determinism, resultant decay")
{
    channel::Rng rng = channel::make_stream(11, 0);
    auto ph = ris::random_phases(200000, rng);
    std::vector<int> bins(16, 0);
    for (double t : ph)
        ++bins[static_cast<std::size_t>(std::min(
            15, static_cast<int>((t + kPi) / (2.0 * kPi) * 16.0)))];
    double expect = static_cast<double>(ph.size()) / 16.0, chi2 = 0.0;
    for (int b : bins)
        chi2 += (b - expect) * (b - expect) / expect;
    CHECK(chi2 < 30.58); // 1% critical value, 15 dof

    channel::Rng r1 = channel::make_stream(11, 0), r2 = channel::make_stream(11, 0);
    CHECK(ris::random_phases(32, r1) == ris::random_phases(32, r2));

    // mean resultant length of e^{j theta} shrinks like 1/sqrt(N)
    double prev = 1.0;
    for (int n : {100, 10000, 1000000}) {
        std::complex<double> acc{0.0, 0.0};
        auto v = ris::random_phases(n, rng);
        for (double t : v)
            acc += std::polar(1.0, t);
        double r = std::abs(acc) / static_cast<double>(n);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 0.01);

    CHECK_THROWS_AS(ris::random_phases(0, rng), std::domain_error);
    CHECK_THROWS_AS(ris::PhasePolicy::quantized(0), std::domain_error);
}
