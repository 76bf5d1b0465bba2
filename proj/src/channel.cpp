#include "channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specfun.hpp"

namespace risbc::channel {

namespace {

void check_shape_scale(double m, double omega)
{
    if (!(m >= 0.5))
        throw std::domain_error("nakagami: shape m must be >= 0.5");
    if (!(omega > 0.0))
        throw std::domain_error("nakagami: scale Omega must be positive");
}

} // namespace

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return Rng(splitmix64(master_seed ^ stream_index));
}

double pathloss(double distance_m, double carrier_hz)
{
    if (!(distance_m >= 1.0))
        throw std::domain_error("pathloss: model valid for d >= 1 m");
    if (!(carrier_hz > 0.0))
        throw std::domain_error("pathloss: carrier frequency must be positive");
    double pl_db = 22.0 * std::log10(distance_m) + 28.0 + 20.0 * std::log10(carrier_hz / 1e9);
    return std::pow(10.0, -pl_db / 10.0);
}

LinkParams LinkParams::umi(double m, double distance_m, double carrier_hz)
{
    if (!(m >= 0.5))
        throw std::domain_error("LinkParams: shape m must be >= 0.5");
    LinkParams p;
    p.m = m;
    p.distance_m = distance_m;
    p.carrier_hz = carrier_hz;
    p.zeta = pathloss(distance_m, carrier_hz);
    return p;
}

LinkParams LinkParams::with_scale(double m, double zeta)
{
    if (!(m >= 0.5))
        throw std::domain_error("LinkParams: shape m must be >= 0.5");
    if (!(zeta > 0.0) || zeta > 1.0)
        throw std::domain_error("LinkParams: zeta must lie in (0, 1]");
    LinkParams p;
    p.m = m;
    p.distance_m = 0.0;
    p.zeta = zeta;
    return p;
}

double nakagami_raw_moment(double m, double omega, int order)
{
    check_shape_scale(m, omega);
    if (order < 1)
        throw std::domain_error("nakagami_raw_moment: order must be >= 1");
    double half = 0.5 * order;
    return std::exp(specfun::ln_gamma(m + half) - specfun::ln_gamma(m)) *
           std::pow(omega / m, half);
}

double nakagami_variance(double m, double omega)
{
    check_shape_scale(m, omega);
    double r = std::exp(specfun::ln_gamma(m + 0.5) - specfun::ln_gamma(m));
    return omega * (1.0 - r * r / m);
}

Moments nakagami_amplitude_moments(double m, double omega)
{
    Moments mo;
    mo.mean = nakagami_raw_moment(m, omega, 1);
    mo.raw2 = omega;
    mo.raw4 = nakagami_raw_moment(m, omega, 4);
    mo.var = mo.raw2 - mo.mean * mo.mean;
    return mo;
}

double sample_amplitude(double m, double omega, Rng& rng)
{
    check_shape_scale(m, omega);
    std::gamma_distribution<double> g(m, omega / m);
    return std::sqrt(g(rng));
}

std::complex<double> sample_link(const LinkParams& link, Rng& rng)
{
    double amp = sample_amplitude(link.m, link.omega(), rng);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    return std::polar(amp, u(rng));
}

NakagamiSampler::NakagamiSampler(double m, double omega)
    : gamma_(m, omega / m)
{
    check_shape_scale(m, omega);
}

} // namespace risbc::channel
