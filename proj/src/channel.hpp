#ifndef RISBC_CHANNEL_HPP
#define RISBC_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace risbc::channel {

using Rng = std::mt19937_64;

// Independent stream i derived from a master seed; the split rule is
// master ^ i whitened through splitmix64 before seeding.
std::uint64_t splitmix64(std::uint64_t z);
Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

// 3GPP UMi line-of-sight entry: PL[dB] = 22 log10(d) + 28 + 20 log10(fc/1e9).
// Returns the linear power ratio zeta = 10^(-PL/10). Valid for d >= 1 m.
double pathloss(double distance_m, double carrier_hz);

// One Nakagami-m fading link. The amplitude envelope has shape m and
// scale Omega = m * zeta, so alpha^2 ~ Gamma(shape = m, scale = zeta).
struct LinkParams {
    double m = 3.0;
    double distance_m = 1.0;
    double carrier_hz = 3e9;
    double zeta = 1.0;

    double omega() const { return m * zeta; }

    // zeta from the path-loss model.
    static LinkParams umi(double m, double distance_m, double carrier_hz);
    // explicit large-scale power ratio (tests, unit geometries).
    static LinkParams with_scale(double m, double zeta);
};

// First/second/fourth raw moments and variance of a nonnegative quantity.
struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double raw2 = 0.0;
    double raw4 = 0.0;
};

// E{alpha^order} for a Nakagami-m amplitude with scale Omega.
double nakagami_raw_moment(double m, double omega, int order);
double nakagami_variance(double m, double omega);
Moments nakagami_amplitude_moments(double m, double omega);

// One amplitude draw: alpha = sqrt(G), G ~ Gamma(m, Omega/m).
double sample_amplitude(double m, double omega, Rng& rng);

// Complex coefficient a = alpha exp(j theta), theta ~ U[-pi, pi).
std::complex<double> sample_link(const LinkParams& link, Rng& rng);

// Cached sampler for hot Monte-Carlo loops.
class NakagamiSampler {
public:
    NakagamiSampler(double m, double omega);
    double operator()(Rng& rng) { return std::sqrt(gamma_(rng)); }

private:
    std::gamma_distribution<double> gamma_;
};

} // namespace risbc::channel

#endif
