#include "ris.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risbc::ris {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

PhaseVector PhaseVector::uniform_eta(std::vector<double> theta, double eta)
{
    if (!(eta > 0.0) || eta > 1.0)
        throw std::domain_error("PhaseVector: eta must lie in (0, 1]");
    PhaseVector pv;
    pv.eta.assign(theta.size(), eta);
    pv.theta = std::move(theta);
    return pv;
}

PhasePolicy PhasePolicy::quantized(int bits)
{
    if (bits < 1)
        throw std::domain_error("PhasePolicy: quantization bits must be >= 1");
    return {PhasePolicyKind::Quantized, bits};
}

double wrap_angle(double theta)
{
    double w = std::remainder(theta, kTwoPi);
    if (w >= kPi)
        w -= kTwoPi;
    else if (w < -kPi)
        w += kTwoPi;
    return w;
}

std::vector<double> optimal_phases(double theta_f, std::span<const double> theta_g,
                                   std::span<const double> theta_h)
{
    if (theta_g.size() != theta_h.size())
        throw std::invalid_argument("optimal_phases: phase vectors differ in length");
    std::vector<double> out(theta_g.size());
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = wrap_angle(theta_f - theta_g[n] - theta_h[n]);
    return out;
}

double quantization_tau(int bits)
{
    if (bits < 1)
        throw std::domain_error("quantization_tau: bits must be >= 1");
    return kPi / static_cast<double>(1ull << bits);
}

double quantize_phase(double theta, int bits)
{
    double step = 2.0 * quantization_tau(bits);
    double w = wrap_angle(theta);
    double q = std::round(w / step) * step;
    if (q >= kPi)
        q = -kPi;
    return q;
}

double sample_quant_error(int bits, Rng& rng)
{
    double tau = quantization_tau(bits);
    std::uniform_real_distribution<double> u(-tau, tau);
    return u(rng);
}

std::vector<double> random_phases(int n, Rng& rng)
{
    if (n < 1)
        throw std::domain_error("random_phases: need n >= 1");
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& t : out)
        t = u(rng);
    return out;
}

} // namespace risbc::ris
