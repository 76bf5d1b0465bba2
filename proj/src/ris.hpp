#ifndef RISBC_RIS_HPP
#define RISBC_RIS_HPP

#include <span>
#include <vector>

#include "channel.hpp"

namespace risbc::ris {

using channel::Rng;

// Reflection state of an N-element surface: per-element phase (radians,
// wrapped to [-pi, pi)) and amplitude eta in (0, 1].
struct PhaseVector {
    std::vector<double> theta;
    std::vector<double> eta;

    static PhaseVector uniform_eta(std::vector<double> theta, double eta);
};

enum class PhasePolicyKind {
    OptimalContinuous,
    Quantized,
    Random,
    NoRis,
};

struct PhasePolicy {
    PhasePolicyKind kind = PhasePolicyKind::OptimalContinuous;
    int bits = 0; // quantization bits, >= 1 when kind == Quantized

    static PhasePolicy optimal() { return {PhasePolicyKind::OptimalContinuous, 0}; }
    static PhasePolicy quantized(int bits);
    static PhasePolicy random() { return {PhasePolicyKind::Random, 0}; }
    static PhasePolicy no_ris() { return {PhasePolicyKind::NoRis, 0}; }
};

// Wrap an angle into [-pi, pi).
double wrap_angle(double theta);

// Power-maximizing phases theta_n = wrap(theta_f - theta_g[n] - theta_h[n]).
std::vector<double> optimal_phases(double theta_f, std::span<const double> theta_g,
                                   std::span<const double> theta_h);

// Nearest point of the uniform grid with step 2 pi / 2^bits covering
// [-pi, pi); the worst-case error is tau = pi / 2^bits.
double quantize_phase(double theta, int bits);
double quantization_tau(int bits);

// One quantization-error draw, uniform on [-tau, tau).
double sample_quant_error(int bits, Rng& rng);

// N i.i.d. angles uniform on [-pi, pi).
std::vector<double> random_phases(int n, Rng& rng);

} // namespace risbc::ris

#endif
