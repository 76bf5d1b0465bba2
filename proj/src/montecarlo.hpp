#ifndef RISBC_MONTECARLO_HPP
#define RISBC_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "channel.hpp"
#include "ris.hpp"
#include "single_tag.hpp"

namespace risbc::mc {

using channel::LinkParams;
using single_tag::SystemParams;

struct Histogram {
    std::vector<double> edges;       // bin edges, size counts.size() + 1
    std::vector<long long> counts;
};

// Freedman-Diaconis binning, fixed once per sample set.
Histogram freedman_diaconis(const std::vector<double>& samples);

// Right-continuous empirical CDF.
struct StepFunction {
    std::vector<double> xs; // sorted sample points
    double operator()(double x) const;
};
StepFunction empirical_cdf(std::vector<double> samples);

struct SingleTagConfig {
    LinkParams f, u, g, h;
    SystemParams sys;
    ris::PhasePolicy policy = ris::PhasePolicy::optimal();
    double gamma_th = 1.0;           // SNR outage threshold (linear)
    long long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;                 // 0 = hardware concurrency
    bool keep_snr_samples = false;
};

struct TrialReport {
    long long trials = 0;
    double mean_rx_power = 0.0;      // E{P_T}
    double var_rx_power = 0.0;
    double mean_harvested = 0.0;     // phi (1-beta) E{P_T}
    double mean_rate = 0.0;          // E{log2(1 + gamma*)}
    double var_rate = 0.0;
    double eo_rate = 0.0;            // (1-beta) P_T <= P_b / phi
    double snr_outage_rate = 0.0;    // gamma* <= gamma_th
    double outage_printed_rate = 0.0; // P_T <= gamma_th or SNR outage
    double outage_eh_rate = 0.0;      // EO or SNR outage
    double ber = 0.0;                // E{Q(sqrt(2 gamma*))}
    Histogram snr_hist;
    std::vector<double> snr_samples; // filled when keep_snr_samples
};

// Brute-force single-tag measurement. Deterministic for a fixed
// (config, seed); trial blocks own independent substreams, so the result
// does not depend on the worker count.
TrialReport run_single_tag(const SingleTagConfig& cfg);

enum class MultiTagPolicy { Optimized, Random, NoRis };

struct MultiTagConfig {
    std::vector<LinkParams> f, u, g; // one entry per tag
    LinkParams h;
    SystemParams sys;
    MultiTagPolicy policy = MultiTagPolicy::Optimized;
    bool enforce_eh = false;         // harvest constraints inside the optimizer
    double gamma_th = 1.0;
    long long trials = 1000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct MultiTagReport {
    long long trials = 0;
    std::vector<double> tag_outage;  // Pr{gamma_k <= gamma_th}
    std::vector<double> tag_eo;      // Pr{(1-beta) P_T,k <= P_b / phi}
    std::vector<double> tag_ber;
    std::vector<double> tag_rate;
    double mean_sum_rate = 0.0;
    double var_sum_rate = 0.0;
    long long infeasible = 0;        // optimizer EH infeasibility count
};

MultiTagReport run_multi_tag(const MultiTagConfig& cfg);

// Average BPSK BER of a Gamma-fitted amplitude by adaptive quadrature of
// the exact Gaussian Q against the fit density; bounds the gap of the
// exponential-approximation closed form. Absolute error <= 1e-9.
double ber_quadrature_oracle(const single_tag::GammaFit& fit, double gamma_bar);

} // namespace risbc::mc

#endif
