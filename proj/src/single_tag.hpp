#ifndef RISBC_SINGLE_TAG_HPP
#define RISBC_SINGLE_TAG_HPP

#include "channel.hpp"

namespace risbc::single_tag {

using channel::LinkParams;
using channel::Moments;

// Global scenario parameters. n_elements == 0 encodes the no-RIS baseline.
struct SystemParams {
    double tx_power_w = 0.1;
    double beta = 0.6;        // reflected fraction at the tag
    double phi = 0.8;         // RF-to-DC conversion efficiency
    double eta = 0.8;         // RIS element amplitude
    int n_elements = 100;
    double noise_w = 3.9810717055349565e-13; // -94 dBm
    double activation_w = 1e-5;              // -20 dBm

    double gamma_bar() const { return tx_power_w * beta / noise_w; }
    void validate() const;
};

// Moment-matched Gamma(k, scale) fit: k * scale = mean, k * scale^2 = var.
struct GammaFit {
    double k = 1.0;
    double scale = 1.0;

    double raw_moment(int order) const; // scale^m Gamma(k+m)/Gamma(k)
    double cdf(double x) const;
};
GammaFit fit_gamma(double mean, double var);

// Gaussian moment fit truncated to [0, inf); psi = 1 / Q(-mu / sigma).
struct TruncGaussFit {
    double mu = 0.0;
    double var = 1.0;
    double psi = 1.0;

    double cdf(double x) const;
    double pdf(double x) const;
};
TruncGaussFit fit_trunc_gaussian(double mean, double var);

// Statistics of the co-phased cascade X = sum eta alpha_g alpha_h, of
// Y = alpha_f + X and of Lambda = alpha_u Y, plus the moment fits used by
// every closed form. The fourth raw moment of Lambda comes from the Gamma
// fit; its second raw moment coincides with the exact one.
struct CascadeStats {
    Moments f, u, g, h; // per-link amplitude moments
    int n_elements = 0;
    double eta = 1.0;

    double mu_x = 0.0, var_x = 0.0;
    double mu_y = 0.0, var_y = 0.0, raw2_y = 0.0;
    double mu_l = 0.0, var_l = 0.0, raw2_l = 0.0, raw4_l = 0.0;

    GammaFit fit_y, fit_l;
    TruncGaussFit tg_y, tg_l;
};

CascadeStats cascade_moments(const LinkParams& f, const LinkParams& u,
                             const LinkParams& g, const LinkParams& h,
                             const SystemParams& sys);

// Moments of the cascade under D-bit phase quantization (X_R real part,
// X_I quadrature part; E{X_I} = 0).
struct QuantizedCascade {
    double mu_xr = 0.0;
    double var_xr = 0.0;
    double raw2_xr = 0.0;
    double raw2_xi = 0.0;
};
QuantizedCascade quantized_cascade(const CascadeStats& stats, int bits);

enum class FitKind { Gamma, TruncatedGaussian };

// CDF of the optimal SNR gamma* = gamma_bar Lambda^2 at r >= 0.
double cdf_snr(const SystemParams& sys, const CascadeStats& stats, FitKind kind, double r);
// CDF of the optimal received power P_T* = P Y^2 at r >= 0.
double cdf_received_power(const SystemParams& sys, const CascadeStats& stats, FitKind kind,
                          double r);

// Average harvested power phi (1-beta) E{P_T*} in watts.
double avg_harvested_power(const SystemParams& sys, const CascadeStats& stats);

// Energy-outage probability Pr{(1-beta) P_T* <= P_b / phi}.
double eo_probability(const SystemParams& sys, const CascadeStats& stats,
                      FitKind kind = FitKind::Gamma);

struct RateBounds {
    double lb = 0.0;
    double ub = 0.0;
};
RateBounds rate_bounds(const SystemParams& sys, const CascadeStats& stats);

// Large-N rate limit under the power scaling P = P_A / N^2; sys carries P_A.
double asymptotic_rate(const SystemParams& sys, const LinkParams& u, const LinkParams& g,
                       const LinkParams& h);

// Outage composition with gamma_th used as the threshold of both CDFs.
double outage_probability(const SystemParams& sys, const CascadeStats& stats, double gamma_th);
// Variant applying the energy threshold P_b/phi/(1-beta) to the power CDF.
double outage_probability_eh(const SystemParams& sys, const CascadeStats& stats,
                             double gamma_th);

// Average BPSK bit error rate under the Gamma fit of Lambda.
double avg_ber(const SystemParams& sys, const CascadeStats& stats);
double avg_ber_gamma(const GammaFit& fit, double gamma_bar);

// High-SNR quantities: leading outage/BER terms, diversity order k/2,
// coding and array gains, and the N -> infinity diversity limit.
struct Asymptotics {
    double p_out_inf = 0.0;
    double ber_inf = 0.0;
    double diversity_order = 0.0;
    double coding_gain = 0.0;
    double array_gain = 0.0;
    double diversity_limit = 0.0;
};
Asymptotics asymptotics(const SystemParams& sys, const CascadeStats& stats, double gamma_th,
                        double m_u);
double diversity_order_limit(double m_u);

// Rate upper bound with D-bit quantized phases; tends to rate_bounds().ub
// as D grows.
double quantized_rate_ub(const SystemParams& sys, const CascadeStats& stats, int bits);

} // namespace risbc::single_tag

#endif
