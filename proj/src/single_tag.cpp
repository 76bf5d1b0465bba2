#include "single_tag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specfun.hpp"

namespace risbc::single_tag {

namespace {

using specfun::kQApprox;

double log_sum_exp(double a, double b)
{
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

} // namespace

void SystemParams::validate() const
{
    if (!(tx_power_w > 0.0))
        throw std::domain_error("SystemParams: transmit power must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("SystemParams: beta must lie in (0, 1)");
    if (!(phi > 0.0 && phi <= 1.0))
        throw std::domain_error("SystemParams: phi must lie in (0, 1]");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::domain_error("SystemParams: eta must lie in (0, 1]");
    if (n_elements < 0)
        throw std::domain_error("SystemParams: element count must be >= 0");
    if (!(noise_w > 0.0))
        throw std::domain_error("SystemParams: noise power must be positive");
    if (activation_w < 0.0)
        throw std::domain_error("SystemParams: activation threshold must be >= 0");
}

GammaFit fit_gamma(double mean, double var)
{
    if (!(mean > 0.0) || !(var > 0.0))
        throw std::domain_error("fit_gamma: mean and variance must be positive");
    GammaFit f;
    f.k = mean * mean / var;
    f.scale = var / mean;
    return f;
}

double GammaFit::raw_moment(int order) const
{
    if (order < 1)
        throw std::domain_error("GammaFit::raw_moment: order must be >= 1");
    return std::pow(scale, order) *
           std::exp(specfun::ln_gamma(k + order) - specfun::ln_gamma(k));
}

double GammaFit::cdf(double x) const
{
    if (x <= 0.0)
        return 0.0;
    return specfun::gamma_lower_reg(k, x / scale);
}

TruncGaussFit fit_trunc_gaussian(double mean, double var)
{
    if (!(mean > 0.0) || !(var > 0.0))
        throw std::domain_error("fit_trunc_gaussian: mean and variance must be positive");
    TruncGaussFit f;
    f.mu = mean;
    f.var = var;
    f.psi = 1.0 / specfun::q_function(-mean / std::sqrt(var));
    return f;
}

double TruncGaussFit::cdf(double x) const
{
    if (x <= 0.0)
        return 0.0;
    double v = 1.0 - psi * specfun::q_function((x - mu) / std::sqrt(var));
    return std::clamp(v, 0.0, 1.0);
}

double TruncGaussFit::pdf(double x) const
{
    if (x < 0.0)
        return 0.0;
    double d = x - mu;
    return psi / std::sqrt(2.0 * std::numbers::pi * var) * std::exp(-d * d / (2.0 * var));
}

CascadeStats cascade_moments(const LinkParams& f, const LinkParams& u, const LinkParams& g,
                             const LinkParams& h, const SystemParams& sys)
{
    sys.validate();
    CascadeStats s;
    s.n_elements = sys.n_elements;
    s.eta = sys.eta;
    s.f = channel::nakagami_amplitude_moments(f.m, f.omega());
    s.u = channel::nakagami_amplitude_moments(u.m, u.omega());
    s.g = channel::nakagami_amplitude_moments(g.m, g.omega());
    s.h = channel::nakagami_amplitude_moments(h.m, h.omega());

    const double n = static_cast<double>(sys.n_elements);
    const double elem_mean = sys.eta * s.g.mean * s.h.mean;
    const double elem_raw2 = sys.eta * sys.eta * s.g.raw2 * s.h.raw2;
    s.mu_x = n * elem_mean;
    s.var_x = n * (elem_raw2 - elem_mean * elem_mean);

    s.mu_y = s.f.mean + s.mu_x;
    s.var_y = s.f.var + s.var_x;
    s.raw2_y = s.var_y + s.mu_y * s.mu_y;

    s.mu_l = s.u.mean * s.mu_y;
    s.raw2_l = s.u.raw2 * s.raw2_y;
    s.var_l = s.raw2_l - s.mu_l * s.mu_l;

    if (!(s.var_y > 0.0) || !(s.var_l > 0.0))
        throw std::domain_error("cascade_moments: degenerate zero-variance cascade");

    s.fit_y = fit_gamma(s.mu_y, s.var_y);
    s.fit_l = fit_gamma(s.mu_l, s.var_l);
    s.tg_y = fit_trunc_gaussian(s.mu_y, s.var_y);
    s.tg_l = fit_trunc_gaussian(s.mu_l, s.var_l);
    s.raw4_l = s.fit_l.raw_moment(4);
    return s;
}

QuantizedCascade quantized_cascade(const CascadeStats& stats, int bits)
{
    if (bits < 1)
        throw std::domain_error("quantized_cascade: bits must be >= 1");
    const double tau = std::numbers::pi / static_cast<double>(1ull << bits);
    const double mean_cos = std::sin(tau) / tau;                     // E{cos eps}
    const double raw2_cos = 0.5 + std::sin(2.0 * tau) / (4.0 * tau); // E{cos^2 eps}
    const double raw2_sin = 0.5 - std::sin(2.0 * tau) / (4.0 * tau); // E{sin^2 eps}

    const double n = static_cast<double>(stats.n_elements);
    const double elem_mean = stats.eta * stats.g.mean * stats.h.mean;
    const double elem_raw2 = stats.eta * stats.eta * stats.g.raw2 * stats.h.raw2;

    QuantizedCascade q;
    q.mu_xr = n * elem_mean * mean_cos;
    q.var_xr = n * (elem_raw2 * raw2_cos - elem_mean * elem_mean * mean_cos * mean_cos);
    q.raw2_xr = q.var_xr + q.mu_xr * q.mu_xr;
    q.raw2_xi = n * elem_raw2 * raw2_sin;
    return q;
}

namespace {

double amplitude_cdf(const CascadeStats& stats, FitKind kind, bool of_lambda, double amp)
{
    if (kind == FitKind::Gamma)
        return of_lambda ? stats.fit_l.cdf(amp) : stats.fit_y.cdf(amp);
    return of_lambda ? stats.tg_l.cdf(amp) : stats.tg_y.cdf(amp);
}

} // namespace

double cdf_snr(const SystemParams& sys, const CascadeStats& stats, FitKind kind, double r)
{
    if (r < 0.0)
        throw std::domain_error("cdf_snr: threshold must be >= 0");
    if (r == 0.0)
        return 0.0;
    return amplitude_cdf(stats, kind, true, std::sqrt(r / sys.gamma_bar()));
}

double cdf_received_power(const SystemParams& sys, const CascadeStats& stats, FitKind kind,
                          double r)
{
    if (r < 0.0)
        throw std::domain_error("cdf_received_power: threshold must be >= 0");
    if (r == 0.0)
        return 0.0;
    return amplitude_cdf(stats, kind, false, std::sqrt(r / sys.tx_power_w));
}

double avg_harvested_power(const SystemParams& sys, const CascadeStats& stats)
{
    double e_pt = sys.tx_power_w *
                  (stats.f.var + stats.f.mean * stats.f.mean + stats.var_x +
                   stats.mu_x * stats.mu_x + 2.0 * stats.f.mean * stats.mu_x);
    return sys.phi * (1.0 - sys.beta) * e_pt;
}

double eo_probability(const SystemParams& sys, const CascadeStats& stats, FitKind kind)
{
    double pb_prime = sys.activation_w / sys.phi;
    if (pb_prime <= 0.0)
        return 0.0;
    return cdf_received_power(sys, stats, kind, pb_prime / (1.0 - sys.beta));
}

RateBounds rate_bounds(const SystemParams& sys, const CascadeStats& stats)
{
    const double mean_snr = sys.gamma_bar() * stats.raw2_l;
    const double var_snr =
        sys.gamma_bar() * sys.gamma_bar() * (stats.raw4_l - stats.raw2_l * stats.raw2_l);
    const double inv_mean = 1.0 / mean_snr + var_snr / (mean_snr * mean_snr * mean_snr);
    RateBounds rb;
    rb.ub = std::log2(1.0 + mean_snr);
    rb.lb = std::log2(1.0 + 1.0 / inv_mean);
    return rb;
}

double asymptotic_rate(const SystemParams& sys, const LinkParams& u, const LinkParams& g,
                       const LinkParams& h)
{
    sys.validate();
    const double raw2_u = u.omega();
    const double mu_x_elem = sys.eta * channel::nakagami_raw_moment(g.m, g.omega(), 1) *
                             channel::nakagami_raw_moment(h.m, h.omega(), 1);
    return std::log2(1.0 + sys.gamma_bar() * raw2_u * mu_x_elem * mu_x_elem);
}

double outage_probability(const SystemParams& sys, const CascadeStats& stats, double gamma_th)
{
    if (!(gamma_th > 0.0))
        throw std::domain_error("outage_probability: gamma_th must be positive");
    double eo = cdf_received_power(sys, stats, FitKind::Gamma, gamma_th);
    double snr = cdf_snr(sys, stats, FitKind::Gamma, gamma_th);
    return eo + (1.0 - eo) * snr;
}

double outage_probability_eh(const SystemParams& sys, const CascadeStats& stats,
                             double gamma_th)
{
    if (!(gamma_th > 0.0))
        throw std::domain_error("outage_probability_eh: gamma_th must be positive");
    double eo = eo_probability(sys, stats);
    double snr = cdf_snr(sys, stats, FitKind::Gamma, gamma_th);
    return eo + (1.0 - eo) * snr;
}

double avg_ber_gamma(const GammaFit& fit, double gamma_bar)
{
    const double nu = 2.0; // BPSK
    const double k = fit.k;
    const double lam = fit.scale;
    const double a_bar = kQApprox.a * nu * gamma_bar;
    const double b_bar = kQApprox.b * std::sqrt(nu * gamma_bar);
    const double b1 = b_bar + 1.0 / lam;
    if (a_bar <= 0.0)
        return std::exp(-kQApprox.c); // gamma_bar -> 0 limit
    const double z = b1 / std::sqrt(2.0 * a_bar);
    // Product of the Gamma-pdf prefactor, the tabulated integral and
    // D_{-k}, assembled in log space so the exp(b1^2 / 8 a_bar) factor
    // cancels against the decay of D.
    double ln_ber = -kQApprox.c - specfun::ln_gamma(k) - k * std::log(lam) -
                    0.5 * k * std::log(2.0 * a_bar) + specfun::ln_cylinder_integral(k, z);
    return std::exp(ln_ber);
}

double avg_ber(const SystemParams& sys, const CascadeStats& stats)
{
    return avg_ber_gamma(stats.fit_l, sys.gamma_bar());
}

double diversity_order_limit(double m_u)
{
    if (!(m_u >= 0.5))
        throw std::domain_error("diversity_order_limit: shape must be >= 0.5");
    double r = std::exp(specfun::ln_gamma(m_u) - specfun::ln_gamma(m_u + 0.5));
    return 0.5 / (m_u * r * r - 1.0);
}

Asymptotics asymptotics(const SystemParams& sys, const CascadeStats& stats, double gamma_th,
                        double m_u)
{
    if (!(gamma_th > 0.0))
        throw std::domain_error("asymptotics: gamma_th must be positive");
    const double nu = 2.0;
    const double lambda_mod = 1.0; // BPSK
    const double k = stats.fit_l.k;
    const double lam = stats.fit_l.scale;
    const double gamma_bar = sys.gamma_bar();

    Asymptotics out;
    out.diversity_order = 0.5 * k;
    double ln_oc = -specfun::ln_gamma(k + 1.0) - k * std::log(lam);
    out.coding_gain = std::exp(ln_oc);
    out.p_out_inf = std::exp(ln_oc + 0.5 * k * std::log(gamma_th / gamma_bar));

    double ln_c1 = std::log(lambda_mod) + specfun::ln_gamma(0.5 * k) - std::log(8.0) -
                   specfun::ln_gamma(k) - k * std::log(lam);
    double ln_s = log_sum_exp(0.5 * k * std::log(2.0) - std::log(3.0),
                              0.5 * k * std::log(1.5));
    // lambda_E solves (lambda_E gamma_bar)^{-k/2} = S C1 (nu gamma_bar)^{-k/2}.
    double ln_lambda_e = std::log(nu) - (2.0 / k) * (ln_s + ln_c1);
    out.array_gain = std::exp(ln_lambda_e);
    out.ber_inf = std::exp(-0.5 * k * (ln_lambda_e + std::log(gamma_bar)));
    out.diversity_limit = diversity_order_limit(m_u);
    return out;
}

double quantized_rate_ub(const SystemParams& sys, const CascadeStats& stats, int bits)
{
    QuantizedCascade q = quantized_cascade(stats, bits);
    double raw2_f = stats.f.raw2;
    double snr = sys.gamma_bar() * stats.u.raw2 *
                 (raw2_f + q.raw2_xr + 2.0 * stats.f.mean * q.mu_xr + q.raw2_xi);
    return std::log2(1.0 + snr);
}

} // namespace risbc::single_tag
