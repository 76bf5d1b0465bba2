#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "multi_tag.hpp"
#include "specfun.hpp"

namespace risbc::mc {

namespace {

// Fixed block size: results are a pure function of (config, seed).
constexpr long long kBlock = 4096;

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

double quantile_sorted(const std::vector<double>& xs, double q)
{
    if (xs.empty())
        return 0.0;
    double pos = q * static_cast<double>(xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    double w = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - w) + xs[hi] * w;
}

struct Accum {
    double sum_pt = 0.0, sum_pt2 = 0.0;
    double sum_rate = 0.0, sum_rate2 = 0.0;
    double sum_ber = 0.0;
    long long eo = 0, snr_out = 0, printed_out = 0, eh_out = 0;
};

} // namespace

Histogram freedman_diaconis(const std::vector<double>& samples)
{
    Histogram h;
    if (samples.empty())
        return h;
    std::vector<double> xs(samples);
    std::sort(xs.begin(), xs.end());
    double lo = xs.front(), hi = xs.back();
    double iqr = quantile_sorted(xs, 0.75) - quantile_sorted(xs, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(xs.size()));
    long long bins;
    if (!(width > 0.0) || hi <= lo)
        bins = 1;
    else
        bins = std::clamp<long long>(
            static_cast<long long>(std::ceil((hi - lo) / width)), 1, 4096);
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (long long i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    for (double x : xs) {
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        std::size_t idx = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - h.edges.begin() - 1, 0,
                                       static_cast<std::ptrdiff_t>(h.counts.size()) - 1));
        ++h.counts[idx];
    }
    return h;
}

double StepFunction::operator()(double x) const
{
    if (xs.empty())
        return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return static_cast<double>(it - xs.begin()) / static_cast<double>(xs.size());
}

StepFunction empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: need at least one sample");
    StepFunction f;
    std::sort(samples.begin(), samples.end());
    f.xs = std::move(samples);
    return f;
}

TrialReport run_single_tag(const SingleTagConfig& cfg)
{
    if (cfg.trials < 1)
        throw std::invalid_argument("run_single_tag: need trials >= 1");
    cfg.sys.validate();

    const double p = cfg.sys.tx_power_w;
    const double gamma_bar = cfg.sys.gamma_bar();
    const double pb_prime = cfg.sys.activation_w / cfg.sys.phi;
    const double eta = cfg.sys.eta;
    const int n = cfg.sys.n_elements;
    const bool use_ris = n > 0 && cfg.policy.kind != ris::PhasePolicyKind::NoRis;

    const long long blocks = (cfg.trials + kBlock - 1) / kBlock;
    std::vector<Accum> acc(static_cast<std::size_t>(blocks));
    std::vector<double> snr(static_cast<std::size_t>(cfg.trials));

    auto run_block = [&](long long bi) {
        channel::Rng rng = channel::make_stream(cfg.seed, static_cast<std::uint64_t>(bi));
        channel::NakagamiSampler draw_f(cfg.f.m, cfg.f.omega());
        channel::NakagamiSampler draw_u(cfg.u.m, cfg.u.omega());
        channel::NakagamiSampler draw_g(cfg.g.m, cfg.g.omega());
        channel::NakagamiSampler draw_h(cfg.h.m, cfg.h.omega());
        std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
        Accum& a = acc[static_cast<std::size_t>(bi)];
        const long long lo = bi * kBlock;
        const long long hi = std::min(cfg.trials, lo + kBlock);
        for (long long t = lo; t < hi; ++t) {
            double alpha_f = draw_f(rng);
            double alpha_u = draw_u(rng);
            double y2; // |f + cascade|^2 with the policy applied
            switch (use_ris ? cfg.policy.kind : ris::PhasePolicyKind::NoRis) {
            case ris::PhasePolicyKind::OptimalContinuous: {
                double s = alpha_f;
                for (int i = 0; i < n; ++i)
                    s += eta * draw_g(rng) * draw_h(rng);
                y2 = s * s;
                break;
            }
            case ris::PhasePolicyKind::Quantized: {
                double re = alpha_f, im = 0.0;
                for (int i = 0; i < n; ++i) {
                    double amp = eta * draw_g(rng) * draw_h(rng);
                    double eps = ris::sample_quant_error(cfg.policy.bits, rng);
                    re += amp * std::cos(eps);
                    im += amp * std::sin(eps);
                }
                y2 = re * re + im * im;
                break;
            }
            case ris::PhasePolicyKind::Random: {
                // theta_g + theta_h + theta_n of independent uniforms is
                // again uniform; one draw stands in for the three.
                double re = alpha_f, im = 0.0;
                for (int i = 0; i < n; ++i) {
                    double amp = eta * draw_g(rng) * draw_h(rng);
                    double ph = phase(rng);
                    re += amp * std::cos(ph);
                    im += amp * std::sin(ph);
                }
                y2 = re * re + im * im;
                break;
            }
            case ris::PhasePolicyKind::NoRis:
            default:
                y2 = alpha_f * alpha_f;
                break;
            }
            double pt = p * y2;
            double snr_t = gamma_bar * alpha_u * alpha_u * y2;
            snr[static_cast<std::size_t>(t)] = snr_t;
            double rate = std::log2(1.0 + snr_t);
            a.sum_pt += pt;
            a.sum_pt2 += pt * pt;
            a.sum_rate += rate;
            a.sum_rate2 += rate * rate;
            a.sum_ber += specfun::q_function(std::sqrt(2.0 * snr_t));
            bool eo = (1.0 - cfg.sys.beta) * pt <= pb_prime;
            bool snr_out = snr_t <= cfg.gamma_th;
            a.eo += eo;
            a.snr_out += snr_out;
            a.printed_out += (pt <= cfg.gamma_th) || snr_out;
            a.eh_out += eo || snr_out;
        }
    };

    const int workers = std::min<long long>(resolve_threads(cfg.threads), blocks);
    if (workers <= 1) {
        for (long long bi = 0; bi < blocks; ++bi)
            run_block(bi);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long long bi = w; bi < blocks; bi += workers)
                    run_block(bi);
            });
        for (auto& th : pool)
            th.join();
    }

    Accum total;
    for (const auto& a : acc) {
        total.sum_pt += a.sum_pt;
        total.sum_pt2 += a.sum_pt2;
        total.sum_rate += a.sum_rate;
        total.sum_rate2 += a.sum_rate2;
        total.sum_ber += a.sum_ber;
        total.eo += a.eo;
        total.snr_out += a.snr_out;
        total.printed_out += a.printed_out;
        total.eh_out += a.eh_out;
    }

    TrialReport r;
    r.trials = cfg.trials;
    const double inv = 1.0 / static_cast<double>(cfg.trials);
    r.mean_rx_power = total.sum_pt * inv;
    r.var_rx_power = std::max(0.0, total.sum_pt2 * inv - r.mean_rx_power * r.mean_rx_power);
    r.mean_harvested = cfg.sys.phi * (1.0 - cfg.sys.beta) * r.mean_rx_power;
    r.mean_rate = total.sum_rate * inv;
    r.var_rate = std::max(0.0, total.sum_rate2 * inv - r.mean_rate * r.mean_rate);
    r.ber = total.sum_ber * inv;
    r.eo_rate = static_cast<double>(total.eo) * inv;
    r.snr_outage_rate = static_cast<double>(total.snr_out) * inv;
    r.outage_printed_rate = static_cast<double>(total.printed_out) * inv;
    r.outage_eh_rate = static_cast<double>(total.eh_out) * inv;
    r.snr_hist = freedman_diaconis(snr);
    if (cfg.keep_snr_samples)
        r.snr_samples = std::move(snr);
    return r;
}

MultiTagReport run_multi_tag(const MultiTagConfig& cfg)
{
    const int K = static_cast<int>(cfg.f.size());
    if (K < 1 || cfg.u.size() != cfg.f.size() || cfg.g.size() != cfg.f.size())
        throw std::invalid_argument("run_multi_tag: per-tag link lists must share one length");
    if (cfg.trials < 1)
        throw std::invalid_argument("run_multi_tag: need trials >= 1");
    cfg.sys.validate();

    const int n = cfg.sys.n_elements;
    const double pb_prime = cfg.sys.activation_w / cfg.sys.phi;

    struct TagAccum {
        std::vector<long long> outage, eo;
        std::vector<double> ber, rate;
        double sum_rate = 0.0, sum_rate2 = 0.0;
        long long infeasible = 0;
        explicit TagAccum(int k)
            : outage(static_cast<std::size_t>(k), 0), eo(static_cast<std::size_t>(k), 0),
              ber(static_cast<std::size_t>(k), 0.0), rate(static_cast<std::size_t>(k), 0.0)
        {
        }
    };

    const long long blocks = (cfg.trials + kBlock - 1) / kBlock;
    std::vector<TagAccum> acc(static_cast<std::size_t>(blocks), TagAccum(K));

    auto run_block = [&](long long bi) {
        channel::Rng rng = channel::make_stream(cfg.seed, static_cast<std::uint64_t>(bi));
        TagAccum& a = acc[static_cast<std::size_t>(bi)];
        const long long lo = bi * kBlock;
        const long long hi = std::min(cfg.trials, lo + kBlock);
        for (long long t = lo; t < hi; ++t) {
            multi_tag::MultiTagInstance inst;
            inst.sys = cfg.sys;
            inst.f.resize(static_cast<std::size_t>(K));
            inst.u.resize(static_cast<std::size_t>(K));
            inst.g.resize(static_cast<std::size_t>(K));
            inst.h.resize(static_cast<std::size_t>(n));
            for (int k = 0; k < K; ++k) {
                inst.f[static_cast<std::size_t>(k)] = channel::sample_link(cfg.f[static_cast<std::size_t>(k)], rng);
                inst.u[static_cast<std::size_t>(k)] = channel::sample_link(cfg.u[static_cast<std::size_t>(k)], rng);
                auto& gk = inst.g[static_cast<std::size_t>(k)];
                gk.resize(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j)
                    gk[static_cast<std::size_t>(j)] = channel::sample_link(cfg.g[static_cast<std::size_t>(k)], rng);
            }
            for (int j = 0; j < n; ++j)
                inst.h[static_cast<std::size_t>(j)] = channel::sample_link(cfg.h, rng);

            std::vector<multi_tag::cplx> theta(static_cast<std::size_t>(n),
                                               multi_tag::cplx{0.0, 0.0});
            switch (cfg.policy) {
            case MultiTagPolicy::Optimized: {
                multi_tag::SolveOptions opts;
                opts.enforce_eh = cfg.enforce_eh;
                auto st = multi_tag::optimize_phases(inst, opts);
                theta = st.theta;
                if (!st.feasible)
                    ++a.infeasible;
                break;
            }
            case MultiTagPolicy::Random: {
                auto phases = ris::random_phases(std::max(n, 1), rng);
                for (int j = 0; j < n; ++j)
                    theta[static_cast<std::size_t>(j)] =
                        std::polar(cfg.sys.eta, -phases[static_cast<std::size_t>(j)]);
                break;
            }
            case MultiTagPolicy::NoRis:
            default:
                break;
            }

            double sum_rate = 0.0;
            for (int k = 0; k < K; ++k) {
                double s = multi_tag::sinr(inst, theta, k);
                double rate = std::log2(1.0 + s);
                sum_rate += rate;
                a.rate[static_cast<std::size_t>(k)] += rate;
                a.ber[static_cast<std::size_t>(k)] += specfun::q_function(std::sqrt(2.0 * s));
                a.outage[static_cast<std::size_t>(k)] += (s <= cfg.gamma_th);
                double pt = multi_tag::received_power(inst, theta, k);
                a.eo[static_cast<std::size_t>(k)] += ((1.0 - cfg.sys.beta) * pt <= pb_prime);
            }
            a.sum_rate += sum_rate;
            a.sum_rate2 += sum_rate * sum_rate;
        }
    };

    const int workers = std::min<long long>(resolve_threads(cfg.threads), blocks);
    if (workers <= 1) {
        for (long long bi = 0; bi < blocks; ++bi)
            run_block(bi);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long long bi = w; bi < blocks; bi += workers)
                    run_block(bi);
            });
        for (auto& th : pool)
            th.join();
    }

    MultiTagReport r;
    r.trials = cfg.trials;
    r.tag_outage.assign(static_cast<std::size_t>(K), 0.0);
    r.tag_eo.assign(static_cast<std::size_t>(K), 0.0);
    r.tag_ber.assign(static_cast<std::size_t>(K), 0.0);
    r.tag_rate.assign(static_cast<std::size_t>(K), 0.0);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& a : acc) {
        for (int k = 0; k < K; ++k) {
            r.tag_outage[static_cast<std::size_t>(k)] += static_cast<double>(a.outage[static_cast<std::size_t>(k)]);
            r.tag_eo[static_cast<std::size_t>(k)] += static_cast<double>(a.eo[static_cast<std::size_t>(k)]);
            r.tag_ber[static_cast<std::size_t>(k)] += a.ber[static_cast<std::size_t>(k)];
            r.tag_rate[static_cast<std::size_t>(k)] += a.rate[static_cast<std::size_t>(k)];
        }
        sum += a.sum_rate;
        sum2 += a.sum_rate2;
        r.infeasible += a.infeasible;
    }
    const double inv = 1.0 / static_cast<double>(cfg.trials);
    for (int k = 0; k < K; ++k) {
        r.tag_outage[static_cast<std::size_t>(k)] *= inv;
        r.tag_eo[static_cast<std::size_t>(k)] *= inv;
        r.tag_ber[static_cast<std::size_t>(k)] *= inv;
        r.tag_rate[static_cast<std::size_t>(k)] *= inv;
    }
    r.mean_sum_rate = sum * inv;
    r.var_sum_rate = std::max(0.0, sum2 * inv - r.mean_sum_rate * r.mean_sum_rate);
    return r;
}

namespace {

// Adaptive Simpson used only by the exact-Q oracle below.
template <typename F>
double simpson_rec(F f, double lo, double hi, double flo, double fmid, double fhi, double tol,
                   int depth)
{
    double mid = 0.5 * (lo + hi);
    double fl = f(0.5 * (lo + mid));
    double fr = f(0.5 * (mid + hi));
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return simpson_rec(f, lo, mid, flo, fl, fmid, 0.5 * tol, depth - 1) +
           simpson_rec(f, mid, hi, fmid, fr, fhi, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F f, double lo, double hi, double tol)
{
    double mid = 0.5 * (lo + hi);
    return simpson_rec(f, lo, hi, f(lo), f(mid), f(hi), tol, 40);
}

} // namespace

double ber_quadrature_oracle(const single_tag::GammaFit& fit, double gamma_bar)
{
    if (!(gamma_bar >= 0.0))
        throw std::domain_error("ber_quadrature_oracle: gamma_bar must be >= 0");
    const double nu = 2.0;
    const double k = fit.k;
    const double scale_q = fit.scale * std::sqrt(nu * gamma_bar);
    const double lg = specfun::ln_gamma(k);
    // x = fit.scale * t puts the Gamma density on its natural O(1) scale.
    auto f = [&](double t) {
        if (t <= 0.0)
            return 0.0;
        double logw = (k - 1.0) * std::log(t) - t - lg;
        return specfun::q_function(scale_q * t) * std::exp(logw);
    };
    double hi = k + 45.0 + 12.0 * std::sqrt(k);
    if (k >= 1.0)
        return integrate(f, 0.0, hi, 1e-13);
    // integrable endpoint singularity: substitute t = u^{1/k} on [0, 1]
    auto head = [&](double u) {
        if (u <= 0.0)
            return 0.0;
        double t = std::pow(u, 1.0 / k);
        return specfun::q_function(scale_q * t) * std::exp(-t - lg) / k;
    };
    return integrate(head, 0.0, 1.0, 1e-13) + integrate(f, 1.0, hi, 1e-13);
}

} // namespace risbc::mc
