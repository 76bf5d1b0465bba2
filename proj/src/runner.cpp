#include "runner.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "montecarlo.hpp"
#include "multi_tag.hpp"
#include "specfun.hpp"

namespace risbc::runner {

namespace st = risbc::single_tag;
namespace sc = risbc::scenario;

using sc::CsvWriter;

namespace {

std::string S(double v)
{
    return CsvWriter::num(v);
}

struct PointEval {
    st::SystemParams sys;
    channel::LinkParams lf, lu, lg, lh;
    st::CascadeStats stats;
    bool no_ris = false;
};

PointEval eval_point(const ScenarioConfig& cfg)
{
    PointEval p{};
    p.sys = cfg.system();
    p.no_ris = cfg.policy == "noris";
    if (p.no_ris)
        p.sys.n_elements = 0;
    p.lf = cfg.link(cfg.f);
    p.lu = cfg.link(cfg.u);
    p.lg = cfg.link(cfg.g);
    p.lh = cfg.link(cfg.h);
    p.stats = st::cascade_moments(p.lf, p.lu, p.lg, p.lh, p.sys);
    return p;
}

// E{P_T} under the three single-tag phase policies.
double avg_rx_power(const PointEval& p, const std::string& policy)
{
    const auto& s = p.stats;
    double direct = s.f.raw2;
    double n = static_cast<double>(p.sys.n_elements);
    if (policy == "noris" || p.sys.n_elements == 0)
        return p.sys.tx_power_w * direct;
    if (policy == "random")
        return p.sys.tx_power_w * (direct + n * p.sys.eta * p.sys.eta * s.g.raw2 * s.h.raw2);
    // co-phased (continuous or quantized) mean power
    return p.sys.tx_power_w * (s.f.var + s.f.mean * s.f.mean + s.var_x + s.mu_x * s.mu_x +
                               2.0 * s.f.mean * s.mu_x);
}

std::vector<std::string> analyze_columns(const ScenarioConfig& cfg)
{
    std::string var = cfg.sweep ? cfg.sweep->var : "point";
    return {var,
            "noise_dbm",
            "gamma_bar_db",
            "zeta_f",
            "zeta_u",
            "zeta_g",
            "zeta_h",
            "mu_lambda",
            "k_lambda",
            "scale_lambda",
            "avg_rx_power_dbm",
            "avg_harvested_dbm",
            "eo_prob",
            "rate_lb",
            "rate_ub",
            "outage_printed",
            "outage_eh",
            "ber",
            "p_out_inf",
            "ber_inf",
            "diversity_order",
            "coding_gain",
            "array_gain",
            "quant_rate_ub_d1",
            "quant_rate_ub_d2",
            "quant_rate_ub_d4",
            "rate_inf"};
}

std::vector<std::string> analyze_row(const ScenarioConfig& cfg, double sweep_value)
{
    PointEval p = eval_point(cfg);
    const auto& sys = p.sys;
    const auto& stats = p.stats;
    const bool ris = sys.n_elements > 0;

    double gamma_th = cfg.gamma_th();
    st::RateBounds rb = st::rate_bounds(sys, stats);
    st::Asymptotics as = st::asymptotics(sys, stats, gamma_th, p.lu.m);
    double harvested = st::avg_harvested_power(sys, stats);
    double rx = avg_rx_power(p, cfg.policy);
    double r_inf = 0.0;
    if (ris) {
        st::SystemParams asym = sys;
        asym.tx_power_w = sys.tx_power_w * static_cast<double>(sys.n_elements) *
                          static_cast<double>(sys.n_elements);
        r_inf = st::asymptotic_rate(asym, p.lu, p.lg, p.lh);
    }

    std::vector<std::string> row;
    row.push_back(S(sweep_value));
    row.push_back(S(sc::watt_to_dbm(sys.noise_w)));
    row.push_back(S(10.0 * std::log10(sys.gamma_bar())));
    row.push_back(S(p.lf.zeta));
    row.push_back(S(p.lu.zeta));
    row.push_back(S(ris ? p.lg.zeta : 0.0));
    row.push_back(S(ris ? p.lh.zeta : 0.0));
    row.push_back(S(stats.mu_l));
    row.push_back(S(stats.fit_l.k));
    row.push_back(S(stats.fit_l.scale));
    row.push_back(S(sc::watt_to_dbm(rx)));
    row.push_back(S(sc::watt_to_dbm(harvested)));
    row.push_back(S(st::eo_probability(sys, stats)));
    row.push_back(S(rb.lb));
    row.push_back(S(rb.ub));
    row.push_back(S(st::outage_probability(sys, stats, gamma_th)));
    row.push_back(S(st::outage_probability_eh(sys, stats, gamma_th)));
    row.push_back(S(st::avg_ber(sys, stats)));
    row.push_back(S(as.p_out_inf));
    row.push_back(S(as.ber_inf));
    row.push_back(S(as.diversity_order));
    row.push_back(S(as.coding_gain));
    row.push_back(S(as.array_gain));
    row.push_back(S(ris ? st::quantized_rate_ub(sys, stats, 1) : 0.0));
    row.push_back(S(ris ? st::quantized_rate_ub(sys, stats, 2) : 0.0));
    row.push_back(S(ris ? st::quantized_rate_ub(sys, stats, 4) : 0.0));
    row.push_back(S(r_inf));
    return row;
}

mc::SingleTagConfig mc_config(const ScenarioConfig& cfg)
{
    PointEval p = eval_point(cfg);
    mc::SingleTagConfig m{p.lf, p.lu, p.lg, p.lh, p.sys};
    m.policy = cfg.phase_policy();
    m.gamma_th = cfg.gamma_th();
    m.trials = cfg.trials;
    m.seed = cfg.seed;
    return m;
}

mc::MultiTagConfig multi_config(const ScenarioConfig& cfg, mc::MultiTagPolicy policy)
{
    if (cfg.tags.size() < 1)
        throw std::invalid_argument("multi-tag run requires a tags[] list in the config");
    mc::MultiTagConfig m;
    for (const auto& t : cfg.tags) {
        m.f.push_back(cfg.link(t.f));
        m.u.push_back(cfg.link(t.u));
        m.g.push_back(cfg.link(t.g));
    }
    m.h = cfg.link(cfg.h);
    m.sys = cfg.system();
    m.policy = policy;
    m.enforce_eh = cfg.enforce_eh;
    m.gamma_th = cfg.gamma_th();
    m.trials = cfg.trials;
    m.seed = cfg.seed;
    return m;
}

multi_tag::MultiTagInstance draw_instance(const ScenarioConfig& cfg, std::uint64_t seed)
{
    multi_tag::MultiTagInstance inst;
    inst.sys = cfg.system();
    channel::Rng rng = channel::make_stream(seed, 0);
    const int n = cfg.n_elements;
    for (const auto& t : cfg.tags) {
        inst.f.push_back(channel::sample_link(cfg.link(t.f), rng));
        inst.u.push_back(channel::sample_link(cfg.link(t.u), rng));
        std::vector<multi_tag::cplx> gk(static_cast<std::size_t>(n));
        for (auto& v : gk)
            v = channel::sample_link(cfg.link(t.g), rng);
        inst.g.push_back(std::move(gk));
    }
    inst.h.resize(static_cast<std::size_t>(n));
    for (auto& v : inst.h)
        v = channel::sample_link(cfg.link(cfg.h), rng);
    return inst;
}

} // namespace

void run_analyze(const ScenarioConfig& cfg, const std::string& out_csv)
{
    cfg.validate();
    CsvWriter csv(out_csv, cfg, "analyze");
    csv.header(analyze_columns(cfg));
    for (double v : sc::sweep_values(cfg))
        csv.row(analyze_row(sc::at_sweep_point(cfg, v), v));
    csv.close();
}

void run_simulate(const ScenarioConfig& cfg, const std::string& out_csv)
{
    cfg.validate();
    CsvWriter csv(out_csv, cfg, "simulate");
    auto cols = analyze_columns(cfg);
    for (const char* c : {"mc_rx_power_dbm", "mc_harvested_dbm", "mc_eo", "mc_rate",
                          "mc_snr_outage", "mc_outage_printed", "mc_outage_eh", "mc_ber",
                          "gap_harvested_rel", "gap_eo_abs", "gap_outage_printed_rel",
                          "gap_outage_eh_rel", "gap_ber_rel"})
        cols.push_back(c);
    csv.header(cols);
    for (double v : sc::sweep_values(cfg)) {
        ScenarioConfig point = sc::at_sweep_point(cfg, v);
        auto row = analyze_row(point, v);
        PointEval p = eval_point(point);
        mc::TrialReport r = mc::run_single_tag(mc_config(point));
        double harvested = st::avg_harvested_power(p.sys, p.stats);
        double eo = st::eo_probability(p.sys, p.stats);
        double out_pr = st::outage_probability(p.sys, p.stats, point.gamma_th());
        double out_eh = st::outage_probability_eh(p.sys, p.stats, point.gamma_th());
        double ber = st::avg_ber(p.sys, p.stats);
        auto rel = [](double a, double b) { return b != 0.0 ? (a - b) / b : 0.0; };
        row.push_back(S(sc::watt_to_dbm(r.mean_rx_power)));
        row.push_back(S(sc::watt_to_dbm(r.mean_harvested)));
        row.push_back(S(r.eo_rate));
        row.push_back(S(r.mean_rate));
        row.push_back(S(r.snr_outage_rate));
        row.push_back(S(r.outage_printed_rate));
        row.push_back(S(r.outage_eh_rate));
        row.push_back(S(r.ber));
        row.push_back(S(rel(harvested, r.mean_harvested)));
        row.push_back(S(eo - r.eo_rate));
        row.push_back(S(rel(out_pr, r.outage_printed_rate)));
        row.push_back(S(rel(out_eh, r.outage_eh_rate)));
        row.push_back(S(rel(ber, r.ber)));
        csv.row(row);
    }
    csv.close();
}

void run_optimize(const ScenarioConfig& cfg, const std::string& out_csv)
{
    cfg.validate();
    if (cfg.tags.empty())
        throw std::invalid_argument("optimize: config must define tags[]");
    CsvWriter csv(out_csv, cfg, "optimize");
    multi_tag::SolveOptions opts;
    opts.enforce_eh = cfg.enforce_eh;

    if (!cfg.sweep) {
        auto inst = draw_instance(cfg, cfg.seed);
        auto state = multi_tag::optimize_phases(inst, opts);
        csv.header({"record", "index", "value_a", "value_b"});
        for (std::size_t i = 0; i < state.trace.size(); ++i)
            csv.row({"trace", S(static_cast<long long>(i)), S(state.trace[i]), ""});
        for (std::size_t n = 0; n < state.theta.size(); ++n)
            csv.row({"theta", S(static_cast<long long>(n)), S(std::arg(state.theta[n])),
                     S(std::abs(state.theta[n]))});
        for (int k = 0; k < inst.tags(); ++k) {
            double s = multi_tag::sinr(inst, state.theta, k);
            csv.row({"tag_sinr_rate", S(static_cast<long long>(k)),
                     S(10.0 * std::log10(s)), S(std::log2(1.0 + s))});
        }
        csv.row({"feasible", "0", state.feasible ? "1" : "0", state.converged ? "1" : "0"});
        csv.close();
        return;
    }

    csv.header({cfg.sweep->var, "sum_rate", "iterations", "feasible", "converged"});
    for (double v : sc::sweep_values(cfg)) {
        ScenarioConfig point = sc::at_sweep_point(cfg, v);
        auto inst = draw_instance(point, point.seed);
        auto state = multi_tag::optimize_phases(inst, opts);
        csv.row({S(v), S(state.trace.back()), S(static_cast<long long>(state.iterations)),
                 state.feasible ? "1" : "0", state.converged ? "1" : "0"});
    }
    csv.close();
}

namespace {

void figure_single_tag_rows(CsvWriter& csv, const ScenarioConfig& base,
                            const std::vector<std::pair<std::string, ScenarioConfig>>& variants,
                            bool with_mc)
{
    std::vector<std::string> cols = {"variant", base.sweep ? base.sweep->var : "point",
                                     "avg_rx_power_dbm", "avg_harvested_dbm", "eo_prob",
                                     "rate_lb", "rate_ub", "outage_printed", "outage_eh",
                                     "ber", "quant_ratio"};
    if (with_mc)
        for (const char* c : {"mc_harvested_dbm", "mc_eo", "mc_rate", "mc_outage_printed",
                              "mc_outage_eh", "mc_ber"})
            cols.push_back(c);
    csv.header(cols);
    for (const auto& [label, cfgv] : variants) {
        for (double v : sc::sweep_values(cfgv)) {
            ScenarioConfig point = sc::at_sweep_point(cfgv, v);
            PointEval p = eval_point(point);
            st::RateBounds rb = st::rate_bounds(p.sys, p.stats);
            int bits = point.quant_bits();
            double ratio = 1.0;
            if (bits > 0 && p.sys.n_elements > 0)
                ratio = st::quantized_rate_ub(p.sys, p.stats, bits) / rb.ub;
            std::vector<std::string> row = {
                label,
                S(v),
                S(sc::watt_to_dbm(avg_rx_power(p, point.policy))),
                S(sc::watt_to_dbm(st::avg_harvested_power(p.sys, p.stats))),
                S(st::eo_probability(p.sys, p.stats)),
                S(rb.lb),
                S(rb.ub),
                S(st::outage_probability(p.sys, p.stats, point.gamma_th())),
                S(st::outage_probability_eh(p.sys, p.stats, point.gamma_th())),
                S(st::avg_ber(p.sys, p.stats)),
                S(ratio)};
            if (with_mc) {
                mc::TrialReport r = mc::run_single_tag(mc_config(point));
                row.push_back(S(sc::watt_to_dbm(r.mean_harvested)));
                row.push_back(S(r.eo_rate));
                row.push_back(S(r.mean_rate));
                row.push_back(S(r.outage_printed_rate));
                row.push_back(S(r.outage_eh_rate));
                row.push_back(S(r.ber));
            }
            csv.row(row);
        }
    }
}

void figure_multi_tag_rows(CsvWriter& csv, const ScenarioConfig& base)
{
    csv.header({"variant", base.sweep ? base.sweep->var : "point", "tag", "outage", "eo",
                "ber", "rate", "sum_rate", "infeasible"});
    const std::pair<std::string, mc::MultiTagPolicy> policies[] = {
        {"optimized", mc::MultiTagPolicy::Optimized},
        {"random", mc::MultiTagPolicy::Random},
        {"noris", mc::MultiTagPolicy::NoRis}};
    for (const auto& [label, pol] : policies) {
        for (double v : sc::sweep_values(base)) {
            ScenarioConfig point = sc::at_sweep_point(base, v);
            mc::MultiTagReport r = mc::run_multi_tag(multi_config(point, pol));
            for (std::size_t k = 0; k < r.tag_outage.size(); ++k)
                csv.row({label, S(v), S(static_cast<long long>(k)), S(r.tag_outage[k]),
                         S(r.tag_eo[k]), S(r.tag_ber[k]), S(r.tag_rate[k]),
                         S(r.mean_sum_rate), S(r.infeasible)});
        }
    }
}

} // namespace

void run_figure(const ScenarioConfig& cfg, const std::string& out_csv)
{
    cfg.validate();
    const int id = cfg.figure_id;
    CsvWriter csv(out_csv, cfg, "figure " + std::to_string(id));
    std::vector<std::pair<std::string, ScenarioConfig>> variants;

    switch (id) {
    case 3: {
        // Distribution-fit quality per surface size.
        csv.header({"variant", "n_elements", "k_lambda", "scale_lambda", "ks_gamma",
                    "ks_trunc_gauss"});
        for (int n : {100, 200, 400}) {
            ScenarioConfig point = cfg;
            point.n_elements = n;
            PointEval p = eval_point(point);
            auto m = mc_config(point);
            m.keep_snr_samples = true;
            mc::TrialReport r = mc::run_single_tag(m);
            auto ecdf = mc::empirical_cdf(r.snr_samples);
            double ks_g = 0.0, ks_t = 0.0;
            for (std::size_t i = 0; i < ecdf.xs.size(); ++i) {
                double x = ecdf.xs[i];
                double hi = static_cast<double>(i + 1) / static_cast<double>(ecdf.xs.size());
                double lo = static_cast<double>(i) / static_cast<double>(ecdf.xs.size());
                double fg = st::cdf_snr(p.sys, p.stats, st::FitKind::Gamma, x);
                double ft = st::cdf_snr(p.sys, p.stats, st::FitKind::TruncatedGaussian, x);
                ks_g = std::max({ks_g, std::fabs(fg - hi), std::fabs(fg - lo)});
                ks_t = std::max({ks_t, std::fabs(ft - hi), std::fabs(ft - lo)});
            }
            csv.row({"fit", S(static_cast<long long>(n)), S(p.stats.fit_l.k),
                     S(p.stats.fit_l.scale), S(ks_g), S(ks_t)});
        }
        csv.close();
        return;
    }
    case 4:
    case 6: {
        for (int n : {0, 100, 400}) {
            ScenarioConfig v = cfg;
            v.n_elements = std::max(n, 0);
            v.policy = n == 0 ? "noris" : "optimal";
            variants.emplace_back("optimal_N" + std::to_string(n), v);
            if (n > 0) {
                v.policy = "random";
                variants.emplace_back("random_N" + std::to_string(n), v);
            }
        }
        figure_single_tag_rows(csv, cfg, variants, id == 4);
        csv.close();
        return;
    }
    case 7: {
        for (double pdbm : {0.0, 10.0, 20.0}) {
            ScenarioConfig v = cfg;
            v.tx_power_dbm = pdbm;
            variants.emplace_back("P" + std::to_string(static_cast<int>(pdbm)) + "dBm", v);
        }
        csv.header({"variant", "n_elements", "rate_ub", "rate_gain"});
        for (auto& [label, cfgv] : variants) {
            ScenarioConfig base0 = cfgv;
            base0.n_elements = 0;
            PointEval p0 = eval_point(base0);
            double r0 = st::rate_bounds(p0.sys, p0.stats).ub;
            for (double v : sc::sweep_values(cfgv)) {
                ScenarioConfig point = sc::at_sweep_point(cfgv, v);
                if (point.n_elements == 0) {
                    csv.row({label, S(v), S(r0), S(0.0)});
                    continue;
                }
                PointEval p = eval_point(point);
                double r = st::rate_bounds(p.sys, p.stats).ub;
                csv.row({label, S(v), S(r), S(r - r0)});
            }
        }
        csv.close();
        return;
    }
    case 8:
    case 9: {
        for (int n : {0, 100, 200}) {
            ScenarioConfig v = cfg;
            v.n_elements = std::max(n, 0);
            v.policy = n == 0 ? "noris" : "optimal";
            variants.emplace_back("N" + std::to_string(n), v);
        }
        figure_single_tag_rows(csv, cfg, variants, true);
        csv.close();
        return;
    }
    case 10: {
        for (int d : {1, 2, 4}) {
            ScenarioConfig v = cfg;
            v.policy = "quantized:" + std::to_string(d);
            variants.emplace_back("D" + std::to_string(d), v);
        }
        figure_single_tag_rows(csv, cfg, variants, false);
        csv.close();
        return;
    }
    case 11:
    case 12:
        figure_multi_tag_rows(csv, cfg);
        csv.close();
        return;
    default:
        throw std::invalid_argument("run_figure: config does not carry a valid figure id");
    }
}

} // namespace risbc::runner
