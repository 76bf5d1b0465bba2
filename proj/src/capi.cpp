#include "risbc.h"

#include <cmath>
#include <cstring>
#include <string>

#include "channel.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "specfun.hpp"
#include "version.hpp"

using risbc::scenario::ScenarioConfig;

struct risbc_scenario {
    ScenarioConfig cfg;
};

namespace {

thread_local std::string g_last_error;

risbc_status fail(risbc_status code, const char* what)
{
    g_last_error = what ? what : "unknown error";
    return code;
}

template <typename Fn>
risbc_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return RISBC_OK;
    } catch (const std::invalid_argument& e) {
        return fail(RISBC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(RISBC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(RISBC_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(RISBC_ERR_RUNTIME, e.what());
    }
}

risbc_status run_command(const risbc_scenario* s, const char* out_csv,
                         void (*runner)(const ScenarioConfig&, const std::string&))
{
    if (!s)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null scenario handle");
    std::string path = out_csv ? out_csv : s->cfg.out;
    if (path.empty())
        return fail(RISBC_ERR_INVALID_ARGUMENT, "no output path given");
    return guarded([&] { runner(s->cfg, path); });
}

} // namespace

extern "C" {

const char* risbc_version(void)
{
    return RISBC_VERSION;
}

const char* risbc_last_error(void)
{
    return g_last_error.c_str();
}

risbc_status risbc_scenario_default(risbc_scenario** out)
{
    if (!out)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] { *out = new risbc_scenario{ScenarioConfig{}}; });
}

risbc_status risbc_scenario_from_json(const char* json_text, risbc_scenario** out)
{
    if (!out || !json_text)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null argument");
    risbc_status st = guarded([&] {
        *out = new risbc_scenario{ScenarioConfig::from_json_text(json_text)};
    });
    return st == RISBC_ERR_INVALID_ARGUMENT ? RISBC_ERR_PARSE : st;
}

risbc_status risbc_scenario_from_file(const char* path, risbc_scenario** out)
{
    if (!out || !path)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null argument");
    risbc_status st = guarded([&] {
        *out = new risbc_scenario{ScenarioConfig::from_json_file(path)};
    });
    return st == RISBC_ERR_INVALID_ARGUMENT ? RISBC_ERR_PARSE : st;
}

risbc_status risbc_scenario_figure(int figure_id, risbc_scenario** out)
{
    if (!out)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new risbc_scenario{risbc::scenario::figure_preset(figure_id)};
    });
}

void risbc_scenario_free(risbc_scenario* s)
{
    delete s;
}

risbc_status risbc_scenario_set_seed(risbc_scenario* s, uint64_t seed)
{
    if (!s)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null scenario handle");
    s->cfg.seed = seed;
    return RISBC_OK;
}

risbc_status risbc_scenario_set_trials(risbc_scenario* s, long long trials)
{
    if (!s)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null scenario handle");
    if (trials < 1)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "trials must be >= 1");
    s->cfg.trials = trials;
    return RISBC_OK;
}

risbc_status risbc_scenario_set_out(risbc_scenario* s, const char* path)
{
    if (!s || !path)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null argument");
    s->cfg.out = path;
    return RISBC_OK;
}

risbc_status risbc_scenario_set_sweep(risbc_scenario* s, const char* var, double lo,
                                      double hi, int steps)
{
    if (!s || !var)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        risbc::scenario::Sweep sw{var, lo, hi, steps};
        ScenarioConfig probe = s->cfg;
        probe.sweep = sw;
        probe.validate();
        s->cfg.sweep = sw;
    });
}

risbc_status risbc_scenario_to_json(const risbc_scenario* s, char* buf, size_t cap,
                                    size_t* needed)
{
    if (!s)
        return fail(RISBC_ERR_INVALID_ARGUMENT, "null scenario handle");
    std::string text = s->cfg.to_json_text();
    if (needed)
        *needed = text.size();
    if (buf && cap > 0) {
        size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return RISBC_OK;
}

risbc_status risbc_run_analyze(const risbc_scenario* s, const char* out_csv)
{
    return run_command(s, out_csv, &risbc::runner::run_analyze);
}

risbc_status risbc_run_simulate(const risbc_scenario* s, const char* out_csv)
{
    return run_command(s, out_csv, &risbc::runner::run_simulate);
}

risbc_status risbc_run_optimize(const risbc_scenario* s, const char* out_csv)
{
    return run_command(s, out_csv, &risbc::runner::run_optimize);
}

risbc_status risbc_run_figure(const risbc_scenario* s, const char* out_csv)
{
    return run_command(s, out_csv, &risbc::runner::run_figure);
}

double risbc_q_function(double x)
{
    return risbc::specfun::q_function(x);
}

double risbc_gamma_lower_reg(double a, double x)
{
    try {
        return risbc::specfun::gamma_lower_reg(a, x);
    } catch (const std::exception& e) {
        fail(RISBC_ERR_INVALID_ARGUMENT, e.what());
        return std::nan("");
    }
}

double risbc_pathloss(double distance_m, double carrier_hz)
{
    try {
        return risbc::channel::pathloss(distance_m, carrier_hz);
    } catch (const std::exception& e) {
        fail(RISBC_ERR_INVALID_ARGUMENT, e.what());
        return std::nan("");
    }
}

} // extern "C"
