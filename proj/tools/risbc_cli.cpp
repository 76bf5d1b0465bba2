// Command-line front end; talks to the core exclusively through the
// shared-library C interface in risbc.h.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risbc.h"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string sweep;
    std::uint64_t seed = 0;
    long long trials = 0;
    bool has_seed = false;
    bool has_trials = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "scenario config file (JSON)");
    cmd->add_option("--out", c.out, "output CSV path");
    cmd->add_option("--sweep", c.sweep, "sweep axis as var:lo:hi:steps");
    cmd->add_option("--seed", c.seed, "master random seed")
        ->each([&](const std::string&) { c.has_seed = true; });
    cmd->add_option("--trials", c.trials, "Monte-Carlo trial count")
        ->each([&](const std::string&) { c.has_trials = true; });
}

int die(const char* stage)
{
    std::fprintf(stderr, "risbc: %s failed: %s\n", stage, risbc_last_error());
    return 1;
}

int apply_common(risbc_scenario* s, const Common& c)
{
    if (c.has_seed && risbc_scenario_set_seed(s, c.seed) != RISBC_OK)
        return die("--seed");
    if (c.has_trials && risbc_scenario_set_trials(s, c.trials) != RISBC_OK)
        return die("--trials");
    if (!c.out.empty() && risbc_scenario_set_out(s, c.out.c_str()) != RISBC_OK)
        return die("--out");
    if (!c.sweep.empty()) {
        std::string var;
        double lo = 0.0, hi = 0.0;
        int steps = 0;
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : c.sweep) {
            if (ch == ':') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        parts.push_back(cur);
        if (parts.size() != 4) {
            std::fprintf(stderr, "risbc: --sweep expects var:lo:hi:steps\n");
            return 1;
        }
        var = parts[0];
        try {
            lo = std::stod(parts[1]);
            hi = std::stod(parts[2]);
            steps = std::stoi(parts[3]);
        } catch (const std::exception&) {
            std::fprintf(stderr, "risbc: --sweep expects numeric lo:hi:steps\n");
            return 1;
        }
        if (risbc_scenario_set_sweep(s, var.c_str(), lo, hi, steps) != RISBC_OK)
            return die("--sweep");
    }
    return 0;
}

risbc_scenario* load_scenario(const Common& c)
{
    risbc_scenario* s = nullptr;
    risbc_status st = c.config.empty() ? risbc_scenario_default(&s)
                                       : risbc_scenario_from_file(c.config.c_str(), &s);
    if (st != RISBC_OK) {
        std::fprintf(stderr, "risbc: loading scenario failed: %s\n", risbc_last_error());
        return nullptr;
    }
    return s;
}

int run(const Common& c,
        risbc_status (*fn)(const risbc_scenario*, const char*), const char* name)
{
    risbc_scenario* s = load_scenario(c);
    if (!s)
        return 1;
    int rc = apply_common(s, c);
    if (rc == 0 && fn(s, c.out.empty() ? nullptr : c.out.c_str()) != RISBC_OK)
        rc = die(name);
    if (rc == 0)
        std::printf("wrote %s\n", c.out.c_str());
    risbc_scenario_free(s);
    return rc;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS-assisted bistatic backscatter analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", risbc_version());

    Common c_an, c_sim, c_opt, c_fig;
    int figure_id = 0;

    auto* analyze = app.add_subcommand("analyze", "closed-form quantities per sweep point");
    add_common(analyze, c_an);
    auto* simulate =
        app.add_subcommand("simulate", "Monte-Carlo columns next to the closed forms");
    add_common(simulate, c_sim);
    auto* optimize = app.add_subcommand("optimize", "multi-tag phase-shift optimization");
    add_common(optimize, c_opt);
    auto* figure = app.add_subcommand("figure", "preset experiments by figure id");
    figure->add_option("id", figure_id, "figure id (3,4,6,7,8,9,10,11,12)")->required();
    add_common(figure, c_fig);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        if (c_an.out.empty()) c_an.out = "analyze.csv";
        return run(c_an, &risbc_run_analyze, "analyze");
    }
    if (simulate->parsed()) {
        if (c_sim.out.empty()) c_sim.out = "simulate.csv";
        return run(c_sim, &risbc_run_simulate, "simulate");
    }
    if (optimize->parsed()) {
        if (c_opt.out.empty()) c_opt.out = "optimize.csv";
        return run(c_opt, &risbc_run_optimize, "optimize");
    }
    if (figure->parsed()) {
        risbc_scenario* s = nullptr;
        if (risbc_scenario_figure(figure_id, &s) != RISBC_OK) {
            std::fprintf(stderr, "risbc: figure preset failed: %s\n", risbc_last_error());
            return 1;
        }
        if (c_fig.out.empty())
            c_fig.out = "figure" + std::to_string(figure_id) + ".csv";
        int rc = apply_common(s, c_fig);
        if (rc == 0 && risbc_run_figure(s, c_fig.out.c_str()) != RISBC_OK)
            rc = die("figure");
        if (rc == 0)
            std::printf("wrote %s\n", c_fig.out.c_str());
        risbc_scenario_free(s);
        return rc;
    }
    return 1;
}
