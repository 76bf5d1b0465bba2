#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "runner.hpp"
#include "scenario.hpp"

using namespace risbc;
using doctest::Approx;
namespace sc = risbc::scenario;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const char* name)
{
    return std::string("risbc_test_") + name + ".csv";
}

} // namespace

TEST_CASE("unit conversions and defaults")
{
    CHECK(sc::dbm_to_watt(0.0) == Approx(1e-3));
    CHECK(sc::dbm_to_watt(30.0) == Approx(1.0));
    CHECK(sc::watt_to_dbm(sc::dbm_to_watt(-17.3)) == Approx(-17.3).epsilon(1e-12));

    sc::ScenarioConfig cfg;
    CHECK(sc::watt_to_dbm(cfg.noise_w()) == Approx(-94.0).epsilon(1e-12));
    CHECK(cfg.system().gamma_bar() ==
          Approx(cfg.tx_power_w() * cfg.beta / cfg.noise_w()).epsilon(1e-12));
    cfg.noise_dbm = -90.0;
    CHECK(sc::watt_to_dbm(cfg.noise_w()) == Approx(-90.0).epsilon(1e-12));
}

TEST_CASE("config json round trip is idempotent")
{
    sc::ScenarioConfig cfg;
    cfg.tx_power_dbm = 12.5;
    cfg.n_elements = 64;
    cfg.policy = "quantized:3";
    cfg.sweep = sc::Sweep{"d_f", 2.0, 20.0, 7};
    cfg.tags = {sc::TagSpec{{3.0, 4.0}, {3.0, 5.0}, {3.0, 4.5}},
                sc::TagSpec{{3.0, 5.0}, {3.0, 5.0}, {3.0, 5.4}}};
    std::string once = cfg.to_json_text();
    auto parsed = sc::ScenarioConfig::from_json_text(once);
    CHECK(parsed.to_json_text() == once);
    CHECK(parsed.config_hash() == cfg.config_hash());
    CHECK(parsed.quant_bits() == 3);
}

TEST_CASE("validation reports the failing field")
{
    sc::ScenarioConfig cfg;
    cfg.beta = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("beta"), std::invalid_argument);
    cfg = {};
    cfg.f.d = 0.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("links.f.d"),
                         std::invalid_argument);
    cfg = {};
    cfg.policy = "sideways";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sweep = sc::Sweep{"frequency", 0, 1, 2};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sweep.var"),
                         std::invalid_argument);
    CHECK_THROWS_AS(sc::ScenarioConfig::from_json_text("{nope"), std::invalid_argument);
}

TEST_CASE("figure presets echo the caption parameters")
{
    auto f3 = sc::figure_preset(3);
    CHECK(f3.tx_power_dbm == 10.0);
    CHECK(f3.f.d == 10.0);
    CHECK(f3.u.d == 5.0);
    CHECK(f3.h.d == 5.0);
    CHECK(f3.g.d == 6.0);
    CHECK(f3.u.m == 5.0);
    CHECK(f3.g.m == 4.0);

    auto f8 = sc::figure_preset(8);
    CHECK(f8.f.d == 8.0);
    CHECK(f8.u.d == 4.0);
    CHECK(f8.h.d == 1.0);
    CHECK(f8.g.d == 8.0);
    CHECK(f8.gamma_th_db == 0.0);

    auto f9 = sc::figure_preset(9);
    CHECK(f9.h.d == 8.0);
    CHECK(f9.g.d == 3.0);

    auto f11 = sc::figure_preset(11);
    REQUIRE(f11.tags.size() == 2);
    CHECK(f11.tags[0].f.d == 4.0);
    CHECK(f11.tags[1].f.d == 5.0);
    CHECK(f11.tags[0].g.d == 4.5);
    CHECK(f11.tags[1].g.d == 5.4);
    CHECK(f11.h.d == 2.0);

    CHECK_THROWS_AS(sc::figure_preset(5), std::invalid_argument);
    CHECK_THROWS_AS(sc::figure_preset(13), std::invalid_argument);
}

TEST_CASE("sweep points and coupled geometry")
{
    sc::ScenarioConfig cfg;
    cfg.sweep = sc::Sweep{"d_f", 2.0, 10.0, 5};
    auto vals = sc::sweep_values(cfg);
    REQUIRE(vals.size() == 5);
    CHECK(vals.front() == Approx(2.0));
    CHECK(vals.back() == Approx(10.0));
    CHECK(vals[1] == Approx(4.0));

    cfg.couple_dg_hypot = true;
    cfg.h.d = 1.0;
    auto pt = sc::at_sweep_point(cfg, 8.0);
    CHECK(pt.f.d == Approx(8.0));
    CHECK(pt.g.d == Approx(std::hypot(1.0, 8.0)));
}

TEST_CASE("analyze CSV: determinism, metadata, policy effects")
{
    sc::ScenarioConfig cfg;
    cfg.trials = 1000;
    cfg.sweep = sc::Sweep{"tx_power_dbm", 0.0, 20.0, 3};
    std::string p1 = tmp_path("analyze1"), p2 = tmp_path("analyze2");
    runner::run_analyze(cfg, p1);
    runner::run_analyze(cfg, p2);
    std::string a = slurp(p1), b = slurp(p2);
    CHECK(a == b);
    CHECK(a.find("# risbc_version:") == 0);
    CHECK(a.find("# seed: 1") != std::string::npos);
    CHECK(a.find("# config_hash:") != std::string::npos);
    CHECK(a.find("tx_power_dbm,") != std::string::npos);

    // no-RIS policy zeroes the surface columns
    sc::ScenarioConfig no_ris = cfg;
    no_ris.policy = "noris";
    std::string p3 = tmp_path("analyze3");
    runner::run_analyze(no_ris, p3);
    std::string c = slurp(p3);
    auto last_line = c.substr(c.rfind('\n', c.size() - 3) + 1);
    // zeta_g, zeta_h and the quantized-rate columns must read exactly 0
    CHECK(last_line.find(",0,0,") != std::string::npos);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    std::remove(p3.c_str());
}

TEST_CASE("simulate CSV carries MC and gap columns")
{
    sc::ScenarioConfig cfg;
    cfg.trials = 20000;
    cfg.n_elements = 16;
    std::string p = tmp_path("simulate");
    runner::run_simulate(cfg, p);
    std::string text = slurp(p);
    CHECK(text.find("mc_harvested_dbm") != std::string::npos);
    CHECK(text.find("gap_harvested_rel") != std::string::npos);
    CHECK(text.find("# trials: 20000") != std::string::npos);
    std::remove(p.c_str());
}

TEST_CASE("optimize CSV: trace is monotone and converges quickly")
{
    auto cfg = sc::figure_preset(11);
    cfg.sweep.reset();
    cfg.tx_power_dbm = 30.0;
    cfg.seed = 3;
    std::string p = tmp_path("optimize");
    runner::run_optimize(cfg, p);
    std::string text = slurp(p);
    CHECK(text.find("trace,") != std::string::npos);
    CHECK(text.find("theta,") != std::string::npos);
    CHECK(text.find("tag_sinr_rate,") != std::string::npos);

    // parse the trace rows and verify monotonicity
    std::istringstream ss(text);
    std::string line;
    double prev = -1e9;
    int iters = 0;
    while (std::getline(ss, line)) {
        if (line.rfind("trace,", 0) != 0)
            continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        auto c3 = line.find(',', c2 + 1);
        double v = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        CHECK(v >= prev - 1e-9);
        prev = v;
        ++iters;
    }
    CHECK(iters >= 2);
    CHECK(iters <= 51);
    std::remove(p.c_str());
}

TEST_CASE("figure runner end-to-end at desk scale")
{
    auto cfg = sc::figure_preset(10);
    cfg.sweep = sc::Sweep{"tx_power_dbm", 0.0, 20.0, 3};
    std::string p = tmp_path("fig10");
    runner::run_figure(cfg, p);
    std::string text = slurp(p);
    CHECK(text.find("quant_ratio") != std::string::npos);
    CHECK(text.find("D1,") != std::string::npos);
    CHECK(text.find("D4,") != std::string::npos);
    std::remove(p.c_str());

    auto f11 = sc::figure_preset(11);
    f11.trials = 12;
    f11.sweep = sc::Sweep{"tx_power_dbm", 30.0, 40.0, 2};
    std::string p2 = tmp_path("fig11");
    runner::run_figure(f11, p2);
    std::string t2 = slurp(p2);
    CHECK(t2.find("optimized,") != std::string::npos);
    CHECK(t2.find("random,") != std::string::npos);
    CHECK(t2.find("noris,") != std::string::npos);
    std::remove(p2.c_str());
}
