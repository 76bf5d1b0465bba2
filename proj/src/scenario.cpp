#include "scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "version.hpp"

namespace risbc::scenario {

using nlohmann::json;

double dbm_to_watt(double dbm)
{
    return 1e-3 * std::pow(10.0, dbm / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt / 1e-3);
}

double ScenarioConfig::noise_w() const
{
    double dbm = noise_dbm ? *noise_dbm
                           : n0_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return dbm_to_watt(dbm);
}

double ScenarioConfig::tx_power_w() const
{
    return dbm_to_watt(tx_power_dbm);
}

double ScenarioConfig::activation_w() const
{
    return dbm_to_watt(activation_dbm);
}

double ScenarioConfig::gamma_th() const
{
    return std::pow(10.0, gamma_th_db / 10.0);
}

single_tag::SystemParams ScenarioConfig::system() const
{
    single_tag::SystemParams sys;
    sys.tx_power_w = tx_power_w();
    sys.beta = beta;
    sys.phi = phi;
    sys.eta = eta;
    sys.n_elements = n_elements;
    sys.noise_w = noise_w();
    sys.activation_w = activation_w();
    return sys;
}

channel::LinkParams ScenarioConfig::link(const LinkSpec& spec) const
{
    return channel::LinkParams::umi(spec.m, spec.d, carrier_hz);
}

int ScenarioConfig::quant_bits() const
{
    if (policy.rfind("quantized:", 0) == 0)
        return std::stoi(policy.substr(10));
    return 0;
}

ris::PhasePolicy ScenarioConfig::phase_policy() const
{
    if (policy == "optimal")
        return ris::PhasePolicy::optimal();
    if (policy == "random")
        return ris::PhasePolicy::random();
    if (policy == "noris")
        return ris::PhasePolicy::no_ris();
    if (policy.rfind("quantized:", 0) == 0)
        return ris::PhasePolicy::quantized(quant_bits());
    throw std::invalid_argument("policy: expected optimal, quantized:D, random or noris");
}

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument(field + ": " + why);
    };
    if (!(carrier_hz > 0.0))
        fail("carrier_hz", "must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        fail("beta", "must lie in (0, 1)");
    if (!(phi > 0.0 && phi <= 1.0))
        fail("phi", "must lie in (0, 1]");
    if (!(eta > 0.0 && eta <= 1.0))
        fail("eta", "must lie in (0, 1]");
    if (n_elements < 0)
        fail("n_elements", "must be >= 0");
    if (!(bandwidth_hz > 0.0))
        fail("bandwidth_hz", "must be positive");
    if (trials < 1)
        fail("trials", "must be >= 1");
    auto check_link = [&](const char* name, const LinkSpec& l) {
        if (!(l.m >= 0.5))
            fail(std::string(name) + ".m", "Nakagami shape must be >= 0.5");
        if (!(l.d >= 1.0))
            fail(std::string(name) + ".d", "distance must be >= 1 m");
    };
    check_link("links.f", f);
    check_link("links.u", u);
    check_link("links.g", g);
    check_link("links.h", h);
    for (std::size_t k = 0; k < tags.size(); ++k) {
        std::string base = "tags[" + std::to_string(k) + "]";
        check_link((base + ".f").c_str(), tags[k].f);
        check_link((base + ".u").c_str(), tags[k].u);
        check_link((base + ".g").c_str(), tags[k].g);
    }
    phase_policy(); // throws on malformed policy strings
    if (sweep) {
        static const char* known[] = {"tx_power_dbm", "d_f", "d_u", "d_g", "d_h",
                                      "n_elements", "activation_dbm"};
        bool ok = false;
        for (const char* v : known)
            ok = ok || sweep->var == v;
        if (!ok)
            fail("sweep.var", "unknown sweep variable '" + sweep->var + "'");
        if (sweep->steps < 1)
            fail("sweep.steps", "must be >= 1");
    }
    system().validate();
}

namespace {

LinkSpec link_from_json(const json& j, const LinkSpec& defaults)
{
    LinkSpec l = defaults;
    if (j.contains("m"))
        l.m = j.at("m").get<double>();
    if (j.contains("d"))
        l.d = j.at("d").get<double>();
    return l;
}

json link_to_json(const LinkSpec& l)
{
    return json{{"m", l.m}, {"d", l.d}};
}

} // namespace

std::string ScenarioConfig::to_json_text(int indent) const
{
    json j;
    j["carrier_hz"] = carrier_hz;
    j["tx_power_dbm"] = tx_power_dbm;
    j["beta"] = beta;
    j["phi"] = phi;
    j["eta"] = eta;
    j["n_elements"] = n_elements;
    j["noise"] = json{{"n0_dbm_hz", n0_dbm_hz},
                      {"bandwidth_hz", bandwidth_hz},
                      {"noise_figure_db", noise_figure_db}};
    if (noise_dbm)
        j["noise_dbm"] = *noise_dbm;
    j["activation_dbm"] = activation_dbm;
    j["gamma_th_db"] = gamma_th_db;
    j["links"] = json{{"f", link_to_json(f)},
                      {"u", link_to_json(u)},
                      {"g", link_to_json(g)},
                      {"h", link_to_json(h)}};
    if (!tags.empty()) {
        json arr = json::array();
        for (const auto& t : tags)
            arr.push_back(json{{"f", link_to_json(t.f)},
                               {"u", link_to_json(t.u)},
                               {"g", link_to_json(t.g)}});
        j["tags"] = arr;
    }
    j["policy"] = policy;
    j["enforce_eh"] = enforce_eh;
    j["couple_dg_hypot"] = couple_dg_hypot;
    if (sweep)
        j["sweep"] = json{{"var", sweep->var}, {"lo", sweep->lo}, {"hi", sweep->hi},
                          {"steps", sweep->steps}};
    j["trials"] = trials;
    j["seed"] = seed;
    if (!out.empty())
        j["out"] = out;
    if (figure_id)
        j["figure_id"] = figure_id;
    return indent >= 0 ? j.dump(indent) : j.dump();
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ScenarioConfig c;
    try {
        if (j.contains("carrier_hz")) c.carrier_hz = j.at("carrier_hz").get<double>();
        if (j.contains("tx_power_dbm")) c.tx_power_dbm = j.at("tx_power_dbm").get<double>();
        if (j.contains("beta")) c.beta = j.at("beta").get<double>();
        if (j.contains("phi")) c.phi = j.at("phi").get<double>();
        if (j.contains("eta")) c.eta = j.at("eta").get<double>();
        if (j.contains("n_elements")) c.n_elements = j.at("n_elements").get<int>();
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            if (n.contains("n0_dbm_hz")) c.n0_dbm_hz = n.at("n0_dbm_hz").get<double>();
            if (n.contains("bandwidth_hz")) c.bandwidth_hz = n.at("bandwidth_hz").get<double>();
            if (n.contains("noise_figure_db"))
                c.noise_figure_db = n.at("noise_figure_db").get<double>();
        }
        if (j.contains("noise_dbm")) c.noise_dbm = j.at("noise_dbm").get<double>();
        if (j.contains("activation_dbm")) c.activation_dbm = j.at("activation_dbm").get<double>();
        if (j.contains("gamma_th_db")) c.gamma_th_db = j.at("gamma_th_db").get<double>();
        if (j.contains("links")) {
            const json& l = j.at("links");
            if (l.contains("f")) c.f = link_from_json(l.at("f"), c.f);
            if (l.contains("u")) c.u = link_from_json(l.at("u"), c.u);
            if (l.contains("g")) c.g = link_from_json(l.at("g"), c.g);
            if (l.contains("h")) c.h = link_from_json(l.at("h"), c.h);
        }
        if (j.contains("tags")) {
            for (const json& t : j.at("tags")) {
                TagSpec tag;
                tag.f = link_from_json(t.value("f", json::object()), c.f);
                tag.u = link_from_json(t.value("u", json::object()), c.u);
                tag.g = link_from_json(t.value("g", json::object()), c.g);
                c.tags.push_back(tag);
            }
        }
        if (j.contains("policy")) c.policy = j.at("policy").get<std::string>();
        if (j.contains("enforce_eh")) c.enforce_eh = j.at("enforce_eh").get<bool>();
        if (j.contains("couple_dg_hypot"))
            c.couple_dg_hypot = j.at("couple_dg_hypot").get<bool>();
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            Sweep sw;
            sw.var = s.at("var").get<std::string>();
            sw.lo = s.at("lo").get<double>();
            sw.hi = s.at("hi").get<double>();
            sw.steps = s.at("steps").get<int>();
            c.sweep = sw;
        }
        if (j.contains("trials")) c.trials = j.at("trials").get<long long>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("figure_id")) c.figure_id = j.at("figure_id").get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::uint64_t ScenarioConfig::config_hash() const
{
    std::string canon = to_json_text(-1);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ScenarioConfig figure_preset(int figure_id)
{
    ScenarioConfig c;
    c.figure_id = figure_id;
    switch (figure_id) {
    case 3: // SNR distribution fits, N in {100, 200, 400}
        c.tx_power_dbm = 10.0;
        c.f = {3.0, 10.0};
        c.u = {5.0, 5.0};
        c.h = {3.0, 5.0};
        c.g = {4.0, 6.0};
        c.trials = 100000;
        break;
    case 4: // energy-outage CDF vs emitter-tag distance
        c.tx_power_dbm = 20.0;
        c.u = {3.0, 5.0};
        c.h = {3.0, 1.0};
        c.couple_dg_hypot = true;
        c.sweep = Sweep{"d_f", 1.0, 40.0, 40};
        c.trials = 100000;
        break;
    case 6: // received power vs emitter-tag distance, activation marker
        c.tx_power_dbm = 20.0;
        c.h = {3.0, 1.0};
        c.couple_dg_hypot = true;
        c.sweep = Sweep{"d_f", 1.0, 40.0, 40};
        c.trials = 100000;
        break;
    case 7: // rate gain over the no-RIS baseline vs N
        c.f = {3.0, 10.0};
        c.u = {3.0, 5.0};
        c.h = {3.0, 8.0};
        c.g = {3.0, 3.0};
        c.sweep = Sweep{"n_elements", 0.0, 400.0, 17};
        break;
    case 8: // outage vs transmit power
        c.f = {3.0, 8.0};
        c.u = {3.0, 4.0};
        c.h = {3.0, 1.0};
        c.g = {3.0, 8.0};
        c.sweep = Sweep{"tx_power_dbm", -10.0, 30.0, 17};
        c.trials = 1000000;
        break;
    case 9: // BPSK BER vs transmit power
        c.f = {3.0, 10.0};
        c.u = {3.0, 5.0};
        c.h = {3.0, 8.0};
        c.g = {3.0, 3.0};
        c.sweep = Sweep{"tx_power_dbm", -10.0, 30.0, 17};
        c.trials = 1000000;
        break;
    case 10: // quantized-rate ratio vs transmit power
        c.f = {3.0, 10.0};
        c.u = {3.0, 5.0};
        c.h = {3.0, 8.0};
        c.g = {3.0, 3.0};
        c.sweep = Sweep{"tx_power_dbm", -10.0, 30.0, 17};
        break;
    case 11: // two-tag outage vs transmit power
    case 12: // two-tag BER vs transmit power
        c.h = {3.0, 2.0};
        c.tags = {TagSpec{{3.0, 4.0}, {3.0, 5.0}, {3.0, 4.5}},
                  TagSpec{{3.0, 5.0}, {3.0, 5.0}, {3.0, 5.4}}};
        c.sweep = Sweep{"tx_power_dbm", 0.0, 40.0, 9};
        c.trials = 400;
        break;
    default:
        throw std::invalid_argument("figure_preset: valid ids are 3,4,6,7,8,9,10,11,12");
    }
    c.validate();
    return c;
}

std::vector<double> sweep_values(const ScenarioConfig& cfg)
{
    if (!cfg.sweep)
        return {0.0};
    const Sweep& s = *cfg.sweep;
    std::vector<double> vals(static_cast<std::size_t>(s.steps));
    for (int i = 0; i < s.steps; ++i)
        vals[static_cast<std::size_t>(i)] =
            s.steps == 1 ? s.lo
                         : s.lo + (s.hi - s.lo) * static_cast<double>(i) /
                               static_cast<double>(s.steps - 1);
    return vals;
}

ScenarioConfig at_sweep_point(const ScenarioConfig& cfg, double value)
{
    ScenarioConfig c = cfg;
    if (!cfg.sweep)
        return c;
    const std::string& var = cfg.sweep->var;
    if (var == "tx_power_dbm")
        c.tx_power_dbm = value;
    else if (var == "d_f")
        c.f.d = value;
    else if (var == "d_u")
        c.u.d = value;
    else if (var == "d_g")
        c.g.d = value;
    else if (var == "d_h")
        c.h.d = value;
    else if (var == "n_elements")
        c.n_elements = static_cast<int>(std::llround(value));
    else if (var == "activation_dbm")
        c.activation_dbm = value;
    if (c.couple_dg_hypot)
        c.g.d = std::hypot(c.h.d, c.f.d);
    return c;
}

CsvWriter::CsvWriter(std::string path, const ScenarioConfig& cfg, const std::string& command)
    : path_(std::move(path))
{
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    buffer_ += "# risbc_version: ";
    buffer_ += RISBC_VERSION;
    buffer_ += "\n# command: " + command;
    buffer_ += "\n# seed: " + std::to_string(cfg.seed);
    buffer_ += "\n# trials: " + std::to_string(cfg.trials);
    buffer_ += "\n# config_hash: ";
    buffer_ += hash;
    buffer_ += "\n# config: " + cfg.to_json_text(-1) + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns)
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += columns[i];
    }
    buffer_ += "\r\n";
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += fields[i];
    }
    buffer_ += "\r\n";
}

void CsvWriter::close()
{
    if (closed_)
        return;
    std::ofstream outf(path_, std::ios::binary);
    if (!outf)
        throw std::runtime_error("cannot open output file: " + path_);
    outf << buffer_;
    closed_ = true;
}

std::string CsvWriter::num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string CsvWriter::num(long long v)
{
    return std::to_string(v);
}

} // namespace risbc::scenario
