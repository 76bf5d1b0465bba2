#ifndef RISBC_SCENARIO_HPP
#define RISBC_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "ris.hpp"
#include "single_tag.hpp"

namespace risbc::scenario {

// Powers cross the interface in dBm and are converted to watts once.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

struct LinkSpec {
    double m = 3.0;
    double d = 1.0;
};

struct TagSpec {
    LinkSpec f, u, g;
};

struct Sweep {
    std::string var; // tx_power_dbm | d_f | d_u | d_g | d_h | n_elements | activation_dbm
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;
};

// Full experiment description; defaults follow the standard simulation
// settings (3 GHz carrier, 10 MHz bandwidth, 10 dB noise figure, m = 3,
// beta = 0.6, phi = 0.8, eta = 0.8, d_f/d_u/d_g/d_h = 10/5/3/8 m).
struct ScenarioConfig {
    double carrier_hz = 3e9;
    double tx_power_dbm = 20.0;
    double beta = 0.6;
    double phi = 0.8;
    double eta = 0.8;
    int n_elements = 100;
    double n0_dbm_hz = -174.0;
    double bandwidth_hz = 1e7;
    double noise_figure_db = 10.0;
    std::optional<double> noise_dbm; // direct override of the noise power
    double activation_dbm = -20.0;
    double gamma_th_db = 0.0;
    LinkSpec f{3.0, 10.0}, u{3.0, 5.0}, g{3.0, 3.0}, h{3.0, 8.0};
    std::vector<TagSpec> tags;       // multi-tag geometry; empty = single tag
    std::string policy = "optimal";  // optimal | quantized:D | random | noris
    bool enforce_eh = false;
    bool couple_dg_hypot = false;    // d_g = hypot(d_h, d_f) during d_f sweeps
    std::optional<Sweep> sweep;
    long long trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
    int figure_id = 0;

    double noise_w() const;
    double tx_power_w() const;
    double activation_w() const;
    double gamma_th() const;
    single_tag::SystemParams system() const;
    channel::LinkParams link(const LinkSpec& spec) const;
    ris::PhasePolicy phase_policy() const;
    int quant_bits() const; // 0 unless policy is quantized:D

    void validate() const;
    std::string to_json_text(int indent = 2) const;
    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_json_file(const std::string& path);
    std::uint64_t config_hash() const; // FNV-1a over the canonical JSON
};

// Preset reproducing one numbered experiment; valid ids:
// 3, 4, 6, 7, 8, 9, 10, 11, 12.
ScenarioConfig figure_preset(int figure_id);

// Values of the sweep axis (single point when no sweep is configured).
std::vector<double> sweep_values(const ScenarioConfig& cfg);
// Copy of cfg with the sweep variable set to the given value (applies
// the coupled-geometry rule when enabled).
ScenarioConfig at_sweep_point(const ScenarioConfig& cfg, double value);

// CSV emission: '#'-prefixed metadata block (version, seed, trials,
// config hash), then an RFC-4180 header row and data rows.
class CsvWriter {
public:
    CsvWriter(std::string path, const ScenarioConfig& cfg, const std::string& command);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& fields);
    void close();
    const std::string& path() const { return path_; }

    static std::string num(double v);
    static std::string num(long long v);

private:
    std::string path_;
    std::string buffer_;
    bool closed_ = false;
};

} // namespace risbc::scenario

#endif
