#ifndef RISBC_RUNNER_HPP
#define RISBC_RUNNER_HPP

#include <string>

#include "scenario.hpp"

namespace risbc::runner {

using scenario::ScenarioConfig;

// Closed-form quantities per sweep point.
void run_analyze(const ScenarioConfig& cfg, const std::string& out_csv);
// Monte-Carlo columns next to the analytic ones, with gap columns.
void run_simulate(const ScenarioConfig& cfg, const std::string& out_csv);
// Multi-tag phase optimization: convergence trace, converged phases and
// per-tag rates for a single seeded draw, or a summary per sweep point.
void run_optimize(const ScenarioConfig& cfg, const std::string& out_csv);
// Figure preset layouts (long format with a variant column).
void run_figure(const ScenarioConfig& cfg, const std::string& out_csv);

} // namespace risbc::runner

#endif
