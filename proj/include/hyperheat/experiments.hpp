#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hyperheat/report.hpp"

namespace hyperheat {

using Config = std::map<std::string, std::string>;

/// kernel-checks, radial-converge, gaussian1d, delayed, horo, counterexample,
/// forced, mass-lines.
const std::vector<std::string>& experiment_names();

/// Keys accepted in a config: n, t, a, r_max, nodes, dt plus the
/// experiment-specific extras listed in the README.
const std::vector<std::string>& config_keys();

/// Runs one experiment. List-valued keys (n, t) are comma separated.
/// Throws UnknownExperiment, UsageError for malformed or unknown keys, and
/// module errors prefixed with the experiment name.
ExperimentReport run_experiment(const std::string& name, const Config& config);

/// Worker count: HYPERHEAT_THREADS if set and positive, else the hardware
/// concurrency, at least 1.
int worker_count();

/// Calls fn(i) for i in [0, count) on up to worker_count() threads. Results
/// are owned by the caller's index-addressed storage, so output order does not
/// depend on scheduling. Rethrows the exception of the lowest failing index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hyperheat
