#pragma once

#include "cavfluor/scenarios.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cavfluor {

/// A scenario plus everything the command line needs to run it.
struct RunConfig {
	Scenario scenario;
	int workers = 1;
	std::string out_dir = "out";
	/// steps between intermediate checkpoints (0: only finished jobs)
	int checkpoint_every = 0;
	/// times whose nuclear density is written (grid runs)
	std::vector<double> density_times;
	bool bath_trace = false;
	/// times compared by the convergence protocol (empty: final time)
	std::vector<double> report_times;

	bool operator==(const RunConfig &) const = default;
};

/// Parse a YAML document.  Unknown keys, missing required keys, wrong
/// types and out-of-range values raise ConfigError naming the key path and
/// line.  Drive times may be given in units of pi/omega0.
RunConfig parse_config(const std::string &text, const std::string &origin = "<config>");
RunConfig load_config(const std::filesystem::path &path);

/// Fully resolved document; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig &config);

} // namespace cavfluor
