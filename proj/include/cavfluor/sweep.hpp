#pragma once

#include "cavfluor/scenarios.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cavfluor {

struct SweepOptions {
	int workers = 1;
	/// per-job checkpoints go here when set
	std::optional<std::filesystem::path> checkpoint_dir;
	/// steps between intermediate checkpoints; 0 writes only finished jobs
	int checkpoint_every = 0;
	/// continue from checkpoints found in checkpoint_dir
	bool resume = false;
	/// stored in checkpoints; resuming with a different hash is refused
	std::string scenario_hash;
	std::function<void(const std::string &)> log;
};

struct RunRecord {
	double omega_f = 0.0;
	bool ok = false;
	std::string error;
	std::vector<Snapshot> snapshots;
	std::vector<BathSample> bath_trace;
};

struct SpectrumResult {
	std::vector<double> omega_scan;
	std::vector<double> times;
	/// P[i][k] at omega_scan[i], times[k]; empty rows for failed jobs
	std::vector<std::vector<double>> P;
	std::vector<RunRecord> runs;
	std::optional<double> drive_amplitude;

	std::size_t failures() const;
};

/// Full propagation at one omega'.  `drive_amplitude` must already be
/// resolved for pumped starts.
RunRecord run_single(const Scenario &s, double omega_f, std::optional<double> drive_amplitude);

/// One independent propagation per omega', spread over a pool of workers.
/// Results are merged by omega' index, so the output does not depend on
/// scheduling.  A failing omega' is recorded and the sweep goes on.
SpectrumResult sweep_spectrum(const Scenario &s, const SweepOptions &options = {});

struct ConvergenceVariant {
	std::string name;
	/// max |P_variant - P_base| / max P_base over the scan and report times
	double max_relative_change = 0.0;
};

struct ConvergenceReport {
	std::vector<double> report_times;
	double reference_peak = 0.0;
	std::vector<ConvergenceVariant> variants;

	double worst() const;
};

/// The baseline (scan filled in, pump amplitude resolved and frozen) named
/// "base", then copies with N_c, N_f, N_R (grid runs only) and 1/dt doubled
/// one at a time.  Doubling N_R keeps the end points, so the spacing halves.
std::vector<std::pair<std::string, Scenario>> refinement_ladder(const Scenario &s);

/// max |got - ref| / max ref over all rows.
double max_relative_change(const std::vector<std::vector<double>> &ref, const std::vector<std::vector<double>> &got);

/// Doubles N_c, N_f, N_R (grid runs only) and 1/dt one at a time and
/// compares P at the report times with the baseline.  Doubling N_R keeps
/// the end points, so the spacing halves.  A pumped start is calibrated
/// once and the amplitude reused by every variant.
ConvergenceReport convergence_study(const Scenario &s, const std::vector<double> &report_times,
                                    const SweepOptions &options = {});

/// Row of P at the snapshot closest to t (within half a cadence).
std::vector<double> spectrum_at(const SpectrumResult &r, double t);

} // namespace cavfluor
