#pragma once

#include "cavfluor/config.hpp"
#include "cavfluor/sweep.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cavfluor {

/// Locale-independent decimal text with 17 significant digits.
std::string format_real(double v);

/// spectrum.csv: header `omega_prime,time,probability`, rows sorted by
/// (omega', t).  Failed omega' rows are left out.
void write_spectrum_csv(const SpectrumResult &result, const std::filesystem::path &path);

/// snapshots.csv: one row per snapshot of every successful run.
void write_snapshots_csv(const SpectrumResult &result, const std::filesystem::path &path);

struct SpectrumTable {
	std::vector<double> omega;
	std::vector<double> time;
	std::vector<double> probability;
};

/// Read spectrum.csv back (throws IoError with the path on malformed input).
SpectrumTable read_spectrum_csv(const std::filesystem::path &path);

/// Everything for one run directory: spectrum.csv, snapshots.csv,
/// density_<t>.csv (grid runs, first successful omega'), bath.csv when
/// asked, failures.csv when any omega' failed, and provenance.txt holding
/// the resolved configuration.
void write_run(const std::filesystem::path &dir, const RunConfig &config, const SpectrumResult &result);

/// Name used for the density file at time t.
std::string density_file_name(double t);

} // namespace cavfluor
