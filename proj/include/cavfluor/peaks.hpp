#pragma once

#include <span>
#include <vector>

namespace cavfluor {

struct Peak {
	std::size_t index = 0;
	double position = 0.0;
	double height = 0.0;
	double prominence = 0.0;
};

/// Interior local maxima of `row` whose topographic prominence is at least
/// `min_prominence` times the row maximum.  Flat tops report their centre.
/// Peaks are returned in order of position.
std::vector<Peak> detect_peaks(std::span<const double> row, std::span<const double> positions,
                               double min_prominence = 0.05);

/// Peaks within `window` of `position`, tallest first.
std::vector<Peak> peaks_near(const std::vector<Peak> &peaks, double position, double window);

} // namespace cavfluor
