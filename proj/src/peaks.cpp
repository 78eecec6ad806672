#include "cavfluor/peaks.hpp"

#include "cavfluor/error.hpp"

#include <algorithm>
#include <cmath>

namespace cavfluor {

std::vector<Peak> detect_peaks(std::span<const double> row, std::span<const double> positions,
                               double min_prominence) {
	if(row.size() != positions.size())
		throw ShapeMismatch("peak detection: row and positions differ in length");
	if(!(min_prominence >= 0.0))
		throw InvalidArgument("peak prominence threshold must be >= 0");
	std::vector<Peak> out;
	const std::size_t n = row.size();
	if(n < 3)
		return out;
	const double top = *std::max_element(row.begin(), row.end());
	if(!(top > 0.0))
		return out;
	const double need = min_prominence * top;

	std::size_t i = 1;
	while(i + 1 < n) {
		if(!(row[i] > row[i - 1])) {
			i++;
			continue;
		}
		// walk over a possible plateau
		std::size_t end = i;
		while(end + 1 < n && row[end + 1] == row[i])
			end++;
		if(end + 1 >= n || !(row[end + 1] < row[i])) {
			i = end + 1;
			continue;
		}
		const double h = row[i];
		double left = h;
		for(std::size_t k = i; k-- > 0;) {
			if(row[k] > h)
				break;
			left = std::min(left, row[k]);
		}
		double right = h;
		for(std::size_t k = end + 1; k < n; k++) {
			if(row[k] > h)
				break;
			right = std::min(right, row[k]);
		}
		const double prom = h - std::max(left, right);
		if(prom >= need && prom > 0.0) {
			const std::size_t c = (i + end) / 2;
			out.push_back({c, positions[c], h, prom});
		}
		i = end + 1;
	}
	return out;
}

std::vector<Peak> peaks_near(const std::vector<Peak> &peaks, double position, double window) {
	std::vector<Peak> out;
	for(const auto &p : peaks)
		if(std::abs(p.position - position) <= window)
			out.push_back(p);
	std::sort(out.begin(), out.end(), [](const Peak &a, const Peak &b) { return a.height > b.height; });
	return out;
}

} // namespace cavfluor
