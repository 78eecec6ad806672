#include "cavfluor/output.hpp"

#include "cavfluor/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cavfluor {

namespace fs = std::filesystem;

namespace {

class CsvFile {
public:
	explicit CsvFile(const fs::path &path) : path_(path), out_(path, std::ios::binary) {
		if(!out_)
			throw IoError("cannot write " + path.string());
	}
	CsvFile &operator<<(const std::string &s) {
		out_ << s;
		return *this;
	}
	void close() {
		out_.close();
		if(!out_)
			throw IoError("write failed: " + path_.string());
	}

private:
	fs::path path_;
	std::ofstream out_;
};

std::string opt_real(const std::optional<double> &v) {
	return v ? format_real(*v) : "NA";
}

double parse_real(const std::string &s, const fs::path &path, std::size_t line) {
	double v = 0.0;
	const char *b = s.data();
	const char *e = s.data() + s.size();
	auto [p, ec] = std::from_chars(b, e, v);
	if(ec != std::errc() || p != e)
		throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
	return v;
}

std::size_t nearest(const std::vector<Snapshot> &snaps, double t) {
	std::size_t best = 0;
	for(std::size_t k = 1; k < snaps.size(); k++)
		if(std::abs(snaps[k].t - t) < std::abs(snaps[best].t - t))
			best = k;
	return best;
}

} // namespace

std::string format_real(double v) {
	char buf[64];
	auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
	if(ec != std::errc())
		throw IoError("cannot format number");
	return std::string(buf, p);
}

std::string density_file_name(double t) {
	char buf[64];
	auto [p, ec] = std::to_chars(buf, buf + sizeof buf, t);
	(void)ec;
	return "density_" + std::string(buf, p) + ".csv";
}

void write_spectrum_csv(const SpectrumResult &result, const fs::path &path) {
	std::vector<std::size_t> order(result.omega_scan.size());
	std::iota(order.begin(), order.end(), 0);
	std::stable_sort(order.begin(), order.end(),
	                 [&](std::size_t a, std::size_t b) { return result.omega_scan[a] < result.omega_scan[b]; });
	CsvFile f(path);
	f << "omega_prime,time,probability\n";
	for(std::size_t i : order) {
		if(i >= result.P.size() || result.P[i].empty())
			continue;
		const auto &row = result.P[i];
		if(row.size() != result.times.size())
			throw ShapeMismatch("spectrum row length differs from the snapshot times");
		const std::string w = format_real(result.omega_scan[i]);
		for(std::size_t k = 0; k < row.size(); k++)
			f << w << "," << format_real(result.times[k]) << "," << format_real(row[k]) << "\n";
	}
	f.close();
}

void write_snapshots_csv(const SpectrumResult &result, const fs::path &path) {
	CsvFile f(path);
	f << "omega_prime,time,n_cav,n_flu,parity,n_excited,norm,energy,p_diss\n";
	for(const auto &run : result.runs) {
		if(!run.ok)
			continue;
		const std::string w = format_real(run.omega_f);
		for(const auto &s : run.snapshots)
			f << w << "," << format_real(s.t) << "," << format_real(s.n_cav) << "," << format_real(s.n_flu) << ","
			  << opt_real(s.parity) << "," << format_real(s.n_excited) << "," << format_real(s.norm) << ","
			  << format_real(s.energy) << "," << opt_real(s.p_diss) << "\n";
	}
	f.close();
}

SpectrumTable read_spectrum_csv(const fs::path &path) {
	std::ifstream in(path);
	if(!in)
		throw IoError("cannot read " + path.string());
	std::string line;
	if(!std::getline(in, line) || line != "omega_prime,time,probability")
		throw IoError(path.string() + ":1: unexpected header");
	SpectrumTable t;
	std::size_t n = 1;
	while(std::getline(in, line)) {
		n++;
		if(line.empty())
			continue;
		std::vector<std::string> cols;
		std::stringstream ss(line);
		std::string c;
		while(std::getline(ss, c, ','))
			cols.push_back(c);
		if(cols.size() != 3)
			throw IoError(path.string() + ":" + std::to_string(n) + ": expected 3 columns");
		t.omega.push_back(parse_real(cols[0], path, n));
		t.time.push_back(parse_real(cols[1], path, n));
		t.probability.push_back(parse_real(cols[2], path, n));
	}
	return t;
}

void write_run(const fs::path &dir, const RunConfig &config, const SpectrumResult &result) {
	std::error_code ec;
	fs::create_directories(dir, ec);
	if(ec)
		throw IoError("cannot create " + dir.string() + ": " + ec.message());

	write_spectrum_csv(result, dir / "spectrum.csv");
	write_snapshots_csv(result, dir / "snapshots.csv");

	const auto first = std::find_if(result.runs.begin(), result.runs.end(), [](const RunRecord &r) { return r.ok; });
	if(config.scenario.space.n_grid > 1 && first != result.runs.end() && !first->snapshots.empty()) {
		const HilbertSpace space = build_space(config.scenario.space);
		std::vector<double> times = config.density_times;
		if(times.empty())
			times = {first->snapshots.front().t, first->snapshots.back().t};
		for(double t : times) {
			const Snapshot &s = first->snapshots[nearest(first->snapshots, t)];
			CsvFile f(dir / density_file_name(s.t));
			f << "x,density\n";
			for(int j = 0; j < space.shape().n_grid; j++)
				f << format_real(space.x(j)) << "," << format_real(s.nuclear_density[static_cast<std::size_t>(j)])
				  << "\n";
			f.close();
		}
	}

	if(config.bath_trace) {
		CsvFile f(dir / "bath.csv");
		f << "omega_prime,time,feedback,bath_energy\n";
		for(const auto &run : result.runs)
			for(const auto &b : run.bath_trace)
				f << format_real(run.omega_f) << "," << format_real(b.t) << "," << format_real(b.feedback) << ","
				  << format_real(b.energy) << "\n";
		f.close();
	}

	if(result.failures() > 0) {
		CsvFile f(dir / "failures.csv");
		f << "omega_prime,error\n";
		for(const auto &run : result.runs)
			if(!run.ok) {
				std::string msg = run.error;
				std::replace(msg.begin(), msg.end(), '\n', ' ');
				std::replace(msg.begin(), msg.end(), ',', ';');
				f << format_real(run.omega_f) << "," << msg << "\n";
			}
		f.close();
	}

	RunConfig resolved = config;
	resolved.scenario.omega_scan = result.omega_scan;
	CsvFile f(dir / "provenance.txt");
	f << "# cavfluor " << kVersion << "\n";
	if(result.drive_amplitude)
		f << "# resolved drive amplitude " << format_real(*result.drive_amplitude) << "\n";
	f << emit_config(resolved);
	f.close();
}

} // namespace cavfluor
