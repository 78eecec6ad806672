#include "cavfluor/sweep.hpp"

#include "cavfluor/checkpoint.hpp"
#include "cavfluor/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace cavfluor {

namespace fs = std::filesystem;

std::size_t SpectrumResult::failures() const {
	return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunRecord &r) { return !r.ok; }));
}

double ConvergenceReport::worst() const {
	double w = 0.0;
	for(const auto &v : variants)
		w = std::max(w, v.max_relative_change);
	return w;
}

namespace {

std::string job_name(std::size_t i) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "job_%05zu.manifest", i);
	return buf;
}

RunRecord run_job(const Scenario &s, std::size_t index, double omega_f, std::optional<double> amplitude,
                  const SweepOptions &opt) {
	RunRecord rec;
	rec.omega_f = omega_f;
	Propagation prop(s, omega_f, amplitude);
	const int total = s.total_steps();
	std::optional<fs::path> manifest;
	if(opt.checkpoint_dir)
		manifest = *opt.checkpoint_dir / job_name(index);
	const CheckpointTag tag{opt.scenario_hash, omega_f};

	bool restored = false;
	if(manifest && opt.resume && fs::exists(*manifest)) {
		prop.restore(load_checkpoint(*manifest, tag));
		restored = true;
	}
	if(!restored)
		prop.initialize();

	if(prop.step_index() < total) {
		if(manifest && opt.checkpoint_every > 0) {
			while(prop.step_index() < total) {
				const int next = std::min(total, prop.step_index() + opt.checkpoint_every);
				prop.run_until(next);
				save_checkpoint(*manifest, tag, prop.state());
			}
		} else {
			prop.run_until(total);
			if(manifest)
				save_checkpoint(*manifest, tag, prop.state());
		}
	}
	rec.snapshots = prop.state().snapshots;
	rec.bath_trace = prop.state().bath_trace;
	rec.ok = true;
	return rec;
}

std::optional<double> cached_amplitude(const Scenario &s, const SweepOptions &opt) {
	if(!std::holds_alternative<PumpedInit>(s.init))
		return std::nullopt;
	std::optional<fs::path> cache;
	if(opt.checkpoint_dir)
		cache = *opt.checkpoint_dir / "calibration.txt";
	if(cache && opt.resume && fs::exists(*cache)) {
		std::ifstream in(*cache);
		std::string hash, amp;
		in >> hash >> amp;
		if(hash != opt.scenario_hash)
			throw ConfigError("calibration cache " + cache->string() + " belongs to a different scenario");
		return std::strtod(amp.c_str(), nullptr);
	}
	const auto amp = resolve_drive_amplitude(s);
	if(cache && amp) {
		fs::create_directories(*opt.checkpoint_dir);
		std::ofstream out(*cache);
		char buf[64];
		std::snprintf(buf, sizeof buf, "%a", *amp);
		out << opt.scenario_hash << " " << buf << "\n";
	}
	return amp;
}

} // namespace

RunRecord run_single(const Scenario &s, double omega_f, std::optional<double> drive_amplitude) {
	return run_job(s, 0, omega_f, drive_amplitude, SweepOptions{});
}

SpectrumResult sweep_spectrum(const Scenario &s, const SweepOptions &options) {
	s.validate();
	if(options.workers < 1)
		throw InvalidArgument("worker count must be >= 1");
	SpectrumResult result;
	result.omega_scan = s.omega_scan.empty() ? default_omega_scan(s) : s.omega_scan;
	if(options.checkpoint_dir)
		fs::create_directories(*options.checkpoint_dir);
	result.drive_amplitude = cached_amplitude(s, options);
	if(options.log && result.drive_amplitude)
		options.log("drive amplitude " + std::to_string(*result.drive_amplitude));

	const std::size_t n = result.omega_scan.size();
	result.runs.resize(n);
	std::atomic<std::size_t> next{0};
	std::mutex log_mutex;
	auto worker = [&]() {
		for(;;) {
			const std::size_t i = next.fetch_add(1);
			if(i >= n)
				return;
			const double w = result.omega_scan[i];
			try {
				result.runs[i] = run_job(s, i, w, result.drive_amplitude, options);
			} catch(const std::exception &e) {
				RunRecord r;
				r.omega_f = w;
				r.ok = false;
				r.error = e.what();
				result.runs[i] = std::move(r);
			}
			if(options.log) {
				std::lock_guard lock(log_mutex);
				std::ostringstream os;
				os << "omega' = " << w << (result.runs[i].ok ? " done" : " failed: " + result.runs[i].error);
				options.log(os.str());
			}
		}
	};
	const int nw = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.workers), std::max<std::size_t>(n, 1)));
	if(nw <= 1) {
		worker();
	} else {
		std::vector<std::thread> pool;
		for(int k = 0; k < nw; k++)
			pool.emplace_back(worker);
		for(auto &t : pool)
			t.join();
	}

	for(const auto &r : result.runs)
		if(r.ok) {
			for(const auto &snap : r.snapshots)
				result.times.push_back(snap.t);
			break;
		}
	result.P.resize(n);
	for(std::size_t i = 0; i < n; i++) {
		if(!result.runs[i].ok)
			continue;
		for(const auto &snap : result.runs[i].snapshots)
			result.P[i].push_back(std::clamp(snap.p_fluor, 0.0, 1.0));
	}
	return result;
}

std::vector<double> spectrum_at(const SpectrumResult &r, double t) {
	if(r.times.empty())
		throw InvalidArgument("spectrum has no snapshot times");
	std::size_t best = 0;
	for(std::size_t k = 1; k < r.times.size(); k++)
		if(std::abs(r.times[k] - t) < std::abs(r.times[best] - t))
			best = k;
	const double spacing = r.times.size() > 1 ? r.times[1] - r.times[0] : 0.0;
	if(std::abs(r.times[best] - t) > 0.5 * spacing + 1e-9)
		throw InvalidArgument("no snapshot near t = " + std::to_string(t));
	std::vector<double> row;
	for(const auto &p : r.P)
		row.push_back(p.empty() ? std::numeric_limits<double>::quiet_NaN() : p[best]);
	return row;
}

std::vector<std::pair<std::string, Scenario>> refinement_ladder(const Scenario &s) {
	s.validate();
	Scenario base = s;
	if(base.omega_scan.empty())
		base.omega_scan = default_omega_scan(s);
	if(auto *p = std::get_if<PumpedInit>(&base.init)) {
		const auto amp = resolve_drive_amplitude(base);
		p->drive.amplitude = *amp;
		p->calibrate = false;
	}
	std::vector<std::pair<std::string, Scenario>> out;
	out.emplace_back("base", base);
	{
		Scenario v = base;
		v.space.n_cav *= 2;
		out.emplace_back("n_cav x2", v);
	}
	{
		Scenario v = base;
		v.space.n_flu *= 2;
		out.emplace_back("n_flu x2", v);
	}
	if(base.space.n_grid > 1) {
		Scenario v = base;
		v.space.n_grid = 2 * base.space.n_grid - 1;
		out.emplace_back("n_grid x2", v);
	}
	{
		Scenario v = base;
		v.krylov.dt *= 0.5;
		v.snapshot_every *= 2;
		out.emplace_back("dt / 2", v);
	}
	return out;
}

double max_relative_change(const std::vector<std::vector<double>> &ref, const std::vector<std::vector<double>> &got) {
	if(ref.size() != got.size())
		throw ShapeMismatch("convergence rows differ in number");
	double peak = 0.0, worst = 0.0;
	for(std::size_t k = 0; k < ref.size(); k++) {
		if(ref[k].size() != got[k].size())
			throw ShapeMismatch("convergence rows differ in length");
		for(std::size_t i = 0; i < ref[k].size(); i++) {
			peak = std::max(peak, ref[k][i]);
			worst = std::max(worst, std::abs(got[k][i] - ref[k][i]));
		}
	}
	return peak > 0.0 ? worst / peak : worst;
}

ConvergenceReport convergence_study(const Scenario &s, const std::vector<double> &report_times,
                                    const SweepOptions &options) {
	if(report_times.empty())
		throw InvalidArgument("convergence study needs at least one report time");
	const auto ladder = refinement_ladder(s);
	SweepOptions opt = options;
	opt.checkpoint_dir.reset();
	opt.resume = false;

	auto rows = [&](const Scenario &sc) {
		const SpectrumResult r = sweep_spectrum(sc, opt);
		if(r.failures() > 0)
			throw NumericalError("convergence run failed at one or more omega' values");
		std::vector<std::vector<double>> out;
		for(double t : report_times)
			out.push_back(spectrum_at(r, t));
		return out;
	};

	ConvergenceReport rep;
	rep.report_times = report_times;
	const auto ref = rows(ladder.front().second);
	for(const auto &row : ref)
		for(double v : row)
			rep.reference_peak = std::max(rep.reference_peak, v);
	for(std::size_t i = 1; i < ladder.size(); i++) {
		const auto &[name, sc] = ladder[i];
		if(options.log)
			options.log("convergence variant " + name);
		rep.variants.push_back({name, max_relative_change(ref, rows(sc))});
	}
	return rep;
}

} // namespace cavfluor
