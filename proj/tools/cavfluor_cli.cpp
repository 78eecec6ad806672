// Command-line front end: ground states, spectra, pump calibration and
// numerical checks driven by a YAML run description.

#include "cavfluor/checkpoint.hpp"
#include "cavfluor/config.hpp"
#include "cavfluor/error.hpp"
#include "cavfluor/output.hpp"
#include "cavfluor/peaks.hpp"
#include "cavfluor/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace cavfluor;

namespace {

struct Flags {
	std::string config;
	std::string out;
	int workers = 0;
	std::string resume;
};

int env_workers() {
	if(const char *v = std::getenv("CAVFLUOR_WORKERS")) {
		char *end = nullptr;
		const long n = std::strtol(v, &end, 10);
		if(end == v || *end != '\0' || n < 1)
			throw ConfigError("CAVFLUOR_WORKERS must be a positive integer");
		return static_cast<int>(n);
	}
	return 0;
}

int resolve_workers(const Flags &f, const RunConfig &cfg) {
	if(f.workers > 0)
		return f.workers;
	if(const int e = env_workers(); e > 0)
		return e;
	return cfg.workers;
}

void log_line(const std::string &s) {
	std::fprintf(stderr, "%s\n", s.c_str());
}

double scan_omega(const RunConfig &cfg) {
	const Scenario &s = cfg.scenario;
	if(s.calibration_omega > 0.0)
		return s.calibration_omega;
	return s.omega0;
}

int cmd_ground_state(const Flags &f) {
	const RunConfig cfg = load_config(f.config);
	const Scenario &s = cfg.scenario;
	const double w = scan_omega(cfg);
	const GroundStateResult gs = coupled_ground_state(s, w);
	const HilbertSpace space = build_space(s.space);
	std::printf("omega_prime %s\n", format_real(w).c_str());
	std::printf("energy %s\n", format_real(gs.energy).c_str());
	std::printf("residual %s\n", format_real(gs.residual).c_str());
	std::printf("matvecs %d\n", gs.matvecs);
	std::printf("n_cav %s\n", format_real(photon_number(space, gs.state, Mode::cavity)).c_str());
	std::printf("n_excited %s\n", format_real(excited_population(space, gs.state, s.model)).c_str());
	if(s.model.is_tls())
		std::printf("parity %s\n", format_real(total_parity(space, gs.state)).c_str());
	if(!space.rigid()) {
		const auto rho = nuclear_density(space, gs.state);
		const auto j = static_cast<int>(std::max_element(rho.begin(), rho.end()) - rho.begin());
		std::printf("density_max_at %s\n", format_real(space.x(j)).c_str());
		if(!f.out.empty()) {
			fs::create_directories(f.out);
			std::ofstream out(fs::path(f.out) / "ground_density.csv");
			out << "x,density\n";
			for(int k = 0; k < space.shape().n_grid; k++)
				out << format_real(space.x(k)) << "," << format_real(rho[static_cast<std::size_t>(k)]) << "\n";
			if(!out)
				throw IoError("cannot write ground_density.csv in " + f.out);
		}
	}
	return 0;
}

int cmd_spectrum(const Flags &f) {
	RunConfig cfg = load_config(f.config);
	const fs::path out = f.out.empty() ? fs::path(cfg.out_dir) : fs::path(f.out);
	cfg.out_dir = out.string();
	SweepOptions opt;
	opt.workers = resolve_workers(f, cfg);
	opt.checkpoint_dir = f.resume.empty() ? out / "checkpoints" : fs::path(f.resume);
	opt.checkpoint_every = cfg.checkpoint_every;
	opt.resume = !f.resume.empty();
	// the hash ignores where the output goes and how many workers run it
	RunConfig key = cfg;
	key.out_dir.clear();
	key.workers = 1;
	opt.scenario_hash = scenario_hash(emit_config(key));
	opt.log = log_line;
	const SpectrumResult r = sweep_spectrum(cfg.scenario, opt);
	write_run(out, cfg, r);
	std::printf("wrote %s (%zu omega', %zu times, %zu failed)\n", out.string().c_str(), r.omega_scan.size(),
	            r.times.size(), r.failures());
	return r.failures() == 0 ? 0 : 3;
}

int cmd_calibrate(const Flags &f) {
	const RunConfig cfg = load_config(f.config);
	const auto *p = std::get_if<PumpedInit>(&cfg.scenario.init);
	if(!p)
		throw ConfigError("calibrate-pump needs initial.kind: pumped");
	const CalibrationResult c = calibrate_pump(cfg.scenario, p->target_photons, p->drive);
	for(const auto &h : c.history)
		std::printf("probe g_d=%s n_cav=%s\n", format_real(h.amplitude).c_str(), format_real(h.photons).c_str());
	std::printf("amplitude %s\n", format_real(c.drive.amplitude).c_str());
	std::printf("photons %s\n", format_real(c.photons).c_str());
	return 0;
}

int cmd_bo_surface(const Flags &f, double lo, double hi, int points) {
	const RunConfig cfg = load_config(f.config);
	if(!cfg.scenario.model.is_dimer())
		throw ConfigError("bo-surface needs model.kind: dimer");
	if(!(lo > 0.0 && hi > lo && points >= 2))
		throw InvalidArgument("bo-surface needs 0 < min < max and at least two points");
	std::vector<double> xs;
	for(int i = 0; i < points; i++)
		xs.push_back(lo + (hi - lo) * i / (points - 1));
	const auto e = bo_surface(xs, cfg.scenario.model.molecule());
	std::ostream *os = &std::cout;
	std::ofstream file;
	if(!f.out.empty()) {
		file.open(f.out);
		if(!file)
			throw IoError("cannot write " + f.out);
		os = &file;
	}
	*os << "x,energy\n";
	for(std::size_t i = 0; i < xs.size(); i++)
		*os << format_real(xs[i]) << "," << format_real(e[i]) << "\n";
	const auto k = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
	std::fprintf(stderr, "minimum at x = %s\n", format_real(xs[k]).c_str());
	return 0;
}

int cmd_oracle(int dim, double dt, std::uint64_t seed, int instances) {
	if(dim < 1 || static_cast<std::size_t>(dim) > kDenseLimit)
		throw InvalidArgument("oracle dimension must lie in [1, " + std::to_string(kDenseLimit) + "]");
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> g;
	KrylovConfig kc;
	kc.dt = dt;
	double worst = 0.0;
	for(int inst = 0; inst < instances; inst++) {
		Eigen::MatrixXcd a(dim, dim);
		for(int i = 0; i < dim; i++)
			for(int j = 0; j < dim; j++)
				a(i, j) = cplx(g(rng), g(rng));
		const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint()) / std::sqrt(double(dim));
		std::vector<cplx> psi(static_cast<std::size_t>(dim));
		for(auto &v : psi)
			v = cplx(g(rng), g(rng));
		const double nrm = std::sqrt(norm_squared(psi));
		for(auto &v : psi)
			v /= nrm;
		const auto ref = dense_expm_reference(h, psi, dt);
		const TimeDependentOperator op = [&](double, std::span<const cplx> in, std::span<cplx> out) {
			Eigen::Map<const Eigen::VectorXcd> x(in.data(), dim);
			Eigen::Map<Eigen::VectorXcd> y(out.data(), dim);
			y.noalias() = h * x;
		};
		krylov_step(psi, op, 0.0, kc);
		double d = 0.0;
		for(std::size_t i = 0; i < psi.size(); i++)
			d += std::norm(psi[i] - ref[i]);
		worst = std::max(worst, std::sqrt(d));
	}
	std::printf("dimension %d instances %d dt %s\n", dim, instances, format_real(dt).c_str());
	std::printf("max deviation %.3e\n", worst);
	if(!(worst < 1e-10))
		throw NumericalError("Krylov step deviates from the dense reference by " + format_real(worst));
	return 0;
}

int cmd_convergence(const Flags &f) {
	const RunConfig cfg = load_config(f.config);
	SweepOptions opt;
	opt.workers = resolve_workers(f, cfg);
	opt.log = log_line;
	std::vector<double> times = cfg.report_times;
	if(times.empty())
		times.push_back(cfg.scenario.t_end);
	const ConvergenceReport rep = convergence_study(cfg.scenario, times, opt);
	std::printf("reference peak %s\n", format_real(rep.reference_peak).c_str());
	for(const auto &v : rep.variants)
		std::printf("%-10s max relative change %.3e %s\n", v.name.c_str(), v.max_relative_change,
		            v.max_relative_change < 0.01 ? "ok" : "NOT CONVERGED");
	if(!(rep.worst() < 0.01))
		throw NumericalError("spectrum changes by more than 1% under refinement");
	return 0;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Cavity fluorescence simulator"};
	app.require_subcommand(1);
	Flags flags;

	auto add_config = [&](CLI::App *sub) {
		sub->add_option("--config", flags.config, "YAML run description")->required()->check(CLI::ExistingFile);
	};
	auto *gs = app.add_subcommand("ground-state", "coupled ground state at t = 0");
	add_config(gs);
	gs->add_option("--out", flags.out, "directory for ground_density.csv");

	auto *sp = app.add_subcommand("spectrum", "fluorescence spectrum sweep over omega'");
	add_config(sp);
	sp->add_option("--out", flags.out, "run directory (default: output.dir)");
	sp->add_option("--workers", flags.workers, "parallel omega' jobs")->check(CLI::PositiveNumber);
	sp->add_option("--resume", flags.resume, "checkpoint directory to continue from");

	auto *cp = app.add_subcommand("calibrate-pump", "find the drive amplitude for the target photon number");
	add_config(cp);

	double bo_lo = 0.5, bo_hi = 8.0;
	int bo_n = 301;
	auto *bo = app.add_subcommand("bo-surface", "Born-Oppenheimer curve of the dimer");
	add_config(bo);
	bo->add_option("--out", flags.out, "CSV file (default: stdout)");
	bo->add_option("--min", bo_lo, "smallest x");
	bo->add_option("--max", bo_hi, "largest x");
	bo->add_option("--points", bo_n, "number of x values");

	int oc_dim = 256, oc_inst = 5;
	double oc_dt = 0.05;
	std::uint64_t oc_seed = 1;
	auto *oc = app.add_subcommand("oracle-compare", "Krylov step against a dense exponential");
	oc->add_option("--dim", oc_dim, "matrix dimension");
	oc->add_option("--dt", oc_dt, "time step");
	oc->add_option("--seed", oc_seed, "random seed");
	oc->add_option("--instances", oc_inst, "number of random instances");

	auto *cv = app.add_subcommand("convergence", "refinement study of the spectrum");
	add_config(cv);
	cv->add_option("--workers", flags.workers, "parallel omega' jobs")->check(CLI::PositiveNumber);

	try {
		app.parse(argc, argv);
	} catch(const CLI::ParseError &e) {
		return app.exit(e);
	}

	try {
		if(*gs)
			return cmd_ground_state(flags);
		if(*sp)
			return cmd_spectrum(flags);
		if(*cp)
			return cmd_calibrate(flags);
		if(*bo)
			return cmd_bo_surface(flags, bo_lo, bo_hi, bo_n);
		if(*oc)
			return cmd_oracle(oc_dim, oc_dt, oc_seed, oc_inst);
		if(*cv)
			return cmd_convergence(flags);
	} catch(const Error &e) {
		std::fprintf(stderr, "error: %s: %s\n", e.kind().c_str(), e.what());
		return 2;
	} catch(const std::exception &e) {
		std::fprintf(stderr, "error: internal: %s\n", e.what());
		return 2;
	}
	return 1;
}
