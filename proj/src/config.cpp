#include "cavfluor/config.hpp"

#include "cavfluor/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace cavfluor {

namespace {

std::string where(const std::string &origin, const YAML::Mark &mark) {
	if(mark.line < 0)
		return origin;
	return origin + ":" + std::to_string(mark.line + 1);
}

// One mapping of the document with its dotted path.
class Section {
public:
	Section(YAML::Node node, std::string path, const std::string &origin, std::set<std::string> allowed)
	    : node_(std::move(node)), path_(std::move(path)), origin_(origin) {
		if(!node_ || node_.IsNull())
			return;
		if(!node_.IsMap())
			throw ConfigError(where(origin_, node_.Mark()) + ": '" + path_ + "' must be a mapping");
		for(const auto &kv : node_) {
			const std::string key = kv.first.as<std::string>();
			if(!allowed.count(key))
				throw ConfigError(where(origin_, kv.first.Mark()) + ": unknown key '" + full(key) + "'");
		}
	}

	bool has(const std::string &key) const { return node_ && node_.IsMap() && node_[key]; }
	std::string full(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

	[[noreturn]] void fail(const std::string &key, const std::string &msg) const {
		const YAML::Mark mark = has(key) ? node_[key].Mark() : (node_ ? node_.Mark() : YAML::Mark::null_mark());
		throw ConfigError(where(origin_, mark) + ": '" + full(key) + "' " + msg);
	}

	template <class T> T get(const std::string &key, T fallback) const {
		if(!has(key))
			return fallback;
		try {
			return node_[key].as<T>();
		} catch(const YAML::Exception &) {
			fail(key, "has the wrong type");
		}
	}

	template <class T> T required(const std::string &key) const {
		if(!has(key))
			throw ConfigError(where(origin_, node_ ? node_.Mark() : YAML::Mark::null_mark()) + ": missing required key '" +
			                  full(key) + "'");
		return get<T>(key, T{});
	}

	double real(const std::string &key, double fallback) const {
		const double v = get<double>(key, fallback);
		if(!std::isfinite(v))
			fail(key, "must be finite");
		return v;
	}

	void check(bool ok, const std::string &key, const std::string &msg) const {
		if(!ok)
			fail(key, msg);
	}

	std::string choice(const std::string &key, const std::string &fallback, std::set<std::string> values,
	                   bool need = false) const {
		const std::string v = need ? required<std::string>(key) : get<std::string>(key, fallback);
		if(!values.count(v)) {
			std::string list;
			for(const auto &s : values)
				list += (list.empty() ? "" : ", ") + s;
			fail(key, "must be one of: " + list);
		}
		return v;
	}

	std::vector<double> reals(const std::string &key) const {
		if(!has(key))
			return {};
		if(!node_[key].IsSequence())
			fail(key, "must be a list of numbers");
		return get<std::vector<double>>(key, {});
	}

	Section sub(const std::string &key, std::set<std::string> allowed) const {
		return Section(has(key) ? node_[key] : YAML::Node(), full(key), origin_, std::move(allowed));
	}

	const YAML::Node &node() const { return node_; }

private:
	YAML::Node node_;
	std::string path_;
	const std::string &origin_;
};

std::string num(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	std::string s = buf;
	if(s.find_first_of(".eEn") == std::string::npos)
		s += ".0";
	return s;
}

std::string list(const std::vector<double> &v) {
	std::string s = "[";
	for(std::size_t i = 0; i < v.size(); i++)
		s += (i ? ", " : "") + num(v[i]);
	return s + "]";
}

} // namespace

RunConfig parse_config(const std::string &text, const std::string &origin) {
	YAML::Node root;
	try {
		root = YAML::Load(text);
	} catch(const YAML::ParserException &e) {
		throw ConfigError(where(origin, e.mark) + ": malformed document: " + e.msg);
	}
	if(!root || root.IsNull())
		throw ConfigError(origin + ": empty configuration");
	const Section top(root, "", origin,
	                  {"model", "space", "radiation", "coupling", "initial", "dissipation", "scan", "propagation",
	                   "ground_state", "calibration", "output", "run"});

	RunConfig cfg;
	Scenario &s = cfg.scenario;

	// model
	const Section model = top.sub("model", {"kind", "mass", "C", "U", "V", "lambda", "gap"});
	if(!top.has("model"))
		top.fail("model", "is required");
	const std::string kind = model.choice("kind", "", {"dimer", "tls"}, true);
	if(kind == "dimer") {
		if(model.has("gap"))
			model.fail("gap", "applies to the two-level model only");
		MolecularParams p;
		p.mass = model.real("mass", p.mass);
		model.check(p.mass > 0.0, "mass", "must be > 0");
		p.C = model.real("C", p.C);
		model.check(p.C > 0.0, "C", "must be > 0");
		p.U = model.real("U", p.U);
		p.V = model.real("V", p.V);
		p.lambda = model.real("lambda", p.lambda);
		model.check(p.lambda > 0.0, "lambda", "must be > 0");
		s.model = ElectronicModel::dimer(p);
	} else {
		for(const char *k : {"mass", "C", "U", "V", "lambda"})
			if(model.has(k))
				model.fail(k, "applies to the dimer model only");
		const double gap = model.real("gap", 2.0);
		model.check(gap > 0.0, "gap", "must be > 0");
		s.model = ElectronicModel::tls(gap);
	}

	// space
	const Section space = top.sub("space", {"n_cav", "n_flu", "n_grid", "grid_min", "grid_max", "r_fixed"});
	s.space.n_elec = s.model.dim();
	s.space.n_cav = space.get<int>("n_cav", 30);
	space.check(s.space.n_cav >= 1, "n_cav", "must be >= 1");
	s.space.n_flu = space.get<int>("n_flu", 6);
	space.check(s.space.n_flu >= 1, "n_flu", "must be >= 1");
	s.space.n_grid = space.get<int>("n_grid", 1);
	space.check(s.space.n_grid >= 1, "n_grid", "must be >= 1");
	if(s.model.is_tls())
		space.check(s.space.n_grid == 1, "n_grid", "must be 1 for the two-level model");
	s.space.grid_min = space.real("grid_min", s.space.grid_min);
	s.space.grid_max = space.real("grid_max", s.space.grid_max);
	if(s.space.n_grid > 1) {
		space.check(s.space.grid_min > 0.0, "grid_min", "must be > 0");
		space.check(s.space.grid_max > s.space.grid_min, "grid_max", "must exceed grid_min");
	}
	s.space.r_fixed = space.real("r_fixed", s.space.r_fixed);
	space.check(s.space.r_fixed > 0.0, "r_fixed", "must be > 0");

	// radiation and coupling
	const Section rad = top.sub("radiation", {"omega0"});
	s.omega0 = rad.required<double>("omega0");
	rad.check(std::isfinite(s.omega0) && s.omega0 >= 0.0, "omega0", "must be >= 0");
	const Section coup = top.sub("coupling", {"g_c", "g_f"});
	s.g_c = coup.real("g_c", 0.08);
	s.g_f = coup.real("g_f", 0.01);
	coup.check(s.g_f >= 0.0, "g_f", "must be >= 0");

	// initial state
	const Section init = top.sub("initial", {"kind", "beta", "target_photons", "calibrate", "drive"});
	if(!top.has("initial"))
		top.fail("initial", "is required");
	const std::string ikind = init.choice("kind", "", {"coherent", "pumped"}, true);
	if(ikind == "coherent") {
		for(const char *k : {"target_photons", "calibrate", "drive"})
			if(init.has(k))
				init.fail(k, "applies to pumped starts only");
		CoherentInit c;
		c.beta = init.real("beta", c.beta);
		init.check(c.beta >= 0.0, "beta", "must be >= 0");
		s.init = c;
	} else {
		if(init.has("beta"))
			init.fail("beta", "applies to coherent starts only");
		PumpedInit p;
		p.target_photons = init.real("target_photons", p.target_photons);
		init.check(p.target_photons >= 0.0, "target_photons", "must be >= 0");
		p.calibrate = init.get<bool>("calibrate", true);
		const Section drive = init.sub("drive", {"shape", "amplitude", "t1", "t2", "ts", "time_unit"});
		if(!init.has("drive"))
			init.fail("drive", "is required for pumped starts");
		const std::string shape = drive.choice("shape", "", {"trapezoid", "sudden"}, true);
		const std::string unit = drive.choice("time_unit", "absolute", {"absolute", "pi_over_omega0"});
		double scale = 1.0;
		if(unit == "pi_over_omega0") {
			drive.check(s.omega0 > 0.0, "time_unit", "needs omega0 > 0");
			scale = std::numbers::pi / s.omega0;
		}
		const double amp = drive.real("amplitude", 0.0);
		drive.check(amp >= 0.0, "amplitude", "must be >= 0");
		if(!p.calibrate && !drive.has("amplitude"))
			drive.fail("amplitude", "is required when calibrate is false");
		if(shape == "trapezoid") {
			if(drive.has("ts"))
				drive.fail("ts", "applies to the sudden envelope only");
			const double t1 = drive.required<double>("t1") * scale;
			const double t2 = drive.required<double>("t2") * scale;
			drive.check(t1 >= 0.0, "t1", "must be >= 0");
			drive.check(t2 > 0.0 && t2 >= t1, "t2", "must be > 0 and >= t1");
			p.drive = DriveEnvelope::trapezoid(amp, t1, t2, s.omega0);
		} else {
			for(const char *k : {"t1", "t2"})
				if(drive.has(k))
					drive.fail(k, "applies to the trapezoid envelope only");
			const double ts = drive.required<double>("ts") * scale;
			drive.check(ts > 0.0, "ts", "must be > 0");
			p.drive = DriveEnvelope::sudden(amp, ts, s.omega0);
		}
		s.init = p;
	}

	// dissipation
	const Section diss = top.sub("dissipation", {"kind", "gamma", "bath"});
	const std::string dkind = diss.choice("kind", "exponential", {"none", "exponential", "bath"});
	if(dkind != "exponential" && diss.has("gamma"))
		diss.fail("gamma", "applies to exponential damping only");
	if(dkind != "bath" && diss.has("bath"))
		diss.fail("bath", "applies to bath dissipation only");
	if(dkind == "none") {
		s.dissipation = NoDissipation{};
	} else if(dkind == "exponential") {
		ExponentialDamping e;
		e.gamma = diss.real("gamma", e.gamma);
		diss.check(e.gamma >= 0.0, "gamma", "must be >= 0");
		s.dissipation = e;
	} else {
		const Section bath = diss.sub("bath", {"n_osc", "A", "a", "delta"});
		BathDissipation b;
		b.bath.n_osc = bath.get<int>("n_osc", b.bath.n_osc);
		bath.check(b.bath.n_osc >= 1, "n_osc", "must be >= 1");
		b.bath.A = bath.real("A", b.bath.A);
		bath.check(b.bath.A >= 0.0, "A", "must be >= 0");
		b.bath.a = bath.real("a", b.bath.a);
		b.bath.delta = bath.real("delta", b.bath.delta);
		bath.check(b.bath.delta > 0.0, "delta", "must be > 0");
		s.dissipation = b;
	}

	// omega' scan
	const Section scan = top.sub("scan", {"omega", "min", "max", "count"});
	if(scan.has("omega")) {
		for(const char *k : {"min", "max", "count"})
			if(scan.has(k))
				scan.fail(k, "cannot be combined with an explicit omega list");
		s.omega_scan = scan.reals("omega");
	} else if(scan.has("min") || scan.has("max") || scan.has("count")) {
		const double lo = scan.required<double>("min");
		const double hi = scan.required<double>("max");
		const int n = scan.required<int>("count");
		scan.check(n >= 1, "count", "must be >= 1");
		scan.check(lo >= 0.0, "min", "must be >= 0");
		scan.check(n == 1 ? hi >= lo : hi > lo, "max", "must exceed min");
		for(int i = 0; i < n; i++)
			s.omega_scan.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
	}
	for(std::size_t i = 0; i < s.omega_scan.size(); i++) {
		scan.check(s.omega_scan[i] >= 0.0, "omega", "values must be >= 0");
		if(i > 0)
			scan.check(s.omega_scan[i] > s.omega_scan[i - 1], "omega", "must be strictly increasing");
	}

	// propagation
	const Section prop =
	    top.sub("propagation", {"dt", "t_end", "krylov_dim", "tol", "midpoint", "max_halvings", "stencil"});
	s.krylov.dt = prop.real("dt", s.krylov.dt);
	prop.check(s.krylov.dt > 0.0, "dt", "must be > 0");
	s.t_end = prop.real("t_end", s.t_end);
	prop.check(s.t_end > 0.0, "t_end", "must be > 0");
	{
		const double n = s.t_end / s.krylov.dt;
		prop.check(std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, std::round(n)), "t_end",
		           "must be an integer multiple of dt");
	}
	s.krylov.krylov_dim = prop.get<int>("krylov_dim", s.krylov.krylov_dim);
	prop.check(s.krylov.krylov_dim >= 2 && s.krylov.krylov_dim <= 40, "krylov_dim", "must lie in [2, 40]");
	s.krylov.tol = prop.real("tol", s.krylov.tol);
	prop.check(s.krylov.tol > 0.0, "tol", "must be > 0");
	s.krylov.midpoint = prop.get<bool>("midpoint", s.krylov.midpoint);
	s.krylov.max_halvings = prop.get<int>("max_halvings", s.krylov.max_halvings);
	prop.check(s.krylov.max_halvings >= 0, "max_halvings", "must be >= 0");
	s.stencil = prop.get<int>("stencil", s.stencil);
	prop.check(s.stencil == 3 || s.stencil == 5, "stencil", "must be 3 or 5");

	const Section gs = top.sub("ground_state", {"max_basis", "max_cycles", "tol"});
	s.lanczos.max_basis = gs.get<int>("max_basis", s.lanczos.max_basis);
	gs.check(s.lanczos.max_basis >= 2, "max_basis", "must be >= 2");
	s.lanczos.max_cycles = gs.get<int>("max_cycles", s.lanczos.max_cycles);
	gs.check(s.lanczos.max_cycles >= 1, "max_cycles", "must be >= 1");
	s.lanczos.tol = gs.real("tol", s.lanczos.tol);
	gs.check(s.lanczos.tol > 0.0, "tol", "must be > 0");

	const Section cal = top.sub("calibration", {"omega", "tolerance", "max_probes"});
	s.calibration_omega = cal.real("omega", s.calibration_omega);
	cal.check(s.calibration_omega >= 0.0, "omega", "must be >= 0");
	s.calibration_tolerance = cal.real("tolerance", s.calibration_tolerance);
	cal.check(s.calibration_tolerance > 0.0 && s.calibration_tolerance < 0.05, "tolerance",
	          "must lie in (0, 0.05)");
	s.calibration_max_probes = cal.get<int>("max_probes", s.calibration_max_probes);
	cal.check(s.calibration_max_probes >= 2, "max_probes", "must be >= 2");

	const Section out = top.sub("output", {"dir", "snapshot_every", "density_times", "bath_trace", "r_cut"});
	cfg.out_dir = out.get<std::string>("dir", cfg.out_dir);
	s.snapshot_every = out.get<int>("snapshot_every", s.snapshot_every);
	out.check(s.snapshot_every >= 1, "snapshot_every", "must be >= 1");
	cfg.density_times = out.reals("density_times");
	cfg.bath_trace = out.get<bool>("bath_trace", cfg.bath_trace);
	s.r_cut = out.real("r_cut", s.r_cut);
	out.check(s.r_cut >= 0.0, "r_cut", "must be >= 0");

	const Section run =
	    top.sub("run", {"workers", "seed", "checkpoint_every", "report_times", "coherent_tolerance"});
	cfg.workers = run.get<int>("workers", cfg.workers);
	run.check(cfg.workers >= 1, "workers", "must be >= 1");
	s.seed = run.get<std::uint64_t>("seed", s.seed);
	cfg.checkpoint_every = run.get<int>("checkpoint_every", cfg.checkpoint_every);
	run.check(cfg.checkpoint_every >= 0, "checkpoint_every", "must be >= 0");
	cfg.report_times = run.reals("report_times");
	s.coherent_tolerance = run.real("coherent_tolerance", s.coherent_tolerance);
	run.check(s.coherent_tolerance > 0.0, "coherent_tolerance", "must be > 0");

	try {
		s.validate();
	} catch(const ConfigError &) {
		throw;
	} catch(const Error &e) {
		throw ConfigError(origin + ": " + e.what());
	}
	return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
	std::ifstream in(path);
	if(!in)
		throw IoError("cannot read config file " + path.string());
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_config(buf.str(), path.string());
}

std::string emit_config(const RunConfig &cfg) {
	const Scenario &s = cfg.scenario;
	std::ostringstream os;
	os << "model:\n";
	if(s.model.is_dimer()) {
		const auto &p = s.model.molecule();
		os << "  kind: dimer\n"
		   << "  mass: " << num(p.mass) << "\n"
		   << "  C: " << num(p.C) << "\n"
		   << "  U: " << num(p.U) << "\n"
		   << "  V: " << num(p.V) << "\n"
		   << "  lambda: " << num(p.lambda) << "\n";
	} else {
		os << "  kind: tls\n"
		   << "  gap: " << num(s.model.gap()) << "\n";
	}
	os << "space:\n"
	   << "  n_cav: " << s.space.n_cav << "\n"
	   << "  n_flu: " << s.space.n_flu << "\n"
	   << "  n_grid: " << s.space.n_grid << "\n"
	   << "  grid_min: " << num(s.space.grid_min) << "\n"
	   << "  grid_max: " << num(s.space.grid_max) << "\n"
	   << "  r_fixed: " << num(s.space.r_fixed) << "\n";
	os << "radiation:\n"
	   << "  omega0: " << num(s.omega0) << "\n";
	os << "coupling:\n"
	   << "  g_c: " << num(s.g_c) << "\n"
	   << "  g_f: " << num(s.g_f) << "\n";
	os << "initial:\n";
	if(const auto *c = std::get_if<CoherentInit>(&s.init)) {
		os << "  kind: coherent\n"
		   << "  beta: " << num(c->beta) << "\n";
	} else {
		const auto &p = std::get<PumpedInit>(s.init);
		os << "  kind: pumped\n"
		   << "  target_photons: " << num(p.target_photons) << "\n"
		   << "  calibrate: " << (p.calibrate ? "true" : "false") << "\n"
		   << "  drive:\n"
		   << "    shape: " << (p.drive.shape == EnvelopeShape::sudden ? "sudden" : "trapezoid") << "\n"
		   << "    amplitude: " << num(p.drive.amplitude) << "\n";
		if(p.drive.shape == EnvelopeShape::sudden)
			os << "    ts: " << num(p.drive.ts) << "\n";
		else
			os << "    t1: " << num(p.drive.t1) << "\n"
			   << "    t2: " << num(p.drive.t2) << "\n";
	}
	os << "dissipation:\n";
	if(std::holds_alternative<NoDissipation>(s.dissipation)) {
		os << "  kind: none\n";
	} else if(const auto *e = std::get_if<ExponentialDamping>(&s.dissipation)) {
		os << "  kind: exponential\n"
		   << "  gamma: " << num(e->gamma) << "\n";
	} else {
		const auto &b = std::get<BathDissipation>(s.dissipation).bath;
		os << "  kind: bath\n"
		   << "  bath:\n"
		   << "    n_osc: " << b.n_osc << "\n"
		   << "    A: " << num(b.A) << "\n"
		   << "    a: " << num(b.a) << "\n"
		   << "    delta: " << num(b.delta) << "\n";
	}
	if(!s.omega_scan.empty())
		os << "scan:\n"
		   << "  omega: " << list(s.omega_scan) << "\n";
	os << "propagation:\n"
	   << "  dt: " << num(s.krylov.dt) << "\n"
	   << "  t_end: " << num(s.t_end) << "\n"
	   << "  krylov_dim: " << s.krylov.krylov_dim << "\n"
	   << "  tol: " << num(s.krylov.tol) << "\n"
	   << "  midpoint: " << (s.krylov.midpoint ? "true" : "false") << "\n"
	   << "  max_halvings: " << s.krylov.max_halvings << "\n"
	   << "  stencil: " << s.stencil << "\n";
	os << "ground_state:\n"
	   << "  max_basis: " << s.lanczos.max_basis << "\n"
	   << "  max_cycles: " << s.lanczos.max_cycles << "\n"
	   << "  tol: " << num(s.lanczos.tol) << "\n";
	os << "calibration:\n"
	   << "  omega: " << num(s.calibration_omega) << "\n"
	   << "  tolerance: " << num(s.calibration_tolerance) << "\n"
	   << "  max_probes: " << s.calibration_max_probes << "\n";
	os << "output:\n"
	   << "  dir: \"" << cfg.out_dir << "\"\n"
	   << "  snapshot_every: " << s.snapshot_every << "\n"
	   << "  density_times: " << list(cfg.density_times) << "\n"
	   << "  bath_trace: " << (cfg.bath_trace ? "true" : "false") << "\n"
	   << "  r_cut: " << num(s.r_cut) << "\n";
	os << "run:\n"
	   << "  workers: " << cfg.workers << "\n"
	   << "  seed: " << s.seed << "\n"
	   << "  checkpoint_every: " << cfg.checkpoint_every << "\n"
	   << "  report_times: " << list(cfg.report_times) << "\n"
	   << "  coherent_tolerance: " << num(s.coherent_tolerance) << "\n";
	return os.str();
}

} // namespace cavfluor
