#include "cavfluor/scenarios.hpp"

#include "cavfluor/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cavfluor {

namespace {

// rotate the global phase so the largest amplitude is real and positive
void fix_phase(std::span<cplx> v) {
	std::size_t best = 0;
	double mag = -1.0;
	for(std::size_t i = 0; i < v.size(); i++) {
		const double a = std::norm(v[i]);
		if(a > mag * (1.0 + 1e-12)) {
			mag = a;
			best = i;
		}
	}
	if(mag <= 0.0)
		return;
	const cplx ph = std::conj(v[best]) / std::abs(v[best]);
	for(auto &a : v)
		a *= ph;
}

SpaceShape molecular_shape(const SpaceShape &shape) {
	SpaceShape s = shape;
	s.n_cav = 1;
	s.n_flu = 1;
	return s;
}

double reference_resonance(const Scenario &s) {
	if(s.model.is_tls())
		return s.model.gap();
	const auto &p = s.model.molecule();
	return resonance_frequency(p.U, p.v_eff(s.space.r_fixed));
}

Eigen::VectorXd electronic_ground(const ElectronicModel &model, double x) {
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(electronic_hamiltonian(model, x));
	Eigen::VectorXd v = es.eigenvectors().col(0);
	Eigen::Index imax = 0;
	v.cwiseAbs().maxCoeff(&imax);
	if(v(imax) < 0.0)
		v = -v;
	return v;
}

} // namespace

void Scenario::validate() const {
	krylov.validate();
	build_space(space);
	if(space.n_elec != model.dim())
		throw ShapeMismatch("space.n_elec does not match the electronic model");
	if(model.is_tls() && space.n_grid != 1)
		throw InvalidArgument("the two-level system has no nuclear coordinate; n_grid must be 1");
	if(!(omega0 >= 0.0))
		throw InvalidArgument("omega0 must be >= 0");
	if(!(g_f >= 0.0))
		throw InvalidArgument("g_f must be >= 0");
	if(!(t_end > 0.0))
		throw InvalidArgument("t_end must be > 0");
	if(snapshot_every < 1)
		throw InvalidArgument("snapshot cadence must be >= 1 step");
	if(stencil != 3 && stencil != 5)
		throw InvalidArgument("kinetic stencil must be 3 or 5");
	if(!(coherent_tolerance > 0.0))
		throw InvalidArgument("coherent truncation tolerance must be > 0");
	for(std::size_t i = 0; i < omega_scan.size(); i++) {
		if(!(omega_scan[i] >= 0.0))
			throw InvalidArgument("omega' values must be >= 0");
		if(i > 0 && !(omega_scan[i] > omega_scan[i - 1]))
			throw InvalidArgument("omega' grid must be strictly increasing");
	}
	if(const auto *c = std::get_if<CoherentInit>(&init)) {
		if(!(c->beta >= 0.0))
			throw InvalidArgument("coherent amplitude beta must be >= 0");
	} else {
		const auto &p = std::get<PumpedInit>(init);
		if(!(p.target_photons >= 0.0))
			throw InvalidArgument("target photon number must be >= 0");
		if(p.drive.shape == EnvelopeShape::off && p.target_photons > 0.0)
			throw InvalidArgument("pumped start needs a drive envelope");
		if(!(calibration_tolerance > 0.0 && calibration_tolerance < 0.05))
			throw InvalidArgument("calibration tolerance must lie in (0, 0.05)");
		if(calibration_max_probes < 2)
			throw InvalidArgument("calibration needs at least two probes");
	}
	if(const auto *e = std::get_if<ExponentialDamping>(&dissipation)) {
		if(!(e->gamma >= 0.0))
			throw InvalidArgument("damping rate gamma must be >= 0");
	} else if(const auto *b = std::get_if<BathDissipation>(&dissipation)) {
		b->bath.validate();
	}
	if(r_cut < 0.0)
		throw InvalidArgument("r_cut must be > 0");
	total_steps();
}

CouplingParams Scenario::couplings() const {
	CouplingParams c;
	c.g_c = g_c;
	c.g_f = g_f;
	if(const auto *e = std::get_if<ExponentialDamping>(&dissipation))
		c.gamma = e->gamma;
	c.bath_enabled = bath_enabled();
	return c;
}

double Scenario::resolved_r_cut() const {
	return r_cut > 0.0 ? r_cut : 4.0 * kReferenceBondLength;
}

int Scenario::total_steps() const {
	const double n = t_end / krylov.dt;
	const double r = std::round(n);
	if(std::abs(n - r) > 1e-9 * std::max(1.0, r))
		throw InvalidArgument("t_end must be an integer multiple of dt");
	return static_cast<int>(r);
}

std::vector<double> default_omega_scan(const Scenario &s) {
	const double w = std::max(s.omega0, reference_resonance(s));
	const int n = 80;
	std::vector<double> scan(n);
	for(int i = 0; i < n; i++)
		scan[static_cast<std::size_t>(i)] = w * (0.2 + 1.4 * i / (n - 1));
	return scan;
}

StateVector molecular_ground_state(const Scenario &s) {
	const HilbertSpace space = build_space(molecular_shape(s.space));
	const int ne = s.model.dim();
	StateVector out(space);
	if(space.rigid()) {
		const Eigen::VectorXd g = electronic_ground(s.model, space.shape().r_fixed);
		for(int l = 0; l < ne; l++)
			out.at({l, 0, 0, 0}) = g(l);
		return out;
	}

	// seed: harmonic fit around the BO minimum times the local electronic ground state
	const auto &p = s.model.molecule();
	const auto grid = space.grid();
	const auto bo = bo_surface(grid, p);
	const auto jmin = static_cast<std::size_t>(std::min_element(bo.begin(), bo.end()) - bo.begin());
	const double x0 = grid[jmin];
	const double h = 1e-3;
	const std::array<double, 3> xs{x0 - h, x0, x0 + h};
	const auto e3 = bo_surface(xs, p);
	const double k = (e3[0] - 2.0 * e3[1] + e3[2]) / (h * h);
	const double mu = 0.5 * p.mass;
	double width_coef = 0.0;
	if(k > 0.0)
		width_coef = 0.5 * std::sqrt(k * mu);
	else
		width_coef = 1.0 / std::pow(0.1 * (space.shape().grid_max - space.shape().grid_min), 2);

	std::vector<cplx> seed(space.dim(), 0.0);
	for(int j = 0; j < space.shape().n_grid; j++) {
		const double x = space.x(j);
		const double env = std::exp(-width_coef * (x - x0) * (x - x0));
		const Eigen::VectorXd g = electronic_ground(s.model, x);
		for(int l = 0; l < ne; l++)
			seed[space.index({l, 0, 0, j})] = env * g(l);
	}

	const Hamiltonian ham(space, s.model, RadiationParams{s.omega0, 0.0}, s.stencil);
	const FieldCoefficients zero;
	const LinearOperator op = [&](std::span<const cplx> in, std::span<cplx> o) { ham.apply(zero, in, o); };
	SeedPolicy policy;
	policy.start = std::move(seed);
	policy.rng_seed = s.seed;
	GroundStateResult gs = ground_state(op, space.dim(), policy, s.lanczos);
	fix_phase(gs.state);
	return StateVector(space, std::move(gs.state));
}

StateVector coherent_initial_state(double beta, const HilbertSpace &space, const StateVector &molecular_ground,
                                   double tolerance) {
	const auto &sh = space.shape();
	const auto &mg = molecular_ground.space().shape();
	if(mg.n_elec != sh.n_elec || mg.n_grid != sh.n_grid || mg.n_cav != 1 || mg.n_flu != 1)
		throw ShapeMismatch("molecular ground state does not match the target space");
	if(!(beta >= 0.0))
		throw InvalidArgument("coherent amplitude beta must be >= 0");

	std::vector<double> c(static_cast<std::size_t>(sh.n_cav));
	c[0] = std::exp(-0.5 * beta * beta);
	double kept = c[0] * c[0];
	for(int n = 1; n < sh.n_cav; n++) {
		c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)] * beta / std::sqrt(double(n));
		kept += c[static_cast<std::size_t>(n)] * c[static_cast<std::size_t>(n)];
	}
	const double deficit = 1.0 - kept;
	if(deficit > tolerance) {
		std::ostringstream os;
		os << "cavity cutoff " << sh.n_cav << " too small for beta = " << beta << ": norm deficit " << deficit
		   << " exceeds " << tolerance;
		throw NumericalError(os.str());
	}
	const double scale = 1.0 / std::sqrt(kept);

	StateVector out(space);
	for(int l = 0; l < sh.n_elec; l++)
		for(int j = 0; j < sh.n_grid; j++) {
			const cplx g = molecular_ground.at({l, 0, 0, j});
			if(g == 0.0)
				continue;
			for(int n = 0; n < sh.n_cav; n++)
				out.at({l, n, 0, j}) = g * (c[static_cast<std::size_t>(n)] * scale);
		}
	return out;
}

GroundStateResult coupled_ground_state(const Scenario &s, double omega_f) {
	const HilbertSpace space = build_space(s.space);
	const StateVector mol = molecular_ground_state(s);
	std::vector<cplx> seed(space.dim(), 0.0);
	for(int l = 0; l < s.space.n_elec; l++)
		for(int j = 0; j < s.space.n_grid; j++)
			seed[space.index({l, 0, 0, j})] = mol.at({l, 0, 0, j});

	const Hamiltonian ham(space, s.model, RadiationParams{s.omega0, omega_f}, s.stencil);
	FieldCoefficients c;
	c.cavity_dipole = s.g_c;
	c.fluor_dipole = s.g_f;
	const LinearOperator op = [&](std::span<const cplx> in, std::span<cplx> o) { ham.apply(c, in, o); };
	SeedPolicy policy;
	policy.start = std::move(seed);
	policy.rng_seed = s.seed;
	GroundStateResult gs = ground_state(op, space.dim(), policy, s.lanczos);
	fix_phase(gs.state);
	return gs;
}

cplx driven_cavity_amplitude(const DriveEnvelope &drive, double omega0, double t) {
	// alpha(t) = -i e^{-i w t} int_0^t E(s) cos(c s) e^{i w s} ds
	static constexpr std::array<double, 5> node{-0.9061798459386640, -0.5384693101056831, 0.0,
	                                            0.5384693101056831, 0.9061798459386640};
	static constexpr std::array<double, 5> weight{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
	                                              0.4786286704993665, 0.2369268850561891};
	std::vector<double> cuts{0.0};
	for(double b : drive.breakpoints())
		if(b > 0.0 && b < t)
			cuts.push_back(b);
	cuts.push_back(t);
	const double fastest = std::max({std::abs(omega0), std::abs(drive.carrier), 1e-3});
	const double panel = 2.0 * std::numbers::pi / fastest / 32.0;

	cplx acc = 0.0;
	for(std::size_t k = 0; k + 1 < cuts.size(); k++) {
		const double a = cuts[k], b = cuts[k + 1];
		if(!(b > a))
			continue;
		const int np = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
		const double hw = 0.5 * (b - a) / np;
		for(int p = 0; p < np; p++) {
			const double mid = a + (2 * p + 1) * hw;
			for(std::size_t q = 0; q < node.size(); q++) {
				const double s = mid + hw * node[q];
				acc += weight[q] * hw * drive.field(s) * std::polar(1.0, omega0 * s);
			}
		}
	}
	return cplx(0.0, -1.0) * std::polar(1.0, -omega0 * t) * acc;
}

Propagation::Propagation(const Scenario &s, double omega_f, std::optional<double> drive_amplitude)
    : scenario_(s), omega_f_(omega_f), couplings_(s.couplings()),
      ham_(build_space(s.space), s.model, RadiationParams{s.omega0, omega_f}, s.stencil),
      krylov_(ham_.dim(), s.krylov) {
	if(const auto *p = std::get_if<PumpedInit>(&s.init)) {
		drive_ = p->drive;
		if(drive_.carrier == 0.0)
			drive_.carrier = s.omega0;
		if(drive_amplitude)
			drive_.amplitude = *drive_amplitude;
		for(double b : drive_.breakpoints())
			if(b > 0.0)
				breakpoints_.push_back(b);
		std::sort(breakpoints_.begin(), breakpoints_.end());
	}
	if(const auto *b = std::get_if<BathDissipation>(&s.dissipation))
		bath_ = std::make_unique<Bath>(b->bath);
	scratch_.resize(ham_.dim());
}

void Propagation::initialize() {
	if(const auto *c = std::get_if<CoherentInit>(&scenario_.init)) {
		const StateVector mol = molecular_ground_state(scenario_);
		StateVector psi = coherent_initial_state(c->beta, space(), mol, scenario_.coherent_tolerance);
		initialize_from(std::vector<cplx>(psi.amplitudes().begin(), psi.amplitudes().end()));
	} else {
		initialize_from(coupled_ground_state(scenario_, omega_f_).state);
	}
}

void Propagation::initialize_from(std::vector<cplx> psi) {
	if(psi.size() != ham_.dim())
		throw ShapeMismatch("initial state length does not match the space");
	state_ = PropagationState{};
	state_.psi = std::move(psi);
	if(bath_) {
		bath_->state() = BathState::at_rest(bath_->params().n_osc);
		state_.bath = bath_->state();
	}
	record();
}

void Propagation::restore(PropagationState saved) {
	if(saved.psi.size() != ham_.dim())
		throw ShapeMismatch("checkpointed state length does not match the space");
	if(bath_) {
		if(!saved.bath || saved.bath->x.size() != static_cast<std::size_t>(bath_->params().n_osc))
			throw ShapeMismatch("checkpoint lacks a matching bath state");
		bath_->state() = *saved.bath;
	}
	state_ = std::move(saved);
}

FieldCoefficients Propagation::coefficients(double t, double bath_force) const {
	FieldCoefficients c;
	c.cavity_dipole = couplings_.g_c;
	c.cavity_scalar = drive_.field(t) - bath_force;
	c.fluor_dipole = couplings_.g_fluor(t);
	c.fluor_scalar = -bath_force;
	return c;
}

void Propagation::advance(double t, double h) {
	const bool mid = scenario_.krylov.midpoint;
	double q = 0.0;
	double f = 0.0;
	if(bath_) {
		const auto &sp = ham_.space();
		q = quadrature(sp, state_.psi, Mode::cavity) + quadrature(sp, state_.psi, Mode::fluorescence);
		f = mid ? bath_->predicted_feedback(q, 0.5 * h) : bath_->feedback();
	}
	const FieldCoefficients c = coefficients(mid ? t + 0.5 * h : t, f);
	const LinearOperator op = [&](std::span<const cplx> in, std::span<cplx> out) { ham_.apply(c, in, out); };
	krylov_.step(state_.psi, op, h);
	if(bath_) {
		const auto &sp = ham_.space();
		const double q1 = quadrature(sp, state_.psi, Mode::cavity) + quadrature(sp, state_.psi, Mode::fluorescence);
		bath_->step(0.5 * (q + q1), h);
	}
}

void Propagation::step() {
	const double dt = scenario_.krylov.dt;
	const double t0 = state_.step * dt;
	const double t1 = (state_.step + 1) * dt;
	double t = t0;
	const double eps = 1e-12 * std::max(1.0, t1);
	for(double b : breakpoints_)
		if(b > t0 + eps && b < t1 - eps) {
			advance(t, b - t);
			t = b;
		}
	advance(t, t1 - t);
	state_.step++;
	if(bath_)
		state_.bath = bath_->state();
}

void Propagation::run_until(int last, const std::function<bool(const Propagation &)> &on_snapshot) {
	const int total = scenario_.total_steps();
	while(state_.step < last) {
		step();
		if(state_.step % scenario_.snapshot_every == 0 || state_.step == total) {
			record();
			if(on_snapshot && !on_snapshot(*this))
				return;
		}
	}
}

double Propagation::system_energy() const {
	FieldCoefficients c;
	c.cavity_dipole = couplings_.g_c;
	c.fluor_dipole = couplings_.g_fluor(time());
	return ham_.expectation(c, state_.psi, scratch_);
}

Snapshot Propagation::snapshot() const {
	const auto &sp = ham_.space();
	const std::span<const cplx> psi = state_.psi;
	Snapshot s;
	s.t = time();
	s.p_fluor = fluorescence_probability(sp, psi);
	s.n_cav = photon_number(sp, psi, Mode::cavity);
	s.n_flu = photon_number(sp, psi, Mode::fluorescence);
	if(scenario_.model.is_tls())
		s.parity = total_parity(sp, psi);
	s.n_excited = excited_population(sp, psi, scenario_.model);
	s.norm = std::sqrt(norm_squared(psi));
	s.energy = system_energy();
	if(!sp.rigid()) {
		s.nuclear_density = nuclear_density(sp, psi);
		const double rc = scenario_.resolved_r_cut();
		if(rc > sp.shape().grid_min && rc < sp.shape().grid_max)
			s.p_diss = dissociation_probability(sp, s.nuclear_density, rc);
	}
	return s;
}

void Propagation::record() {
	state_.snapshots.push_back(snapshot());
	if(bath_)
		state_.bath_trace.push_back({time(), bath_->feedback(), bath_->energy()});
}

namespace {

int first_step_at_or_after(double t, double dt) {
	return static_cast<int>(std::ceil(t / dt - 1e-9));
}

} // namespace

CalibrationResult calibrate_pump(const Scenario &s, double target, const DriveEnvelope &envelope) {
	if(!(target >= 0.0))
		throw InvalidArgument("target photon number must be >= 0");
	CalibrationResult result;
	result.drive = envelope;
	if(result.drive.carrier == 0.0)
		result.drive.carrier = s.omega0;
	if(target == 0.0) {
		result.drive.amplitude = 0.0;
		return result;
	}
	if(envelope.shape == EnvelopeShape::off || !(envelope.off_time() > 0.0))
		throw InvalidArgument("pump calibration needs an envelope with a positive shut-off time");

	Scenario probe = s;
	PumpedInit init;
	init.drive = result.drive;
	init.target_photons = target;
	init.calibrate = false;
	probe.init = init;
	const int stop = first_step_at_or_after(result.drive.off_time(), s.krylov.dt);
	probe.t_end = std::max(stop, 1) * s.krylov.dt;
	probe.snapshot_every = std::numeric_limits<int>::max() / 2;
	const double w_cal = s.calibration_omega > 0.0 ? s.calibration_omega : s.omega0;

	const std::vector<cplx> start = coupled_ground_state(probe, w_cal).state;
	auto photons = [&](double amp) {
		Propagation p(probe, w_cal, amp);
		p.initialize_from(start);
		p.run_until(stop);
		const double n = photon_number(p.space(), p.psi(), Mode::cavity);
		result.history.push_back({amp, n});
		return n;
	};
	auto close = [&](double n) { return std::abs(n / target - 1.0) <= s.calibration_tolerance; };
	auto fail = [&](const std::string &why) {
		std::ostringstream os;
		os << "pump calibration failed (" << why << "); probes:";
		for(const auto &h : result.history)
			os << " [g_d=" << h.amplitude << " n=" << h.photons << "]";
		throw NumericalError(os.str());
	};
	auto accept = [&](double amp, double n) {
		result.drive.amplitude = amp;
		result.photons = n;
		return result;
	};

	// first guess from the empty-cavity solution.  The photon number grows
	// roughly like g_d^2, so the bracket is found by rescaling with
	// sqrt(target / n) and refined by regula falsi on sqrt(n) (Illinois),
	// falling back to bisection when the secant leaves the bracket.
	DriveEnvelope unit = result.drive;
	unit.amplitude = 1.0;
	const double a1 = std::abs(driven_cavity_amplitude(unit, s.omega0, stop * s.krylov.dt));
	const double guess = a1 > 1e-12 ? std::sqrt(target) / a1 : 1.0;
	const double root = std::sqrt(target);

	struct Point {
		double amp;
		double res;
	};
	int budget = s.calibration_max_probes;
	auto probe_at = [&](double amp, double &n) {
		if(--budget < 0)
			fail("probe budget exhausted");
		n = photons(amp);
		return Point{amp, std::sqrt(std::max(n, 0.0)) - root};
	};

	double n = 0.0;
	Point cur = probe_at(guess, n);
	if(close(n))
		return accept(cur.amp, n);
	Point lo = cur, hi = cur;
	for(;;) {
		const double ratio = n > 0.0 ? std::sqrt(target / n) : 4.0;
		const double factor = cur.res < 0.0 ? std::clamp(1.05 * ratio, 1.1, 4.0) : std::clamp(0.95 * ratio, 0.25, 0.9);
		const Point next = probe_at(cur.amp * factor, n);
		if(close(n))
			return accept(next.amp, n);
		if((next.res < 0.0) != (cur.res < 0.0)) {
			lo = next.res < 0.0 ? next : cur;
			hi = next.res < 0.0 ? cur : next;
			break;
		}
		cur = next;
	}
	int side = 0;
	for(;;) {
		double amp = (lo.amp * hi.res - hi.amp * lo.res) / (hi.res - lo.res);
		if(!(amp > std::min(lo.amp, hi.amp) && amp < std::max(lo.amp, hi.amp)))
			amp = 0.5 * (lo.amp + hi.amp);
		const Point p = probe_at(amp, n);
		if(close(n))
			return accept(p.amp, n);
		if(p.res < 0.0) {
			lo = p;
			if(side == -1)
				hi.res *= 0.5;
			side = -1;
		} else {
			hi = p;
			if(side == 1)
				lo.res *= 0.5;
			side = 1;
		}
	}
}

std::optional<double> resolve_drive_amplitude(const Scenario &s) {
	const auto *p = std::get_if<PumpedInit>(&s.init);
	if(!p)
		return std::nullopt;
	if(!p->calibrate)
		return p->drive.amplitude;
	return calibrate_pump(s, p->target_photons, p->drive).drive.amplitude;
}

} // namespace cavfluor
