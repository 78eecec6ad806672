#include "cavfluor/model.hpp"

#include "cavfluor/error.hpp"

#include <algorithm>
#include <cmath>

namespace cavfluor {

double MolecularParams::v_eff(double x) const {
	return V * std::exp(-lambda * x);
}

ElectronicModel ElectronicModel::dimer(const MolecularParams &p) {
	if(!(p.mass > 0.0) || !(p.C > 0.0) || !(p.lambda > 0.0))
		throw InvalidArgument("dimer requires mass > 0, C > 0 and lambda > 0");
	return ElectronicModel(p);
}

ElectronicModel ElectronicModel::tls(double gap) {
	if(!(gap > 0.0))
		throw InvalidArgument("two-level gap must be > 0");
	return ElectronicModel(TwoLevelParams{gap});
}

const MolecularParams &ElectronicModel::molecule() const {
	if(!is_dimer())
		throw InvalidArgument("molecular parameters requested from a two-level model");
	return std::get<MolecularParams>(params_);
}

double ElectronicModel::gap() const {
	if(is_dimer())
		throw InvalidArgument("gap requested from a dimer model");
	return std::get<TwoLevelParams>(params_).gap;
}

double CouplingParams::g_fluor(double t) const {
	return gamma > 0.0 ? g_f * std::exp(-gamma * t) : g_f;
}

double DriveEnvelope::envelope(double t) const {
	switch(shape) {
	case EnvelopeShape::off:
		return 0.0;
	case EnvelopeShape::trapezoid:
		if(t < 0.0 || t >= t2)
			return 0.0;
		if(t < t1)
			return amplitude * t / t1;
		return amplitude;
	case EnvelopeShape::sudden:
		return (t >= 0.0 && t < ts) ? amplitude : 0.0;
	}
	return 0.0;
}

double DriveEnvelope::field(double t) const {
	double e = envelope(t);
	return e == 0.0 ? 0.0 : e * std::cos(carrier * t);
}

double DriveEnvelope::off_time() const {
	switch(shape) {
	case EnvelopeShape::trapezoid:
		return t2;
	case EnvelopeShape::sudden:
		return ts;
	default:
		return 0.0;
	}
}

std::vector<double> DriveEnvelope::breakpoints() const {
	switch(shape) {
	case EnvelopeShape::trapezoid:
		return t1 > 0.0 ? std::vector<double>{t1, t2} : std::vector<double>{t2};
	case EnvelopeShape::sudden:
		return {ts};
	default:
		return {};
	}
}

DriveEnvelope DriveEnvelope::trapezoid(double amplitude, double t1, double t2, double carrier) {
	if(amplitude < 0.0 || t1 < 0.0 || t2 < t1)
		throw InvalidArgument("trapezoid envelope needs amplitude >= 0 and 0 <= t1 <= t2");
	DriveEnvelope e;
	e.shape = EnvelopeShape::trapezoid;
	e.amplitude = amplitude;
	e.t1 = t1;
	e.t2 = t2;
	e.carrier = carrier;
	return e;
}

DriveEnvelope DriveEnvelope::sudden(double amplitude, double ts, double carrier) {
	if(amplitude < 0.0 || ts < 0.0)
		throw InvalidArgument("sudden envelope needs amplitude >= 0 and ts >= 0");
	DriveEnvelope e;
	e.shape = EnvelopeShape::sudden;
	e.amplitude = amplitude;
	e.ts = ts;
	e.carrier = carrier;
	return e;
}

Eigen::MatrixXd hopping_matrix() {
	// sum_sigma (c1s^+ c2s + c2s^+ c1s); both spin channels give +1 in this ordering
	Eigen::MatrixXd k = Eigen::MatrixXd::Zero(4, 4);
	k(0, 1) = k(1, 0) = 1.0;
	k(0, 2) = k(2, 0) = 1.0;
	k(1, 3) = k(3, 1) = 1.0;
	k(2, 3) = k(3, 2) = 1.0;
	return k;
}

Eigen::MatrixXd double_occupancy_matrix() {
	Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
	d(0, 0) = 1.0;
	d(3, 3) = 1.0;
	return d;
}

Eigen::MatrixXd dipole_matrix(const ElectronicModel &model) {
	if(model.is_dimer()) {
		// sum_sigma (c_b^+ c_a + c_a^+ c_b) = sum_sigma (n_1s - n_2s)
		Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
		d(0, 0) = 2.0;
		d(3, 3) = -2.0;
		return d;
	}
	Eigen::MatrixXd d(2, 2);
	d << 0.0, 1.0, 1.0, 0.0;
	return d;
}

Eigen::MatrixXd spin_squared_matrix() {
	// S^2 = 2 |T><T| with the S_z = 0 triplet (|1u2d> - |2u1d>)/sqrt2
	Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
	s(1, 1) = s(2, 2) = 1.0;
	s(1, 2) = s(2, 1) = -1.0;
	return s;
}

Eigen::MatrixXd electronic_hamiltonian(const ElectronicModel &model, double x) {
	if(model.is_dimer()) {
		const auto &p = model.molecule();
		return p.U * double_occupancy_matrix() + p.hopping(x) * hopping_matrix();
	}
	Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
	h(1, 1) = model.gap();
	return h;
}

Eigen::MatrixXd excited_number_matrix(const ElectronicModel &model) {
	if(model.is_dimer()) {
		// Occupation of the higher single-particle orbital.  With hopping
		// coefficient h the orbital (c1 + c2)/sqrt2 sits at +h, so the upper
		// orbital is the symmetric one when h > 0:  N_upper = 1 + sign(h) K/2.
		const double h = model.molecule().hopping(1.0);
		const double s = h >= 0.0 ? 1.0 : -1.0;
		return Eigen::MatrixXd::Identity(4, 4) + 0.5 * s * hopping_matrix();
	}
	Eigen::MatrixXd n = Eigen::MatrixXd::Zero(2, 2);
	n(1, 1) = 1.0;
	return n;
}

namespace {

void require_elec(const StateVector &s, const ElectronicModel &model) {
	if(s.space().shape().n_elec != model.dim())
		throw ShapeMismatch("state electronic dimension does not match the model");
}

// out[lambda, ...] = sum_mu mat(lambda, mu) in[mu, ...] with the same (n, m, j)
void apply_electronic(const Eigen::MatrixXd &mat, const StateVector &in, StateVector &out) {
	const auto &sp = in.space();
	const std::size_t se = sp.stride_elec();
	const int ne = sp.shape().n_elec;
	for(int l = 0; l < ne; l++)
		for(int mu = 0; mu < ne; mu++) {
			const double c = mat(l, mu);
			if(c == 0.0)
				continue;
			for(std::size_t r = 0; r < se; r++)
				out[l * se + r] += c * in[mu * se + r];
		}
}

// out += coef * (a^+ + a) on the axis with the given size and stride
void apply_quadrature(const StateVector &in, StateVector &out, cplx coef, Axis axis) {
	const auto &sp = in.space();
	const bool cav = axis == kCavity;
	const int size = cav ? sp.shape().n_cav : sp.shape().n_flu;
	const std::size_t stride = cav ? sp.stride_cav() : sp.stride_flu();
	for(std::size_t flat = 0; flat < in.size(); flat++) {
		const FlatIndex idx = sp.unindex(flat);
		const int occ = cav ? idx.n : idx.m;
		if(occ > 0)
			out[flat - stride] += coef * std::sqrt(static_cast<double>(occ)) * in[flat];
		if(occ + 1 < size)
			out[flat + stride] += coef * std::sqrt(static_cast<double>(occ + 1)) * in[flat];
	}
}

} // namespace

StateVector apply_h_mol(const StateVector &state, const ElectronicModel &model, int stencil) {
	require_elec(state, model);
	const auto &sp = state.space();
	StateVector out(sp);
	if(model.is_tls()) {
		apply_electronic(electronic_hamiltonian(model, 0.0), state, out);
		return out;
	}
	const auto &p = model.molecule();
	const int ng = sp.shape().n_grid;
	const Eigen::MatrixXd k = hopping_matrix();
	const Eigen::MatrixXd d = double_occupancy_matrix();

	for(std::size_t flat = 0; flat < state.size(); flat++) {
		const FlatIndex idx = sp.unindex(flat);
		const double x = sp.x(idx.j);
		cplx acc = p.U * d(idx.lambda, idx.lambda) * state[flat];
		for(int mu = 0; mu < 4; mu++)
			if(k(idx.lambda, mu) != 0.0) {
				FlatIndex src = idx;
				src.lambda = mu;
				acc += p.hopping(x) * k(idx.lambda, mu) * state.at(src);
			}
		if(ng > 1) {
			acc += p.C / std::pow(x, 4) * state[flat];
			const double dx = sp.grid_spacing();
			auto neighbour = [&](int off) -> cplx {
				const int jj = idx.j + off;
				return (jj < 0 || jj >= ng) ? cplx{} : state[flat + off];
			};
			if(stencil == 5) {
				const double kin = 1.0 / (12.0 * p.mass * dx * dx);
				acc += kin * (30.0 * state[flat] - 16.0 * (neighbour(-1) + neighbour(1)) +
				              (neighbour(-2) + neighbour(2)));
			} else {
				const double kin = 1.0 / (p.mass * dx * dx);
				acc += kin * (2.0 * state[flat] - neighbour(-1) - neighbour(1));
			}
		}
		out[flat] = acc;
	}
	return out;
}

StateVector apply_h_rad(const StateVector &state, const RadiationParams &params) {
	const auto &sp = state.space();
	StateVector out(sp);
	for(std::size_t flat = 0; flat < state.size(); flat++) {
		const FlatIndex idx = sp.unindex(flat);
		out[flat] = (params.omega0 * idx.n + params.omega_f * idx.m) * state[flat];
	}
	return out;
}

StateVector apply_dipole(const StateVector &state, const ElectronicModel &model) {
	require_elec(state, model);
	StateVector out(state.space());
	apply_electronic(dipole_matrix(model), state, out);
	return out;
}

StateVector apply_h_int(const StateVector &state, double t, const CouplingParams &couplings,
                        const ElectronicModel &model) {
	const StateVector md = apply_dipole(state, model);
	const auto &sp = state.space();
	StateVector out(sp);
	if(couplings.g_c != 0.0)
		apply_quadrature(md, out, couplings.g_c, kCavity);
	const double gf = couplings.g_fluor(t);
	if(gf != 0.0)
		apply_quadrature(md, out, gf, kFluorescence);
	return out;
}

StateVector apply_drive(const StateVector &state, double t, const DriveEnvelope &envelope) {
	const auto &sp = state.space();
	StateVector out(sp);
	const double f = envelope.field(t);
	if(f != 0.0)
		apply_quadrature(state, out, f, kCavity);
	return out;
}

StateVector apply_bath_coupling(const StateVector &state, double f) {
	const auto &sp = state.space();
	StateVector out(sp);
	if(f != 0.0) {
		apply_quadrature(state, out, -f, kCavity);
		apply_quadrature(state, out, -f, kFluorescence);
	}
	return out;
}

StateVector spin_squared(const StateVector &state) {
	if(state.space().shape().n_elec != 4)
		throw ShapeMismatch("S^2 is defined on the four-state dimer sector");
	StateVector out(state.space());
	apply_electronic(spin_squared_matrix(), state, out);
	return out;
}

double resonance_frequency(double U, double v_eff) {
	if(v_eff == 0.0)
		throw InvalidArgument("resonance frequency needs a nonzero effective hopping");
	return 0.5 * U + std::sqrt(4.0 * v_eff * v_eff + 0.25 * U * U);
}

std::array<ElectronicLevel, 4> electronic_eigs_analytic(double t_hop, double U) {
	const double root = std::sqrt(4.0 * t_hop * t_hop + 0.25 * U * U);
	return {{
	    {0.5 * U - root, Parity::even, 0},
	    {0.0, Parity::odd, 1},
	    {U, Parity::odd, 0},
	    {0.5 * U + root, Parity::even, 0},
	}};
}

std::vector<double> bo_surface(std::span<const double> xs, const MolecularParams &params) {
	const auto model = ElectronicModel::dimer(params);
	std::vector<double> e;
	e.reserve(xs.size());
	for(double x : xs) {
		if(!(x > 0.0))
			throw InvalidArgument("BO surface requires x > 0");
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(electronic_hamiltonian(model, x),
		                                                  Eigen::EigenvaluesOnly);
		e.push_back(params.C / std::pow(x, 4) + es.eigenvalues().minCoeff());
	}
	return e;
}

} // namespace cavfluor
