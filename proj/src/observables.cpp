#include "cavfluor/observables.hpp"

#include "cavfluor/error.hpp"

#include <cmath>

namespace cavfluor {

namespace {

void require_length(const HilbertSpace &space, std::span<const cplx> psi) {
	if(psi.size() != space.dim())
		throw ShapeMismatch("state length does not match the space");
}

} // namespace

double fluorescence_probability(const HilbertSpace &space, std::span<const cplx> psi) {
	require_length(space, psi);
	const auto &sh = space.shape();
	double vac = 0.0;
	for(int l = 0; l < sh.n_elec; l++)
		for(int n = 0; n < sh.n_cav; n++) {
			const std::size_t base = space.index({l, n, 0, 0});
			for(int j = 0; j < sh.n_grid; j++)
				vac += std::norm(psi[base + static_cast<std::size_t>(j)]);
		}
	const double p = norm_squared(psi) - vac;
	return p < 0.0 ? 0.0 : p;
}

double fluorescence_probability(const StateVector &state) {
	return fluorescence_probability(state.space(), state.amplitudes());
}

double total_parity(const HilbertSpace &space, std::span<const cplx> psi) {
	require_length(space, psi);
	if(space.shape().n_elec != 2)
		throw ShapeMismatch("total parity is defined for the two-level system only");
	double acc = 0.0;
	for(std::size_t flat = 0; flat < psi.size(); flat++) {
		const FlatIndex idx = space.unindex(flat);
		const double sign = ((idx.n + idx.m) % 2 == 0 ? 1.0 : -1.0) * (idx.lambda == 0 ? 1.0 : -1.0);
		acc += sign * std::norm(psi[flat]);
	}
	return acc;
}

double total_parity(const StateVector &state) {
	return total_parity(state.space(), state.amplitudes());
}

std::vector<double> nuclear_density(const HilbertSpace &space, std::span<const cplx> psi) {
	require_length(space, psi);
	if(space.rigid())
		throw InvalidArgument("nuclear density requested for a rigid molecule");
	const int ng = space.shape().n_grid;
	std::vector<double> rho(static_cast<std::size_t>(ng), 0.0);
	double total = 0.0;
	for(std::size_t flat = 0; flat < psi.size(); flat++) {
		const double w = std::norm(psi[flat]);
		rho[flat % static_cast<std::size_t>(ng)] += w;
		total += w;
	}
	if(total > 0.0)
		for(auto &r : rho)
			r /= total;
	return rho;
}

std::vector<double> nuclear_density(const StateVector &state) {
	return nuclear_density(state.space(), state.amplitudes());
}

double dissociation_probability(const HilbertSpace &space, std::span<const double> density, double r_cut) {
	if(space.rigid())
		throw InvalidArgument("dissociation probability requested for a rigid molecule");
	const auto &sh = space.shape();
	if(!(r_cut > sh.grid_min && r_cut < sh.grid_max))
		throw InvalidArgument("r_cut must lie strictly inside the nuclear grid");
	double p = 0.0;
	for(int j = 0; j < sh.n_grid; j++)
		if(space.x(j) > r_cut)
			p += density[static_cast<std::size_t>(j)];
	return p;
}

double dissociation_probability(const StateVector &state, double r_cut) {
	const auto rho = nuclear_density(state);
	return dissociation_probability(state.space(), rho, r_cut);
}

double photon_number(const HilbertSpace &space, std::span<const cplx> psi, Mode mode) {
	require_length(space, psi);
	double acc = 0.0;
	for(std::size_t flat = 0; flat < psi.size(); flat++) {
		const FlatIndex idx = space.unindex(flat);
		const int occ = mode == Mode::cavity ? idx.n : idx.m;
		if(occ > 0)
			acc += occ * std::norm(psi[flat]);
	}
	return acc;
}

double photon_number(const StateVector &state, Mode mode) {
	return photon_number(state.space(), state.amplitudes(), mode);
}

double quadrature(const HilbertSpace &space, std::span<const cplx> psi, Mode mode) {
	require_length(space, psi);
	const auto &sh = space.shape();
	const bool cav = mode == Mode::cavity;
	const std::size_t stride = cav ? space.stride_cav() : space.stride_flu();
	const int size = cav ? sh.n_cav : sh.n_flu;
	// <b + b^+> = 2 Re sum sqrt(k+1) conj(psi_k) psi_{k+1}
	double acc = 0.0;
	for(std::size_t flat = 0; flat < psi.size(); flat++) {
		const FlatIndex idx = space.unindex(flat);
		const int occ = cav ? idx.n : idx.m;
		if(occ + 1 < size)
			acc += std::sqrt(static_cast<double>(occ + 1)) * (std::conj(psi[flat]) * psi[flat + stride]).real();
	}
	return 2.0 * acc;
}

double excited_population(const HilbertSpace &space, std::span<const cplx> psi, const ElectronicModel &model) {
	require_length(space, psi);
	if(space.shape().n_elec != model.dim())
		throw ShapeMismatch("state electronic dimension does not match the model");
	const Eigen::MatrixXd op = excited_number_matrix(model);
	const std::size_t se = space.stride_elec();
	double acc = 0.0;
	for(int l = 0; l < model.dim(); l++)
		for(int mu = 0; mu < model.dim(); mu++) {
			const double c = op(l, mu);
			if(c == 0.0)
				continue;
			const auto a = psi.subspan(static_cast<std::size_t>(l) * se, se);
			const auto b = psi.subspan(static_cast<std::size_t>(mu) * se, se);
			acc += c * inner(a, b).real();
		}
	return acc;
}

double excited_population(const StateVector &state, const ElectronicModel &model) {
	return excited_population(state.space(), state.amplitudes(), model);
}

} // namespace cavfluor
