#include "cavfluor/hilbert.hpp"

#include "cavfluor/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cavfluor {

HilbertSpace::HilbertSpace(const SpaceShape &shape) : shape_(shape) {
	if(shape.n_elec < 1 || shape.n_cav < 1 || shape.n_flu < 1 || shape.n_grid < 1)
		throw InvalidArgument("space dimensions must be >= 1 (got " + std::to_string(shape.n_elec) + "," +
		                      std::to_string(shape.n_cav) + "," + std::to_string(shape.n_flu) + "," +
		                      std::to_string(shape.n_grid) + ")");
	if(shape.n_grid > 1) {
		if(!(shape.grid_min > 0.0))
			throw InvalidArgument("grid_min must be > 0 when the nuclear grid is active");
		if(!(shape.grid_max > shape.grid_min))
			throw InvalidArgument("grid_max must exceed grid_min");
	} else if(!(shape.r_fixed > 0.0)) {
		throw InvalidArgument("r_fixed must be > 0");
	}

	stride_cav_ = static_cast<std::size_t>(shape.n_flu) * shape.n_grid;
	stride_elec_ = stride_cav_ * shape.n_cav;
	dim_ = stride_elec_ * shape.n_elec;

	grid_.resize(static_cast<std::size_t>(shape.n_grid));
	if(shape.n_grid == 1) {
		grid_[0] = shape.r_fixed;
	} else {
		dx_ = (shape.grid_max - shape.grid_min) / (shape.n_grid - 1);
		for(int j = 0; j < shape.n_grid; j++)
			grid_[static_cast<std::size_t>(j)] = shape.grid_min + j * dx_;
	}
}

FlatIndex HilbertSpace::unindex(std::size_t flat) const {
	FlatIndex idx;
	idx.j = static_cast<int>(flat % shape_.n_grid);
	flat /= shape_.n_grid;
	idx.m = static_cast<int>(flat % shape_.n_flu);
	flat /= shape_.n_flu;
	idx.n = static_cast<int>(flat % shape_.n_cav);
	idx.lambda = static_cast<int>(flat / shape_.n_cav);
	return idx;
}

HilbertSpace build_space(const SpaceShape &shape) {
	return HilbertSpace(shape);
}

StateVector::StateVector(HilbertSpace space) : space_(std::move(space)), amp_(space_.dim()) {}

StateVector::StateVector(HilbertSpace space, std::vector<cplx> amplitudes)
    : space_(std::move(space)), amp_(std::move(amplitudes)) {
	if(amp_.size() != space_.dim())
		throw ShapeMismatch("amplitude vector length " + std::to_string(amp_.size()) +
		                    " does not match space dimension " + std::to_string(space_.dim()));
}

StateVector StateVector::basis(const HilbertSpace &space, const FlatIndex &idx) {
	StateVector s(space);
	s.at(idx) = 1.0;
	return s;
}

double StateVector::norm_squared() const {
	return cavfluor::norm_squared(amp_);
}

double StateVector::norm() const {
	return std::sqrt(norm_squared());
}

void StateVector::normalize() {
	double nrm = norm();
	if(nrm == 0.0)
		throw NumericalError("cannot normalize a zero state");
	for(auto &a : amp_)
		a /= nrm;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
	if(a.size() != b.size())
		throw ShapeMismatch("inner product of vectors with different lengths");
	double re = 0.0, im = 0.0;
	for(std::size_t i = 0; i < a.size(); i++) {
		// conj(a) * b
		re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
		im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
	}
	return {re, im};
}

double norm_squared(std::span<const cplx> a) {
	double s = 0.0;
	for(const auto &v : a)
		s += v.real() * v.real() + v.imag() * v.imag();
	return s;
}

cplx inner(const StateVector &a, const StateVector &b) {
	if(!(a.space() == b.space()))
		throw ShapeMismatch("inner product of states on different spaces");
	return inner(a.amplitudes(), b.amplitudes());
}

double Marginal::sum() const {
	return std::accumulate(p.begin(), p.end(), 0.0);
}

Marginal marginal_probability(const StateVector &state, unsigned keep) {
	const auto &sh = state.space().shape();
	const int full[4] = {sh.n_elec, sh.n_cav, sh.n_flu, sh.n_grid};
	const unsigned bits[4] = {kElectronic, kCavity, kFluorescence, kGrid};

	Marginal out;
	for(int a = 0; a < 4; a++)
		if(keep & bits[a])
			out.dims.push_back(full[a]);
	std::size_t total = 1;
	for(int d : out.dims)
		total *= static_cast<std::size_t>(d);
	out.p.assign(total, 0.0);

	const auto amp = state.amplitudes();
	for(std::size_t flat = 0; flat < amp.size(); flat++) {
		const FlatIndex idx = state.space().unindex(flat);
		const int coords[4] = {idx.lambda, idx.n, idx.m, idx.j};
		std::size_t target = 0;
		for(int a = 0; a < 4; a++)
			if(keep & bits[a])
				target = target * static_cast<std::size_t>(full[a]) + static_cast<std::size_t>(coords[a]);
		out.p[target] += std::norm(amp[flat]);
	}
	return out;
}

} // namespace cavfluor
