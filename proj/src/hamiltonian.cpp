#include "cavfluor/hamiltonian.hpp"

#include "cavfluor/error.hpp"

#include <cmath>

namespace cavfluor {

namespace {

// dst[k] += a * w[k] * src[k + shift] for all k where both ends are in range
void add_shifted(cplx *dst, const cplx *src, const double *w, double a, std::size_t n, std::ptrdiff_t shift) {
	if(shift >= 0) {
		const auto s = static_cast<std::size_t>(shift);
		for(std::size_t k = 0; k + s < n; k++)
			dst[k] += (a * w[k]) * src[k + s];
	} else {
		const auto s = static_cast<std::size_t>(-shift);
		for(std::size_t k = s; k < n; k++)
			dst[k] += (a * w[k]) * src[k - s];
	}
}

} // namespace

Hamiltonian::Hamiltonian(const HilbertSpace &space, const ElectronicModel &model,
                         const RadiationParams &radiation, int stencil)
    : space_(space), model_(model), radiation_(radiation), stencil_(stencil), ne_(model.dim()) {
	const auto &sh = space.shape();
	if(sh.n_elec != ne_)
		throw ShapeMismatch("space electronic dimension does not match the model");
	if(stencil != 3 && stencil != 5)
		throw InvalidArgument("kinetic stencil must be 3 or 5");
	const int ng = sh.n_grid;
	block_ = space.stride_elec();
	dipole_ = dipole_matrix(model);

	std::vector<double> site(static_cast<std::size_t>(ng), 0.0);
	std::vector<double> hop_grid(static_cast<std::size_t>(ng), 0.0);
	std::vector<double> onsite(static_cast<std::size_t>(ne_), 0.0);
	if(model.is_dimer()) {
		const auto &p = model.molecule();
		hop_pattern_ = hopping_matrix();
		const Eigen::MatrixXd docc = double_occupancy_matrix();
		double kin_diag = 0.0;
		if(ng > 1) {
			const double dx = space.grid_spacing();
			if(stencil == 5) {
				const double w = 1.0 / (12.0 * p.mass * dx * dx);
				kin_diag = 30.0 * w;
				kin1_ = -16.0 * w;
				kin2_ = w;
			} else {
				const double w = 1.0 / (p.mass * dx * dx);
				kin_diag = 2.0 * w;
				kin1_ = -w;
			}
		}
		for(int j = 0; j < ng; j++) {
			const double x = space.x(j);
			hop_grid[static_cast<std::size_t>(j)] = p.hopping(x);
			site[static_cast<std::size_t>(j)] = ng > 1 ? p.C / (x * x * x * x) + kin_diag : 0.0;
		}
		for(int l = 0; l < ne_; l++)
			onsite[static_cast<std::size_t>(l)] = p.U * docc(l, l);
	} else {
		hop_pattern_ = Eigen::MatrixXd::Zero(2, 2);
		onsite[1] = model.gap();
	}

	diag_.assign(static_cast<std::size_t>(ne_), std::vector<double>(block_));
	hop_.resize(block_);
	cav_down_.assign(block_, 0.0);
	cav_up_.assign(block_, 0.0);
	flu_down_.assign(block_, 0.0);
	flu_up_.assign(block_, 0.0);
	for(std::size_t k = 0; k < block_; k++) {
		const FlatIndex idx = space.unindex(k);
		const auto j = static_cast<std::size_t>(idx.j);
		const double rad = radiation.omega0 * idx.n + radiation.omega_f * idx.m;
		for(int l = 0; l < ne_; l++)
			diag_[static_cast<std::size_t>(l)][k] = onsite[static_cast<std::size_t>(l)] + site[j] + rad;
		hop_[k] = hop_grid[j];
		cav_down_[k] = std::sqrt(static_cast<double>(idx.n));
		cav_up_[k] = idx.n + 1 < sh.n_cav ? std::sqrt(static_cast<double>(idx.n + 1)) : 0.0;
		flu_down_[k] = std::sqrt(static_cast<double>(idx.m));
		flu_up_[k] = idx.m + 1 < sh.n_flu ? std::sqrt(static_cast<double>(idx.m + 1)) : 0.0;
	}
}

void Hamiltonian::apply(const FieldCoefficients &c, std::span<const cplx> in, std::span<cplx> out) const {
	const auto &sh = space_.shape();
	if(in.size() != space_.dim() || out.size() != space_.dim())
		throw ShapeMismatch("Hamiltonian applied to a vector of the wrong length");

	const int ng = sh.n_grid;
	const std::size_t nb = block_;
	const auto sc = static_cast<std::ptrdiff_t>(space_.stride_cav());
	const auto sf = static_cast<std::ptrdiff_t>(space_.stride_flu());

	for(int l = 0; l < ne_; l++) {
		const cplx *src = in.data() + l * nb;
		cplx *dst = out.data() + l * nb;
		const double *dg = diag_[static_cast<std::size_t>(l)].data();
		for(std::size_t k = 0; k < nb; k++)
			dst[k] = dg[k] * src[k];

		if(ng > 1) {
			const std::size_t rows = nb / static_cast<std::size_t>(ng);
			for(std::size_t r = 0; r < rows; r++) {
				const cplx *s = src + r * ng;
				cplx *d = dst + r * ng;
				for(int j = 1; j < ng; j++)
					d[j] += kin1_ * s[j - 1];
				for(int j = 0; j + 1 < ng; j++)
					d[j] += kin1_ * s[j + 1];
				if(kin2_ != 0.0) {
					for(int j = 2; j < ng; j++)
						d[j] += kin2_ * s[j - 2];
					for(int j = 0; j + 2 < ng; j++)
						d[j] += kin2_ * s[j + 2];
				}
			}
		}

		for(int mu = 0; mu < ne_; mu++) {
			const cplx *o = in.data() + mu * nb;
			const double pat = hop_pattern_(l, mu);
			if(pat != 0.0)
				for(std::size_t k = 0; k < nb; k++)
					dst[k] += (pat * hop_[k]) * o[k];

			const double delta = l == mu ? 1.0 : 0.0;
			const double acav = c.cavity_dipole * dipole_(l, mu) + c.cavity_scalar * delta;
			if(acav != 0.0) {
				add_shifted(dst, o, cav_down_.data(), acav, nb, -sc);
				add_shifted(dst, o, cav_up_.data(), acav, nb, sc);
			}
			const double aflu = c.fluor_dipole * dipole_(l, mu) + c.fluor_scalar * delta;
			if(aflu != 0.0) {
				add_shifted(dst, o, flu_down_.data(), aflu, nb, -sf);
				add_shifted(dst, o, flu_up_.data(), aflu, nb, sf);
			}
		}
	}
}

double Hamiltonian::expectation(const FieldCoefficients &c, std::span<const cplx> psi,
                                std::span<cplx> scratch) const {
	apply(c, psi, scratch);
	return inner(psi, scratch).real();
}

} // namespace cavfluor
