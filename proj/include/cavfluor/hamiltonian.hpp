#pragma once

#include "cavfluor/hilbert.hpp"
#include "cavfluor/model.hpp"

#include <array>
#include <span>
#include <vector>

namespace cavfluor {

/// Scalar prefactors of the two field quadratures at a frozen time:
///
///   (b^+ + b)   x [cavity_dipole * M + cavity_scalar * 1]
///   (b'^+ + b') x [fluor_dipole  * M + fluor_scalar  * 1]
///
/// cavity_scalar collects the pump field and the bath force, fluor_scalar
/// the bath force alone.
struct FieldCoefficients {
	double cavity_dipole = 0.0;
	double cavity_scalar = 0.0;
	double fluor_dipole = 0.0;
	double fluor_scalar = 0.0;
};

/// Fused H = H_mol + H_rad + field terms, applied without storing a matrix.
///
/// Each electronic state owns a contiguous block of n_cav * n_flu * n_grid
/// amplitudes.  Every term is a shifted, weighted copy of one block into
/// another, so all inner loops run stride-1 over a whole block.  Terms
/// whose coefficient is exactly zero are skipped.
class Hamiltonian {
public:
	Hamiltonian(const HilbertSpace &space, const ElectronicModel &model, const RadiationParams &radiation,
	            int stencil = 3);

	const HilbertSpace &space() const { return space_; }
	const ElectronicModel &model() const { return model_; }
	const RadiationParams &radiation() const { return radiation_; }
	std::size_t dim() const { return space_.dim(); }

	void apply(const FieldCoefficients &c, std::span<const cplx> in, std::span<cplx> out) const;

	/// <psi| H |psi> with the given coefficients (real part)
	double expectation(const FieldCoefficients &c, std::span<const cplx> psi, std::span<cplx> scratch) const;

private:
	HilbertSpace space_;
	ElectronicModel model_;
	RadiationParams radiation_;
	int stencil_;
	int ne_;
	std::size_t block_;
	// per electronic state: on-site + C/x^4 + kinetic diagonal + photon energies
	std::vector<std::vector<double>> diag_;
	// hopping amplitude at every position of a block
	std::vector<double> hop_;
	// kinetic off-diagonal weights for offsets 1 and 2 (zero when unused)
	double kin1_ = 0.0;
	double kin2_ = 0.0;
	// ladder weights: <k| b |k+1> seen from the lower (down) or upper (up) element
	std::vector<double> cav_down_, cav_up_, flu_down_, flu_up_;
	Eigen::MatrixXd hop_pattern_;
	Eigen::MatrixXd dipole_;
};

} // namespace cavfluor
