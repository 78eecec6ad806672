#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cavfluor {

using cplx = std::complex<double>;

/// Dimensions of the electron x cavity x fluorescence x nuclear-grid product space.
/// `n_cav` and `n_flu` count Fock states (occupations 0 .. n-1).
struct SpaceShape {
	int n_elec = 4;
	int n_cav = 1;
	int n_flu = 1;
	int n_grid = 1;
	double grid_min = 0.3;
	double grid_max = 12.0;
	/// nuclear coordinate used when n_grid == 1
	double r_fixed = 1.156;

	bool operator==(const SpaceShape &) const = default;
};

struct FlatIndex {
	int lambda = 0;
	int n = 0;
	int m = 0;
	int j = 0;

	bool operator==(const FlatIndex &) const = default;
};

enum Axis : unsigned {
	kElectronic = 1u << 0,
	kCavity = 1u << 1,
	kFluorescence = 1u << 2,
	kGrid = 1u << 3,
	kAllAxes = kElectronic | kCavity | kFluorescence | kGrid,
};

/// Index arithmetic and grid coordinates for a SpaceShape.
///
/// Axis order is (electronic, cavity, fluorescence, grid) with the grid
/// fastest-varying:  flat = ((lambda*n_cav + n)*n_flu + m)*n_grid + j.
/// The nuclear grid is uniform and includes both end points; the wave
/// function vanishes outside [grid_min, grid_max].
class HilbertSpace {
public:
	explicit HilbertSpace(const SpaceShape &shape);

	const SpaceShape &shape() const { return shape_; }
	std::size_t dim() const { return dim_; }

	std::size_t index(const FlatIndex &idx) const {
		return ((static_cast<std::size_t>(idx.lambda) * shape_.n_cav + idx.n) * shape_.n_flu + idx.m) *
		           shape_.n_grid +
		       idx.j;
	}
	FlatIndex unindex(std::size_t flat) const;

	// strides of each axis in the flat vector
	std::size_t stride_elec() const { return stride_elec_; }
	std::size_t stride_cav() const { return stride_cav_; }
	std::size_t stride_flu() const { return static_cast<std::size_t>(shape_.n_grid); }

	bool rigid() const { return shape_.n_grid == 1; }
	double grid_spacing() const { return dx_; }
	double x(int j) const { return grid_[static_cast<std::size_t>(j)]; }
	std::span<const double> grid() const { return grid_; }

	bool operator==(const HilbertSpace &o) const { return shape_ == o.shape_; }

private:
	SpaceShape shape_;
	std::size_t dim_;
	std::size_t stride_elec_;
	std::size_t stride_cav_;
	double dx_ = 0.0;
	std::vector<double> grid_;
};

HilbertSpace build_space(const SpaceShape &shape);

/// Amplitudes of a state on a HilbertSpace.
class StateVector {
public:
	explicit StateVector(HilbertSpace space);
	StateVector(HilbertSpace space, std::vector<cplx> amplitudes);

	static StateVector basis(const HilbertSpace &space, const FlatIndex &idx);

	const HilbertSpace &space() const { return space_; }
	std::size_t size() const { return amp_.size(); }

	std::span<cplx> amplitudes() { return amp_; }
	std::span<const cplx> amplitudes() const { return amp_; }
	cplx &operator[](std::size_t i) { return amp_[i]; }
	const cplx &operator[](std::size_t i) const { return amp_[i]; }
	cplx &at(const FlatIndex &idx) { return amp_[space_.index(idx)]; }
	const cplx &at(const FlatIndex &idx) const { return amp_[space_.index(idx)]; }

	double norm_squared() const;
	double norm() const;
	void normalize();

private:
	HilbertSpace space_;
	std::vector<cplx> amp_;
};

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
cplx inner(const StateVector &a, const StateVector &b);

/// Probability distribution over the kept axes; dims are listed in axis
/// order and the flattened layout follows the same order.
struct Marginal {
	std::vector<int> dims;
	std::vector<double> p;

	double sum() const;
};

Marginal marginal_probability(const StateVector &state, unsigned keep);

} // namespace cavfluor
