#pragma once

#include "cavfluor/hilbert.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cavfluor {

/// y = H x for a Hermitian H; x and y never alias.
using LinearOperator = std::function<void(std::span<const cplx>, std::span<cplx>)>;
/// y = H(t) x
using TimeDependentOperator = std::function<void(double, std::span<const cplx>, std::span<cplx>)>;

struct KrylovConfig {
	double dt = 0.02;
	/// largest Krylov dimension per step; fewer vectors are used once the
	/// truncation estimate drops below tol
	int krylov_dim = 12;
	/// allowed truncation error per step (vector 2-norm)
	double tol = 1e-10;
	/// freeze H at t + dt/2 rather than at t
	bool midpoint = true;
	/// a step whose estimate stays above tol at full dimension is halved at
	/// most this many times before giving up
	int max_halvings = 12;

	void validate() const;
	bool operator==(const KrylovConfig &) const = default;
};

struct StepReport {
	int substeps = 0;
	int matvecs = 0;
	double error_estimate = 0.0;
	bool breakdown = false;
};

/// Short-iterative Lanczos propagator with reusable workspace.
class KrylovPropagator {
public:
	KrylovPropagator(std::size_t dim, const KrylovConfig &config);

	const KrylovConfig &config() const { return config_; }

	/// state <- exp(-i H dt) state with H frozen.  Throws NumericalError
	/// when the truncation estimate cannot be brought below tol.
	StepReport step(std::span<cplx> state, const LinearOperator &h, double dt);

private:
	// one Lanczos pass; returns false if the estimate exceeds the allowance
	bool try_step(std::span<cplx> state, const LinearOperator &h, double dt, double allowance,
	              StepReport &report);

	KrylovConfig config_;
	std::size_t dim_;
	// Krylov vectors as columns
	Eigen::MatrixXcd basis_;
	Eigen::VectorXcd w_;
};

/// One step of exp(-i H(t*) dt) with t* = t + dt/2 (midpoint) or t.
StepReport krylov_step(std::span<cplx> state, const TimeDependentOperator &h, double t,
                       const KrylovConfig &config);

struct LanczosOptions {
	/// Krylov vectors kept per restart cycle
	int max_basis = 60;
	int max_cycles = 400;
	/// target for ||H psi - E psi||
	double tol = 1e-8;

	bool operator==(const LanczosOptions &) const = default;
};

/// Start vector for the ground-state search: an explicit vector or a
/// seeded random vector.
struct SeedPolicy {
	std::optional<std::vector<cplx>> start;
	std::uint64_t rng_seed = 1;
};

struct GroundStateResult {
	double energy = 0.0;
	std::vector<cplx> state;
	double residual = 0.0;
	int matvecs = 0;
};

/// Lowest eigenpair of a Hermitian operator by explicitly restarted
/// Lanczos with full reorthogonalisation inside each cycle.  Throws
/// NumericalError (message carries the best residual) on non-convergence.
GroundStateResult ground_state(const LinearOperator &h, std::size_t dim, const SeedPolicy &seed,
                               const LanczosOptions &options = {});

/// Largest dimension accepted by the dense reference.
inline constexpr std::size_t kDenseLimit = 4096;

/// exp(-i H dt) state from a dense eigendecomposition of a Hermitian H.
std::vector<cplx> dense_expm_reference(const Eigen::MatrixXcd &h, std::span<const cplx> state, double dt);

/// Materialise an operator column by column (for oracles on small spaces).
Eigen::MatrixXcd dense_matrix(const LinearOperator &h, std::size_t dim);

} // namespace cavfluor
