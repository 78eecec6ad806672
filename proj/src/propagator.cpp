#include "cavfluor/propagator.hpp"

#include "cavfluor/error.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cavfluor {

namespace {

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
	for(std::size_t i = 0; i < x.size(); i++)
		y[i] += a * x[i];
}

void scale(double a, std::span<cplx> x) {
	for(auto &v : x)
		v *= a;
}

// exp(-i T dt) e1 and dt * phi1(-i T dt) e1 for a real symmetric tridiagonal T.
struct SmallExp {
	Eigen::VectorXcd expv;
	Eigen::VectorXcd phiv;
};

SmallExp tridiagonal_exp(const std::vector<double> &alpha, const std::vector<double> &beta, int k, double dt) {
	Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
	for(int i = 0; i < k; i++) {
		t(i, i) = alpha[static_cast<std::size_t>(i)];
		if(i + 1 < k)
			t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
	}
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
	const Eigen::MatrixXd &q = es.eigenvectors();
	const Eigen::VectorXd &ev = es.eigenvalues();
	Eigen::VectorXcd e(k), p(k);
	for(int i = 0; i < k; i++) {
		const cplx z(0.0, -ev(i) * dt);
		e(i) = std::exp(z) * q(0, i);
		// dt * (e^z - 1)/z
		cplx phi = std::abs(z) < 1e-5 ? dt * (1.0 + z / 2.0 + z * z / 6.0) : dt * (std::exp(z) - 1.0) / z;
		p(i) = phi * q(0, i);
	}
	return {q * e, q * p};
}

} // namespace

void KrylovConfig::validate() const {
	if(!(dt > 0.0))
		throw InvalidArgument("Krylov dt must be > 0");
	if(krylov_dim < 2 || krylov_dim > 40)
		throw InvalidArgument("Krylov dimension must lie in [2, 40]");
	if(!(tol > 0.0))
		throw InvalidArgument("Krylov tolerance must be > 0");
}

KrylovPropagator::KrylovPropagator(std::size_t dim, const KrylovConfig &config)
    : config_(config), dim_(dim) {
	config_.validate();
	const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(static_cast<std::size_t>(config_.krylov_dim), dim));
	basis_.resize(static_cast<Eigen::Index>(dim), std::max<Eigen::Index>(m, 1));
	w_.resize(static_cast<Eigen::Index>(dim));
}

StepReport KrylovPropagator::step(std::span<cplx> state, const LinearOperator &h, double dt) {
	if(state.size() != dim_)
		throw ShapeMismatch("state length does not match the propagator dimension");
	StepReport report;
	if(dt == 0.0)
		return report;

	// Substeps are tried largest-first; each gets a share of the tolerance
	// proportional to its length.
	double remaining = dt;
	double sub = dt;
	int halvings = 0;
	while(std::abs(remaining) > 0.0) {
		if(std::abs(sub) > std::abs(remaining))
			sub = remaining;
		const double allowance = config_.tol * std::abs(sub / dt);
		if(try_step(state, h, sub, allowance, report)) {
			remaining -= sub;
			report.substeps++;
			if(std::abs(remaining) < 1e-15 * std::abs(dt))
				break;
		} else {
			if(++halvings > config_.max_halvings) {
				std::ostringstream msg;
				msg << "Krylov step did not converge: estimate " << report.error_estimate << " > tol "
				    << allowance << " after " << config_.max_halvings << " halvings";
				throw NumericalError(msg.str());
			}
			sub /= 2.0;
		}
	}
	return report;
}

bool KrylovPropagator::try_step(std::span<cplx> state, const LinearOperator &h, double dt, double allowance,
                                StepReport &report) {
	const double nrm = std::sqrt(norm_squared(state));
	if(nrm == 0.0)
		return true;
	const int mmax = static_cast<int>(basis_.cols());
	const auto n = static_cast<Eigen::Index>(dim_);

	std::vector<double> alpha, beta;
	alpha.reserve(static_cast<std::size_t>(mmax));
	beta.reserve(static_cast<std::size_t>(mmax));

	basis_.col(0) = Eigen::Map<const Eigen::VectorXcd>(state.data(), n) / nrm;

	SmallExp small;
	int used = 0;
	bool done = false;
	for(int j = 0; j < mmax; j++) {
		h(std::span<const cplx>(basis_.col(j).data(), dim_), std::span<cplx>(w_.data(), dim_));
		report.matvecs++;
		const double a = basis_.col(j).dot(w_).real();
		alpha.push_back(a);
		if(j > 0)
			w_ -= a * basis_.col(j) + beta[static_cast<std::size_t>(j - 1)] * basis_.col(j - 1);
		else
			w_ -= a * basis_.col(j);
		const double b = w_.norm();
		used = j + 1;

		const double scale_t = std::abs(a) + (j > 0 ? beta[static_cast<std::size_t>(j - 1)] : 0.0) + 1.0;
		if(b <= 1e-13 * scale_t) {
			// invariant subspace: the small exponential is exact
			small = tridiagonal_exp(alpha, beta, used, dt);
			report.breakdown = true;
			report.error_estimate = 0.0;
			done = true;
			break;
		}
		beta.push_back(b);
		if(used >= 2 || used == mmax) {
			small = tridiagonal_exp(alpha, beta, used, dt);
			const double est = nrm * b * std::abs(small.phiv(used - 1));
			report.error_estimate = est;
			if(est <= allowance) {
				done = true;
				break;
			}
		}
		if(j + 1 < mmax)
			basis_.col(j + 1) = w_ / b;
	}
	if(!done)
		return false;

	Eigen::Map<Eigen::VectorXcd> out(state.data(), n);
	out.noalias() = basis_.leftCols(used) * (nrm * small.expv);
	return true;
}

StepReport krylov_step(std::span<cplx> state, const TimeDependentOperator &h, double t,
                       const KrylovConfig &config) {
	const double tstar = config.midpoint ? t + 0.5 * config.dt : t;
	KrylovPropagator prop(state.size(), config);
	LinearOperator frozen = [&](std::span<const cplx> in, std::span<cplx> out) { h(tstar, in, out); };
	return prop.step(state, frozen, config.dt);
}

GroundStateResult ground_state(const LinearOperator &h, std::size_t dim, const SeedPolicy &seed,
                               const LanczosOptions &options) {
	if(dim == 0)
		throw InvalidArgument("ground state of an empty space");
	std::vector<cplx> v(dim);
	if(seed.start) {
		if(seed.start->size() != dim)
			throw ShapeMismatch("ground-state seed has the wrong length");
		v = *seed.start;
	} else {
		std::mt19937_64 rng(seed.rng_seed);
		std::normal_distribution<double> gauss;
		for(auto &x : v)
			x = {gauss(rng), gauss(rng)};
	}
	double nrm = std::sqrt(norm_squared(v));
	if(nrm == 0.0)
		throw InvalidArgument("ground-state seed is the zero vector");
	scale(1.0 / nrm, v);

	const int kmax = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.max_basis), dim));
	std::vector<std::vector<cplx>> basis(static_cast<std::size_t>(kmax), std::vector<cplx>(dim));
	std::vector<cplx> w(dim);
	GroundStateResult best;
	best.residual = std::numeric_limits<double>::infinity();

	for(int cycle = 0; cycle < options.max_cycles; cycle++) {
		basis[0] = v;
		std::vector<double> alpha, beta;
		int used = 0;
		for(int j = 0; j < kmax; j++) {
			auto &vj = basis[static_cast<std::size_t>(j)];
			h(vj, w);
			best.matvecs++;
			const double a = inner(vj, w).real();
			alpha.push_back(a);
			axpy(-a, vj, w);
			if(j > 0)
				axpy(-beta[static_cast<std::size_t>(j - 1)], basis[static_cast<std::size_t>(j - 1)], w);
			for(int pass = 0; pass < 2; pass++)
				for(int k = 0; k <= j; k++) {
					const auto &vk = basis[static_cast<std::size_t>(k)];
					axpy(-inner(vk, w), vk, w);
				}
			const double b = std::sqrt(norm_squared(w));
			used = j + 1;
			if(b <= 1e-14 * (std::abs(a) + 1.0) || j + 1 == kmax)
				break;
			beta.push_back(b);
			auto &next = basis[static_cast<std::size_t>(j + 1)];
			for(std::size_t i = 0; i < dim; i++)
				next[i] = w[i] / b;
		}

		Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
		for(int i = 0; i < used; i++) {
			t(i, i) = alpha[static_cast<std::size_t>(i)];
			if(i + 1 < used)
				t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
		}
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
		const Eigen::VectorXd y = es.eigenvectors().col(0);

		std::fill(v.begin(), v.end(), cplx{});
		for(int k = 0; k < used; k++)
			axpy(y(k), basis[static_cast<std::size_t>(k)], v);
		scale(1.0 / std::sqrt(norm_squared(v)), v);

		h(v, w);
		best.matvecs++;
		const double e = inner(v, w).real();
		axpy(-e, v, w);
		const double res = std::sqrt(norm_squared(w));
		if(res < best.residual) {
			best.residual = res;
			best.energy = e;
			best.state = v;
		}
		if(res < options.tol)
			return best;
	}
	std::ostringstream msg;
	msg << "Lanczos ground state did not converge: best residual " << best.residual << " (tol " << options.tol
	    << ")";
	throw NumericalError(msg.str());
}

std::vector<cplx> dense_expm_reference(const Eigen::MatrixXcd &h, std::span<const cplx> state, double dt) {
	const auto n = static_cast<std::size_t>(h.rows());
	if(n > kDenseLimit)
		throw InvalidArgument("dense exponential limited to N <= " + std::to_string(kDenseLimit));
	if(h.cols() != h.rows() || state.size() != n)
		throw ShapeMismatch("dense exponential: matrix and state sizes differ");
	const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
	if(herm > 1e-10 * (1.0 + h.cwiseAbs().maxCoeff()))
		throw InvalidArgument("dense exponential requires a Hermitian matrix");

	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
	Eigen::Map<const Eigen::VectorXcd> psi(state.data(), static_cast<Eigen::Index>(n));
	Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi;
	for(Eigen::Index i = 0; i < c.size(); i++)
		c(i) *= std::exp(cplx(0.0, -es.eigenvalues()(i) * dt));
	Eigen::VectorXcd out = es.eigenvectors() * c;
	return {out.data(), out.data() + out.size()};
}

Eigen::MatrixXcd dense_matrix(const LinearOperator &h, std::size_t dim) {
	if(dim > kDenseLimit)
		throw InvalidArgument("dense materialisation limited to N <= " + std::to_string(kDenseLimit));
	Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
	std::vector<cplx> e(dim), col(dim);
	for(std::size_t k = 0; k < dim; k++) {
		std::fill(e.begin(), e.end(), cplx{});
		e[k] = 1.0;
		h(e, col);
		for(std::size_t i = 0; i < dim; i++)
			m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
	}
	return m;
}

} // namespace cavfluor
