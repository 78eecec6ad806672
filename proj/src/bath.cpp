#include "cavfluor/bath.hpp"

#include "cavfluor/error.hpp"

#include <cmath>

namespace cavfluor {

void BathParams::validate() const {
	if(n_osc < 1)
		throw InvalidArgument("bath needs at least one oscillator");
	if(!(delta > 0.0))
		throw InvalidArgument("bath frequency spacing must be > 0");
	if(A < 0.0)
		throw InvalidArgument("bath amplitude A must be >= 0");
}

BathState BathState::at_rest(int n_osc) {
	BathState s;
	s.x.assign(static_cast<std::size_t>(n_osc), 0.0);
	s.p.assign(static_cast<std::size_t>(n_osc), 0.0);
	return s;
}

std::vector<double> bath_frequencies(const BathParams &params) {
	params.validate();
	std::vector<double> w(static_cast<std::size_t>(params.n_osc));
	for(int k = 1; k <= params.n_osc; k++)
		w[static_cast<std::size_t>(k - 1)] = k * params.delta;
	return w;
}

std::vector<double> coupling_constants(const BathParams &params) {
	params.validate();
	std::vector<double> c(static_cast<std::size_t>(params.n_osc));
	for(int k = 1; k <= params.n_osc; k++)
		c[static_cast<std::size_t>(k - 1)] = params.A * std::pow(k * params.delta, params.a);
	return c;
}

void verlet_step(BathState &bath, std::span<const double> omega, std::span<const double> coupling, double q,
                 double dt) {
	const std::size_t n = bath.x.size();
	const double half = 0.5 * dt;
	for(std::size_t k = 0; k < n; k++) {
		const double w2 = omega[k] * omega[k];
		const double f = coupling[k] * q;
		const double a0 = -w2 * bath.x[k] + f;
		const double ph = bath.p[k] + half * a0;
		bath.x[k] += dt * ph;
		const double a1 = -w2 * bath.x[k] + f;
		bath.p[k] = ph + half * a1;
	}
	bath.t += dt;
}

double bath_feedback_term(const BathState &bath, std::span<const double> coupling) {
	double f = 0.0;
	for(std::size_t k = 0; k < bath.x.size(); k++)
		f += coupling[k] * bath.x[k];
	return f;
}

Bath::Bath(const BathParams &params)
    : params_(params), omega_(bath_frequencies(params)), coupling_(coupling_constants(params)),
      state_(BathState::at_rest(params.n_osc)) {}

double Bath::predicted_feedback(double q, double tau) const {
	double f = 0.0;
	for(std::size_t k = 0; k < omega_.size(); k++) {
		const double a0 = -omega_[k] * omega_[k] * state_.x[k] + coupling_[k] * q;
		f += coupling_[k] * (state_.x[k] + tau * state_.p[k] + 0.5 * tau * tau * a0);
	}
	return f;
}

double Bath::energy() const {
	double e = 0.0;
	for(std::size_t k = 0; k < omega_.size(); k++)
		e += 0.5 * (state_.p[k] * state_.p[k] + omega_[k] * omega_[k] * state_.x[k] * state_.x[k]);
	return e;
}

} // namespace cavfluor
