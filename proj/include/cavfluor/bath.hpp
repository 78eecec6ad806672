#pragma once

#include <span>
#include <vector>

namespace cavfluor {

/// Discretised oscillator bath: omega_k = k * delta and C_k = A (k delta)^a,
/// k = 1 .. n_osc, unit oscillator masses.
struct BathParams {
	int n_osc = 1000;
	double A = 0.01;
	double a = 0.6;
	double delta = 0.01;

	void validate() const;
	bool operator==(const BathParams &) const = default;
};

struct BathState {
	std::vector<double> x;
	std::vector<double> p;
	double t = 0.0;

	static BathState at_rest(int n_osc);
};

std::vector<double> bath_frequencies(const BathParams &params);
std::vector<double> coupling_constants(const BathParams &params);

/// One velocity-Verlet step of  x_k'' = -omega_k^2 x_k + C_k q  with the
/// quadrature expectation q held fixed over the step.
void verlet_step(BathState &bath, std::span<const double> omega, std::span<const double> coupling, double q,
                 double dt);

/// f = sum_k C_k x_k, the scalar multiplying -[(b^+ + b) + (b'^+ + b')].
double bath_feedback_term(const BathState &bath, std::span<const double> coupling);

/// Classical oscillator bath owned by one propagation.
class Bath {
public:
	explicit Bath(const BathParams &params);

	const BathParams &params() const { return params_; }
	const BathState &state() const { return state_; }
	BathState &state() { return state_; }
	std::span<const double> omega() const { return omega_; }
	std::span<const double> coupling() const { return coupling_; }

	double feedback() const { return bath_feedback_term(state_, coupling_); }
	/// feedback at t + tau if the bath moved freely under force q from now
	double predicted_feedback(double q, double tau) const;
	void step(double q, double dt) { verlet_step(state_, omega_, coupling_, q, dt); }

	/// sum_k (p_k^2 + omega_k^2 x_k^2) / 2
	double energy() const;

private:
	BathParams params_;
	std::vector<double> omega_;
	std::vector<double> coupling_;
	BathState state_;
};

} // namespace cavfluor
