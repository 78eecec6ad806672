#pragma once

#include "cavfluor/hilbert.hpp"

#include <Eigen/Dense>

#include <array>
#include <variant>

namespace cavfluor {

/// Parameters of the two-site, two-electron molecule.
///
/// The relative-coordinate kinetic energy uses the reduced mass M/2, so
/// T = p^2 / M.  Hopping between the sites is -V exp(-lambda x).
struct MolecularParams {
	double mass = 8.0e4;
	double C = 0.6;
	double U = 1.0;
	double V = -2.0;
	double lambda = 0.6;

	/// V exp(-lambda x)
	double v_eff(double x) const;
	/// coefficient multiplying sum_sigma (c1^+ c2 + h.c.): -V exp(-lambda x)
	double hopping(double x) const { return -v_eff(x); }

	bool operator==(const MolecularParams &) const = default;
};

struct TwoLevelParams {
	double gap = 2.0;
	bool operator==(const TwoLevelParams &) const = default;
};

class ElectronicModel {
public:
	static ElectronicModel dimer(const MolecularParams &p);
	static ElectronicModel tls(double gap);

	bool is_dimer() const { return std::holds_alternative<MolecularParams>(params_); }
	bool is_tls() const { return !is_dimer(); }
	int dim() const { return is_dimer() ? 4 : 2; }

	const MolecularParams &molecule() const;
	double gap() const;

	bool operator==(const ElectronicModel &) const = default;

private:
	explicit ElectronicModel(std::variant<MolecularParams, TwoLevelParams> p) : params_(p) {}
	std::variant<MolecularParams, TwoLevelParams> params_;
};

struct RadiationParams {
	double omega0 = 0.0;
	/// frequency of the scanned fluorescence mode (omega')
	double omega_f = 0.0;
};

struct CouplingParams {
	double g_c = 0.0;
	double g_f = 0.0;
	/// exponential damping rate of the fluorescence coupling; 0 disables
	double gamma = 0.0;
	bool bath_enabled = false;

	/// g'(t) = g_f exp(-gamma t)
	double g_fluor(double t) const;
};

enum class EnvelopeShape { off, trapezoid, sudden };

/// Classical pump on the cavity mode: E(t) cos(carrier t) (b^+ + b).
///
/// trapezoid: linear ramp on [0, t1], hold until t2, then off.
/// sudden:    amplitude held on [0, ts), then off.
struct DriveEnvelope {
	EnvelopeShape shape = EnvelopeShape::off;
	double amplitude = 0.0;
	double t1 = 0.0;
	double t2 = 0.0;
	double ts = 0.0;
	double carrier = 0.0;

	double envelope(double t) const;
	double field(double t) const;
	/// time after which the drive is identically zero (0 when off)
	double off_time() const;
	/// times where the envelope is not smooth; integrators step onto them
	std::vector<double> breakpoints() const;

	bool operator==(const DriveEnvelope &) const = default;

	static DriveEnvelope trapezoid(double amplitude, double t1, double t2, double carrier);
	static DriveEnvelope sudden(double amplitude, double ts, double carrier);
};

// Dense electronic operators.  Dimer basis: c^+_{i up} c^+_{j down}|0> in the
// order (1u1d, 1u2d, 2u1d, 2u2d); TLS basis (|0>, |1>).
Eigen::MatrixXd hopping_matrix();
Eigen::MatrixXd double_occupancy_matrix();
Eigen::MatrixXd dipole_matrix(const ElectronicModel &model);
Eigen::MatrixXd spin_squared_matrix();
/// electronic Hamiltonian at nuclear coordinate x (no nuclear potential)
Eigen::MatrixXd electronic_hamiltonian(const ElectronicModel &model, double x);
/// occupation of the upper single-particle level (antibonding orbital / |1>)
Eigen::MatrixXd excited_number_matrix(const ElectronicModel &model);

// Individual terms of the Hamiltonian, applied matrix-free.  These are the
// reference forms; the propagation uses the fused kernel in hamiltonian.hpp.
StateVector apply_h_mol(const StateVector &state, const ElectronicModel &model, int stencil = 3);
StateVector apply_h_rad(const StateVector &state, const RadiationParams &params);
StateVector apply_dipole(const StateVector &state, const ElectronicModel &model);
StateVector apply_h_int(const StateVector &state, double t, const CouplingParams &couplings,
                        const ElectronicModel &model);
StateVector apply_drive(const StateVector &state, double t, const DriveEnvelope &envelope);
/// -f [(b^+ + b) + (b'^+ + b')]
StateVector apply_bath_coupling(const StateVector &state, double f);
StateVector spin_squared(const StateVector &state);

/// U/2 + sqrt(4 V_eff^2 + (U/2)^2)
double resonance_frequency(double U, double v_eff);

enum class Parity { even, odd };

struct ElectronicLevel {
	double energy;
	Parity parity;
	int spin;
};

/// Levels of the rigid dimer with hopping t and on-site repulsion U:
/// even singlet ground, triplet, odd singlet, upper even singlet.
std::array<ElectronicLevel, 4> electronic_eigs_analytic(double t_hop, double U);

/// C/x^4 plus the lowest electronic eigenvalue at each x.
std::vector<double> bo_surface(std::span<const double> xs, const MolecularParams &params);

} // namespace cavfluor
