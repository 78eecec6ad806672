#pragma once

#include "cavfluor/bath.hpp"
#include "cavfluor/hamiltonian.hpp"
#include "cavfluor/model.hpp"
#include "cavfluor/observables.hpp"
#include "cavfluor/propagator.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cavfluor {

inline constexpr const char *kVersion = "0.1.0";

/// Reference bond length; the default r_cut is four times it.
inline constexpr double kReferenceBondLength = 1.156;

struct CoherentInit {
	double beta = 3.0;
	bool operator==(const CoherentInit &) const = default;
};

/// Ground state of the coupled system followed by a pump on the cavity.
/// With `calibrate` the drive amplitude is found by bisection so that
/// <b^+ b> at shut-off matches target_photons.
struct PumpedInit {
	DriveEnvelope drive;
	double target_photons = 9.0;
	bool calibrate = true;
	bool operator==(const PumpedInit &) const = default;
};

using InitialCondition = std::variant<CoherentInit, PumpedInit>;

struct NoDissipation {
	bool operator==(const NoDissipation &) const = default;
};
struct ExponentialDamping {
	double gamma = 0.02;
	bool operator==(const ExponentialDamping &) const = default;
};
struct BathDissipation {
	BathParams bath;
	bool operator==(const BathDissipation &) const = default;
};

using Dissipation = std::variant<NoDissipation, ExponentialDamping, BathDissipation>;

struct Scenario {
	ElectronicModel model = ElectronicModel::dimer(MolecularParams{});
	SpaceShape space;
	double omega0 = 2.56;
	double g_c = 0.08;
	double g_f = 0.01;
	InitialCondition init = CoherentInit{};
	Dissipation dissipation = ExponentialDamping{};
	double t_end = 200.0;
	std::vector<double> omega_scan;
	std::uint64_t seed = 1;

	KrylovConfig krylov;
	LanczosOptions lanczos;
	int snapshot_every = 50;
	int stencil = 3;
	/// 0 selects 4 x the reference bond length
	double r_cut = 0.0;
	/// largest accepted norm deficit of the truncated coherent state
	double coherent_tolerance = 1e-7;
	/// omega' used while calibrating the pump (0 selects omega0)
	double calibration_omega = 0.0;
	/// relative tolerance on <b^+ b> when calibrating
	double calibration_tolerance = 0.01;
	int calibration_max_probes = 40;

	void validate() const;
	CouplingParams couplings() const;
	double resolved_r_cut() const;
	bool bath_enabled() const { return std::holds_alternative<BathDissipation>(dissipation); }
	int total_steps() const;

	bool operator==(const Scenario &) const = default;
};

/// Default omega' grid: 80 points on [0.2, 1.6] max(omega0, Omega_R).
std::vector<double> default_omega_scan(const Scenario &s);

/// Ground state of the molecule alone (g_c = g_f = 0), on a space with a
/// single cavity and fluorescence state.
StateVector molecular_ground_state(const Scenario &s);

/// |g_m> |beta>_c |0>_f on the scenario space.  Throws NumericalError when
/// the truncated coherent state loses more than `tolerance` of its norm.
StateVector coherent_initial_state(double beta, const HilbertSpace &space, const StateVector &molecular_ground,
                                   double tolerance = 1e-7);

/// Ground state of H_s(t = 0) at fluorescence frequency omega_f.
GroundStateResult coupled_ground_state(const Scenario &s, double omega_f);

/// Closed-form amplitude of a driven empty cavity: alpha(t) for
/// i d(alpha)/dt = omega0 alpha + E(t) cos(omega0 t).  Evaluated by
/// composite Gauss-Legendre quadrature on the envelope pieces.
cplx driven_cavity_amplitude(const DriveEnvelope &drive, double omega0, double t);

struct BathSample {
	double t;
	double feedback;
	double energy;
};

/// Everything needed to continue a propagation bit-identically.
struct PropagationState {
	int step = 0;
	std::vector<cplx> psi;
	std::optional<BathState> bath;
	std::vector<Snapshot> snapshots;
	std::vector<BathSample> bath_trace;
};

/// One propagation at fixed omega'.  Time t_n = n dt; the drive shut-off
/// and ramp end are stepped onto exactly.
class Propagation {
public:
	/// `drive_amplitude` overrides the pump amplitude of a PumpedInit.
	Propagation(const Scenario &s, double omega_f, std::optional<double> drive_amplitude = std::nullopt);

	const HilbertSpace &space() const { return ham_.space(); }
	const Hamiltonian &hamiltonian() const { return ham_; }
	const DriveEnvelope &drive() const { return drive_; }
	double omega_f() const { return omega_f_; }
	double time() const { return state_.step * scenario_.krylov.dt; }
	int step_index() const { return state_.step; }
	std::span<const cplx> psi() const { return state_.psi; }
	const PropagationState &state() const { return state_; }
	bool has_bath() const { return bath_ != nullptr; }
	const Bath &bath() const { return *bath_; }

	/// Prepare the initial state (coherent product or coupled ground state).
	void initialize();
	/// Start from an explicit state at step 0.
	void initialize_from(std::vector<cplx> psi);
	/// Resume from a saved propagation state.
	void restore(PropagationState saved);

	/// Advance one time step of length dt.
	void step();
	/// Run until `step_index() == last`, taking snapshots on the cadence.
	/// `on_snapshot` runs after each snapshot; returning false stops early.
	void run_until(int last, const std::function<bool(const Propagation &)> &on_snapshot = {});

	Snapshot snapshot() const;
	FieldCoefficients coefficients(double t, double bath_force) const;
	/// <H_s(t)>, the system energy without pump and bath terms
	double system_energy() const;

private:
	void advance(double t, double h);
	void record();

	Scenario scenario_;
	double omega_f_;
	CouplingParams couplings_;
	DriveEnvelope drive_;
	Hamiltonian ham_;
	KrylovPropagator krylov_;
	std::unique_ptr<Bath> bath_;
	PropagationState state_;
	mutable std::vector<cplx> scratch_;
	std::vector<double> breakpoints_;
};

struct CalibrationProbe {
	double amplitude;
	double photons;
};

struct CalibrationResult {
	DriveEnvelope drive;
	double photons = 0.0;
	std::vector<CalibrationProbe> history;
};

/// Bracketing search on the pump amplitude until <b^+ b> at shut-off lies
/// within calibration_tolerance of the target.  Throws NumericalError carrying the
/// probe history on failure.
CalibrationResult calibrate_pump(const Scenario &s, double target, const DriveEnvelope &envelope);

/// Pump amplitude actually used by the scenario (calibrated when asked).
std::optional<double> resolve_drive_amplitude(const Scenario &s);

} // namespace cavfluor
