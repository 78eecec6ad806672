#pragma once

#include "cavfluor/hilbert.hpp"
#include "cavfluor/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cavfluor {

enum class Mode { cavity, fluorescence };

/// Probability of one or more fluorescence photons: 1 - sum |psi(lambda,n,0,j)|^2.
double fluorescence_probability(const StateVector &state);
double fluorescence_probability(const HilbertSpace &space, std::span<const cplx> psi);

/// <(-1)^n (n_0 - n_1) (-1)^m>; two-level spaces only.
double total_parity(const StateVector &state);
double total_parity(const HilbertSpace &space, std::span<const cplx> psi);

/// N(r_j) summed over electrons and photons, normalised to sum 1.
std::vector<double> nuclear_density(const StateVector &state);
std::vector<double> nuclear_density(const HilbertSpace &space, std::span<const cplx> psi);

/// Weight of the nuclear density beyond r_cut.
double dissociation_probability(const StateVector &state, double r_cut);
double dissociation_probability(const HilbertSpace &space, std::span<const double> density, double r_cut);

double photon_number(const StateVector &state, Mode mode);
double photon_number(const HilbertSpace &space, std::span<const cplx> psi, Mode mode);

/// <b^+ + b> for the chosen mode
double quadrature(const HilbertSpace &space, std::span<const cplx> psi, Mode mode);

/// Upper-level population: n_1 for the TLS, antibonding occupation for the dimer.
double excited_population(const StateVector &state, const ElectronicModel &model);
double excited_population(const HilbertSpace &space, std::span<const cplx> psi, const ElectronicModel &model);

struct Snapshot {
	double t = 0.0;
	double p_fluor = 0.0;
	double n_cav = 0.0;
	double n_flu = 0.0;
	std::optional<double> parity;
	std::vector<double> nuclear_density;
	double n_excited = 0.0;
	double norm = 0.0;
	double energy = 0.0;
	std::optional<double> p_diss;
};

} // namespace cavfluor
