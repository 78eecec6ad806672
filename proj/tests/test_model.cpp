#include "cavfluor/error.hpp"
#include "cavfluor/model.hpp"
#include "cavfluor/propagator.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cavfluor;

namespace {

// Jordan-Wigner construction of the four spin-orbitals (1u, 2u, 1d, 2d)
// on the full 16-dimensional Fock space.
struct Fock {
	std::array<Eigen::MatrixXd, 4> c;

	Fock() {
		Eigen::Matrix2d a, z, id;
		a << 0, 1, 0, 0;
		z << 1, 0, 0, -1;
		id.setIdentity();
		for(int k = 0; k < 4; k++) {
			Eigen::MatrixXd op = Eigen::MatrixXd::Identity(1, 1);
			for(int i = 0; i < 4; i++) {
				const Eigen::Matrix2d f = i < k ? z : (i == k ? a : id);
				Eigen::MatrixXd next(op.rows() * 2, op.cols() * 2);
				for(int r = 0; r < op.rows(); r++)
					for(int s = 0; s < op.cols(); s++)
						next.block(2 * r, 2 * s, 2, 2) = op(r, s) * f;
				op = next;
			}
			c[static_cast<std::size_t>(k)] = op;
		}
	}
	static int mode(int site, bool up) { return (up ? 0 : 2) + (site - 1); }
	const Eigen::MatrixXd &ann(int site, bool up) const { return c[static_cast<std::size_t>(mode(site, up))]; }
	Eigen::MatrixXd cre(int site, bool up) const { return ann(site, up).transpose(); }
	Eigen::MatrixXd num(int site, bool up) const { return cre(site, up) * ann(site, up); }

	Eigen::VectorXd vacuum() const {
		Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
		v(0) = 1.0;
		return v;
	}

	// sector basis c^+_{i up} c^+_{j down}|0> in the order (11, 12, 21, 22)
	Eigen::MatrixXd sector() const {
		Eigen::MatrixXd b(16, 4);
		int col = 0;
		for(int i = 1; i <= 2; i++)
			for(int j = 1; j <= 2; j++)
				b.col(col++) = cre(i, true) * cre(j, false) * vacuum();
		return b;
	}

	Eigen::MatrixXd project(const Eigen::MatrixXd &op) const {
		const Eigen::MatrixXd b = sector();
		// the sector must be invariant
		const Eigen::MatrixXd img = op * b;
		const Eigen::MatrixXd back = b * (b.transpose() * img);
		CHECK((img - back).norm() < 1e-14);
		return b.transpose() * op * b;
	}
};

Eigen::MatrixXd site_swap() {
	Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 4);
	p(0, 3) = p(3, 0) = 1.0;
	p(1, 2) = p(2, 1) = 1.0;
	return p;
}

} // namespace

TEST_CASE("effective hopping at the reference bond length is -1") {
	const MolecularParams p;
	CHECK(std::abs(p.v_eff(1.156) + 1.0) < 1e-3);
	CHECK(p.hopping(1.156) == -p.v_eff(1.156));
}

TEST_CASE("model parameter validation") {
	MolecularParams p;
	p.mass = -1.0;
	CHECK_THROWS_AS(ElectronicModel::dimer(p), InvalidArgument);
	p = MolecularParams{};
	p.C = 0.0;
	CHECK_THROWS_AS(ElectronicModel::dimer(p), InvalidArgument);
	p = MolecularParams{};
	p.lambda = 0.0;
	CHECK_THROWS_AS(ElectronicModel::dimer(p), InvalidArgument);
	CHECK_THROWS_AS(ElectronicModel::tls(0.0), InvalidArgument);
	CHECK_THROWS_AS(resonance_frequency(1.0, 0.0), InvalidArgument);
}

TEST_CASE("electronic operators agree with a Jordan-Wigner fermion oracle") {
	const Fock f;
	Eigen::MatrixXd k = Eigen::MatrixXd::Zero(16, 16);
	Eigen::MatrixXd d = Eigen::MatrixXd::Zero(16, 16);
	Eigen::MatrixXd m = Eigen::MatrixXd::Zero(16, 16);
	for(bool up : {true, false}) {
		k += f.cre(1, up) * f.ann(2, up) + f.cre(2, up) * f.ann(1, up);
		const Eigen::MatrixXd cb = (f.ann(1, up) + f.ann(2, up)) / std::sqrt(2.0);
		const Eigen::MatrixXd ca = (f.ann(1, up) - f.ann(2, up)) / std::sqrt(2.0);
		m += cb.transpose() * ca + ca.transpose() * cb;
	}
	for(int i = 1; i <= 2; i++)
		d += f.num(i, true) * f.num(i, false);

	Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(16, 16), sz = Eigen::MatrixXd::Zero(16, 16);
	for(int i = 1; i <= 2; i++) {
		sp += f.cre(i, true) * f.ann(i, false);
		sz += 0.5 * (f.num(i, true) - f.num(i, false));
	}
	const Eigen::MatrixXd sm = sp.transpose();
	const Eigen::MatrixXd s2 = sz * sz + 0.5 * (sp * sm + sm * sp);

	CHECK((f.project(k) - hopping_matrix()).norm() < 1e-14);
	CHECK((f.project(d) - double_occupancy_matrix()).norm() < 1e-14);
	CHECK((f.project(m) - dipole_matrix(ElectronicModel::dimer({}))).norm() < 1e-14);
	CHECK((f.project(s2) - spin_squared_matrix()).norm() < 1e-14);

	// the dipole equals sum_sigma (n_1s - n_2s)
	Eigen::MatrixXd occ = Eigen::MatrixXd::Zero(16, 16);
	for(bool up : {true, false})
		occ += f.num(1, up) - f.num(2, up);
	CHECK((f.project(occ) - dipole_matrix(ElectronicModel::dimer({}))).norm() < 1e-14);
}

TEST_CASE("dipole and S^2 commute") {
	const Eigen::MatrixXd m = dipole_matrix(ElectronicModel::dimer({}));
	const Eigen::MatrixXd s = spin_squared_matrix();
	CHECK((m * s - s * m).norm() == 0.0);

	const HilbertSpace space({4, 3, 2, 4, 0.8, 2.0});
	const auto psi = testing_support::random_state(space, 3);
	const auto model = ElectronicModel::dimer({});
	const StateVector a = apply_dipole(spin_squared(psi), model);
	const StateVector b = spin_squared(apply_dipole(psi, model));
	CHECK(testing_support::distance(a, b) < 1e-15);
}

TEST_CASE("S^2 on the triplet gives 2") {
	const HilbertSpace space({4, 1, 1, 1});
	StateVector t(space);
	t.at({1, 0, 0, 0}) = 1.0 / std::sqrt(2.0);
	t.at({2, 0, 0, 0}) = -1.0 / std::sqrt(2.0);
	StateVector expect = t;
	for(auto &a : expect.amplitudes())
		a *= 2.0;
	CHECK(testing_support::distance(spin_squared(t), expect) < 1e-15);
	CHECK_THROWS_AS(spin_squared(StateVector(HilbertSpace({2, 1, 1, 1}))), ShapeMismatch);
}

TEST_CASE("rigid dimer spectra") {
	auto eig = [](double U, double h) {
		MolecularParams p;
		p.U = U;
		// choose V so that hopping(r) = h at r = 1
		p.V = -h * std::exp(p.lambda);
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(electronic_hamiltonian(ElectronicModel::dimer(p), 1.0));
		return es.eigenvalues();
	};
	const Eigen::VectorXd e0 = eig(0.0, 1.0);
	CHECK(e0(0) == doctest::Approx(-2.0).epsilon(1e-13));
	CHECK(std::abs(e0(1)) < 1e-13);
	CHECK(std::abs(e0(2)) < 1e-13);
	CHECK(e0(3) == doctest::Approx(2.0).epsilon(1e-13));
	const Eigen::VectorXd e1 = eig(1.0, 1.0);
	CHECK(std::abs(e1(0) + 1.5616) < 1e-4);
	CHECK(std::abs(e1(1)) < 1e-13);
	CHECK(std::abs(e1(2) - 1.0) < 1e-13);
	CHECK(std::abs(e1(3) - 2.5616) < 1e-4);
}

TEST_CASE("analytic levels: examples and dense oracle for random (U, t)") {
	auto energies = [](double t, double U) {
		std::vector<double> e;
		for(const auto &l : electronic_eigs_analytic(t, U))
			e.push_back(l.energy);
		return e;
	};
	auto close = [](std::vector<double> a, std::vector<double> b) {
		std::sort(a.begin(), a.end());
		std::sort(b.begin(), b.end());
		for(std::size_t i = 0; i < a.size(); i++)
			if(std::abs(a[i] - b[i]) > 1e-12)
				return false;
		return true;
	};
	CHECK(close(energies(1.0, 0.0), {-2, 0, 0, 2}));
	CHECK(close(energies(0.0, 4.0), {0, 0, 4, 4}));

	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> ud(0.0, 6.0), td(-3.0, 3.0);
	const Eigen::MatrixXd swap = site_swap();
	const Eigen::MatrixXd s2 = spin_squared_matrix();
	for(int trial = 0; trial < 20; trial++) {
		const double U = ud(rng), t = td(rng);
		const Eigen::MatrixXd h = U * double_occupancy_matrix() + t * hopping_matrix();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
		std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + 4);
		CHECK(close(energies(t, U), dense));

		// parity and spin labels: each analytic level must own an eigenvector
		// in the common eigenbasis of H, the site swap and S^2
		for(const auto &lvl : electronic_eigs_analytic(t, U)) {
			const double p = lvl.parity == Parity::even ? 1.0 : -1.0;
			const double s = lvl.spin * (lvl.spin + 1.0);
			const Eigen::MatrixXd big = (h - lvl.energy * Eigen::MatrixXd::Identity(4, 4)).transpose() *
			                                (h - lvl.energy * Eigen::MatrixXd::Identity(4, 4)) +
			                            (swap - p * Eigen::MatrixXd::Identity(4, 4)).transpose() *
			                                (swap - p * Eigen::MatrixXd::Identity(4, 4)) +
			                            (s2 - s * Eigen::MatrixXd::Identity(4, 4)).transpose() *
			                                (s2 - s * Eigen::MatrixXd::Identity(4, 4));
			Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> joint(big);
			CHECK(joint.eigenvalues()(0) < 1e-10);
		}
	}
}

TEST_CASE("resonance frequency") {
	CHECK(std::abs(resonance_frequency(1.0, -1.0) - 2.5616) < 5e-5);
	CHECK(std::round(resonance_frequency(1.0, -1.0) * 100.0) / 100.0 == 2.56);
	CHECK(resonance_frequency(0.0, -1.0) == doctest::Approx(2.0).epsilon(1e-15));
	CHECK(std::abs(resonance_frequency(2.0, -1.0) - 3.2361) < 5e-5);

	std::mt19937_64 rng(5);
	std::uniform_real_distribution<double> ud(0.0, 5.0), td(0.1, 3.0);
	for(int trial = 0; trial < 20; trial++) {
		const double U = ud(rng), t = (trial % 2 ? 1.0 : -1.0) * td(rng);
		const auto lv = electronic_eigs_analytic(t, U);
		// odd singlet minus ground singlet
		CHECK(std::abs(resonance_frequency(U, t) - (lv[2].energy - lv[0].energy)) < 1e-12);
		const Eigen::MatrixXd h = U * double_occupancy_matrix() + t * hopping_matrix();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
		CHECK(std::abs(resonance_frequency(U, t) - (U - es.eigenvalues()(0))) < 1e-12);
	}
}

TEST_CASE("dipole selection rules between analytic eigenstates") {
	const Eigen::MatrixXd m = dipole_matrix(ElectronicModel::dimer({}));
	const Eigen::MatrixXd swap = site_swap();
	for(double t : {-1.3, 0.7}) {
		const Eigen::MatrixXd h = 1.0 * double_occupancy_matrix() + t * hopping_matrix();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
		const Eigen::MatrixXd v = es.eigenvectors();
		for(int a = 0; a < 4; a++)
			for(int b = 0; b < 4; b++) {
				const double pa = v.col(a).dot(swap * v.col(a));
				const double pb = v.col(b).dot(swap * v.col(b));
				if(pa * pb > 0.5)
					CHECK(std::abs(v.col(a).dot(m * v.col(b))) < 1e-13);
			}
	}
}

TEST_CASE("spectra are invariant under the sign of the hopping") {
	auto transitions = [](double t) {
		const Eigen::MatrixXd h = 1.0 * double_occupancy_matrix() + t * hopping_matrix();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
		const Eigen::MatrixXd m = dipole_matrix(ElectronicModel::dimer({}));
		Eigen::MatrixXd mm = es.eigenvectors().transpose() * m * es.eigenvectors();
		return std::make_pair(Eigen::VectorXd(es.eigenvalues()), Eigen::MatrixXd(mm.cwiseAbs2()));
	};
	const auto [e1, m1] = transitions(1.0);
	const auto [e2, m2] = transitions(-1.0);
	CHECK((e1 - e2).norm() < 1e-13);
	CHECK((m1 - m2).norm() < 1e-12);
}

TEST_CASE("radiation term") {
	const HilbertSpace space({4, 5, 3, 1});
	const RadiationParams r{1.28, 2.56};
	CHECK(apply_h_rad(StateVector::basis(space, {0, 0, 0, 0}), r).norm() == 0.0);
	const StateVector out = apply_h_rad(StateVector::basis(space, {2, 3, 1, 0}), r);
	CHECK(out.at({2, 3, 1, 0}).real() == doctest::Approx(6.40).epsilon(1e-14));

	// <H_rad> on |beta=3> x |0>: truncated Poisson sum
	const HilbertSpace big({4, 30, 2, 1});
	StateVector coh(big);
	double c = std::exp(-4.5), norm = 0.0, mean = 0.0;
	for(int n = 0; n < 30; n++) {
		if(n > 0)
			c *= 3.0 / std::sqrt(double(n));
		coh.at({0, n, 0, 0}) = c;
		norm += c * c;
		mean += n * c * c;
	}
	const double e = inner(coh, apply_h_rad(coh, r)).real();
	CHECK(std::abs(e - 1.28 * mean) < 1e-12);
	CHECK(std::abs(e / norm - 9.0 * 1.28) < 1e-4);
}

TEST_CASE("dipole action on basis states") {
	const auto dimer = ElectronicModel::dimer({});
	const HilbertSpace space({4, 2, 2, 1});
	const StateVector a = apply_dipole(StateVector::basis(space, {0, 1, 0, 0}), dimer);
	CHECK(a.at({0, 1, 0, 0}) == cplx(2.0));
	CHECK(a.norm() == doctest::Approx(2.0));
	CHECK(apply_dipole(StateVector::basis(space, {1, 0, 0, 0}), dimer).norm() == 0.0);
	CHECK(apply_dipole(StateVector::basis(space, {3, 0, 0, 0}), dimer).at({3, 0, 0, 0}) == cplx(-2.0));

	const auto tls = ElectronicModel::tls(2.0);
	const HilbertSpace ts({2, 2, 2, 1});
	const StateVector b = apply_dipole(StateVector::basis(ts, {0, 0, 0, 0}), tls);
	CHECK(b.at({1, 0, 0, 0}) == cplx(1.0));
	CHECK(b.norm() == doctest::Approx(1.0));
}

TEST_CASE("interaction term") {
	const auto dimer = ElectronicModel::dimer({});
	const HilbertSpace space({4, 3, 3, 1});
	const StateVector g = StateVector::basis(space, {0, 0, 0, 0});
	CouplingParams zero;
	CHECK(apply_h_int(testing_support::random_state(space, 1), 0.3, zero, dimer).norm() == 0.0);

	CouplingParams c;
	c.g_c = 0.08;
	const StateVector out = apply_h_int(g, 0.0, c, dimer);
	CHECK(std::abs(out.at({0, 1, 0, 0}) - 0.16) < 1e-15);
	CHECK(std::abs(out.norm() - 0.16) < 1e-15);

	CouplingParams d;
	d.g_f = 0.01;
	d.gamma = 0.02;
	CHECK(d.g_fluor(std::log(2.0) / d.gamma) == doctest::Approx(0.005).epsilon(1e-14));
	CHECK(d.g_fluor(0.0) == 0.01);

	// ladder truncation: b^+ on the top Fock state vanishes
	CouplingParams top;
	top.g_c = 1.0;
	const StateVector t = apply_h_int(StateVector::basis(space, {0, 2, 0, 0}), 0.0, top, dimer);
	CHECK(std::abs(t.at({0, 1, 0, 0}) - 2.0 * std::sqrt(2.0)) < 1e-14);
	CHECK(std::abs(t.norm() - 2.0 * std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("drive term") {
	const HilbertSpace space({2, 4, 1, 1});
	const auto psi = testing_support::random_state(space, 9);
	const auto trap = DriveEnvelope::trapezoid(0.3, 2.0, 5.0, 1.0);
	CHECK(apply_drive(psi, 5.0, trap).norm() == 0.0);
	CHECK(apply_drive(psi, 7.5, trap).norm() == 0.0);
	CHECK(trap.envelope(1.0) == doctest::Approx(0.15));
	CHECK(trap.envelope(3.0) == 0.3);

	const auto sud = DriveEnvelope::sudden(0.4, 3.0, 1.7);
	for(double t : {0.0, 0.5, 2.9})
		CHECK(sud.field(t) == doctest::Approx(0.4 * std::cos(1.7 * t)).epsilon(1e-15));
	CHECK(sud.field(3.0) == 0.0);
	const StateVector v = apply_drive(StateVector::basis(space, {0, 0, 0, 0}), 0.5, sud);
	CHECK(std::abs(v.at({0, 1, 0, 0}) - 0.4 * std::cos(0.85)) < 1e-15);
	CHECK(sud.off_time() == 3.0);
	CHECK(trap.off_time() == 5.0);
	CHECK_THROWS_AS(DriveEnvelope::trapezoid(0.1, 3.0, 2.0, 1.0), InvalidArgument);
	CHECK_THROWS_AS(DriveEnvelope::sudden(-0.1, 3.0, 1.0), InvalidArgument);
}

TEST_CASE("every term is Hermitian") {
	MolecularParams p;
	p.mass = 40.0;
	const auto dimer = ElectronicModel::dimer(p);
	const HilbertSpace space({4, 3, 3, 6, 0.8, 2.5});
	const auto phi = testing_support::random_state(space, 21);
	const auto psi = testing_support::random_state(space, 22);
	CouplingParams c;
	c.g_c = 0.3;
	c.g_f = 0.2;
	c.gamma = 0.1;
	const auto drive = DriveEnvelope::sudden(0.7, 10.0, 2.0);

	auto check = [&](auto op) {
		const cplx a = inner(phi, op(psi));
		const cplx b = std::conj(inner(psi, op(phi)));
		CHECK(std::abs(a - b) < 1e-12);
	};
	for(int stencil : {3, 5})
		check([&](const StateVector &s) { return apply_h_mol(s, dimer, stencil); });
	check([&](const StateVector &s) { return apply_h_rad(s, {2.56, 1.3}); });
	check([&](const StateVector &s) { return apply_dipole(s, dimer); });
	check([&](const StateVector &s) { return apply_h_int(s, 1.7, c, dimer); });
	check([&](const StateVector &s) { return apply_drive(s, 0.3, drive); });
	check([&](const StateVector &s) { return apply_bath_coupling(s, 0.37); });
	check([&](const StateVector &s) { return spin_squared(s); });

	const auto tls = ElectronicModel::tls(2.0);
	const HilbertSpace ts({2, 4, 3, 1});
	const auto a = testing_support::random_state(ts, 1);
	const auto b = testing_support::random_state(ts, 2);
	CHECK(std::abs(inner(a, apply_h_mol(b, tls)) - std::conj(inner(b, apply_h_mol(a, tls)))) < 1e-12);
	CHECK(std::abs(inner(a, apply_h_int(b, 0.4, c, tls)) - std::conj(inner(b, apply_h_int(a, 0.4, c, tls)))) <
	      1e-12);
}

TEST_CASE("kinetic term reproduces the finite-difference Laplacian spectrum") {
	MolecularParams p;
	p.mass = 3.0;
	p.V = 0.0;
	p.U = 0.0;
	const auto model = ElectronicModel::dimer(p);
	const int ng = 40;
	const HilbertSpace space({4, 1, 1, ng, 1.0, 3.0});
	const double dx = space.grid_spacing();
	for(int k : {1, 5, 17}) {
		StateVector s(space);
		const double theta = k * M_PI / (ng + 1);
		for(int j = 0; j < ng; j++)
			s.at({2, 0, 0, j}) = std::sin(theta * (j + 1));
		const StateVector h = apply_h_mol(s, model);
		const double lam = (2.0 - 2.0 * std::cos(theta)) / (p.mass * dx * dx);
		for(int j = 0; j < ng; j++) {
			const double x = space.x(j);
			const cplx expect = (lam + p.C / std::pow(x, 4)) * s.at({2, 0, 0, j});
			CHECK(std::abs(h.at({2, 0, 0, j}) - expect) < 1e-10);
		}
	}
}

TEST_CASE("kinetic stencils converge at second and fourth order") {
	MolecularParams p;
	p.mass = 2.0;
	p.V = 0.0;
	p.U = 0.0;
	p.C = 1e-12;
	const auto model = ElectronicModel::dimer(p);
	auto err = [&](int ng, int stencil) {
		const HilbertSpace space({4, 1, 1, ng, 1.0, 5.0});
		StateVector s(space);
		for(int j = 0; j < ng; j++) {
			const double y = space.x(j) - 3.0;
			s.at({0, 0, 0, j}) = std::exp(-2.0 * y * y);
		}
		const StateVector h = apply_h_mol(s, model, stencil);
		double e = 0.0;
		for(int j = ng / 4; j < 3 * ng / 4; j++) {
			const double y = space.x(j) - 3.0;
			// -f''/M for f = exp(-2 y^2)
			const double exact = -(16.0 * y * y - 4.0) * std::exp(-2.0 * y * y) / p.mass;
			e = std::max(e, std::abs(h.at({0, 0, 0, j}).real() - p.C / std::pow(space.x(j), 4) * s.at({0, 0, 0, j}).real() - exact));
		}
		return e;
	};
	const double r3 = err(101, 3) / err(201, 3);
	const double r5 = err(101, 5) / err(201, 5);
	CHECK(r3 == doctest::Approx(4.0).epsilon(0.05));
	CHECK(r5 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("excited population operator") {
	// U = 0 ground state has both electrons in the lower orbital
	for(double v : {-2.0, 2.0}) {
		MolecularParams p;
		p.U = 0.0;
		p.V = v;
		const auto model = ElectronicModel::dimer(p);
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(electronic_hamiltonian(model, 1.156));
		const Eigen::VectorXd g = es.eigenvectors().col(0);
		CHECK(std::abs(g.dot(excited_number_matrix(model) * g)) < 1e-14);
		const Eigen::VectorXd top = es.eigenvectors().col(3);
		CHECK(top.dot(excited_number_matrix(model) * top) == doctest::Approx(2.0).epsilon(1e-13));
	}
	const Eigen::MatrixXd n = excited_number_matrix(ElectronicModel::tls(1.0));
	CHECK(n(1, 1) == 1.0);
	CHECK(n(0, 0) == 0.0);
}

TEST_CASE("Born-Oppenheimer surface") {
	const MolecularParams p;
	std::vector<double> xs;
	for(int i = 0; i <= 4000; i++)
		xs.push_back(0.5 + i * 0.001);
	const auto e = bo_surface(xs, p);
	const auto k = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
	CHECK(xs[k] >= 1.1);
	CHECK(xs[k] <= 1.4);
	CHECK(std::abs(xs[k] - 1.156) < 0.01);

	// far out: the electronic part approaches 0 from below while C/x^4
	// keeps the total slightly positive (at x = 60 the splitting underflows)
	const std::vector<double> far{20.0, 30.0, 60.0};
	const auto ef = bo_surface(far, p);
	for(std::size_t i = 0; i < far.size(); i++) {
		const double elec = ef[i] - p.C / std::pow(far[i], 4);
		CHECK(elec <= 0.0);
		if(i < 2)
			CHECK(elec < 0.0);
		CHECK(ef[i] > 0.0);
		CHECK(std::abs(elec) < 1e-6);
		CHECK(std::abs(ef[i]) < 1e-5);
	}
	CHECK(std::abs(ef[2]) < std::abs(ef[0]));
}
