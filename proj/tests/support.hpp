#pragma once

#include "cavfluor/hilbert.hpp"

#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace testing_support {

using cavfluor::cplx;

inline std::vector<cplx> random_vector(std::size_t n, std::uint64_t seed, bool normalize = true) {
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> g;
	std::vector<cplx> v(n);
	double s = 0.0;
	for(auto &x : v) {
		x = cplx(g(rng), g(rng));
		s += std::norm(x);
	}
	if(normalize)
		for(auto &x : v)
			x /= std::sqrt(s);
	return v;
}

inline cavfluor::StateVector random_state(const cavfluor::HilbertSpace &space, std::uint64_t seed) {
	return cavfluor::StateVector(space, random_vector(space.dim(), seed));
}

inline double distance(std::span<const cplx> a, std::span<const cplx> b) {
	double s = 0.0;
	for(std::size_t i = 0; i < a.size(); i++)
		s += std::norm(a[i] - b[i]);
	return std::sqrt(s);
}

inline double distance(const cavfluor::StateVector &a, const cavfluor::StateVector &b) {
	return distance(a.amplitudes(), b.amplitudes());
}

} // namespace testing_support
