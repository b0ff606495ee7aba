#pragma once

#include <functional>

#include "cavnet/qubit_channel.hpp"
#include "cavnet/rng.hpp"

namespace cavnet {

// Tr[|psi><psi| rho] = <psi|rho|psi>.
double state_fidelity(const PureState& target, const DensityMatrix& rho);

// Normalized complex-Gaussian vector: unitarily invariant, deterministic per seed.
PureState haar_random_state(int dim, Rng& rng);
PureState haar_random_state(int dim, std::uint64_t seed);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_samples = 0;
};

// Monte-Carlo Haar average of <psi| runner(|psi><psi|) |psi> over qubit states.
MonteCarloEstimate average_fidelity_mc(
    const std::function<DensityMatrix(const PureState&)>& channel_runner,
    int n_samples, std::uint64_t seed);

// F_e of a map acting on subsystem 1 of a (C, q) pair, C untouched.
// The runner receives the full two-qubit Choi input and returns its image.
double entanglement_fidelity(
    const std::function<DensityMatrix(const DensityMatrix&)>& channel_runner);

// Maximally entangled (|00> + |11>)/sqrt(2) on two qubits.
PureState phi_plus();

} // namespace cavnet
