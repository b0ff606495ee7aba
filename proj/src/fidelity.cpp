#include "cavnet/fidelity.hpp"

#include <cmath>

namespace cavnet {

double state_fidelity(const PureState& target, const DensityMatrix& rho) {
    if (target.layout.total_dim() != rho.layout.total_dim())
        throw ValidationError("state_fidelity: dimension mismatch");
    const Complex f = (target.amplitudes.adjoint() * rho.entries * target.amplitudes)(0, 0);
    return f.real();
}

PureState haar_random_state(int dim, Rng& rng) {
    if (dim < 2) throw ValidationError("haar_random_state: dim must be >= 2");
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
    v.normalize();
    return PureState(HilbertLayout({dim}), std::move(v));
}

PureState haar_random_state(int dim, std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_state(dim, rng);
}

MonteCarloEstimate average_fidelity_mc(
    const std::function<DensityMatrix(const PureState&)>& channel_runner,
    int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ValidationError("average_fidelity_mc: n_samples must be >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const PureState psi = haar_random_state(2, rng);
        const double f = state_fidelity(psi, channel_runner(psi));
        sum += f;
        sumsq += f * f;
    }
    MonteCarloEstimate est;
    est.n_samples = n_samples;
    est.mean = sum / n_samples;
    const double var = std::max(0.0, sumsq / n_samples - est.mean * est.mean);
    est.std_error = n_samples > 1 ? std::sqrt(var / (n_samples - 1)) : 0.0;
    return est;
}

PureState phi_plus() {
    CVec v(4);
    v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    return PureState(HilbertLayout({2, 2}), std::move(v));
}

double entanglement_fidelity(
    const std::function<DensityMatrix(const DensityMatrix&)>& channel_runner) {
    const PureState phi = phi_plus();
    const DensityMatrix out = channel_runner(DensityMatrix::from_pure(phi));
    return state_fidelity(phi, out);
}

} // namespace cavnet
