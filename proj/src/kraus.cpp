#include "cavnet/kraus.hpp"

#include <cmath>

namespace cavnet {

KrausChannel amplitude_damping_kraus(double gamma_cavity) {
    if (!(gamma_cavity >= 0.0 && gamma_cavity <= 1.0))
        throw ValidationError("amplitude_damping_kraus: gamma must lie in [0,1]");
    CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma_cavity);
    k1(0, 1) = std::sqrt(gamma_cavity);
    return KrausChannel({k0, k1});
}

KrausChannel phase_damping_kraus(double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
        throw ValidationError("phase_damping_kraus: factor must lie in (0,1]");
    // K0 = sqrt((1+f)/2) I, K1 = sqrt((1-f)/2) Z  => off-diagonals scale by f.
    CMat k0 = std::sqrt((1.0 + factor) / 2.0) * CMat::Identity(2, 2);
    CMat k1 = std::sqrt((1.0 - factor) / 2.0) * sigma_z();
    return KrausChannel({k0, k1});
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::size_t subsystem) {
    if (subsystem >= rho.layout.subsystems())
        throw ValidationError("apply_channel: subsystem index out of range");
    if (ch.dim() != rho.layout.dim(subsystem))
        throw ValidationError("apply_channel: channel dimension does not match subsystem");
    CMat out = CMat::Zero(rho.entries.rows(), rho.entries.cols());
    for (const auto& k : ch.operators) {
        const CMat kk = embed(k, rho.layout, subsystem);
        out += kk * rho.entries * kk.adjoint();
    }
    return DensityMatrix(rho.layout, std::move(out));
}

} // namespace cavnet
