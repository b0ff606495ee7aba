#pragma once

#include <vector>

#include "cavnet/qops.hpp"

namespace cavnet {

// Completely positive trace-preserving map as a set of Kraus operators.
struct KrausChannel {
    std::vector<CMat> operators;

    explicit KrausChannel(std::vector<CMat> ops) : operators(std::move(ops)) {
        if (operators.empty()) throw ValidationError("KrausChannel: no operators");
        const Eigen::Index d = operators.front().rows();
        CMat sum = CMat::Zero(d, d);
        for (const auto& k : operators) {
            if (k.rows() != d || k.cols() != d)
                throw ValidationError("KrausChannel: operators must share a square dimension");
            sum += k.adjoint() * k;
        }
        if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
            throw ValidationError("KrausChannel: completeness violated beyond 1e-10");
    }

    int dim() const { return static_cast<int>(operators.front().rows()); }

    static KrausChannel identity(int dim) { return KrausChannel({CMat(CMat::Identity(dim, dim))}); }
};

// Standard qubit amplitude damping channel. K1 carries sqrt(gamma): that is the
// form whose output on [[1-l, a],[conj(a), l]] has (1-gamma)l on the excited
// diagonal and sqrt(1-gamma) scaling on the coherences.
KrausChannel amplitude_damping_kraus(double gamma_cavity);

// Phase damping expressed so that off-diagonals scale by `factor` in (0,1].
KrausChannel phase_damping_kraus(double factor);

// rho' = sum_i (I x K_i x I) rho (...)^dagger on one subsystem.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::size_t subsystem);

} // namespace cavnet
