#pragma once

#include "cavnet/kraus.hpp"

namespace cavnet {

// Linear map on qubit density matrices, stored as the 4x4 superoperator over
// column-stacked vec(rho). Lets hop dynamics, closed-form noise models and the
// network simulator share one composable representation.
class QubitChannel {
public:
    QubitChannel() : super_(Eigen::Matrix4cd::Identity()) {}
    explicit QubitChannel(Eigen::Matrix4cd super) : super_(std::move(super)) {}

    static QubitChannel from_kraus(const KrausChannel& ch) {
        if (ch.dim() != 2) throw ValidationError("QubitChannel: Kraus dimension must be 2");
        Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
        for (const auto& k : ch.operators) {
            Eigen::Matrix2cd k2 = k;
            s += Eigen::Matrix4cd(tensor(k2.conjugate(), k2));
        }
        return QubitChannel(s);
    }

    static QubitChannel identity() { return QubitChannel(); }

    CMat apply(const CMat& rho) const {
        Eigen::Vector4cd v;
        v << rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1);
        const Eigen::Vector4cd w = super_ * v;
        CMat out(2, 2);
        out << w(0), w(2), w(1), w(3);
        return out;
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        if (rho.layout.total_dim() != 2) throw ValidationError("QubitChannel: expected a qubit state");
        return DensityMatrix(rho.layout, apply(rho.entries));
    }

    // this after other:  (this o other)(rho) = this(other(rho))
    QubitChannel after(const QubitChannel& other) const { return QubitChannel(super_ * other.super_); }

    QubitChannel pow(int k) const {
        Eigen::Matrix4cd s = Eigen::Matrix4cd::Identity();
        for (int i = 0; i < k; ++i) s = super_ * s;
        return QubitChannel(s);
    }

    // Choi state (I x eps)(|Phi+><Phi+|) on (ancilla, qubit), ancilla first.
    CMat choi() const {
        CMat j = CMat::Zero(4, 4);
        for (int i = 0; i < 2; ++i)
            for (int jj = 0; jj < 2; ++jj) {
                CMat e = CMat::Zero(2, 2);
                e(i, jj) = 1.0;
                const CMat out = apply(e);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) j(i * 2 + a, jj * 2 + b) += 0.5 * out(a, b);
            }
        return j;
    }

    // F_e = <Phi+| (I x eps)(|Phi+><Phi+|) |Phi+>.
    double entanglement_fidelity() const {
        const CMat j = choi();
        CVec phi(4);
        phi << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
        return (phi.adjoint() * j * phi)(0, 0).real();
    }

    // Haar-average fidelity via the qubit identity Fbar = (2 F_e + 1) / 3.
    double average_fidelity_exact() const { return (2.0 * entanglement_fidelity() + 1.0) / 3.0; }

    const Eigen::Matrix4cd& superoperator() const { return super_; }

private:
    Eigen::Matrix4cd super_;
};

} // namespace cavnet
