#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cavnet/hilbert.hpp"

namespace cavnet {

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kPsdTol = -1e-8;

// Unit-norm pure state over a layout.
struct PureState {
    HilbertLayout layout;
    CVec amplitudes;

    PureState() = default;
    PureState(HilbertLayout l, CVec amps) : layout(std::move(l)), amplitudes(std::move(amps)) {
        if (amplitudes.size() != layout.total_dim())
            throw ValidationError("PureState: amplitude length does not match layout");
        if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
            throw ValidationError("PureState: state is not normalized");
    }

    static PureState qubit(Complex a0, Complex a1) {
        CVec v(2);
        v << a0, a1;
        v.normalize();
        return PureState(HilbertLayout::qubit(), v);
    }

    CMat projector() const { return amplitudes * amplitudes.adjoint(); }
};

// Hermitian, trace-one, positive semidefinite matrix over a layout.
//
// Validation is explicit (validate()), not implicit on every operation:
// integrators touch these in hot loops.
struct DensityMatrix {
    HilbertLayout layout;
    CMat entries;

    DensityMatrix() = default;
    DensityMatrix(HilbertLayout l, CMat m) : layout(std::move(l)), entries(std::move(m)) {
        if (entries.rows() != layout.total_dim() || entries.cols() != layout.total_dim())
            throw ValidationError("DensityMatrix: entries do not match layout dimension");
    }

    static DensityMatrix from_pure(const PureState& psi) {
        return DensityMatrix(psi.layout, psi.projector());
    }

    // Basis state |index><index|.
    static DensityMatrix basis(const HilbertLayout& l, int index) {
        CMat m = CMat::Zero(l.total_dim(), l.total_dim());
        m(index, index) = 1.0;
        return DensityMatrix(l, m);
    }

    double trace_real() const { return entries.trace().real(); }

    double hermiticity_defect() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (entries + entries.adjoint()),
                                               Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void validate(const char* where = "DensityMatrix") const {
        if (hermiticity_defect() > kHermTol)
            throw NumericalAccuracyError(std::string(where) + ": Hermiticity defect exceeds 1e-10");
        if (std::abs(entries.trace().real() - 1.0) > kTraceTol ||
            std::abs(entries.trace().imag()) > kTraceTol)
            throw NumericalAccuracyError(std::string(where) + ": trace deviates from 1 beyond 1e-8");
        if (min_eigenvalue() < kPsdTol)
            throw NumericalAccuracyError(std::string(where) + ": negative eigenvalue below -1e-8");
    }
};

} // namespace cavnet
