#pragma once

#include <functional>
#include <vector>

#include "cavnet/pulse.hpp"
#include "cavnet/qops.hpp"

namespace cavnet {

// Collapse operator with its dissipator rate:  rate * (L rho L+ - 1/2 {L+L, rho}).
struct CollapseOp {
    CMat op;
    double rate;
};

// Interaction-picture hop Hamiltonian on a (qubit A, cavity, qubit B) layout:
//   g_a (sA+ c + c+ sA-) + g_b (sB+ c + c+ sB-)
CMat build_hamiltonian(double g_a, double g_b, const HilbertLayout& layout);

// Right-hand side of the master equation. Traceless and Hermiticity-preserving.
CMat lindblad_rhs(const CMat& rho, const CMat& h, const std::vector<CollapseOp>& collapse);

// Time-dependent generator dX/dt = -i[ga(t) Ha + gb(t) Hb, X] + dissipators.
// Works on arbitrary matrices (the map is linear), which is what the channel
// extraction path needs; density-matrix trace control is layered on top.
struct LindbladGenerator {
    CMat h_a;
    CMat h_b;
    std::vector<CollapseOp> collapse;
    std::function<double(double)> g_a_of_t;
    std::function<double(double)> g_b_of_t;
};

// Fixed-step RK4 integration of `gen` from t0 to t1. `per_step(t, X)` runs
// after every accepted step. When trace_control is set, the per-step trace
// drift is renormalized if within 1e-8 and raises NumericalAccuracyError
// beyond 1e-6 (instructing a smaller dt).
void rk4_evolve(const LindbladGenerator& gen, CMat& x, double t0, double t1, double dt,
                const std::function<void(double, const CMat&)>& per_step = nullptr,
                bool trace_control = false);

// Default step for the given schedule/rates over a span of `span_us`.
double default_dt(const PulseSchedule& schedule, const PhysicalParams& params, double span_us);

struct Trajectory {
    std::vector<double> times_us;
    std::vector<DensityMatrix> states;
};

// Spec-level entry point: evolve a density matrix under the hop generator
// built from `params` (collapse ops sA-, sB- at gamma0 and c at kappa) and
// `schedule`. Stores about `store_points` evenly strided states.
Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& schedule,
                  const PhysicalParams& params, double t_span_us, double dt_us = 0.0,
                  int store_points = 512);

// Collapse list for a (A, cavity, B) hop layout.
std::vector<CollapseOp> hop_collapse_ops(const HilbertLayout& layout, const PhysicalParams& params);

} // namespace cavnet
