#pragma once

#include "cavnet/errors.hpp"

namespace cavnet {

// Fitted gamma_cavity models parameterizing the cavity link as an amplitude
// damping channel. Both depend only on the kappa/g ratio, so any consistent
// unit convention works.
//   Weak:   gamma = delta*kappa / (delta*kappa + epsilon_w*g)
//   Strong: gamma = 1 - exp(-sigma * kappa / g)
struct ChannelModel {
    enum class Regime { Weak, Strong };
    Regime regime = Regime::Strong;
    double delta = 10.0;    // weak
    double epsilon_w = 1.0; // weak
    double sigma = 0.5;     // strong

    void check() const {
        if (delta <= 0 || epsilon_w <= 0 || sigma <= 0)
            throw ValidationError("ChannelModel: hyperparameters must be positive");
    }
};

double gamma_cavity(const ChannelModel& model, double kappa, double g);

// Intrinsic qubit noise factors, exp(-eps t / T1) and exp(-rho t / T2).
struct DecoherenceModel {
    double epsilon_t1 = 5.0;
    double rho_t2 = 6.0;
    bool enabled = true;

    void check() const {
        if (epsilon_t1 <= 0 || rho_t2 <= 0)
            throw ValidationError("DecoherenceModel: factors must be positive");
    }
};

// Survival probability of the excited population after `t` parked:
// feeds an amplitude damping channel with gamma = 1 - factor.
double relaxation_factor(double t1, double t, double eps);

// Off-diagonal multiplier of the phase damping channel.
double dephasing_factor(double t2, double t, double rho);

// C = g0^2 / (kappa * gamma0); 2*pi factors cancel.
double cooperativity(double g0, double kappa, double gamma0);

// Latency = 1/g^tau + l/v, with g in ordinary Hz and the result in seconds.
// Only that reading reproduces the reference transmission delays
// (1/(1e5)^1.1 s = 3162.28 ns), so the Hz convention is fixed here.
struct LatencyModel {
    double tau = 1.1;
    double group_velocity_km_s = 2e5;

    void check() const {
        if (tau <= 0 || group_velocity_km_s <= 0)
            throw ValidationError("LatencyModel: tau and v must be positive");
    }
};

double latency_seconds(const LatencyModel& model, double g_hz, double length_um);
double latency_ns(const LatencyModel& model, double g_hz, double length_um);

// F(C) = l1 * C^l2 + l3
struct PowerFit {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
};

double eval_power_fit(const PowerFit& fit, double c);

} // namespace cavnet
