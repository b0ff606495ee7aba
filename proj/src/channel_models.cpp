#include "cavnet/channel_models.hpp"

#include <cmath>

namespace cavnet {

double gamma_cavity(const ChannelModel& model, double kappa, double g) {
    model.check();
    if (kappa <= 0 || g <= 0)
        throw ValidationError("gamma_cavity: kappa and g must be positive");
    if (model.regime == ChannelModel::Regime::Weak)
        return model.delta * kappa / (model.delta * kappa + model.epsilon_w * g);
    return 1.0 - std::exp(-model.sigma * kappa / g);
}

double relaxation_factor(double t1, double t, double eps) {
    if (t1 <= 0) throw ValidationError("relaxation_factor: T1 must be positive");
    if (t < 0) throw ValidationError("relaxation_factor: t must be nonnegative");
    return std::exp(-eps * t / t1);
}

double dephasing_factor(double t2, double t, double rho) {
    if (t2 <= 0) throw ValidationError("dephasing_factor: T2 must be positive");
    if (t < 0) throw ValidationError("dephasing_factor: t must be nonnegative");
    return std::exp(-rho * t / t2);
}

double cooperativity(double g0, double kappa, double gamma0) {
    if (kappa <= 0 || gamma0 <= 0)
        throw ValidationError("cooperativity: kappa and gamma0 must be positive");
    return g0 * g0 / (kappa * gamma0);
}

double latency_seconds(const LatencyModel& model, double g_hz, double length_um) {
    model.check();
    if (g_hz <= 0) throw ValidationError("latency: g must be positive (Hz)");
    if (length_um < 0) throw ValidationError("latency: length must be nonnegative");
    const double length_km = length_um * 1e-9;
    return std::pow(g_hz, -model.tau) + length_km / model.group_velocity_km_s;
}

double latency_ns(const LatencyModel& model, double g_hz, double length_um) {
    return latency_seconds(model, g_hz, length_um) * 1e9;
}

double eval_power_fit(const PowerFit& fit, double c) {
    if (c <= 0) throw ValidationError("eval_power_fit: C must be positive");
    return fit.lambda1 * std::pow(c, fit.lambda2) + fit.lambda3;
}

} // namespace cavnet
