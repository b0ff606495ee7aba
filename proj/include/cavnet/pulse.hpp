#pragma once

#include <cmath>

#include "cavnet/units.hpp"

namespace cavnet {

// Time-dependent coupling strengths G_A(t), G_B(t) for one hop.
//
// Constant: both couplings on at fixed amplitude; the hop ends at the fidelity
// peak when auto_peak is set (otherwise at cutoff_us).
//
// GaussianStirap: counterintuitive ordering. The receiving-side pulse
// Omega_B peaks at t = 0, the sending-side pulse Omega_A at t = t_delay > 0:
//   Omega_A(t) = omega_max_a * exp(-(t - t_delay)^2 / width_t^2)
//   Omega_B(t) = omega_max_b * exp(-t^2 / width_t^2)
struct PulseSchedule {
    enum class Kind { Constant, GaussianStirap };

    Kind kind = Kind::Constant;

    // Constant
    double g_a = 0.0;
    double g_b = 0.0;
    double cutoff_us = 0.0;   // ignored when auto_peak
    bool auto_peak = true;

    // GaussianStirap
    double omega_max_a = 0.0;
    double omega_max_b = 0.0;
    double width_t_us = 0.0;
    double t_delay_us = 0.0;

    // Hop window for both kinds.
    double total_time_us = 20.0;

    static PulseSchedule constant(double g, double total_us = 20.0) {
        PulseSchedule p;
        p.kind = Kind::Constant;
        p.g_a = p.g_b = g;
        p.auto_peak = true;
        p.total_time_us = total_us;
        return p;
    }

    // Default recipe: Omega_max = g0, width 6/g0, delay 2*width. The delay of
    // two widths keeps Omega_A(0) at exp(-4) of its peak so the transfer
    // starts in the dark state.
    static PulseSchedule stirap_default(double g0, double total_us = 20.0) {
        PulseSchedule p;
        p.kind = Kind::GaussianStirap;
        p.omega_max_a = p.omega_max_b = g0;
        p.width_t_us = 6.0 / g0;
        p.t_delay_us = 2.0 * p.width_t_us;
        p.total_time_us = total_us;
        return p;
    }

    void check() const {
        if (total_time_us <= 0) throw ValidationError("PulseSchedule: total_time must be positive");
        if (kind == Kind::Constant) {
            if (g_a < 0 || g_b < 0) throw ValidationError("PulseSchedule: rates must be nonnegative");
            if (!auto_peak && !(cutoff_us > 0 && cutoff_us <= total_time_us))
                throw ValidationError("PulseSchedule: cutoff must lie in (0, total_time]");
        } else {
            if (omega_max_a < 0 || omega_max_b < 0)
                throw ValidationError("PulseSchedule: rates must be nonnegative");
            if (width_t_us <= 0) throw ValidationError("PulseSchedule: width_T must be positive");
            if (t_delay_us <= 0)
                throw ValidationError("PulseSchedule: STIRAP requires t_delay > 0 (receiver pulse first)");
        }
    }

    double coupling_a(double t_us) const {
        if (kind == Kind::Constant) return constant_on(t_us) ? g_a : 0.0;
        const double x = (t_us - t_delay_us) / width_t_us;
        return omega_max_a * std::exp(-x * x);
    }

    double coupling_b(double t_us) const {
        if (kind == Kind::Constant) return constant_on(t_us) ? g_b : 0.0;
        const double x = t_us / width_t_us;
        return omega_max_b * std::exp(-x * x);
    }

    double max_coupling() const {
        return kind == Kind::Constant ? std::max(g_a, g_b) : std::max(omega_max_a, omega_max_b);
    }

private:
    // fixed-cutoff constant pulses switch off (and park) past the cutoff
    bool constant_on(double t_us) const { return auto_peak || t_us <= cutoff_us; }
};

} // namespace cavnet
