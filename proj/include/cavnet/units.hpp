#pragma once

#include <cmath>
#include <string>

#include "cavnet/errors.hpp"

namespace cavnet {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Unit convention for rate inputs. Internal rates are always rad/us.
//   hz          : ordinary frequency in Hz     -> 2*pi * v * 1e-6 rad/us
//   rad_per_us  : already angular               -> v
//   two_pi_mhz  : the paper's "x 2pi MHz" form -> 2*pi * x rad/us
enum class RateUnit { Hz, RadPerUs, TwoPiMHz };

inline double to_rad_per_us(double value, RateUnit unit) {
    switch (unit) {
        case RateUnit::Hz: return kTwoPi * value * 1e-6;
        case RateUnit::RadPerUs: return value;
        case RateUnit::TwoPiMHz: return kTwoPi * value;
    }
    throw ValidationError("to_rad_per_us: unknown unit");
}

inline double rad_per_us_to_hz(double omega) { return omega / kTwoPi * 1e6; }

inline RateUnit parse_rate_unit(const std::string& s) {
    if (s == "hz") return RateUnit::Hz;
    if (s == "rad_per_us") return RateUnit::RadPerUs;
    if (s == "two_pi_mhz") return RateUnit::TwoPiMHz;
    throw ValidationError("rates_unit must be one of: hz, rad_per_us, two_pi_mhz");
}

// System knobs. Rates in rad/us, times in us, length in um.
// Defaults follow the reference hardware table (kappa 1e4 Hz, g 1e5 Hz).
struct PhysicalParams {
    double g0 = to_rad_per_us(1e5, RateUnit::Hz);
    double kappa = to_rad_per_us(1e4, RateUnit::Hz);
    double gamma0 = 0.0;
    double t1_us = 291.99;
    double t2_us = 183.9;
    double length_um = 250.0;

    void check() const {
        if (g0 < 0 || kappa < 0 || gamma0 < 0)
            throw ValidationError("PhysicalParams: rates must be nonnegative");
        if (t1_us <= 0 || t2_us <= 0)
            throw ValidationError("PhysicalParams: T1 and T2 must be positive");
        if (length_um < 0) throw ValidationError("PhysicalParams: length must be nonnegative");
    }
};

} // namespace cavnet
